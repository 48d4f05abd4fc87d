#pragma once

#include <string>
#include <string_view>

namespace stance {

/// Porter (1980) suffix-stripping stemmer, following the behaviour of the
/// author's reference C implementation. Expects lowercase input; words of
/// two characters or fewer are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace stance
