#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stance {

struct TokenizerOptions {
  /// Drop the leading '#' of hashtags (the remainder is kept either way).
  bool strip_hashtags = true;
};

/// Lowercases, splits on whitespace, trims ASCII punctuation from both ends
/// of each token, and drops URLs (http: / https: prefixes) and empties.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options = {});

}  // namespace stance
