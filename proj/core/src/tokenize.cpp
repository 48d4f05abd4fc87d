#include "stance/tokenize.hpp"

#include <cctype>

namespace stance {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

bool is_url(std::string_view tok) {
  return tok.starts_with("http:") || tok.starts_with("https:");
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j == i) break;

    std::string tok;
    tok.reserve(j - i);
    for (std::size_t k = i; k < j; ++k)
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
    i = j;

    std::size_t b = 0;
    std::size_t e = tok.size();
    while (b < e && is_punct(tok[b])) ++b;
    while (e > b && is_punct(tok[e - 1])) --e;
    if (!options.strip_hashtags && b > 0 && tok[b - 1] == '#' && b < e) --b;
    std::string_view core(tok.data() + b, e - b);
    if (core.empty() || core == "#" || is_url(core)) continue;
    out.emplace_back(core);
  }
  return out;
}

}  // namespace stance
