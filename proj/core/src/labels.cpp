#include "stance/labels.hpp"

#include <algorithm>
#include <cctype>

namespace stance {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

std::string_view to_string(StanceLabel l) noexcept {
  switch (l) {
    case StanceLabel::Favor: return "FAVOR";
    case StanceLabel::Against: return "AGAINST";
    case StanceLabel::None: return "NONE";
  }
  return "?";
}

std::string_view to_string(SentimentLabel s) noexcept {
  switch (s) {
    case SentimentLabel::Positive: return "POSITIVE";
    case SentimentLabel::Negative: return "NEGATIVE";
    case SentimentLabel::Other: return "OTHER";
  }
  return "?";
}

std::optional<StanceLabel> parse_stance(std::string_view s) {
  const auto u = upper(s);
  if (u == "FAVOR") return StanceLabel::Favor;
  if (u == "AGAINST") return StanceLabel::Against;
  if (u == "NONE") return StanceLabel::None;
  return std::nullopt;
}

std::optional<SentimentLabel> parse_sentiment(std::string_view s) {
  const auto u = upper(s);
  if (u == "POSITIVE" || u == "POS") return SentimentLabel::Positive;
  if (u == "NEGATIVE" || u == "NEG") return SentimentLabel::Negative;
  if (u == "OTHER") return SentimentLabel::Other;
  return std::nullopt;
}

StanceLabel argmax_label(const LabelCounts& counts) noexcept {
  StanceLabel best = StanceLabel::Against;
  for (auto l : kAllStances) {
    const auto c = counts[index_of(l)];
    const auto b = counts[index_of(best)];
    if (c > b || (c == b && tie_rank(l) < tie_rank(best))) best = l;
  }
  return best;
}

}  // namespace stance
