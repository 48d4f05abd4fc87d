#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stance {

enum class StanceLabel : std::uint8_t { Favor, Against, None };
enum class SentimentLabel : std::uint8_t { Positive, Negative, Other };

inline constexpr std::array<StanceLabel, 3> kAllStances{
    StanceLabel::Favor, StanceLabel::Against, StanceLabel::None};

/// Fixed precedence used wherever a tie between labels must be closed:
/// AGAINST beats FAVOR beats NONE. Lower rank wins.
constexpr int tie_rank(StanceLabel l) noexcept {
  switch (l) {
    case StanceLabel::Against: return 0;
    case StanceLabel::Favor: return 1;
    case StanceLabel::None: return 2;
  }
  return 3;
}

constexpr std::size_t index_of(StanceLabel l) noexcept {
  return static_cast<std::size_t>(l);
}

std::string_view to_string(StanceLabel l) noexcept;
std::string_view to_string(SentimentLabel s) noexcept;

/// Case-insensitive. Accepts exactly FAVOR, AGAINST, NONE.
std::optional<StanceLabel> parse_stance(std::string_view s);

/// Case-insensitive. Accepts POSITIVE/POS, NEGATIVE/NEG, OTHER.
std::optional<SentimentLabel> parse_sentiment(std::string_view s);

/// Per-label tallies, indexed by index_of().
using LabelCounts = std::array<std::size_t, 3>;

/// Label with the largest count; ties go to tie_rank order.
StanceLabel argmax_label(const LabelCounts& counts) noexcept;

}  // namespace stance
