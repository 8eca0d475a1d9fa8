#pragma once

#include <cassert>
#include <charconv>
#include <compare>
#include <limits>
#include <string>
#include <string_view>

#include "csp/errors.hpp"

namespace csp {

// Where an unending game sits relative to finished games in the players'
// preference order. I maximizes, II minimizes.
enum class DrawRank {
  BelowTie,   // Ended(-1) < Draw < Ended(0)
  BelowAll,   // Draw < every Ended(m)
  EqualsTie,  // Draw ~ Ended(0)
};

inline std::string_view to_string(DrawRank r) {
  switch (r) {
    case DrawRank::BelowTie: return "below_tie";
    case DrawRank::BelowAll: return "below_all";
    case DrawRank::EqualsTie: return "equals_tie";
  }
  return "below_tie";
}

inline DrawRank parse_draw_rank(std::string_view s) {
  if (s == "below_tie") return DrawRank::BelowTie;
  if (s == "below_all") return DrawRank::BelowAll;
  if (s == "equals_tie") return DrawRank::EqualsTie;
  throw InvalidInstance("unknown draw_rank '" + std::string(s) + "'");
}

// Result of a play from I's point of view: either the game never ends, or it
// ends with margin = I's score minus II's score.
class Outcome {
 public:
  static constexpr Outcome draw() noexcept { return Outcome(true, 0); }
  static constexpr Outcome ended(int margin) noexcept { return Outcome(false, margin); }

  constexpr bool is_draw() const noexcept { return draw_; }
  constexpr bool is_ended() const noexcept { return !draw_; }
  constexpr int margin() const noexcept {
    assert(!draw_);
    return margin_;
  }

  // Same play seen with the roles exchanged.
  constexpr Outcome reversed() const noexcept { return draw_ ? *this : ended(-margin_); }

  // Captures made before reaching a position add to an ended game's margin; a
  // game that never ends stays drawn regardless.
  constexpr Outcome shifted(int delta) const noexcept {
    return draw_ ? *this : ended(margin_ + delta);
  }

  friend constexpr bool operator==(Outcome, Outcome) noexcept = default;

  std::string to_string() const {
    if (draw_) return "Draw";
    if (margin_ > 0) return "Ended(+" + std::to_string(margin_) + ")";
    return "Ended(" + std::to_string(margin_) + ")";
  }

 private:
  constexpr Outcome(bool draw, int margin) noexcept : draw_(draw), margin_(margin) {}

  bool draw_;
  int margin_;
};

// Doubled ranks keep the draw strictly between two integers when needed.
constexpr long outcome_rank(Outcome o, DrawRank rank) noexcept {
  if (o.is_ended()) return 2L * o.margin();
  switch (rank) {
    case DrawRank::BelowTie: return -1;
    case DrawRank::BelowAll: return std::numeric_limits<int>::min();
    case DrawRank::EqualsTie: return 0;
  }
  return -1;
}

constexpr std::strong_ordering compare_outcomes(Outcome a, Outcome b, DrawRank rank) noexcept {
  return outcome_rank(a, rank) <=> outcome_rank(b, rank);
}

inline Outcome parse_outcome(std::string_view s) {
  if (s == "Draw") return Outcome::draw();
  if (s.size() > 7 && s.substr(0, 6) == "Ended(" && s.back() == ')') {
    std::string_view body = s.substr(6, s.size() - 7);
    if (body.front() == '+') body.remove_prefix(1);
    int m = 0;
    auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), m);
    if (ec == std::errc{} && end == body.data() + body.size()) return Outcome::ended(m);
  }
  throw Error("malformed outcome '" + std::string(s) + "'");
}

}  // namespace csp
