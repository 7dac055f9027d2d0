#pragma once

#include <string>

namespace shiftlab {

// Result of a sign query. Undecided can only come from interval-backed
// evaluation that ran out of precision; exact paths always decide.
enum class Sign { Negative, Zero, Positive, Undecided };

inline Sign sign_of_int(int cmp) {
  if (cmp < 0) return Sign::Negative;
  if (cmp > 0) return Sign::Positive;
  return Sign::Zero;
}

inline Sign opposite(Sign s) {
  switch (s) {
    case Sign::Negative: return Sign::Positive;
    case Sign::Positive: return Sign::Negative;
    default: return s;
  }
}

inline bool is_decided(Sign s) { return s != Sign::Undecided; }

inline std::string to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "negative";
    case Sign::Zero: return "zero";
    case Sign::Positive: return "positive";
    default: return "undecided";
  }
}

}  // namespace shiftlab
