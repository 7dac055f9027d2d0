#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftlab/sign.hpp"

namespace shiftlab {

struct Witness {
  long k = 0;
  long n = 0;
  std::string value;  // exact rational, enclosure, or sign evidence
  Sign sign = Sign::Undecided;
};

// Uniform classifier result. Fail always carries a witness whose
// recomputed value violates the defining inequality; Pass means every
// grid cell was decided compliant; Undecided lists the cells whose sign
// survived the precision cap.
struct Verdict {
  enum class Status { Pass, Fail, Undecided };

  Status status = Status::Undecided;
  long tested_order = 0;   // K
  long tested_window = 0;  // N
  std::optional<Witness> witness;
  std::vector<std::pair<long, long>> undecided_cells;
  std::optional<std::string> note;

  bool passed() const { return status == Status::Pass; }
  bool failed() const { return status == Status::Fail; }

  nlohmann::json to_json() const;
};

std::string to_string(Verdict::Status s);

// Result of the order search: the largest k such that all difference
// rows up to k stayed nonpositive on the searched window, plus the
// exact witness one order higher.
struct OrderReport {
  bool decided = false;
  long max_alternating_order = 0;  // meaningful when decided
  std::optional<Witness> failure_witness;
  long window_used = 0;
  long order_cap = 0;

  nlohmann::json to_json() const;
};

}  // namespace shiftlab
