#pragma once

#include <string>

#include <json.hpp>

namespace shiftlab {

inline constexpr const char* kToolVersion = "1.0.0";

// Machine-readable result document for one CLI invocation. Deterministic
// for fixed inputs and configuration, apart from the timing field.
struct Report {
  nlohmann::json input_echo;
  std::string sequence;  // human-readable description
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json tables = nlohmann::json::object();
  double elapsed_ms = 0;
  long max_bits_used = 0;
  long undecided_cells = 0;

  nlohmann::json to_json(bool include_timing = true) const;
};

}  // namespace shiftlab
