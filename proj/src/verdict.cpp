#include "shiftlab/verdict.hpp"

namespace shiftlab {

std::string to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Pass: return "pass";
    case Verdict::Status::Fail: return "fail";
    default: return "undecided";
  }
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json j{{"status", to_string(status)},
                   {"K", tested_order},
                   {"N", tested_window}};
  if (witness) {
    j["witness"] = {{"k", witness->k},
                    {"n", witness->n},
                    {"value", witness->value},
                    {"sign", shiftlab::to_string(witness->sign)}};
  }
  if (!undecided_cells.empty()) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [k, n] : undecided_cells) cells.push_back({k, n});
    j["undecided_cells"] = cells;
  }
  if (note) j["note"] = *note;
  return j;
}

nlohmann::json OrderReport::to_json() const {
  nlohmann::json j{{"decided", decided},
                   {"window_used", window_used},
                   {"order_cap", order_cap}};
  if (decided) j["max_alternating_order"] = max_alternating_order;
  if (failure_witness) {
    j["failure_witness"] = {{"k", failure_witness->k},
                            {"n", failure_witness->n},
                            {"value", failure_witness->value}};
  }
  return j;
}

}  // namespace shiftlab
