#include "shiftlab/report.hpp"

namespace shiftlab {

nlohmann::json Report::to_json(bool include_timing) const {
  nlohmann::json j{{"version", kToolVersion},
                   {"input", input_echo},
                   {"sequence", sequence},
                   {"results", results}};
  if (!tables.empty()) j["tables"] = tables;
  j["precision"] = {{"max_bits_used", max_bits_used},
                    {"undecided_cells", undecided_cells}};
  if (include_timing) j["timing_ms"] = elapsed_ms;
  return j;
}

}  // namespace shiftlab
