#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftlab/config.hpp"

namespace shiftlab {

struct ClaimResult {
  std::string id;
  std::string description;
  std::string expected;
  std::string observed;
  bool evidence_only = false;
  std::optional<bool> matched;  // empty for evidence-only entries

  nlohmann::json to_json() const;
};

// One reproducible check. Evidence-only entries report what was computed
// and never count as a mismatch.
struct ClaimRecord {
  std::string id;
  std::string description;
  std::string expected;
  bool evidence_only = false;
  std::function<ClaimResult(const Config&)> run;
};

const std::vector<ClaimRecord>& claims_registry();

// Throws DomainError for unknown ids.
ClaimResult run_claim(const std::string& id, const Config& cfg);

// Runs the named claims (all when ids is empty) in a thread pool; output
// order follows the registry.
std::vector<ClaimResult> run_claims(const std::vector<std::string>& ids,
                                    const Config& cfg, bool parallel = true);

}  // namespace shiftlab
