#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace shiftlab {

// Shared defaults for classifier scope and precision. Loaded from an
// optional JSON document; the only environment override is
// SHIFTLAB_MAX_BITS.
struct Config {
  long default_K = 16;
  long default_N = 64;
  long start_bits = 256;
  long max_bits = 4096;
  long hankel_cap = 12;
  long witness_window_cap = 4096;

  void validate() const;

  // Defaults merged with overrides from `path` (when given) and the
  // SHIFTLAB_MAX_BITS environment variable.
  static Config load(const std::optional<std::string>& path);
  static Config from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

}  // namespace shiftlab
