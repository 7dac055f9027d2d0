#include "shiftlab/config.hpp"

#include <cstdlib>
#include <fstream>

#include "shiftlab/errors.hpp"

namespace shiftlab {

void Config::validate() const {
  if (default_K <= 0) throw ConfigError("default_K", "must be positive");
  if (default_N <= 0) throw ConfigError("default_N", "must be positive");
  if (start_bits <= 0) throw ConfigError("start_bits", "must be positive");
  if (max_bits <= 0) throw ConfigError("max_bits", "must be positive");
  if (start_bits > max_bits)
    throw ConfigError("start_bits", "must not exceed max_bits");
  if (hankel_cap <= 0) throw ConfigError("hankel_cap", "must be positive");
  if (witness_window_cap <= 0)
    throw ConfigError("witness_window_cap", "must be positive");
}

namespace {

long read_long(const nlohmann::json& j, const std::string& key, long fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(key, "must be an integer");
  return v.get<long>();
}

}  // namespace

Config Config::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  static const char* known[] = {"default_K", "default_N", "start_bits",
                                "max_bits", "hankel_cap", "witness_window_cap"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(it.key(), "unknown key");
  }
  Config c;
  c.default_K = read_long(j, "default_K", c.default_K);
  c.default_N = read_long(j, "default_N", c.default_N);
  c.start_bits = read_long(j, "start_bits", c.start_bits);
  c.max_bits = read_long(j, "max_bits", c.max_bits);
  c.hankel_cap = read_long(j, "hankel_cap", c.hankel_cap);
  c.witness_window_cap = read_long(j, "witness_window_cap", c.witness_window_cap);
  c.validate();
  return c;
}

nlohmann::json Config::to_json() const {
  return nlohmann::json{{"default_K", default_K},
                        {"default_N", default_N},
                        {"start_bits", start_bits},
                        {"max_bits", max_bits},
                        {"hankel_cap", hankel_cap},
                        {"witness_window_cap", witness_window_cap}};
}

Config Config::load(const std::optional<std::string>& path) {
  Config c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ParseError("cannot open config file", *path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid config JSON: ") + e.what(), *path);
    }
    c = from_json(j);
  }
  if (const char* env = std::getenv("SHIFTLAB_MAX_BITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0)
      throw ConfigError("SHIFTLAB_MAX_BITS", "must be a positive integer");
    c.max_bits = v;
    if (c.start_bits > c.max_bits) c.start_bits = c.max_bits;
  }
  c.validate();
  return c;
}

}  // namespace shiftlab
