#pragma once

#include <stdexcept>
#include <string>

namespace shiftlab {

// Base class for all shiftlab errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or parameter outside its mathematical domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Malformed input file or JSON document; carries a location hint.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, const std::string& where)
      : Error(what + " (at " + where + ")"), location_(where) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// An interval evaluation could not separate a value from a forbidden
// region at the current precision. Adaptive drivers catch this and
// escalate; it is not a user-facing failure by itself.
class PrecisionLoss : public Error {
 public:
  explicit PrecisionLoss(const std::string& what) : Error(what) {}
};

// The precision cap was reached without a decision.
class PrecisionExhausted : public Error {
 public:
  explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

// A classifier requires a contractivity certificate that is absent.
class ContractivityError : public Error {
 public:
  explicit ContractivityError(const std::string& what) : Error(what) {}
};

// Configuration document failed validation; names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error("config key \"" + key + "\": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace shiftlab
