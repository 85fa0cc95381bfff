#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace unipred {

// Invalid symbol, malformed probability vector, out-of-range index.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Weights not normalized or not strictly positive, empty class, mixed alphabets.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Every model in the class assigns probability 0 to the observed prefix.
class ImpossiblePrefixError : public std::domain_error {
 public:
  ImpossiblePrefixError() : std::domain_error("prefix impossible under M") {}
};

// Exact enumeration would exceed the configured node budget.
class EnumerationTooLarge : public std::length_error {
 public:
  explicit EnumerationTooLarge(unsigned long long budget)
      : std::length_error("enumeration too large (budget " + std::to_string(budget) +
                          " node visits exceeded); use monte_carlo mode instead"),
        budget_(budget) {}
  unsigned long long budget() const { return budget_; }

 private:
  unsigned long long budget_;
};

// Structured config validation failure: one message per offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid config:";
    for (const auto& s : issues) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> issues_;
};

}  // namespace unipred
