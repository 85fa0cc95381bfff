#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "unipred/core_types.hpp"
#include "unipred/mixture.hpp"
#include "unipred/walk.hpp"

namespace unipred {

// Index of the largest entry; ties go to the lowest index.
Symbol argmax(std::span<const double> v);

// Theta_rho: predicts the symbol maximizing rho(x_<k -> .).
class Predictor {
 public:
  explicit Predictor(SourcePtr strategy);

  const Source& strategy() const { return *strategy_; }
  Symbol predict(const Sequence& prefix) const;

 private:
  SourcePtr strategy_;
};

Symbol predict(const Predictor& p, const Sequence& prefix);

// e_k = 1 - mu(x_<k -> predicted)
double step_error(std::span<const double> mu_cond, Symbol predicted);

// Which rho a prediction or action scheme uses: the true mu, the mixture xi,
// or any other source over the same alphabet.
class Scheme {
 public:
  enum class Kind { informed, universal, custom };

  static Scheme informed() { return Scheme(Kind::informed, "mu", nullptr); }
  static Scheme universal() { return Scheme(Kind::universal, "xi", nullptr); }
  static Scheme custom(SourcePtr strategy, std::string name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const SourcePtr& strategy() const { return strategy_; }

  // rho(x_<k -> .) at a visited prefix. For custom schemes the values are
  // written to scratch and a view of it returned.
  std::span<const double> conditionals(const StepView& v, std::span<double> scratch) const;

 private:
  Scheme(Kind kind, std::string name, SourcePtr strategy)
      : kind_(kind), name_(std::move(name)), strategy_(std::move(strategy)) {}

  Kind kind_;
  std::string name_;
  SourcePtr strategy_;
};

using ErrorLedger = ExpectationLedger;

// E_n of Theta_rho: sum over k and x_<k of mu(x_<k) e_k(x_<k).
ErrorLedger expected_errors_exact(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                                  std::size_t horizon,
                                  std::uint64_t budget = default_enumeration_budget);

// Unbiased estimate of the same ledger from sampled paths, averaging the
// conditional error e_k(x_<k) along each path.
ErrorLedger expected_errors_mc(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                               std::size_t horizon, std::size_t trials, std::uint64_t seed);

struct ErrorBound {
  double tight;  // H + sqrt(4 E_mu H + H^2)
  double loose;  // 2H + 2 sqrt(E_mu H)
};

// Upper bounds on E_n(Theta_xi) - E_n(Theta_mu) given E_n(Theta_mu) and H_n.
ErrorBound theorem2_bound(double expected_errors_mu, double relative_entropy);

}  // namespace unipred
