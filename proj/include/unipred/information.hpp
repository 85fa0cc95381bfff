#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "unipred/mixture.hpp"
#include "unipred/walk.hpp"

namespace unipred {

struct KlResult {
  double nats;
  // mu puts mass on a symbol xi rules out; impossible when mu is in the class.
  bool dominance_violated;
};

// sum_a mu[a] ln(mu[a]/xi[a]), with 0 ln(0/z) = 0 even for z = 0.
// Returns +inf (flagged) when mu[a] > 0 = xi[a].
KlResult step_kl_checked(std::span<const double> mu_cond, std::span<const double> xi_cond);
double step_kl(std::span<const double> mu_cond, std::span<const double> xi_cond);

// sum_a (mu[a] - xi[a])^2
double step_sq(std::span<const double> mu_cond, std::span<const double> xi_cond);

namespace detail {
// Same arithmetic as step_kl / step_sq without validating the inputs.
KlResult kl_unchecked(std::span<const double> y, std::span<const double> z);
double sq_unchecked(std::span<const double> y, std::span<const double> z);
}  // namespace detail

struct InequalityReport {
  double lhs;  // sum (y_i - z_i)^2
  double rhs;  // sum y_i ln(y_i / z_i)
  bool holds;  // lhs <= rhs + inequality tolerance; an infinite rhs holds
  double slack() const { return rhs - lhs; }
};

InequalityReport check_entropy_inequality(std::span<const double> y, std::span<const double> z);

// Relative-entropy bookkeeping for one (class, truth) pair over n steps.
//   h[k-1]  = E_mu[h_k(x_<k)]                       expected per-step KL
//   H[k-1]  = sum_{j<=k} h[j-1]
//   sq[k-1] = E_mu[sum_a (mu(x_<k -> a) - xi(x_<k -> a))^2]
//   D[k-1]  = sum_{j<=k} sq[j-1]
// Whenever the truth is in the class: D_n <= H_n <= d_mu = ln(1/w_mu).
struct InfoLedger {
  Flavor flavor = Flavor::exact;
  std::vector<double> h;
  std::vector<double> H;
  std::vector<double> H_stderr;
  std::vector<double> sq;
  std::vector<double> D;
  std::vector<double> D_stderr;
  double d_mu = 0.0;
  bool dominance_violated = false;

  std::size_t horizon() const { return h.size(); }
};

InfoLedger accumulate_exact(const ModelClassPtr& cls, std::size_t truth, std::size_t horizon,
                            std::uint64_t budget = default_enumeration_budget);

InfoLedger accumulate_mc(const ModelClassPtr& cls, std::size_t truth, std::size_t horizon,
                         std::size_t trials, std::uint64_t seed);

}  // namespace unipred
