#include "unipred/information.hpp"

#include <cmath>
#include <limits>

#include "unipred/errors.hpp"
#include "unipred/tolerances.hpp"

namespace unipred {

namespace detail {

KlResult kl_unchecked(std::span<const double> y, std::span<const double> z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    if (z[i] == 0.0) return {std::numeric_limits<double>::infinity(), true};
    sum += y[i] * std::log(y[i] / z[i]);
  }
  return {sum, false};
}

double sq_unchecked(std::span<const double> y, std::span<const double> z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - z[i];
    sum += d * d;
  }
  return sum;
}

}  // namespace detail

namespace {

using detail::kl_unchecked;
using detail::sq_unchecked;

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("probability vectors differ in length");
  check_probability_vector(a, a.size(), tolerances.input_vector, "first distribution");
  check_probability_vector(b, b.size(), tolerances.input_vector, "second distribution");
}

InfoLedger from_ledgers(const std::vector<ExpectationLedger>& l, double d_mu, bool violated) {
  InfoLedger out;
  out.flavor = l[0].flavor;
  out.h = l[0].per_step;
  out.H = l[0].cumulative;
  out.H_stderr = l[0].stderr_cumulative;
  out.sq = l[1].per_step;
  out.D = l[1].cumulative;
  out.D_stderr = l[1].stderr_cumulative;
  out.d_mu = d_mu;
  out.dominance_violated = violated;
  return out;
}

}  // namespace

KlResult step_kl_checked(std::span<const double> mu_cond, std::span<const double> xi_cond) {
  check_pair(mu_cond, xi_cond);
  return kl_unchecked(mu_cond, xi_cond);
}

double step_kl(std::span<const double> mu_cond, std::span<const double> xi_cond) {
  return step_kl_checked(mu_cond, xi_cond).nats;
}

double step_sq(std::span<const double> mu_cond, std::span<const double> xi_cond) {
  check_pair(mu_cond, xi_cond);
  return sq_unchecked(mu_cond, xi_cond);
}

InequalityReport check_entropy_inequality(std::span<const double> y, std::span<const double> z) {
  check_pair(y, z);
  InequalityReport r{};
  r.lhs = sq_unchecked(y, z);
  r.rhs = kl_unchecked(y, z).nats;
  r.holds = std::isinf(r.rhs) || r.lhs <= r.rhs + tolerances.inequality;
  return r;
}

InfoLedger accumulate_exact(const ModelClassPtr& cls, std::size_t truth, std::size_t horizon,
                            std::uint64_t budget) {
  bool violated = false;
  auto l = exact_ledgers(cls, truth, horizon, budget, 2, [&](const StepView& v, std::span<double> q) {
    const auto kl = kl_unchecked(v.mu, v.xi);
    violated = violated || kl.dominance_violated;
    q[0] = kl.nats;
    q[1] = sq_unchecked(v.mu, v.xi);
  });
  return from_ledgers(l, cls->entropy_budget(truth), violated);
}

InfoLedger accumulate_mc(const ModelClassPtr& cls, std::size_t truth, std::size_t horizon,
                         std::size_t trials, std::uint64_t seed) {
  bool violated = false;
  auto l = monte_carlo_ledgers(cls, truth, horizon, trials, seed, 2,
                               [&](const StepView& v, std::span<double> q) {
                                 const auto kl = kl_unchecked(v.mu, v.xi);
                                 violated = violated || kl.dominance_violated;
                                 q[0] = kl.nats;
                                 q[1] = sq_unchecked(v.mu, v.xi);
                               });
  return from_ledgers(l, cls->entropy_budget(truth), violated);
}

}  // namespace unipred
