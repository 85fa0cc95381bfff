#pragma once

// Exact enumeration and Monte-Carlo traversal of the prefix tree under a true
// source mu drawn from a model class, with xi maintained alongside.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "unipred/core_types.hpp"
#include "unipred/errors.hpp"
#include "unipred/mixture.hpp"
#include "unipred/rng.hpp"

namespace unipred {

inline constexpr std::uint64_t default_enumeration_budget = 10'000'000;

// One visited prefix x_<k.
struct StepView {
  std::size_t k;                   // 1-based step index; prefix has k-1 symbols
  std::span<const Symbol> prefix;  // x_<k
  double weight;                   // mu(x_<k) when enumerating, 1 on a sampled path
  std::span<const double> mu;      // mu(x_<k -> .)
  std::span<const double> xi;      // xi(x_<k -> .)
  const MixtureState& state;
};

enum class Flavor { exact, monte_carlo };

// Per-step mu-expectations of a quantity q_k(x_<k) and their running sums.
// For Monte-Carlo ledgers, stderr_cumulative[k-1] is the standard error of
// cumulative[k-1]; exact ledgers carry zeros.
struct ExpectationLedger {
  Flavor flavor = Flavor::exact;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> per_step;
  std::vector<double> cumulative;
  std::vector<double> stderr_cumulative;

  std::size_t horizon() const { return per_step.size(); }
  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  double total_stderr() const { return stderr_cumulative.empty() ? 0.0 : stderr_cumulative.back(); }
};

namespace detail {

inline void check_truth(const ModelClass& cls, std::size_t truth) {
  if (truth >= cls.size()) {
    throw InputError("truth index " + std::to_string(truth) + " outside class of size " +
                     std::to_string(cls.size()));
  }
}

template <class Visitor>
void enumerate_node(const MixtureState& state, std::size_t truth, std::size_t horizon, double weight,
                    std::uint64_t budget, std::uint64_t& visits, std::vector<double>& xi_buf,
                    Visitor& visit) {
  if (++visits > budget) throw EnumerationTooLarge(budget);
  const std::size_t k = state.length() + 1;
  const std::size_t n = state.model_class().alphabet().size();
  auto mu = state.model_conditionals(truth);
  std::span<double> xi(xi_buf.data() + (k - 1) * n, n);
  xi_conditionals(state, xi);
  visit(StepView{k, state.prefix(), weight, mu, xi, state});
  if (k == horizon) return;
  for (std::size_t a = 0; a < n; ++a) {
    // Prefixes of mu-probability 0 contribute nothing to any mu-expectation.
    if (mu[a] <= 0.0) continue;
    MixtureState child = state;
    child.observe(static_cast<Symbol>(a));
    enumerate_node(child, truth, horizon, weight * mu[a], budget, visits, xi_buf, visit);
  }
}

}  // namespace detail

// Visits every prefix x_<k (k = 1..horizon) with mu(x_<k) > 0, depth first in
// lexicographic order. Returns the number of visited nodes.
template <class Visitor>
std::uint64_t walk_exact(const ModelClassPtr& cls, std::size_t truth, std::size_t horizon,
                         std::uint64_t budget, Visitor&& visit) {
  detail::check_truth(*cls, truth);
  if (horizon == 0) return 0;
  std::uint64_t visits = 0;
  std::vector<double> xi_buf(horizon * cls->alphabet().size());
  MixtureState root = init(cls);
  detail::enumerate_node(root, truth, horizon, 1.0, budget, visits, xi_buf, visit);
  return visits;
}

// Samples x_1..x_horizon from mu, visiting each prefix along the way.
template <class Visitor>
void walk_path(const ModelClassPtr& cls, std::size_t truth, std::size_t horizon, Rng& rng,
               Visitor&& visit) {
  detail::check_truth(*cls, truth);
  MixtureState state = init(cls);
  std::vector<double> xi(cls->alphabet().size());
  for (std::size_t k = 1; k <= horizon; ++k) {
    auto mu = state.model_conditionals(truth);
    xi_conditionals(state, xi);
    visit(StepView{k, state.prefix(), 1.0, mu, xi, state});
    if (k == horizon) break;
    state.observe(draw(mu, rng));
  }
}

// Exact mu-expectations of `quantities` step quantities; fn(view, out) writes
// q_k(x_<k) for each quantity into out.
template <class StepFn>
std::vector<ExpectationLedger> exact_ledgers(const ModelClassPtr& cls, std::size_t truth,
                                             std::size_t horizon, std::uint64_t budget,
                                             std::size_t quantities, StepFn&& fn) {
  std::vector<ExpectationLedger> out(quantities);
  for (auto& l : out) {
    l.per_step.assign(horizon, 0.0);
    l.stderr_cumulative.assign(horizon, 0.0);
  }
  std::vector<double> q(quantities);
  walk_exact(cls, truth, horizon, budget, [&](const StepView& v) {
    fn(v, std::span<double>(q));
    for (std::size_t j = 0; j < quantities; ++j) out[j].per_step[v.k - 1] += v.weight * q[j];
  });
  for (auto& l : out) {
    l.cumulative.resize(horizon);
    double running = 0.0;
    for (std::size_t k = 0; k < horizon; ++k) l.cumulative[k] = running += l.per_step[k];
  }
  return out;
}

// Monte-Carlo counterpart: averages path sums over `trials` independent paths,
// trial t drawing from Rng::for_trial(seed, t).
template <class StepFn>
std::vector<ExpectationLedger> monte_carlo_ledgers(const ModelClassPtr& cls, std::size_t truth,
                                                   std::size_t horizon, std::size_t trials,
                                                   std::uint64_t seed, std::size_t quantities,
                                                   StepFn&& fn) {
  if (trials == 0) throw InputError("monte carlo needs at least one trial");
  std::vector<ExpectationLedger> out(quantities);
  // Welford accumulators of each trial's running sum, per step.
  std::vector<std::vector<double>> mean(quantities, std::vector<double>(horizon, 0.0));
  std::vector<std::vector<double>> m2(quantities, std::vector<double>(horizon, 0.0));
  std::vector<std::vector<double>> step_sum(quantities, std::vector<double>(horizon, 0.0));
  std::vector<double> q(quantities);
  std::vector<double> running(quantities);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, t);
    std::fill(running.begin(), running.end(), 0.0);
    const double count = static_cast<double>(t + 1);
    walk_path(cls, truth, horizon, rng, [&](const StepView& v) {
      fn(v, std::span<double>(q));
      const std::size_t i = v.k - 1;
      for (std::size_t j = 0; j < quantities; ++j) {
        step_sum[j][i] += q[j];
        running[j] += q[j];
        const double delta = running[j] - mean[j][i];
        mean[j][i] += delta / count;
        m2[j][i] += delta * (running[j] - mean[j][i]);
      }
    });
  }
  const double n = static_cast<double>(trials);
  for (std::size_t j = 0; j < quantities; ++j) {
    auto& l = out[j];
    l.flavor = Flavor::monte_carlo;
    l.trials = trials;
    l.seed = seed;
    l.per_step.resize(horizon);
    l.cumulative = mean[j];
    l.stderr_cumulative.resize(horizon);
    for (std::size_t i = 0; i < horizon; ++i) {
      l.per_step[i] = step_sum[j][i] / n;
      l.stderr_cumulative[i] = trials > 1 ? std::sqrt(m2[j][i] / (n - 1.0) / n)
                                          : std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

}  // namespace unipred
