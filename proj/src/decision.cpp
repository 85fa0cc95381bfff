#include "unipred/decision.hpp"

#include <algorithm>
#include <cmath>

#include "unipred/errors.hpp"
#include "unipred/tolerances.hpp"

namespace unipred {

namespace {

struct Flat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
};

Flat flatten(const std::vector<std::vector<double>>& rows, const char* what) {
  Flat f;
  f.rows = rows.size();
  if (f.rows == 0) throw InputError(std::string(what) + ": table has no rows");
  f.cols = rows.front().size();
  if (f.cols == 0) throw InputError(std::string(what) + ": table has no columns");
  for (const auto& r : rows) {
    if (r.size() != f.cols) throw InputError(std::string(what) + ": ragged table");
    for (double v : r) {
      if (!std::isfinite(v)) throw InputError(std::string(what) + ": entries must be finite");
    }
    f.values.insert(f.values.end(), r.begin(), r.end());
  }
  return f;
}

}  // namespace

// --- LossMatrix -----------------------------------------------------------

LossMatrix::LossMatrix(std::vector<std::vector<double>> rows, double l_min, double l_delta,
                       std::size_t period)
    : l_min_(l_min), l_delta_(l_delta), period_(period) {
  auto flat = flatten(rows, "loss");
  outcomes_ = flat.rows;
  actions_ = flat.cols;
  table_ = std::move(flat.values);
  if (!(l_delta_ >= 0.0) || !std::isfinite(l_min_) || !std::isfinite(l_delta_)) {
    throw InputError("loss range needs finite l_min and l_delta >= 0");
  }
  if (period_ == 0) throw InputError("loss period must be >= 1");
  const double hi = l_min_ + l_delta_;
  for (double v : table_) {
    if (v < l_min_ - tolerances.normalization || v > hi + tolerances.normalization) {
      throw InputError("loss entry " + std::to_string(v) + " outside declared range [" +
                       std::to_string(l_min_) + ", " + std::to_string(hi) + "]");
    }
  }
  // Masked steps carry loss 0 for every action, which must lie in the range.
  if (period_ > 1 && (l_min_ > 0.0 || hi < 0.0)) {
    throw InputError("a loss period > 1 needs 0 inside [l_min, l_min + l_delta]");
  }
  largest_ = *std::max_element(table_.begin(), table_.end());
}

LossMatrix LossMatrix::from_table(std::vector<std::vector<double>> rows, std::size_t period) {
  auto flat = flatten(rows, "loss");
  auto [lo, hi] = std::minmax_element(flat.values.begin(), flat.values.end());
  double l_min = *lo;
  double l_max = *hi;
  if (period > 1) {
    l_min = std::min(l_min, 0.0);
    l_max = std::max(l_max, 0.0);
  }
  return LossMatrix(std::move(rows), l_min, l_max - l_min, period);
}

LossMatrix LossMatrix::error_loss(std::size_t alphabet_size) {
  std::vector<std::vector<double>> rows(alphabet_size, std::vector<double>(alphabet_size, 1.0));
  for (std::size_t i = 0; i < alphabet_size; ++i) rows[i][i] = 0.0;
  return LossMatrix(std::move(rows), 0.0, 1.0);
}

LossMatrix LossMatrix::with_period(std::size_t period) const {
  std::vector<std::vector<double>> rows(outcomes_);
  for (std::size_t x = 0; x < outcomes_; ++x) {
    rows[x].assign(table_.begin() + x * actions_, table_.begin() + (x + 1) * actions_);
  }
  return LossMatrix(std::move(rows), l_min_, l_delta_, period);
}

// Losses are accumulated relative to the largest table entry. The shift
// leaves the argmin unchanged, and for the error loss it turns the expected
// loss of action y into exactly 1 - rho[y], so Lambda_rho with that loss and
// Theta_rho agree bit for bit.
double expected_loss(std::span<const double> rho, std::size_t action, const LossMatrix& loss) {
  const double top = loss.largest_entry();
  double shifted = 0.0;
  for (std::size_t x = 0; x < rho.size(); ++x) {
    shifted += rho[x] * (loss.at(static_cast<Symbol>(x), action) - top);
  }
  return top + shifted;
}

std::size_t act(std::span<const double> rho, const LossMatrix& loss) {
  if (rho.size() != loss.outcomes()) throw InputError("strategy alphabet differs from loss outcomes");
  const double top = loss.largest_entry();
  std::size_t best = 0;
  double best_risk = 0.0;
  for (std::size_t y = 0; y < loss.actions(); ++y) {
    double risk = 0.0;
    for (std::size_t x = 0; x < rho.size(); ++x) {
      risk += rho[x] * (loss.at(static_cast<Symbol>(x), y) - top);
    }
    if (y == 0 || risk < best_risk) {
      best = y;
      best_risk = risk;
    }
  }
  return best;
}

std::size_t act(const Source& strategy, const Sequence& prefix, const LossMatrix& loss) {
  return act(conditionals(strategy, prefix), loss);
}

double step_loss(std::span<const double> mu_cond, std::size_t action, const LossMatrix& loss,
                 std::size_t k) {
  if (action >= loss.actions()) throw InputError("action out of range");
  if (!loss.active(k)) return 0.0;
  return expected_loss(mu_cond, action, loss);
}

namespace {

void check_loss(const ModelClass& cls, const Scheme& scheme, const LossMatrix& loss) {
  if (loss.outcomes() != cls.alphabet().size()) {
    throw InputError("loss table rows must match the alphabet size");
  }
  if (scheme.kind() == Scheme::Kind::custom && !(scheme.strategy()->alphabet() == cls.alphabet())) {
    throw InputError("strategy alphabet differs from the class alphabet");
  }
}

auto loss_fn(const Scheme& scheme, const LossMatrix& loss, std::size_t n) {
  return [&scheme, &loss, scratch = std::vector<double>(n)](const StepView& v,
                                                            std::span<double> q) mutable {
    q[0] = loss.active(v.k) ? expected_loss(v.mu, act(scheme.conditionals(v, scratch), loss), loss)
                            : 0.0;
  };
}

}  // namespace

LossLedger expected_loss_exact(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                               const LossMatrix& loss, std::size_t horizon, std::uint64_t budget) {
  check_loss(*cls, scheme, loss);
  return exact_ledgers(cls, truth, horizon, budget, 1,
                       loss_fn(scheme, loss, cls->alphabet().size()))[0];
}

LossLedger expected_loss_mc(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                            const LossMatrix& loss, std::size_t horizon, std::size_t trials,
                            std::uint64_t seed) {
  check_loss(*cls, scheme, loss);
  return monte_carlo_ledgers(cls, truth, horizon, trials, seed, 1,
                             loss_fn(scheme, loss, cls->alphabet().size()))[0];
}

double loss_bound(double loss_mu, std::size_t horizon, double relative_entropy,
                  const LossMatrix& loss) {
  if (relative_entropy < 0.0) throw InputError("loss bound needs H_n >= 0");
  const double floor = static_cast<double>(horizon) * loss.l_min();
  const double excess = loss_mu - floor;
  if (excess < -tolerances.bound * std::max(1.0, std::abs(floor))) {
    throw InputError("loss bound needs L_mu >= n * l_min");
  }
  const double h = relative_entropy;
  const double d = loss.l_delta();
  return d * h + std::sqrt(4.0 * std::max(excess, 0.0) * d * h + d * d * h * h);
}

// --- games of chance ------------------------------------------------------

PayoutTable::PayoutTable(std::vector<std::vector<double>> profit, double p_max, double p_delta)
    : p_max_(p_max), p_delta_(p_delta) {
  auto flat = flatten(profit, "profit");
  outcomes_ = flat.rows;
  actions_ = flat.cols;
  profit_ = std::move(flat.values);
  stakes_.assign(actions_, 0.0);
  if (!(p_delta_ >= 0.0) || !std::isfinite(p_max_) || !std::isfinite(p_delta_)) {
    throw InputError("profit range needs finite p_max and p_delta >= 0");
  }
  for (double p : profit_) {
    if (p > p_max_ + tolerances.normalization ||
        p < p_max_ - p_delta_ - tolerances.normalization) {
      throw InputError("profit entry " + std::to_string(p) + " outside declared range");
    }
  }
}

PayoutTable PayoutTable::from_stakes(std::vector<double> stakes,
                                     std::vector<std::vector<double>> rewards) {
  for (auto& row : rewards) {
    if (row.size() != stakes.size()) throw InputError("rewards need one column per stake");
    for (std::size_t y = 0; y < row.size(); ++y) row[y] -= stakes[y];
  }
  auto flat = flatten(rewards, "profit");
  auto [lo, hi] = std::minmax_element(flat.values.begin(), flat.values.end());
  PayoutTable table(std::move(rewards), *hi, *hi - *lo);
  table.stakes_ = std::move(stakes);
  return table;
}

LossMatrix PayoutTable::as_loss() const {
  std::vector<std::vector<double>> rows(outcomes_, std::vector<double>(actions_));
  for (std::size_t x = 0; x < outcomes_; ++x) {
    for (std::size_t y = 0; y < actions_; ++y) rows[x][y] = -profit(static_cast<Symbol>(x), y);
  }
  return LossMatrix(std::move(rows), -p_max_, p_delta_);
}

BetRound PayoutTable::settle(std::size_t action, Symbol outcome) const {
  if (action >= actions_ || outcome >= outcomes_) throw InputError("bet outside the payout table");
  const double p = profit(outcome, action);
  return BetRound{stakes_[action], action, outcome, p + stakes_[action], p};
}

double winning_zone_bound(double p_delta, double avg_profit_mu, double d_mu) {
  if (!(avg_profit_mu > 0.0)) throw InputError("winning zone bound needs a positive average profit");
  const double r = 2.0 * p_delta / avg_profit_mu;
  return r * r * d_mu;
}

BettingReport simulate_betting(const ModelClassPtr& cls, std::size_t truth, const PayoutTable& payout,
                               std::size_t rounds, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw InputError("betting simulation needs at least one trial");
  if (rounds == 0) throw InputError("betting simulation needs at least one round");
  if (payout.outcomes() != cls->alphabet().size()) {
    throw InputError("payout table rows must match the alphabet size");
  }
  detail::check_truth(*cls, truth);
  const LossMatrix loss = payout.as_loss();

  BettingReport r;
  r.rounds = rounds;
  r.trials = trials;
  r.seed = seed;

  std::vector<double> sum_xi(rounds, 0.0), sum_mu(rounds, 0.0);
  std::vector<std::size_t> trial_crossing(trials, 0);  // 0: never crossed
  // Welford over per-trial averages at k = rounds: expected xi, expected mu,
  // realized xi, realized mu.
  double mean[4] = {0, 0, 0, 0};
  double m2[4] = {0, 0, 0, 0};

  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, t);
    MixtureState state = init(cls);
    std::vector<double> xi(cls->alphabet().size());
    double run_xi = 0.0, run_mu = 0.0, real_xi = 0.0, real_mu = 0.0;
    for (std::size_t k = 1; k <= rounds; ++k) {
      auto mu = state.model_conditionals(truth);
      xi_conditionals(state, xi);
      const std::size_t y_xi = act(xi, loss);
      const std::size_t y_mu = act(mu, loss);
      run_xi -= expected_loss(mu, y_xi, loss);
      run_mu -= expected_loss(mu, y_mu, loss);
      sum_xi[k - 1] += run_xi;
      sum_mu[k - 1] += run_mu;
      if (trial_crossing[t] == 0 && run_xi > 0.0) trial_crossing[t] = k;
      const Symbol x = draw(mu, rng);
      real_xi += payout.settle(y_xi, x).profit;
      real_mu += payout.settle(y_mu, x).profit;
      state.observe(x);
    }
    const double n = static_cast<double>(rounds);
    const double values[4] = {run_xi / n, run_mu / n, real_xi / n, real_mu / n};
    for (int j = 0; j < 4; ++j) {
      const double delta = values[j] - mean[j];
      mean[j] += delta / static_cast<double>(t + 1);
      m2[j] += delta * (values[j] - mean[j]);
    }
  }

  const double tn = static_cast<double>(trials);
  auto stderr_of = [&](int j) { return trials > 1 ? std::sqrt(m2[j] / (tn - 1.0) / tn) : 0.0; };
  r.avg_profit_xi.resize(rounds);
  r.avg_profit_mu.resize(rounds);
  for (std::size_t k = 1; k <= rounds; ++k) {
    r.avg_profit_xi[k - 1] = sum_xi[k - 1] / tn / static_cast<double>(k);
    r.avg_profit_mu[k - 1] = sum_mu[k - 1] / tn / static_cast<double>(k);
    if (!r.crossing_n && r.avg_profit_xi[k - 1] > 0.0) r.crossing_n = k;
  }
  r.avg_profit_xi_stderr = stderr_of(0);
  r.avg_profit_mu_stderr = stderr_of(1);
  r.realized_profit_xi = mean[2];
  r.realized_profit_mu = mean[3];
  r.realized_profit_xi_stderr = stderr_of(2);
  r.realized_profit_mu_stderr = stderr_of(3);

  if (r.avg_profit_mu_final() > 0.0) {
    r.crossing_bound =
        winning_zone_bound(payout.p_delta(), r.avg_profit_mu_final(), cls->entropy_budget(truth));
  }
  for (std::size_t c : trial_crossing) {
    if (c == 0) continue;
    ++r.trials_crossed;
    r.latest_trial_crossing = std::max(r.latest_trial_crossing, c);
    if (r.crossing_bound && static_cast<double>(c) <= *r.crossing_bound) ++r.trials_crossed_within_bound;
  }
  return r;
}

}  // namespace unipred
