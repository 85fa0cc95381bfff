#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "unipred/core_types.hpp"
#include "unipred/mixture.hpp"
#include "unipred/prediction.hpp"
#include "unipred/walk.hpp"

namespace unipred {

// Loss l[x][y] for outcome x under action y, with every entry inside the
// declared range [l_min, l_min + l_delta]. A period m > 1 zeroes the loss on
// steps k that are not multiples of m (predict only every m-th symbol).
class LossMatrix {
 public:
  LossMatrix(std::vector<std::vector<double>> rows, double l_min, double l_delta,
             std::size_t period = 1);

  // Range taken from the table's own extremes.
  static LossMatrix from_table(std::vector<std::vector<double>> rows, std::size_t period = 1);
  // Y = A, unit loss for a wrong prediction.
  static LossMatrix error_loss(std::size_t alphabet_size);

  std::size_t outcomes() const { return outcomes_; }
  std::size_t actions() const { return actions_; }
  double at(Symbol outcome, std::size_t action) const { return table_[outcome * actions_ + action]; }
  double l_min() const { return l_min_; }
  double l_delta() const { return l_delta_; }
  double largest_entry() const { return largest_; }
  std::size_t period() const { return period_; }
  bool active(std::size_t k) const { return k % period_ == 0; }

  LossMatrix with_period(std::size_t period) const;

 private:
  std::size_t outcomes_;
  std::size_t actions_;
  std::vector<double> table_;  // outcomes x actions, row-major
  double l_min_;
  double l_delta_;
  double largest_;
  std::size_t period_;
};

// Expected loss sum_x rho[x] l[x][action].
double expected_loss(std::span<const double> rho, std::size_t action, const LossMatrix& loss);

// Lambda_rho action: argmin over y of the rho-expected loss, lowest index on ties.
std::size_t act(std::span<const double> rho, const LossMatrix& loss);
std::size_t act(const Source& strategy, const Sequence& prefix, const LossMatrix& loss);

// mu-expected loss of taking `action` at step k (0 on masked steps).
double step_loss(std::span<const double> mu_cond, std::size_t action, const LossMatrix& loss,
                 std::size_t k);

using LossLedger = ExpectationLedger;

LossLedger expected_loss_exact(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                               const LossMatrix& loss, std::size_t horizon,
                               std::uint64_t budget = default_enumeration_budget);

LossLedger expected_loss_mc(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                            const LossMatrix& loss, std::size_t horizon, std::size_t trials,
                            std::uint64_t seed);

// l_delta H + sqrt(4 (L_mu - n l_min) l_delta H + l_delta^2 H^2): bound on
// L_n(Lambda_xi) - L_n(Lambda_mu).
double loss_bound(double loss_mu, std::size_t horizon, double relative_entropy,
                  const LossMatrix& loss);

// --- games of chance ------------------------------------------------------

struct BetRound {
  double stake;
  std::size_t action;
  Symbol outcome;
  double reward;
  double profit;  // reward - stake
};

// Profit p[x][y] with every entry inside [p_max - p_delta, p_max].
class PayoutTable {
 public:
  PayoutTable(std::vector<std::vector<double>> profit, double p_max, double p_delta);

  // profit[x][y] = rewards[x][y] - stakes[y]; range from the table extremes.
  static PayoutTable from_stakes(std::vector<double> stakes, std::vector<std::vector<double>> rewards);

  std::size_t outcomes() const { return outcomes_; }
  std::size_t actions() const { return actions_; }
  double profit(Symbol outcome, std::size_t action) const { return profit_[outcome * actions_ + action]; }
  double p_max() const { return p_max_; }
  double p_delta() const { return p_delta_; }

  // l[x][y] = -p[x][y], l_min = -p_max, l_delta = p_delta.
  LossMatrix as_loss() const;

  BetRound settle(std::size_t action, Symbol outcome) const;

 private:
  std::size_t outcomes_;
  std::size_t actions_;
  std::vector<double> profit_;
  std::vector<double> stakes_;
  double p_max_;
  double p_delta_;
};

struct BettingReport {
  std::size_t rounds = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  // Average mu-expected profit per round over the first k rounds, k = 1..rounds,
  // estimated from the conditional expected profit along sampled paths.
  std::vector<double> avg_profit_xi;
  std::vector<double> avg_profit_mu;
  double avg_profit_xi_stderr = 0.0;  // at k = rounds
  double avg_profit_mu_stderr = 0.0;

  // Average realized profit per round at k = rounds, from the simulated bets.
  double realized_profit_xi = 0.0;
  double realized_profit_mu = 0.0;
  double realized_profit_xi_stderr = 0.0;
  double realized_profit_mu_stderr = 0.0;

  // First k with avg_profit_xi[k-1] > 0.
  std::optional<std::size_t> crossing_n;
  // (2 p_delta / pbar_mu)^2 d_mu with pbar_mu the average at k = rounds;
  // empty unless that average is positive.
  std::optional<double> crossing_bound;
  // Per-trial winning-zone entry of Lambda_xi (first k whose running
  // conditional expected profit is positive).
  std::size_t trials_crossed = 0;
  std::size_t trials_crossed_within_bound = 0;
  std::size_t latest_trial_crossing = 0;

  double avg_profit_xi_final() const { return avg_profit_xi.empty() ? 0.0 : avg_profit_xi.back(); }
  double avg_profit_mu_final() const { return avg_profit_mu.empty() ? 0.0 : avg_profit_mu.back(); }
};

BettingReport simulate_betting(const ModelClassPtr& cls, std::size_t truth, const PayoutTable& payout,
                               std::size_t rounds, std::size_t trials, std::uint64_t seed);

// (2 p_delta / pbar)^2 d_mu
double winning_zone_bound(double p_delta, double avg_profit_mu, double d_mu);

}  // namespace unipred
