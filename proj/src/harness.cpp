#include "unipred/harness.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "unipred/errors.hpp"
#include "unipred/information.hpp"
#include "unipred/tolerances.hpp"
#include "unipred/walk.hpp"

namespace unipred {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::not_applicable:
      return "NOT-APPLICABLE";
  }
  return "?";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool BoundReport::all_pass() const {
  for (const auto& r : rows) {
    if (r.verdict == Verdict::fail) return false;
  }
  for (const auto& r : summary) {
    if (r.verdict == Verdict::fail) return false;
  }
  return true;
}

std::string BoundReport::to_csv() const {
  std::string out = "k,scheme,quantity,value,bound,slack,verdict\n";
  auto emit = [&](const ReportRow& r) {
    out += r.k ? std::to_string(*r.k) : std::string("*");
    out += ',' + r.scheme + ',' + r.quantity + ',' + format_number(r.value) + ',';
    if (r.bound) out += format_number(*r.bound);
    out += ',';
    if (r.slack) out += format_number(*r.slack);
    out += ',';
    out += to_string(r.verdict);
    out += '\n';
  };
  for (const auto& r : rows) emit(r);
  for (const auto& r : summary) emit(r);
  return out;
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Which summary verdict each checked quantity feeds.
const std::map<std::string, std::string> check_family = {
    {"H", "entropy_upper_bound"},
    {"H_increment", "entropy_upper_bound"},
    {"D", "convergence_sq"},
    {"D_increment", "convergence_sq"},
    {"E_optimality", "predictor_optimality"},
    {"E_excess", "error_bound"},
    {"E_bound_order", "error_bound"},
    {"L_optimality", "loss_optimality"},
    {"L_excess", "loss_bound"},
    {"winning_zone_crossing", "winning_zone"},
};

const std::vector<std::string> family_order = {
    "entropy_upper_bound", "convergence_sq", "predictor_optimality", "error_bound",
    "loss_optimality",     "loss_bound",     "winning_zone"};

class ReportBuilder {
 public:
  BoundReport report;

  void value(std::size_t k, const std::string& scheme, const std::string& quantity, double v) {
    report.rows.push_back({k, scheme, quantity, v, std::nullopt, std::nullopt, Verdict::not_applicable});
  }

  // value <= bound (upper) or value >= bound (!upper), allowing tol plus the
  // configured number of standard errors.
  void check(std::size_t k, const std::string& scheme, const std::string& quantity, double v,
             double bound, bool upper, double tol, double sigma = 0.0) {
    const double slack = upper ? bound - v : v - bound;
    const double allowance = tol + tolerances.sigmas * sigma;
    const Verdict verdict = slack >= -allowance ? Verdict::pass : Verdict::fail;
    report.rows.push_back({k, scheme, quantity, v, bound, slack, verdict});
  }

  void not_applicable(std::size_t k, const std::string& scheme, const std::string& quantity, double v,
                      std::optional<double> bound) {
    report.rows.push_back({k, scheme, quantity, v, bound, std::nullopt, Verdict::not_applicable});
  }

  void summarize() {
    struct Acc {
      bool any_pass = false;
      bool any_fail = false;
      double worst = inf;
    };
    std::map<std::string, Acc> acc;
    for (const auto& r : report.rows) {
      auto it = check_family.find(r.quantity);
      if (it == check_family.end() || r.verdict == Verdict::not_applicable) continue;
      auto& a = acc[it->second];
      a.any_pass = a.any_pass || r.verdict == Verdict::pass;
      a.any_fail = a.any_fail || r.verdict == Verdict::fail;
      if (r.slack) a.worst = std::min(a.worst, *r.slack);
    }
    for (const auto& f : family_order) {
      auto it = acc.find(f);
      if (it == acc.end()) {
        report.summary.push_back(
            {std::nullopt, "-", f, 0.0, std::nullopt, std::nullopt, Verdict::not_applicable});
        continue;
      }
      const auto& a = it->second;
      report.summary.push_back({std::nullopt, "-", f, a.worst, std::nullopt, a.worst,
                                a.any_fail ? Verdict::fail : Verdict::pass});
    }
  }
};

// Layout of the per-step quantities accumulated in one traversal.
struct Layout {
  std::size_t schemes = 0;
  bool loss = false;
  bool betting = false;

  static constexpr std::size_t kl = 0, sq = 1, kl_minus_sq = 2;
  std::size_t error(std::size_t s) const { return 3 + s; }
  // e_s - e_mu for s >= 1
  std::size_t error_excess(std::size_t s) const { return 3 + schemes + (s - 1); }
  std::size_t loss_of(std::size_t s) const { return 3 + 2 * schemes - 1 + s; }
  std::size_t loss_excess(std::size_t s) const { return 3 + 3 * schemes - 1 + (s - 1); }
  std::size_t profit_mu() const { return 3 + 2 * schemes - 1 + (loss ? 2 * schemes - 1 : 0); }
  std::size_t profit_xi() const { return profit_mu() + 1; }
  std::size_t count() const { return profit_mu() + (betting ? 2 : 0); }
};

std::vector<ExpectationLedger> traverse(const ExperimentConfig& config, const ModelClassPtr& cls,
                                        const std::vector<Scheme>& schemes, const Layout& layout,
                                        const std::optional<LossMatrix>& payout_loss) {
  const std::size_t n = cls->alphabet().size();
  std::vector<std::vector<double>> scratch(schemes.size(), std::vector<double>(n));
  auto fn = [&](const StepView& v, std::span<double> q) {
    const double kl = detail::kl_unchecked(v.mu, v.xi).nats;
    const double sq = detail::sq_unchecked(v.mu, v.xi);
    q[Layout::kl] = kl;
    q[Layout::sq] = sq;
    q[Layout::kl_minus_sq] = kl - sq;
    std::vector<std::span<const double>> rho(schemes.size());
    for (std::size_t s = 0; s < schemes.size(); ++s) rho[s] = schemes[s].conditionals(v, scratch[s]);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      q[layout.error(s)] = step_error(v.mu, argmax(rho[s]));
      if (s > 0) q[layout.error_excess(s)] = q[layout.error(s)] - q[layout.error(0)];
    }
    if (layout.loss) {
      const auto& loss = *config.loss;
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        q[layout.loss_of(s)] =
            loss.active(v.k) ? expected_loss(v.mu, act(rho[s], loss), loss) : 0.0;
        if (s > 0) q[layout.loss_excess(s)] = q[layout.loss_of(s)] - q[layout.loss_of(0)];
      }
    }
    if (layout.betting) {
      const auto& l = *payout_loss;
      q[layout.profit_mu()] = -expected_loss(v.mu, act(v.mu, l), l);
      q[layout.profit_xi()] = -expected_loss(v.mu, act(v.xi, l), l);
    }
  };
  const std::size_t truth = config.truth;
  try {
    if (config.mode == RunMode::exact) {
      return exact_ledgers(cls, truth, config.horizon, config.budget, layout.count(), fn);
    }
    return monte_carlo_ledgers(cls, truth, config.horizon, config.trials, config.seed,
                               layout.count(), fn);
  } catch (const EnumerationTooLarge& e) {
    throw ConfigError({std::string("budget: ") + e.what()});
  }
}

// Sensitivities of H + sqrt(4EH + H^2)-shaped bounds, for propagating
// Monte-Carlo standard errors of their inputs.
double propagate(double d_e, double se_e, double d_h, double se_h) {
  return std::sqrt(d_e * d_e * se_e * se_e + d_h * d_h * se_h * se_h);
}

void add_betting_rows(ReportBuilder& b, const ExperimentConfig& config, const ModelClassPtr& cls,
                      const std::vector<ExpectationLedger>& l, const Layout& layout) {
  const std::size_t horizon = config.horizon;
  const auto& payout = *config.betting;
  std::vector<double> avg_xi(horizon), avg_mu(horizon);
  std::optional<std::size_t> crossing;
  for (std::size_t k = 1; k <= horizon; ++k) {
    avg_mu[k - 1] = l[layout.profit_mu()].cumulative[k - 1] / static_cast<double>(k);
    avg_xi[k - 1] = l[layout.profit_xi()].cumulative[k - 1] / static_cast<double>(k);
    b.value(k, "mu", "avg_profit", avg_mu[k - 1]);
    b.value(k, "xi", "avg_profit", avg_xi[k - 1]);
    if (!crossing && avg_xi[k - 1] > 0.0) crossing = k;
  }
  std::optional<BettingReport> sim;
  if (config.mode == RunMode::monte_carlo) {
    sim = simulate_betting(cls, config.truth, payout, horizon, config.trials, config.seed);
    b.value(horizon, "mu", "avg_profit_stderr", sim->avg_profit_mu_stderr);
    b.value(horizon, "xi", "avg_profit_stderr", sim->avg_profit_xi_stderr);
    b.value(horizon, "mu", "realized_avg_profit", sim->realized_profit_mu);
    b.value(horizon, "xi", "realized_avg_profit", sim->realized_profit_xi);
    b.value(horizon, "mu", "realized_avg_profit_stderr", sim->realized_profit_mu_stderr);
    b.value(horizon, "xi", "realized_avg_profit_stderr", sim->realized_profit_xi_stderr);
  }
  const double pbar = avg_mu.back();
  const double crossing_value = crossing ? static_cast<double>(*crossing) : inf;
  if (!(pbar > 0.0)) {
    b.not_applicable(horizon, "xi", "winning_zone_crossing", crossing_value, std::nullopt);
    return;
  }
  const double bound = winning_zone_bound(payout.p_delta(), pbar, cls->entropy_budget(config.truth));
  if (crossing || static_cast<double>(horizon) >= bound) {
    b.check(horizon, "xi", "winning_zone_crossing", crossing_value, bound, true, 0.0);
  } else {
    b.not_applicable(horizon, "xi", "winning_zone_crossing", crossing_value, bound);
  }
  // The bound constrains the expected average profit, not individual paths;
  // per-path entries past the bound are reported but not judged.
  if (sim) {
    b.not_applicable(horizon, "xi", "trial_crossings_within_bound",
                     static_cast<double>(sim->trials_crossed_within_bound),
                     static_cast<double>(sim->trials));
  }
}

}  // namespace

BoundReport run(const ExperimentConfig& config) {
  config.validate();
  const ModelClassPtr cls = config.build_class();
  const auto schemes = config.schemes();
  const bool mc = config.mode == RunMode::monte_carlo;

  Layout layout;
  layout.schemes = schemes.size();
  layout.loss = config.loss.has_value();
  layout.betting = config.betting.has_value();
  std::optional<LossMatrix> payout_loss;
  if (config.betting) payout_loss = config.betting->as_loss();

  const auto l = traverse(config, cls, schemes, layout, payout_loss);
  const double d_mu = cls->entropy_budget(config.truth);
  const double tol_bound = tolerances.bound;
  const double tol_opt = tolerances.property;

  ReportBuilder b;
  for (std::size_t k = 1; k <= config.horizon; ++k) {
    const std::size_t i = k - 1;
    const auto& H = l[Layout::kl];
    const auto& D = l[Layout::sq];
    const auto& gap = l[Layout::kl_minus_sq];
    b.value(k, "xi", "h", H.per_step[i]);
    b.check(k, "xi", "H", H.cumulative[i], d_mu, true, tol_bound, H.stderr_cumulative[i]);
    b.check(k, "xi", "H_increment", H.per_step[i], 0.0, false, tolerances.inequality);
    b.value(k, "xi", "sq", D.per_step[i]);
    b.check(k, "xi", "D", D.cumulative[i], H.cumulative[i], true, tol_bound,
            gap.stderr_cumulative[i]);
    b.check(k, "xi", "D_increment", D.per_step[i], 0.0, false, tolerances.inequality);
    if (mc) {
      b.value(k, "xi", "H_stderr", H.stderr_cumulative[i]);
      b.value(k, "xi", "D_stderr", D.stderr_cumulative[i]);
    }

    const double e_mu = l[layout.error(0)].cumulative[i];
    const double se_e_mu = l[layout.error(0)].stderr_cumulative[i];
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const auto& name = schemes[s].name();
      const auto& e = l[layout.error(s)];
      b.value(k, name, "e", e.per_step[i]);
      b.value(k, name, "E", e.cumulative[i]);
      if (mc) b.value(k, name, "E_stderr", e.stderr_cumulative[i]);
      if (s == 0) continue;
      const auto& excess = l[layout.error_excess(s)];
      b.check(k, name, "E_optimality", excess.cumulative[i], 0.0, false, tol_opt,
              excess.stderr_cumulative[i]);
    }
    {
      const auto& excess = l[layout.error_excess(1)];
      const double h = H.cumulative[i];
      const auto bound = theorem2_bound(std::max(e_mu, 0.0), std::max(h, 0.0));
      double sigma = excess.stderr_cumulative[i];
      if (mc) {
        const double root = std::sqrt(4.0 * e_mu * h + h * h);
        if (root > 0.0) {
          sigma = std::hypot(sigma, propagate(2.0 * h / root, se_e_mu, 1.0 + (2.0 * e_mu + h) / root,
                                              H.stderr_cumulative[i]));
        }
      }
      b.check(k, "xi", "E_excess", excess.cumulative[i], bound.tight, true, tol_bound, sigma);
      b.check(k, "xi", "E_bound_order", bound.tight, bound.loose, true, tolerances.inequality);
    }

    if (layout.loss) {
      const auto& loss = *config.loss;
      const double l_mu = l[layout.loss_of(0)].cumulative[i];
      const double se_l_mu = l[layout.loss_of(0)].stderr_cumulative[i];
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        const auto& name = schemes[s].name();
        const auto& ls = l[layout.loss_of(s)];
        b.value(k, name, "l", ls.per_step[i]);
        b.value(k, name, "L", ls.cumulative[i]);
        if (mc) b.value(k, name, "L_stderr", ls.stderr_cumulative[i]);
        if (s == 0) continue;
        const auto& excess = l[layout.loss_excess(s)];
        b.check(k, name, "L_optimality", excess.cumulative[i], 0.0, false, tol_opt,
                excess.stderr_cumulative[i]);
      }
      const auto& excess = l[layout.loss_excess(1)];
      const double h = std::max(H.cumulative[i], 0.0);
      const double floor = static_cast<double>(k) * loss.l_min();
      const double bound = loss_bound(std::max(l_mu, floor), k, h, loss);
      double sigma = excess.stderr_cumulative[i];
      if (mc) {
        const double dl = loss.l_delta();
        const double root = std::sqrt(4.0 * (l_mu - floor) * dl * h + dl * dl * h * h);
        if (root > 0.0) {
          sigma = std::hypot(sigma, propagate(2.0 * dl * h / root, se_l_mu,
                                              dl + (2.0 * (l_mu - floor) * dl + dl * dl * h) / root,
                                              H.stderr_cumulative[i]));
        }
      }
      b.check(k, "xi", "L_excess", excess.cumulative[i], bound, true, tol_bound, sigma);
    }
  }
  if (layout.betting) add_betting_rows(b, config, cls, l, layout);
  b.summarize();
  return std::move(b.report);
}

// --- inequality suite -----------------------------------------------------

namespace {

// Random point of the simplex; larger `skew` concentrates mass on few coordinates.
void random_simplex(std::span<double> out, Rng& rng, double skew) {
  double sum = 0.0;
  for (double& v : out) {
    v = std::pow(-std::log(1.0 - rng.uniform()), skew);
    sum += v;
  }
  if (sum == 0.0) {
    out[0] = sum = 1.0;
  }
  for (double& v : out) v /= sum;
}

void zero_out(std::span<double> v, std::size_t j) {
  v[j] = 0.0;
  double rest = 0.0;
  for (double x : v) rest += x;
  if (rest <= 0.0) {
    v[(j + 1) % v.size()] = 1.0;
    return;
  }
  for (double& x : v) x /= rest;
}

}  // namespace

InequalitySuiteReport verify_inequality_suite(std::size_t samples_per_n, std::size_t max_n,
                                              std::uint64_t seed) {
  if (samples_per_n == 0) throw InputError("inequality suite needs at least one sample");
  if (max_n < 2) throw InputError("inequality suite needs max_n >= 2");
  InequalitySuiteReport r;
  r.samples_per_n = samples_per_n;
  r.max_n = max_n;
  r.seed = seed;
  r.worst_slack = inf;
  for (std::size_t n = 2; n <= max_n; ++n) {
    Rng rng = Rng::for_trial(seed, n);
    std::vector<double> y(n), z(n);
    for (std::size_t i = 0; i < samples_per_n; ++i) {
      const std::size_t kind = i % 8;
      bool shared_zero = false;
      switch (kind) {
        case 0:  // y == z
          random_simplex(y, rng, 1.0);
          z = y;
          break;
        case 1: {  // matching zero coordinate
          random_simplex(y, rng, 1.0);
          random_simplex(z, rng, 1.0);
          const std::size_t j = static_cast<std::size_t>(rng.next() % n);
          zero_out(y, j);
          zero_out(z, j);
          shared_zero = true;
          break;
        }
        case 2: {  // point mass y
          std::fill(y.begin(), y.end(), 0.0);
          y[rng.next() % n] = 1.0;
          random_simplex(z, rng, 1.0);
          break;
        }
        case 3:  // both concentrated
          random_simplex(y, rng, 6.0);
          random_simplex(z, rng, 6.0);
          break;
        default:
          random_simplex(y, rng, kind == 4 ? 0.3 : 1.0);
          random_simplex(z, rng, kind == 5 ? 3.0 : 1.0);
          break;
      }
      const auto rep = check_entropy_inequality(y, z);
      ++r.total;
      if (!rep.holds) ++r.violations;
      const double slack = rep.slack();
      if (slack < r.worst_slack) {
        r.worst_slack = slack;
        r.worst_n = n;
      }
      if (kind == 0) {
        ++r.degenerate_samples;
        r.degenerate_max_abs_slack = std::max(r.degenerate_max_abs_slack, std::abs(slack));
      }
      if (shared_zero) {
        ++r.zero_coordinate_samples;
        if (std::isinf(rep.rhs)) ++r.zero_coordinate_infinite_rhs;
      }
    }
  }
  return r;
}

std::string InequalitySuiteReport::to_csv() const {
  std::ostringstream os;
  os << "quantity,value\n";
  os << "samples_per_n," << samples_per_n << '\n';
  os << "max_n," << max_n << '\n';
  os << "seed," << seed << '\n';
  os << "total," << total << '\n';
  os << "violations," << violations << '\n';
  os << "violation_fraction," << format_number(violation_fraction()) << '\n';
  os << "worst_slack," << format_number(worst_slack) << '\n';
  os << "worst_n," << worst_n << '\n';
  os << "degenerate_samples," << degenerate_samples << '\n';
  os << "degenerate_max_abs_slack," << format_number(degenerate_max_abs_slack) << '\n';
  os << "zero_coordinate_samples," << zero_coordinate_samples << '\n';
  os << "zero_coordinate_infinite_rhs," << zero_coordinate_infinite_rhs << '\n';
  os << "verdict," << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

// --- enumeration dump -----------------------------------------------------

std::vector<StepRecord> enumerate_steps(const ExperimentConfig& config) {
  config.validate();
  const ModelClassPtr cls = config.build_class();
  std::vector<StepRecord> out;
  try {
    walk_exact(cls, config.truth, config.horizon, config.budget, [&](const StepView& v) {
      StepRecord r;
      r.k = v.k;
      r.prefix = Sequence(cls->alphabet(), {v.prefix.begin(), v.prefix.end()}).to_string();
      r.mu_prefix = v.weight;
      r.mu_cond.assign(v.mu.begin(), v.mu.end());
      r.xi_cond.assign(v.xi.begin(), v.xi.end());
      r.posterior = posterior_weights(v.state);
      r.predicted_mu = argmax(v.mu);
      r.predicted_xi = argmax(v.xi);
      r.error_mu = step_error(v.mu, r.predicted_mu);
      r.error_xi = step_error(v.mu, r.predicted_xi);
      r.h = step_kl_checked(v.mu, v.xi).nats;
      r.sq = step_sq(v.mu, v.xi);
      out.push_back(std::move(r));
    });
  } catch (const EnumerationTooLarge& e) {
    throw ConfigError({std::string("budget: ") + e.what()});
  }
  return out;
}

std::string steps_to_csv(const std::vector<StepRecord>& steps) {
  std::string out = "k,prefix,mu_prefix";
  const std::size_t n = steps.empty() ? 0 : steps.front().mu_cond.size();
  const std::size_t m = steps.empty() ? 0 : steps.front().posterior.size();
  for (std::size_t a = 0; a < n; ++a) out += ",mu_" + std::to_string(a);
  for (std::size_t a = 0; a < n; ++a) out += ",xi_" + std::to_string(a);
  for (std::size_t i = 0; i < m; ++i) out += ",posterior_" + std::to_string(i);
  out += ",pred_mu,pred_xi,e_mu,e_xi,h,sq\n";
  for (const auto& r : steps) {
    out += std::to_string(r.k) + ',' + r.prefix + ',' + format_number(r.mu_prefix);
    for (double v : r.mu_cond) out += ',' + format_number(v);
    for (double v : r.xi_cond) out += ',' + format_number(v);
    for (double v : r.posterior) out += ',' + format_number(v);
    out += ',' + std::to_string(r.predicted_mu) + ',' + std::to_string(r.predicted_xi) + ',' +
           format_number(r.error_mu) + ',' + format_number(r.error_xi) + ',' + format_number(r.h) +
           ',' + format_number(r.sq) + '\n';
  }
  return out;
}

}  // namespace unipred
