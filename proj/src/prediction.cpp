#include "unipred/prediction.hpp"

#include <cmath>
#include <vector>

#include "unipred/errors.hpp"

namespace unipred {

Symbol argmax(std::span<const double> v) {
  if (v.empty()) throw InputError("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return static_cast<Symbol>(best);
}

Predictor::Predictor(SourcePtr strategy) : strategy_(std::move(strategy)) {
  if (!strategy_) throw InputError("predictor needs a strategy");
}

Symbol Predictor::predict(const Sequence& prefix) const {
  return argmax(conditionals(*strategy_, prefix));
}

Symbol predict(const Predictor& p, const Sequence& prefix) { return p.predict(prefix); }

double step_error(std::span<const double> mu_cond, Symbol predicted) {
  if (predicted >= mu_cond.size()) throw InputError("predicted symbol out of range");
  const double e = 1.0 - mu_cond[predicted];
  return e < 0.0 ? 0.0 : e;
}

Scheme Scheme::custom(SourcePtr strategy, std::string name) {
  if (!strategy) throw InputError("custom scheme needs a strategy");
  return Scheme(Kind::custom, std::move(name), std::move(strategy));
}

std::span<const double> Scheme::conditionals(const StepView& v, std::span<double> scratch) const {
  switch (kind_) {
    case Kind::informed:
      return v.mu;
    case Kind::universal:
      return v.xi;
    case Kind::custom:
      strategy_->conditionals(v.prefix, scratch);
      return scratch;
  }
  return v.mu;
}

namespace {

void check_scheme(const ModelClass& cls, const Scheme& scheme) {
  if (scheme.kind() == Scheme::Kind::custom && !(scheme.strategy()->alphabet() == cls.alphabet())) {
    throw InputError("strategy alphabet differs from the class alphabet");
  }
}

auto error_fn(const Scheme& scheme, std::size_t n) {
  return [&scheme, scratch = std::vector<double>(n)](const StepView& v,
                                                     std::span<double> q) mutable {
    q[0] = step_error(v.mu, argmax(scheme.conditionals(v, scratch)));
  };
}

}  // namespace

ErrorLedger expected_errors_exact(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                                  std::size_t horizon, std::uint64_t budget) {
  check_scheme(*cls, scheme);
  return exact_ledgers(cls, truth, horizon, budget, 1, error_fn(scheme, cls->alphabet().size()))[0];
}

ErrorLedger expected_errors_mc(const ModelClassPtr& cls, std::size_t truth, const Scheme& scheme,
                               std::size_t horizon, std::size_t trials, std::uint64_t seed) {
  check_scheme(*cls, scheme);
  return monte_carlo_ledgers(cls, truth, horizon, trials, seed, 1,
                             error_fn(scheme, cls->alphabet().size()))[0];
}

ErrorBound theorem2_bound(double expected_errors_mu, double relative_entropy) {
  if (expected_errors_mu < 0.0 || relative_entropy < 0.0) {
    throw InputError("error bound needs E_mu >= 0 and H_n >= 0");
  }
  const double e = expected_errors_mu;
  const double h = relative_entropy;
  return {h + std::sqrt(4.0 * e * h + h * h), 2.0 * h + 2.0 * std::sqrt(e * h)};
}

}  // namespace unipred
