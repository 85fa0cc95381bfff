#include "unipred/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "unipred/errors.hpp"
#include "unipred/tolerances.hpp"

namespace unipred {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

Alphabet common_alphabet(const std::vector<SourcePtr>& models) {
  if (models.empty()) throw ConstructionError("model class must be nonempty");
  for (const auto& m : models) {
    if (!m) throw ConstructionError("null model in class");
  }
  const Alphabet a = models.front()->alphabet();
  for (const auto& m : models) {
    if (!(m->alphabet() == a)) throw ConstructionError("models in a class must share one alphabet");
  }
  return a;
}

}  // namespace

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return neg_inf;
  const double max = *std::max_element(v.begin(), v.end());
  if (max == neg_inf) return neg_inf;
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - max);
  return max + std::log(sum);
}

// --- ModelClass -----------------------------------------------------------

ModelClass::ModelClass(std::vector<SourcePtr> models, std::vector<double> weights,
                       std::vector<double> log_weights)
    : alphabet_(common_alphabet(models)),
      models_(std::move(models)),
      weights_(std::move(weights)),
      log_weights_(std::move(log_weights)) {}

ModelClass::ModelClass(std::vector<SourcePtr> models, std::vector<double> weights)
    : alphabet_(common_alphabet(models)), models_(std::move(models)), weights_(std::move(weights)) {
  if (weights_.size() != models_.size()) {
    throw ConstructionError("weight vector length " + std::to_string(weights_.size()) +
                            " does not match class size " + std::to_string(models_.size()));
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw ConstructionError("weights must be strictly positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tolerances.normalization) {
    throw ConstructionError("weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
  log_weights_.reserve(weights_.size());
  for (double w : weights_) log_weights_.push_back(std::log(w));
}

ModelClass ModelClass::uniform(std::vector<SourcePtr> models) {
  const std::size_t m = models.size();
  if (m == 0) throw ConstructionError("model class must be nonempty");
  return ModelClass(std::move(models), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

ModelClass ModelClass::from_log_weights(std::vector<SourcePtr> models,
                                        std::vector<double> log_weights) {
  if (log_weights.size() != models.size()) {
    throw ConstructionError("log weight vector length does not match class size");
  }
  for (double lw : log_weights) {
    if (!std::isfinite(lw)) throw ConstructionError("weights must be strictly positive");
  }
  if (std::abs(log_sum_exp(log_weights)) > tolerances.normalization) {
    throw ConstructionError("weights must sum to 1");
  }
  std::vector<double> weights;
  weights.reserve(log_weights.size());
  for (double lw : log_weights) weights.push_back(std::exp(lw));
  return ModelClass(std::move(models), std::move(weights), std::move(log_weights));
}

// --- MixtureState ---------------------------------------------------------

MixtureState::MixtureState(ModelClassPtr model_class)
    : class_(std::move(model_class)),
      log_marginals_(class_->size(), 0.0),
      conditionals_(class_->size() * class_->alphabet().size()) {
  refresh_conditionals();
}

std::span<const double> MixtureState::model_conditionals(std::size_t i) const {
  const std::size_t n = class_->alphabet().size();
  return std::span<const double>(conditionals_).subspan(i * n, n);
}

void MixtureState::refresh_conditionals() {
  const std::size_t n = class_->alphabet().size();
  std::span<double> all(conditionals_);
  for (std::size_t i = 0; i < class_->size(); ++i) {
    class_->model(i).conditionals(prefix_, all.subspan(i * n, n));
  }
}

void MixtureState::observe(Symbol observed) {
  const std::size_t n = class_->alphabet().size();
  class_->alphabet().check(observed);
  for (std::size_t i = 0; i < class_->size(); ++i) {
    if (log_marginals_[i] == neg_inf) continue;
    log_marginals_[i] += std::log(conditionals_[i * n + observed]);
  }
  auto lw = class_->log_weights();
  std::vector<double> joint(class_->size());
  for (std::size_t i = 0; i < joint.size(); ++i) joint[i] = lw[i] + log_marginals_[i];
  log_xi_ = log_sum_exp(joint);
  prefix_.push_back(observed);
  refresh_conditionals();
}

MixtureState init(ModelClassPtr model_class) {
  if (!model_class) throw ConstructionError("null model class");
  return MixtureState(std::move(model_class));
}

MixtureState init(const ModelClass& model_class) {
  return init(std::make_shared<const ModelClass>(model_class));
}

std::vector<double> posterior_weights(const MixtureState& state) {
  const auto& cls = state.model_class();
  if (state.log_xi() == neg_inf) throw ImpossiblePrefixError();
  auto lw = cls.log_weights();
  auto lm = state.log_marginals();
  std::vector<double> post(cls.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i) {
    post[i] = lm[i] == neg_inf ? 0.0 : std::exp(lw[i] + lm[i] - state.log_xi());
    sum += post[i];
  }
  for (double& p : post) p /= sum;
  return post;
}

void xi_conditionals(const MixtureState& state, std::span<double> out) {
  const auto& cls = state.model_class();
  const auto post = posterior_weights(state);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (post[i] == 0.0) continue;
    auto cond = state.model_conditionals(i);
    for (std::size_t a = 0; a < out.size(); ++a) out[a] += post[i] * cond[a];
  }
}

std::vector<double> xi_conditionals(const MixtureState& state) {
  std::vector<double> out(state.model_class().alphabet().size());
  xi_conditionals(state, out);
  return out;
}

double xi_conditional(const MixtureState& state, Symbol next) {
  state.model_class().alphabet().check(next);
  return xi_conditionals(state)[next];
}

MixtureState advance(const MixtureState& state, Symbol observed) {
  MixtureState next = state;
  next.observe(observed);
  return next;
}

void MixtureSource::conditionals(std::span<const Symbol> prefix, std::span<double> out) const {
  MixtureState state = init(class_);
  for (Symbol s : prefix) state.observe(s);
  xi_conditionals(state, out);
}

// --- description-length prior ---------------------------------------------

std::vector<double> log_weights_from_description_lengths(std::span<const double> bits) {
  if (bits.empty()) throw ConstructionError("model list must be nonempty");
  std::vector<double> log_w;
  log_w.reserve(bits.size());
  for (double b : bits) log_w.push_back(-b * std::numbers::ln2);
  // The normalizer plays the role of Omega.
  const double log_omega = log_sum_exp(log_w);
  for (double& lw : log_w) lw -= log_omega;
  return log_w;
}

std::vector<double> description_length_log_weights(std::span<const ModelPtr> models) {
  std::vector<double> bits;
  bits.reserve(models.size());
  for (const auto& m : models) bits.push_back(static_cast<double>(m->description_length_bits()));
  return log_weights_from_description_lengths(bits);
}

std::vector<double> weight_by_description_length(std::span<const ModelPtr> models) {
  auto log_w = description_length_log_weights(models);
  std::vector<double> w;
  w.reserve(log_w.size());
  for (double lw : log_w) {
    w.push_back(std::exp(lw));
    if (!(w.back() > 0.0)) {
      throw ConstructionError("description-length weight underflows; use log weights");
    }
  }
  return w;
}

}  // namespace unipred
