#pragma once

#include <memory>
#include <span>
#include <vector>

#include "unipred/core_types.hpp"

namespace unipred {

// A finite class M = {mu_1..mu_m} with prior weights w_i > 0, sum w_i = 1.
// Weights are held in log space as well so tiny description-length weights
// keep their exact ln(1/w) even when w itself is far below 1e-300.
class ModelClass {
 public:
  ModelClass(std::vector<SourcePtr> models, std::vector<double> weights);

  static ModelClass uniform(std::vector<SourcePtr> models);
  static ModelClass from_log_weights(std::vector<SourcePtr> models, std::vector<double> log_weights);

  std::size_t size() const { return models_.size(); }
  const Alphabet& alphabet() const { return alphabet_; }
  const Source& model(std::size_t i) const { return *models_.at(i); }
  const SourcePtr& model_ptr(std::size_t i) const { return models_.at(i); }
  std::span<const SourcePtr> models() const { return models_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> log_weights() const { return log_weights_; }

  // d_mu = ln(1/w_i): the entropy budget of model i.
  double entropy_budget(std::size_t i) const { return -log_weights_.at(i); }

 private:
  ModelClass(std::vector<SourcePtr> models, std::vector<double> weights,
             std::vector<double> log_weights);

  Alphabet alphabet_;
  std::vector<SourcePtr> models_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

using ModelClassPtr = std::shared_ptr<const ModelClass>;

// xi after observing a prefix: per-model log marginals ln mu_i(x_<k), ln xi(x_<k),
// and each model's conditional vector for the next symbol.
//
// Models that assign the prefix probability 0 keep their slot with a -inf log
// marginal so indices stay stable across a run.
class MixtureState {
 public:
  const ModelClass& model_class() const { return *class_; }
  const ModelClassPtr& model_class_ptr() const { return class_; }
  std::span<const Symbol> prefix() const { return prefix_; }
  std::size_t length() const { return prefix_.size(); }
  std::span<const double> log_marginals() const { return log_marginals_; }
  double log_xi() const { return log_xi_; }

  // mu_i(x_<k -> .) for the current prefix.
  std::span<const double> model_conditionals(std::size_t i) const;

  // Appends one symbol in place.
  void observe(Symbol observed);

 private:
  friend MixtureState init(ModelClassPtr model_class);

  explicit MixtureState(ModelClassPtr model_class);
  void refresh_conditionals();

  ModelClassPtr class_;
  std::vector<Symbol> prefix_;
  std::vector<double> log_marginals_;
  double log_xi_ = 0.0;
  std::vector<double> conditionals_;  // size() x N, row-major
};

// Numerically stable ln sum exp(v); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> v);

MixtureState init(ModelClassPtr model_class);
MixtureState init(const ModelClass& model_class);

// Posterior weights w_i mu_i(x_<k) / xi(x_<k); a probability vector.
std::vector<double> posterior_weights(const MixtureState& state);

// xi(x_<k -> a) for every a. Throws ImpossiblePrefixError when xi(x_<k) = 0.
void xi_conditionals(const MixtureState& state, std::span<double> out);
std::vector<double> xi_conditionals(const MixtureState& state);
double xi_conditional(const MixtureState& state, Symbol next);

MixtureState advance(const MixtureState& state, Symbol observed);

// xi as a Source, so a strategy over the mixture plugs in wherever a Source
// does. Rebuilds the state from the prefix on every call.
class MixtureSource final : public Source {
 public:
  explicit MixtureSource(ModelClassPtr model_class) : class_(std::move(model_class)) {}

  Alphabet alphabet() const override { return class_->alphabet(); }
  void conditionals(std::span<const Symbol> prefix, std::span<double> out) const override;
  std::string describe() const override { return "xi"; }

 private:
  ModelClassPtr class_;
};

// Description-length prior: w_i proportional to 2^-DL(mu_i), DL counting the
// family tag bits, 32 bits per real parameter and the binary width of each
// integer parameter.
std::vector<double> log_weights_from_description_lengths(std::span<const double> bits);
std::vector<double> description_length_log_weights(std::span<const ModelPtr> models);
// Linear weights of the above. Throws ConstructionError if some weight
// underflows to 0; use description_length_log_weights in that case.
std::vector<double> weight_by_description_length(std::span<const ModelPtr> models);

}  // namespace unipred
