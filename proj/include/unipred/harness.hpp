#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unipred/decision.hpp"
#include "unipred/mixture.hpp"
#include "unipred/prediction.hpp"

namespace unipred {

inline constexpr std::string_view config_schema = "unipred.experiment/1";

enum class WeightMode { uniform, description_length, explicit_vector };
enum class RunMode { exact, monte_carlo };

struct NamedStrategy {
  std::string name;
  SourcePtr source;
};

struct ExperimentConfig {
  std::size_t alphabet_size = 2;
  std::vector<ModelPtr> models;
  WeightMode weight_mode = WeightMode::uniform;
  std::vector<double> weights;  // explicit_vector only
  std::size_t truth = 0;
  std::size_t horizon = 1;
  RunMode mode = RunMode::exact;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::uint64_t budget = default_enumeration_budget;
  std::vector<NamedStrategy> strategies;  // extra Theta_rho / Lambda_rho under test
  std::optional<LossMatrix> loss;
  std::optional<PayoutTable> betting;

  ModelClassPtr build_class() const;
  // Every scheme reported: mu, xi, then the configured strategies.
  std::vector<Scheme> schemes() const;
  // Throws ConfigError listing every offending field.
  void validate() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// --- reports --------------------------------------------------------------

enum class Verdict { pass, fail, not_applicable };

const char* to_string(Verdict v);

struct ReportRow {
  std::optional<std::size_t> k;  // empty for summary rows
  std::string scheme;
  std::string quantity;
  double value = 0.0;
  std::optional<double> bound;
  std::optional<double> slack;  // >= 0 when the check holds
  Verdict verdict = Verdict::not_applicable;
};

struct BoundReport {
  std::vector<ReportRow> rows;
  std::vector<ReportRow> summary;  // one verdict per checked bound family

  bool all_pass() const;
  // Columns k,scheme,quantity,value,bound,slack,verdict; numbers with 17
  // significant digits; summary rows carry k = "*".
  std::string to_csv() const;
};

// 17-significant-digit rendering; "inf", "-inf" and "nan" spelled out.
std::string format_number(double v);

BoundReport run(const ExperimentConfig& config);

// --- randomized check of sum (y-z)^2 <= sum y ln(y/z) ---------------------

struct InequalitySuiteReport {
  std::size_t samples_per_n = 0;
  std::size_t max_n = 0;
  std::uint64_t seed = 0;
  std::size_t total = 0;
  std::size_t violations = 0;
  double worst_slack = 0.0;  // min over samples of rhs - lhs
  std::size_t worst_n = 0;
  std::size_t degenerate_samples = 0;  // y == z
  double degenerate_max_abs_slack = 0.0;
  std::size_t zero_coordinate_samples = 0;  // y_i = z_i = 0 for some i
  std::size_t zero_coordinate_infinite_rhs = 0;

  double violation_fraction() const {
    return total ? static_cast<double>(violations) / static_cast<double>(total) : 0.0;
  }
  bool passed() const { return violations == 0 && zero_coordinate_infinite_rhs == 0; }
  std::string to_csv() const;
};

// samples_per_n pairs for each alphabet size 2..max_n.
InequalitySuiteReport verify_inequality_suite(std::size_t samples_per_n, std::size_t max_n,
                                              std::uint64_t seed);

// --- per-prefix dump --------------------------------------------------------

struct StepRecord {
  std::size_t k;
  std::string prefix;
  double mu_prefix;
  std::vector<double> mu_cond;
  std::vector<double> xi_cond;
  std::vector<double> posterior;
  Symbol predicted_mu;
  Symbol predicted_xi;
  double error_mu;
  double error_xi;
  double h;
  double sq;
};

std::vector<StepRecord> enumerate_steps(const ExperimentConfig& config);
std::string steps_to_csv(const std::vector<StepRecord>& steps);

}  // namespace unipred
