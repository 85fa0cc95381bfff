#include <memory>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unipred/decision.hpp"
#include "unipred/errors.hpp"
#include "unipred/harness.hpp"
#include "unipred/information.hpp"
#include "unipred/mixture.hpp"
#include "unipred/prediction.hpp"

namespace py = pybind11;
using namespace unipred;

namespace {

using Vec = std::vector<double>;

Vec to_vec(std::span<const double> s) { return Vec(s.begin(), s.end()); }

std::vector<SourcePtr> to_sources(const std::vector<std::shared_ptr<Source>>& in) {
  return std::vector<SourcePtr>(in.begin(), in.end());
}

Sequence to_sequence(const Source& s, const std::vector<Symbol>& symbols) {
  return Sequence(s.alphabet(), symbols);
}

std::shared_ptr<ModelClass> make_class(ModelClass c) { return std::make_shared<ModelClass>(std::move(c)); }

}  // namespace

PYBIND11_MODULE(_unipred, m) {
  m.doc() = "Bayesian mixture prediction over finite alphabets";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ImpossiblePrefixError>(m, "ImpossiblePrefixError", PyExc_ValueError);
  py::register_exception<EnumerationTooLarge>(m, "EnumerationTooLarge", PyExc_ValueError);

  // --- sources ---
  py::class_<Source, std::shared_ptr<Source>>(m, "Source")
      .def_property_readonly("alphabet_size", [](const Source& s) { return s.alphabet().size(); })
      .def("conditionals",
           [](const Source& s, const std::vector<Symbol>& prefix) {
             return conditionals(s, to_sequence(s, prefix));
           },
           py::arg("prefix") = std::vector<Symbol>{})
      .def("joint", [](const Source& s, const std::vector<Symbol>& x) { return joint(s, to_sequence(s, x)); })
      .def("log_joint",
           [](const Source& s, const std::vector<Symbol>& x) { return log_joint(s, to_sequence(s, x)); })
      .def("sample",
           [](const Source& s, std::size_t n, std::uint64_t seed) {
             Rng rng(seed);
             const auto seq = sample(s, n, rng);
             return std::vector<Symbol>(seq.symbols().begin(), seq.symbols().end());
           },
           py::arg("n"), py::arg("seed") = 0)
      .def("describe", &Source::describe)
      .def("__repr__", &Source::describe);

  py::class_<ModelFamily, Source, std::shared_ptr<ModelFamily>>(m, "ModelFamily")
      .def_property_readonly("description_length_bits", &ModelFamily::description_length_bits);

  py::class_<IidCategorical, ModelFamily, std::shared_ptr<IidCategorical>>(m, "IidCategorical")
      .def(py::init<Vec>(), py::arg("probabilities"));

  py::class_<MarkovOrderM, ModelFamily, std::shared_ptr<MarkovOrderM>>(m, "MarkovOrderM")
      .def(py::init<std::size_t, std::vector<Vec>, Vec>(), py::arg("order"), py::arg("transitions"),
           py::arg("initial"));

  py::class_<DeterministicPeriodic, ModelFamily, std::shared_ptr<DeterministicPeriodic>>(
      m, "DeterministicPeriodic")
      .def(py::init([](std::size_t alphabet_size, std::vector<Symbol> pattern) {
             return std::make_shared<DeterministicPeriodic>(
                 Sequence(Alphabet(alphabet_size), std::move(pattern)));
           }),
           py::arg("alphabet_size"), py::arg("pattern"));

  // --- mixture ---
  py::class_<ModelClass, std::shared_ptr<ModelClass>>(m, "ModelClass")
      .def(py::init([](const std::vector<std::shared_ptr<Source>>& models, Vec weights) {
             return make_class(ModelClass(to_sources(models), std::move(weights)));
           }),
           py::arg("models"), py::arg("weights"))
      .def_static("uniform",
                  [](const std::vector<std::shared_ptr<Source>>& models) {
                    return make_class(ModelClass::uniform(to_sources(models)));
                  })
      .def_static("description_length",
                  [](const std::vector<std::shared_ptr<ModelFamily>>& models) {
                    const std::vector<ModelPtr> fams(models.begin(), models.end());
                    return make_class(ModelClass::from_log_weights(
                        std::vector<SourcePtr>(models.begin(), models.end()),
                        description_length_log_weights(fams)));
                  })
      .def("__len__", &ModelClass::size)
      .def_property_readonly("weights", [](const ModelClass& c) { return to_vec(c.weights()); })
      .def_property_readonly("log_weights", [](const ModelClass& c) { return to_vec(c.log_weights()); })
      .def("entropy_budget", &ModelClass::entropy_budget, py::arg("i"))
      .def("init", [](std::shared_ptr<ModelClass> c) { return init(ModelClassPtr(std::move(c))); });

  py::class_<MixtureState>(m, "MixtureState")
      .def("observe", &MixtureState::observe, py::arg("symbol"))
      .def_property_readonly("prefix",
                             [](const MixtureState& s) {
                               return std::vector<Symbol>(s.prefix().begin(), s.prefix().end());
                             })
      .def_property_readonly("log_xi", &MixtureState::log_xi)
      .def_property_readonly("log_marginals", [](const MixtureState& s) { return to_vec(s.log_marginals()); })
      .def("posterior_weights", [](const MixtureState& s) { return posterior_weights(s); })
      .def("xi_conditionals", [](const MixtureState& s) { return xi_conditionals(s); })
      .def("model_conditionals", [](const MixtureState& s, std::size_t i) {
        return to_vec(s.model_conditionals(i));
      });

  m.def("log_sum_exp", [](const Vec& v) { return log_sum_exp(v); });

  // --- information ---
  m.def("step_kl", [](const Vec& mu, const Vec& xi) { return step_kl(mu, xi); });
  m.def("step_sq", [](const Vec& mu, const Vec& xi) { return step_sq(mu, xi); });
  m.def("check_entropy_inequality", [](const Vec& y, const Vec& z) {
    const auto r = check_entropy_inequality(y, z);
    return py::dict(py::arg("lhs") = r.lhs, py::arg("rhs") = r.rhs, py::arg("holds") = r.holds);
  });

  py::class_<ExpectationLedger>(m, "ExpectationLedger")
      .def_readonly("trials", &ExpectationLedger::trials)
      .def_readonly("seed", &ExpectationLedger::seed)
      .def_readonly("per_step", &ExpectationLedger::per_step)
      .def_readonly("cumulative", &ExpectationLedger::cumulative)
      .def_readonly("stderr_cumulative", &ExpectationLedger::stderr_cumulative)
      .def_property_readonly("exact", [](const ExpectationLedger& l) { return l.flavor == Flavor::exact; })
      .def("total", &ExpectationLedger::total)
      .def("total_stderr", &ExpectationLedger::total_stderr);

  py::class_<InfoLedger>(m, "InfoLedger")
      .def_readonly("h", &InfoLedger::h)
      .def_readonly("H", &InfoLedger::H)
      .def_readonly("H_stderr", &InfoLedger::H_stderr)
      .def_readonly("sq", &InfoLedger::sq)
      .def_readonly("D", &InfoLedger::D)
      .def_readonly("D_stderr", &InfoLedger::D_stderr)
      .def_readonly("d_mu", &InfoLedger::d_mu)
      .def_readonly("dominance_violated", &InfoLedger::dominance_violated);

  m.def("accumulate_exact",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, std::size_t n, std::uint64_t budget) {
          return accumulate_exact(c, truth, n, budget);
        },
        py::arg("model_class"), py::arg("truth"), py::arg("horizon"),
        py::arg("budget") = default_enumeration_budget);
  m.def("accumulate_mc",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, std::size_t n, std::size_t trials,
           std::uint64_t seed) { return accumulate_mc(c, truth, n, trials, seed); },
        py::arg("model_class"), py::arg("truth"), py::arg("horizon"), py::arg("trials"),
        py::arg("seed") = 0);

  // --- prediction ---
  py::class_<Scheme>(m, "Scheme")
      .def_static("informed", &Scheme::informed)
      .def_static("universal", &Scheme::universal)
      .def_static("custom",
                  [](std::shared_ptr<Source> s, std::string name) {
                    return Scheme::custom(std::move(s), std::move(name));
                  },
                  py::arg("strategy"), py::arg("name"))
      .def_property_readonly("name", &Scheme::name);

  m.def("argmax", [](const Vec& v) { return argmax(v); });
  m.def("predict", [](std::shared_ptr<Source> s, const std::vector<Symbol>& prefix) {
    return Predictor(s).predict(to_sequence(*s, prefix));
  });
  m.def("expected_errors_exact",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, const Scheme& s, std::size_t n,
           std::uint64_t budget) { return expected_errors_exact(c, truth, s, n, budget); },
        py::arg("model_class"), py::arg("truth"), py::arg("scheme"), py::arg("horizon"),
        py::arg("budget") = default_enumeration_budget);
  m.def("expected_errors_mc",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, const Scheme& s, std::size_t n,
           std::size_t trials, std::uint64_t seed) {
          return expected_errors_mc(c, truth, s, n, trials, seed);
        },
        py::arg("model_class"), py::arg("truth"), py::arg("scheme"), py::arg("horizon"),
        py::arg("trials"), py::arg("seed") = 0);
  m.def("theorem2_bound", [](double e_mu, double h) {
    const auto b = theorem2_bound(e_mu, h);
    return py::make_tuple(b.tight, b.loose);
  });

  // --- decision ---
  py::class_<LossMatrix>(m, "LossMatrix")
      .def(py::init<std::vector<Vec>, double, double, std::size_t>(), py::arg("rows"), py::arg("l_min"),
           py::arg("l_delta"), py::arg("period") = 1)
      .def_static("from_table", &LossMatrix::from_table, py::arg("rows"), py::arg("period") = 1)
      .def_static("error_loss", &LossMatrix::error_loss, py::arg("alphabet_size"))
      .def_property_readonly("l_min", &LossMatrix::l_min)
      .def_property_readonly("l_delta", &LossMatrix::l_delta)
      .def_property_readonly("period", &LossMatrix::period)
      .def("at", &LossMatrix::at);

  m.def("act", [](const Vec& rho, const LossMatrix& l) { return act(rho, l); });
  m.def("expected_loss", [](const Vec& rho, std::size_t a, const LossMatrix& l) {
    return expected_loss(rho, a, l);
  });
  m.def("expected_loss_exact",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, const Scheme& s, const LossMatrix& l,
           std::size_t n, std::uint64_t budget) { return expected_loss_exact(c, truth, s, l, n, budget); },
        py::arg("model_class"), py::arg("truth"), py::arg("scheme"), py::arg("loss"), py::arg("horizon"),
        py::arg("budget") = default_enumeration_budget);
  m.def("expected_loss_mc",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, const Scheme& s, const LossMatrix& l,
           std::size_t n, std::size_t trials, std::uint64_t seed) {
          return expected_loss_mc(c, truth, s, l, n, trials, seed);
        },
        py::arg("model_class"), py::arg("truth"), py::arg("scheme"), py::arg("loss"), py::arg("horizon"),
        py::arg("trials"), py::arg("seed") = 0);
  m.def("loss_bound", &loss_bound, py::arg("loss_mu"), py::arg("horizon"), py::arg("relative_entropy"),
        py::arg("loss"));

  py::class_<PayoutTable>(m, "PayoutTable")
      .def(py::init<std::vector<Vec>, double, double>(), py::arg("profit"), py::arg("p_max"),
           py::arg("p_delta"))
      .def_static("from_stakes", &PayoutTable::from_stakes, py::arg("stakes"), py::arg("rewards"))
      .def_property_readonly("p_max", &PayoutTable::p_max)
      .def_property_readonly("p_delta", &PayoutTable::p_delta)
      .def("as_loss", &PayoutTable::as_loss);

  py::class_<BettingReport>(m, "BettingReport")
      .def_readonly("rounds", &BettingReport::rounds)
      .def_readonly("trials", &BettingReport::trials)
      .def_readonly("avg_profit_xi", &BettingReport::avg_profit_xi)
      .def_readonly("avg_profit_mu", &BettingReport::avg_profit_mu)
      .def_readonly("avg_profit_xi_stderr", &BettingReport::avg_profit_xi_stderr)
      .def_readonly("avg_profit_mu_stderr", &BettingReport::avg_profit_mu_stderr)
      .def_readonly("realized_profit_xi", &BettingReport::realized_profit_xi)
      .def_readonly("realized_profit_mu", &BettingReport::realized_profit_mu)
      .def_readonly("crossing_n", &BettingReport::crossing_n)
      .def_readonly("crossing_bound", &BettingReport::crossing_bound)
      .def_readonly("trials_crossed", &BettingReport::trials_crossed)
      .def_readonly("trials_crossed_within_bound", &BettingReport::trials_crossed_within_bound);

  m.def("simulate_betting",
        [](std::shared_ptr<ModelClass> c, std::size_t truth, const PayoutTable& p, std::size_t rounds,
           std::size_t trials, std::uint64_t seed) {
          return simulate_betting(c, truth, p, rounds, trials, seed);
        },
        py::arg("model_class"), py::arg("truth"), py::arg("payout"), py::arg("rounds"), py::arg("trials"),
        py::arg("seed") = 0);
  m.def("winning_zone_bound", &winning_zone_bound);

  // --- harness ---
  m.def("run_config",
        [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<std::size_t> trials) {
          auto c = parse_config(text);
          if (seed) c.seed = *seed;
          if (trials) c.trials = *trials;
          const auto r = run(c);
          return py::make_tuple(r.to_csv(), r.all_pass());
        },
        py::arg("config_text"), py::arg("seed") = py::none(), py::arg("trials") = py::none(),
        "Run a YAML experiment config; returns (csv, all_pass).");
  m.def("enumerate_config",
        [](const std::string& text) { return steps_to_csv(enumerate_steps(parse_config(text))); },
        py::arg("config_text"));

  py::class_<InequalitySuiteReport>(m, "InequalitySuiteReport")
      .def_readonly("total", &InequalitySuiteReport::total)
      .def_readonly("violations", &InequalitySuiteReport::violations)
      .def_readonly("worst_slack", &InequalitySuiteReport::worst_slack)
      .def_property_readonly("passed", &InequalitySuiteReport::passed)
      .def("to_csv", &InequalitySuiteReport::to_csv);
  m.def("verify_inequality_suite", &verify_inequality_suite, py::arg("samples_per_n") = 100000,
        py::arg("max_n") = 8, py::arg("seed") = 0);
}
