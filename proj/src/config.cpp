#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "unipred/errors.hpp"
#include "unipred/harness.hpp"

namespace unipred {

namespace {

const std::set<std::string> top_level_keys = {
    "schema", "alphabet", "models",  "weights", "truth",      "horizon", "mode",
    "trials", "seed",     "budget",  "loss",    "strategies", "betting"};

class Parser {
 public:
  std::vector<std::string> issues;

  void issue(const std::string& field, const std::string& message) {
    issues.push_back(field + ": " + message);
  }

  template <class T>
  std::optional<T> scalar(const YAML::Node& node, const std::string& field) {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      issue(field, "expected a " + type_name<T>());
      return std::nullopt;
    }
  }

  std::optional<std::vector<double>> vector(const YAML::Node& node, const std::string& field) {
    if (!node.IsSequence()) {
      issue(field, "expected a list of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      auto v = scalar<double>(node[i], field + "[" + std::to_string(i) + "]");
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }

  std::optional<std::vector<std::vector<double>>> matrix(const YAML::Node& node,
                                                         const std::string& field) {
    if (!node.IsSequence()) {
      issue(field, "expected a list of rows");
      return std::nullopt;
    }
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      auto row = vector(node[i], field + "[" + std::to_string(i) + "]");
      if (!row) return std::nullopt;
      out.push_back(std::move(*row));
    }
    return out;
  }

  ModelPtr model(const YAML::Node& node, const std::string& field) {
    if (!node.IsMap()) {
      issue(field, "expected a mapping with a 'family' key");
      return nullptr;
    }
    if (!node["family"]) {
      issue(field + ".family", "missing");
      return nullptr;
    }
    auto family = scalar<std::string>(node["family"], field + ".family");
    if (!family) return nullptr;
    try {
      if (*family == "iid") {
        auto p = require_vector(node, "probabilities", field);
        return p ? std::make_shared<const IidCategorical>(std::move(*p)) : nullptr;
      }
      if (*family == "markov") {
        auto order = node["order"] ? scalar<std::size_t>(node["order"], field + ".order")
                                   : std::optional<std::size_t>(1);
        auto transitions = node["transitions"]
                               ? matrix(node["transitions"], field + ".transitions")
                               : (issue(field + ".transitions", "missing"), std::nullopt);
        auto initial = require_vector(node, "initial", field);
        if (!order || !transitions || !initial) return nullptr;
        return std::make_shared<const MarkovOrderM>(*order, std::move(*transitions),
                                                    std::move(*initial));
      }
      if (*family == "periodic") {
        if (!node["pattern"] || !node["pattern"].IsSequence()) {
          issue(field + ".pattern", "expected a list of symbol indices");
          return nullptr;
        }
        std::vector<Symbol> symbols;
        for (std::size_t i = 0; i < node["pattern"].size(); ++i) {
          auto s = scalar<Symbol>(node["pattern"][i], field + ".pattern[" + std::to_string(i) + "]");
          if (!s) return nullptr;
          symbols.push_back(*s);
        }
        if (!alphabet_size) {
          issue(field, "periodic models need the top-level alphabet size");
          return nullptr;
        }
        return std::make_shared<const DeterministicPeriodic>(
            Sequence(Alphabet(*alphabet_size), std::move(symbols)));
      }
      issue(field + ".family", "unknown family '" + *family + "' (iid, markov, periodic)");
    } catch (const std::exception& e) {
      issue(field, e.what());
    }
    return nullptr;
  }

  std::optional<std::size_t> alphabet_size;

 private:
  std::optional<std::vector<double>> require_vector(const YAML::Node& node, const char* key,
                                                    const std::string& field) {
    if (!node[key]) {
      issue(field + "." + key, "missing");
      return std::nullopt;
    }
    return vector(node[key], field + "." + key);
  }

  template <class T>
  static std::string type_name() {
    if constexpr (std::is_same_v<T, std::string>) return "string";
    else if constexpr (std::is_floating_point_v<T>) return "number";
    else return "nonnegative integer";
  }
};

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("yaml: ") + e.what()});
  }
  if (!root.IsMap()) throw ConfigError({"config: expected a mapping at the top level"});

  Parser p;
  ExperimentConfig c;

  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!top_level_keys.count(key)) p.issue(key, "unknown key");
  }

  if (!root["schema"]) {
    p.issue("schema", "missing (expected '" + std::string(config_schema) + "')");
  } else if (auto s = p.scalar<std::string>(root["schema"], "schema"); s && *s != config_schema) {
    p.issue("schema", "unsupported schema '" + *s + "' (expected '" + std::string(config_schema) + "')");
  }

  if (!root["alphabet"]) {
    p.issue("alphabet", "missing");
  } else if (auto a = p.scalar<std::size_t>(root["alphabet"], "alphabet")) {
    if (*a < 2) p.issue("alphabet", "needs at least 2 symbols");
    else {
      c.alphabet_size = *a;
      p.alphabet_size = *a;
    }
  }

  if (!root["models"] || !root["models"].IsSequence() || root["models"].size() == 0) {
    p.issue("models", "expected a nonempty list of model specs");
  } else {
    for (std::size_t i = 0; i < root["models"].size(); ++i) {
      const std::string field = "models[" + std::to_string(i) + "]";
      if (auto m = p.model(root["models"][i], field)) {
        if (p.alphabet_size && m->alphabet().size() != *p.alphabet_size) {
          p.issue(field, "alphabet size " + std::to_string(m->alphabet().size()) +
                             " differs from top-level alphabet " + std::to_string(*p.alphabet_size));
        }
        c.models.push_back(std::move(m));
      }
    }
  }

  if (auto w = root["weights"]) {
    if (w.IsSequence()) {
      c.weight_mode = WeightMode::explicit_vector;
      if (auto v = p.vector(w, "weights")) c.weights = std::move(*v);
    } else if (auto s = p.scalar<std::string>(w, "weights")) {
      if (*s == "uniform") c.weight_mode = WeightMode::uniform;
      else if (*s == "description_length") c.weight_mode = WeightMode::description_length;
      else p.issue("weights", "expected uniform, description_length or a list of weights");
    }
  }

  if (!root["truth"]) p.issue("truth", "missing");
  else if (auto t = p.scalar<std::size_t>(root["truth"], "truth")) c.truth = *t;

  if (!root["horizon"]) p.issue("horizon", "missing");
  else if (auto h = p.scalar<std::size_t>(root["horizon"], "horizon")) c.horizon = *h;

  if (auto m = root["mode"]) {
    if (auto s = p.scalar<std::string>(m, "mode")) {
      if (*s == "exact") c.mode = RunMode::exact;
      else if (*s == "monte_carlo") c.mode = RunMode::monte_carlo;
      else p.issue("mode", "expected exact or monte_carlo");
    }
  }
  if (auto t = root["trials"]) {
    if (auto v = p.scalar<std::size_t>(t, "trials")) c.trials = *v;
  }
  if (auto s = root["seed"]) {
    if (auto v = p.scalar<std::uint64_t>(s, "seed")) c.seed = *v;
  }
  if (auto b = root["budget"]) {
    if (auto v = p.scalar<std::uint64_t>(b, "budget")) c.budget = *v;
  }

  if (auto s = root["strategies"]) {
    if (!s.IsSequence()) {
      p.issue("strategies", "expected a list of named model specs");
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string field = "strategies[" + std::to_string(i) + "]";
        std::string name = "rho" + std::to_string(i);
        if (s[i].IsMap() && s[i]["name"]) {
          if (auto n = p.scalar<std::string>(s[i]["name"], field + ".name")) name = *n;
        }
        if (auto m = p.model(s[i], field)) c.strategies.push_back({name, std::move(m)});
      }
    }
  }

  if (auto l = root["loss"]) {
    if (!l.IsMap() || !l["table"]) {
      p.issue("loss", "expected a mapping with a 'table' of rows (outcome x action)");
    } else if (auto table = p.matrix(l["table"], "loss.table")) {
      std::size_t period = 1;
      if (l["period"]) {
        if (auto v = p.scalar<std::size_t>(l["period"], "loss.period")) period = *v;
      }
      try {
        if (l["l_min"] || l["l_delta"]) {
          auto lo = l["l_min"] ? p.scalar<double>(l["l_min"], "loss.l_min") : std::nullopt;
          auto d = l["l_delta"] ? p.scalar<double>(l["l_delta"], "loss.l_delta") : std::nullopt;
          if (!lo || !d) p.issue("loss", "l_min and l_delta must be given together");
          else c.loss = LossMatrix(std::move(*table), *lo, *d, period);
        } else {
          c.loss = LossMatrix::from_table(std::move(*table), period);
        }
      } catch (const std::exception& e) {
        p.issue("loss", e.what());
      }
    }
  }

  if (auto b = root["betting"]) {
    try {
      if (!b.IsMap()) {
        p.issue("betting", "expected a mapping");
      } else if (b["profit"]) {
        auto table = p.matrix(b["profit"], "betting.profit");
        auto hi = b["p_max"] ? p.scalar<double>(b["p_max"], "betting.p_max") : std::nullopt;
        auto d = b["p_delta"] ? p.scalar<double>(b["p_delta"], "betting.p_delta") : std::nullopt;
        if (table && hi && d) c.betting = PayoutTable(std::move(*table), *hi, *d);
        else if (table && !hi && !d) {
          double top = -1e308, bottom = 1e308;
          for (const auto& r : *table) {
            for (double v : r) {
              top = std::max(top, v);
              bottom = std::min(bottom, v);
            }
          }
          c.betting = PayoutTable(std::move(*table), top, top - bottom);
        } else {
          p.issue("betting", "p_max and p_delta must be given together");
        }
      } else if (b["stakes"] && b["rewards"]) {
        auto stakes = p.vector(b["stakes"], "betting.stakes");
        auto rewards = p.matrix(b["rewards"], "betting.rewards");
        if (stakes && rewards) c.betting = PayoutTable::from_stakes(std::move(*stakes), std::move(*rewards));
      } else {
        p.issue("betting", "expected 'profit' or 'stakes' + 'rewards'");
      }
    } catch (const std::exception& e) {
      p.issue("betting", e.what());
    }
  }

  if (!p.issues.empty()) throw ConfigError(std::move(p.issues));
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open " + path.string()});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void ExperimentConfig::validate() const {
  std::vector<std::string> issues;
  auto issue = [&](const std::string& f, const std::string& m) { issues.push_back(f + ": " + m); };
  if (alphabet_size < 2) issue("alphabet", "needs at least 2 symbols");
  if (models.empty()) issue("models", "class must be nonempty");
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (!models[i]) issue("models[" + std::to_string(i) + "]", "null model");
    else if (models[i]->alphabet().size() != alphabet_size) {
      issue("models[" + std::to_string(i) + "]", "alphabet size differs from top-level alphabet");
    }
  }
  if (truth >= models.size()) {
    issue("truth", "index " + std::to_string(truth) + " outside class of size " +
                       std::to_string(models.size()));
  }
  if (horizon < 1) issue("horizon", "must be >= 1");
  if (mode == RunMode::monte_carlo && trials < 2) issue("trials", "monte_carlo needs at least 2 trials");
  if (mode == RunMode::exact && budget == 0) issue("budget", "must be positive");
  if (weight_mode == WeightMode::explicit_vector) {
    if (weights.size() != models.size()) {
      issue("weights", "expected " + std::to_string(models.size()) + " weights, got " +
                           std::to_string(weights.size()));
    } else {
      double sum = 0.0;
      bool positive = true;
      for (double w : weights) {
        positive = positive && w > 0.0;
        sum += w;
      }
      if (!positive) issue("weights", "every weight must be > 0");
      if (std::abs(sum - 1.0) > 1e-12) issue("weights", "weights must sum to 1");
    }
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const auto f = "strategies[" + std::to_string(i) + "]";
    if (!strategies[i].source) issue(f, "null strategy");
    else if (strategies[i].source->alphabet().size() != alphabet_size) {
      issue(f, "alphabet size differs from top-level alphabet");
    }
    if (strategies[i].name == "mu" || strategies[i].name == "xi") {
      issue(f + ".name", "'mu' and 'xi' are reserved scheme names");
    }
  }
  if (loss && loss->outcomes() != alphabet_size) issue("loss.table", "needs one row per symbol");
  if (betting && betting->outcomes() != alphabet_size) {
    issue("betting", "needs one row per symbol");
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

ModelClassPtr ExperimentConfig::build_class() const {
  std::vector<SourcePtr> sources(models.begin(), models.end());
  switch (weight_mode) {
    case WeightMode::uniform:
      return std::make_shared<const ModelClass>(ModelClass::uniform(std::move(sources)));
    case WeightMode::description_length:
      return std::make_shared<const ModelClass>(
          ModelClass::from_log_weights(std::move(sources), description_length_log_weights(models)));
    case WeightMode::explicit_vector:
      return std::make_shared<const ModelClass>(std::move(sources), weights);
  }
  throw ConfigError({"weights: unknown mode"});
}

std::vector<Scheme> ExperimentConfig::schemes() const {
  std::vector<Scheme> out{Scheme::informed(), Scheme::universal()};
  for (const auto& s : strategies) out.push_back(Scheme::custom(s.source, s.name));
  return out;
}

}  // namespace unipred
