#include "unipred/core_types.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "unipred/errors.hpp"
#include "unipred/tolerances.hpp"

namespace unipred {

namespace {

constexpr std::size_t real_parameter_bits = 32;

std::size_t tag_bits() { return std::bit_width(family_count - 1); }

// Bits to write a nonnegative integer in plain binary.
std::size_t integer_bits(std::size_t v) { return std::bit_width(v); }

// Bits to write one symbol of an N-ary alphabet.
std::size_t symbol_bits(std::size_t n) { return std::bit_width(n - 1); }

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

void write_vector(std::ostream& os, std::span<const double> v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
}

}  // namespace

Alphabet::Alphabet(std::size_t size) : size_(size) {
  if (size < 2) throw InputError("alphabet needs at least 2 symbols, got " + std::to_string(size));
}

void Alphabet::check(Symbol s) const {
  if (!contains(s)) {
    throw InputError("symbol " + std::to_string(s) + " out of range for alphabet of size " +
                     std::to_string(size_));
  }
}

Sequence::Sequence(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  for (Symbol s : symbols_) alphabet_.check(s);
}

void Sequence::push_back(Symbol s) {
  alphabet_.check(s);
  symbols_.push_back(s);
}

std::string Sequence::to_string() const {
  std::string out;
  const bool digits = alphabet_.size() <= 10;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!digits && i) out += '.';
    out += std::to_string(symbols_[i]);
  }
  return out;
}

void check_probability_vector(std::span<const double> v, std::size_t n, double tolerance,
                              const char* what) {
  if (v.size() != n) {
    throw InputError(std::string(what) + ": expected " + std::to_string(n) + " entries, got " +
                     std::to_string(v.size()));
  }
  double sum = 0.0;
  for (double p : v) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + ": entry outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": entries sum to " << sum << ", not 1";
    throw InputError(os.str());
  }
}

// --- IidCategorical -------------------------------------------------------

IidCategorical::IidCategorical(std::vector<double> probabilities)
    : alphabet_(probabilities.size()), probabilities_(std::move(probabilities)) {
  check_probability_vector(probabilities_, alphabet_.size(), tolerances.normalization,
                           "iid probabilities");
}

void IidCategorical::conditionals(std::span<const Symbol>, std::span<double> out) const {
  std::copy(probabilities_.begin(), probabilities_.end(), out.begin());
}

std::string IidCategorical::describe() const {
  std::ostringstream os;
  os << "iid";
  write_vector(os, probabilities_);
  return os.str();
}

std::size_t IidCategorical::description_length_bits() const {
  return tag_bits() + real_parameter_bits * probabilities_.size();
}

// --- MarkovOrderM ---------------------------------------------------------

MarkovOrderM::MarkovOrderM(std::size_t order, std::vector<std::vector<double>> transitions,
                           std::vector<double> initial)
    : alphabet_(initial.size()), order_(order), rows_(0), initial_(std::move(initial)) {
  if (order_ < 1) throw InputError("markov order must be >= 1");
  const std::size_t n = alphabet_.size();
  rows_ = ipow(n, order_);
  if (transitions.size() != rows_) {
    throw InputError("markov transitions: expected " + std::to_string(rows_) + " rows, got " +
                     std::to_string(transitions.size()));
  }
  check_probability_vector(initial_, n, tolerances.normalization, "markov initial");
  table_.reserve(rows_ * n);
  for (const auto& row : transitions) {
    check_probability_vector(row, n, tolerances.normalization, "markov transition row");
    table_.insert(table_.end(), row.begin(), row.end());
  }
}

std::span<const double> MarkovOrderM::row(std::size_t context) const {
  const std::size_t n = alphabet_.size();
  return std::span<const double>(table_).subspan(context * n, n);
}

void MarkovOrderM::conditionals(std::span<const Symbol> prefix, std::span<double> out) const {
  if (prefix.size() < order_) {
    std::copy(initial_.begin(), initial_.end(), out.begin());
    return;
  }
  const std::size_t n = alphabet_.size();
  std::size_t context = 0;
  for (std::size_t i = prefix.size() - order_; i < prefix.size(); ++i) {
    context = context * n + prefix[i];
  }
  auto r = row(context);
  std::copy(r.begin(), r.end(), out.begin());
}

std::string MarkovOrderM::describe() const {
  std::ostringstream os;
  os << "markov" << order_ << "[";
  for (std::size_t c = 0; c < rows_; ++c) {
    if (c) os << ',';
    write_vector(os, row(c));
  }
  os << "]init";
  write_vector(os, initial_);
  return os.str();
}

std::size_t MarkovOrderM::description_length_bits() const {
  return tag_bits() + integer_bits(order_) + real_parameter_bits * (table_.size() + initial_.size());
}

// --- DeterministicPeriodic ------------------------------------------------

DeterministicPeriodic::DeterministicPeriodic(Sequence pattern) : pattern_(std::move(pattern)) {
  if (pattern_.empty()) throw InputError("periodic pattern must be nonempty");
}

void DeterministicPeriodic::conditionals(std::span<const Symbol> prefix,
                                         std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  out[symbol_at(prefix.size())] = 1.0;
}

std::string DeterministicPeriodic::describe() const {
  return "periodic(" + pattern_.to_string() + ")";
}

std::size_t DeterministicPeriodic::description_length_bits() const {
  return tag_bits() + integer_bits(pattern_.size()) +
         pattern_.size() * symbol_bits(pattern_.alphabet().size());
}

// --- free functions -------------------------------------------------------

namespace {

void check_prefix(const Source& source, const Sequence& prefix) {
  if (!(prefix.alphabet() == source.alphabet())) {
    throw InputError("sequence alphabet does not match source alphabet");
  }
}

}  // namespace

double conditional(const Source& source, const Sequence& prefix, Symbol next) {
  check_prefix(source, prefix);
  source.alphabet().check(next);
  std::vector<double> buf(source.alphabet().size());
  source.conditionals(prefix.symbols(), buf);
  return buf[next];
}

std::vector<double> conditionals(const Source& source, const Sequence& prefix) {
  check_prefix(source, prefix);
  std::vector<double> buf(source.alphabet().size());
  source.conditionals(prefix.symbols(), buf);
  return buf;
}

double joint(const Source& source, const Sequence& x) {
  check_prefix(source, x);
  std::vector<double> buf(source.alphabet().size());
  auto symbols = x.symbols();
  double p = 1.0;
  for (std::size_t k = 0; k < symbols.size() && p > 0.0; ++k) {
    source.conditionals(symbols.first(k), buf);
    p *= buf[symbols[k]];
  }
  return p;
}

double log_joint(const Source& source, const Sequence& x) {
  check_prefix(source, x);
  std::vector<double> buf(source.alphabet().size());
  auto symbols = x.symbols();
  double lp = 0.0;
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    source.conditionals(symbols.first(k), buf);
    lp += std::log(buf[symbols[k]]);
    if (std::isinf(lp)) break;
  }
  return lp;
}

Symbol draw(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  Symbol last_positive = 0;
  for (std::size_t a = 0; a < probabilities.size(); ++a) {
    if (probabilities[a] <= 0.0) continue;
    last_positive = static_cast<Symbol>(a);
    cumulative += probabilities[a];
    if (u < cumulative) return last_positive;
  }
  // u landed in the rounding gap above the accumulated mass.
  return last_positive;
}

Sequence sample(const Source& source, std::size_t n, Rng& rng) {
  std::vector<Symbol> symbols;
  symbols.reserve(n);
  std::vector<double> buf(source.alphabet().size());
  for (std::size_t k = 0; k < n; ++k) {
    source.conditionals(symbols, buf);
    symbols.push_back(draw(buf, rng));
  }
  return Sequence(source.alphabet(), std::move(symbols));
}

}  // namespace unipred
