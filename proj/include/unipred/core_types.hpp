#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "unipred/rng.hpp"

namespace unipred {

using Symbol = std::uint32_t;

// A finite alphabet {0, ..., size-1}. Labels are a display concern.
class Alphabet {
 public:
  explicit Alphabet(std::size_t size);

  std::size_t size() const { return size_; }
  bool contains(Symbol s) const { return s < size_; }
  void check(Symbol s) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
};

// x_1..x_n over a fixed alphabet.
class Sequence {
 public:
  explicit Sequence(Alphabet alphabet) : alphabet_(alphabet) {}
  Sequence(Alphabet alphabet, std::vector<Symbol> symbols);

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const Symbol> symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  void push_back(Symbol s);
  void pop_back() { symbols_.pop_back(); }

  // Digits for alphabets up to 10 symbols, dot-separated indices beyond.
  std::string to_string() const;

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

// A distribution over infinite sequences, exposed through its next-symbol
// conditionals rho(x_<k -> x_k). Implementations are immutable and may be
// shared across threads.
class Source {
 public:
  virtual ~Source() = default;

  virtual Alphabet alphabet() const = 0;

  // Writes rho(prefix -> a) for every a into out (out.size() == alphabet size).
  // The prefix is assumed valid; the public free functions validate.
  virtual void conditionals(std::span<const Symbol> prefix, std::span<double> out) const = 0;

  virtual std::string describe() const = 0;
};

using SourcePtr = std::shared_ptr<const Source>;

enum class FamilyTag : std::uint8_t { iid = 0, markov = 1, periodic = 2 };

inline constexpr std::size_t family_count = 3;

// The concrete model families used to populate a class. Each knows how many
// bits its serialized parameters take (the description-length prior).
class ModelFamily : public Source {
 public:
  virtual FamilyTag tag() const = 0;
  virtual std::size_t description_length_bits() const = 0;
};

using ModelPtr = std::shared_ptr<const ModelFamily>;

class IidCategorical final : public ModelFamily {
 public:
  explicit IidCategorical(std::vector<double> probabilities);

  Alphabet alphabet() const override { return alphabet_; }
  void conditionals(std::span<const Symbol> prefix, std::span<double> out) const override;
  std::string describe() const override;
  FamilyTag tag() const override { return FamilyTag::iid; }
  std::size_t description_length_bits() const override;

  std::span<const double> probabilities() const { return probabilities_; }

 private:
  Alphabet alphabet_;
  std::vector<double> probabilities_;
};

// Conditions on the last `order` symbols. Until `order` symbols have been
// seen, the next symbol is drawn i.i.d. from the initial distribution.
class MarkovOrderM final : public ModelFamily {
 public:
  // transitions: N^order rows of length N, row index = last `order` symbols
  // read as a base-N number with the oldest symbol most significant.
  MarkovOrderM(std::size_t order, std::vector<std::vector<double>> transitions,
               std::vector<double> initial);

  Alphabet alphabet() const override { return alphabet_; }
  void conditionals(std::span<const Symbol> prefix, std::span<double> out) const override;
  std::string describe() const override;
  FamilyTag tag() const override { return FamilyTag::markov; }
  std::size_t description_length_bits() const override;

  std::size_t order() const { return order_; }
  std::span<const double> row(std::size_t context) const;
  std::span<const double> initial() const { return initial_; }

 private:
  Alphabet alphabet_;
  std::size_t order_;
  std::size_t rows_;
  std::vector<double> table_;  // rows_ x N, row-major
  std::vector<double> initial_;
};

// Emits pattern[0], pattern[1], ... repeating forever with probability 1.
class DeterministicPeriodic final : public ModelFamily {
 public:
  explicit DeterministicPeriodic(Sequence pattern);

  Alphabet alphabet() const override { return pattern_.alphabet(); }
  void conditionals(std::span<const Symbol> prefix, std::span<double> out) const override;
  std::string describe() const override;
  FamilyTag tag() const override { return FamilyTag::periodic; }
  std::size_t description_length_bits() const override;

  const Sequence& pattern() const { return pattern_; }
  Symbol symbol_at(std::size_t position) const { return pattern_[position % pattern_.size()]; }

 private:
  Sequence pattern_;
};

// Validates that v is a probability vector of length n (entries >= 0, sum 1).
void check_probability_vector(std::span<const double> v, std::size_t n, double tolerance,
                              const char* what);

double conditional(const Source& source, const Sequence& prefix, Symbol next);
std::vector<double> conditionals(const Source& source, const Sequence& prefix);

// rho(x_1:n) as the product of conditionals; joint of the empty sequence is 1.
double joint(const Source& source, const Sequence& x);
// ln rho(x_1:n); -inf when some conditional is zero.
double log_joint(const Source& source, const Sequence& x);

// Draws x_1..x_n sequentially from the source's conditionals.
Sequence sample(const Source& source, std::size_t n, Rng& rng);

// Inverse-CDF draw from a probability vector using one uniform variate.
Symbol draw(std::span<const double> probabilities, Rng& rng);

}  // namespace unipred
