#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "mcpc/exactnum.hpp"

namespace mcpc {

using Symbol = std::uint32_t;
/// One channel's part of a word; empty means epsilon.
using Component = std::vector<Symbol>;
/// Per-channel symbol counts of a word.
using LengthTuple = std::vector<std::size_t>;

/// The channel alphabet sizes (q_0, ..., q_{n-1}); n >= 1 and every q_i >= 2.
class ChannelSpec {
 public:
  explicit ChannelSpec(std::vector<std::uint32_t> sizes);

  std::size_t n() const { return sizes_.size(); }
  std::uint32_t operator[](std::size_t i) const { return sizes_[i]; }
  const std::vector<std::uint32_t>& sizes() const { return sizes_; }

  BigInt product() const;
  std::uint64_t sum() const;
  /// ln(q_i) as an exact value.
  const ExactReal& ln_size(std::size_t i) const { return ln_sizes_[i]; }

  friend bool operator==(const ChannelSpec& a, const ChannelSpec& b) { return a.sizes_ == b.sizes_; }

 private:
  std::vector<std::uint32_t> sizes_;
  std::vector<ExactReal> ln_sizes_;
};

/// An n-tuple of per-channel symbol strings.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Component> components) : components_(std::move(components)) {}

  /// The all-epsilon word with n components.
  static Word epsilon(std::size_t n) { return Word(std::vector<Component>(n)); }

  std::size_t n() const { return components_.size(); }
  const Component& operator[](std::size_t i) const { return components_[i]; }
  Component& operator[](std::size_t i) { return components_[i]; }
  const std::vector<Component>& components() const { return components_; }

  bool is_all_epsilon() const;
  bool conforms_to(const ChannelSpec& spec) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Component> components_;
};

LengthTuple length_tuple(const Word& w);
/// sum_i l_i ln q_i
ExactReal descriptive_length(const LengthTuple& lengths, const ChannelSpec& spec);
ExactReal descriptive_length(const Word& w, const ChannelSpec& spec);

/// True iff `a` is a (not necessarily proper) prefix of `b`.
bool is_prefix_of(const Component& a, const Component& b);
/// True iff some channel carries two components neither of which prefixes the other.
bool prefix_free_pair(const Word& a, const Word& b);
/// True iff every component of `prefix` is a prefix of the matching component of `w`.
bool extends(const Word& w, const Word& prefix);

/// An ordered list of distinct codewords over one channel spec. The all-epsilon
/// word is only admitted in a codebook of size 1.
class Codebook {
 public:
  Codebook(ChannelSpec spec, std::vector<Word> codewords);

  const ChannelSpec& spec() const { return spec_; }
  const std::vector<Word>& codewords() const { return codewords_; }
  std::size_t size() const { return codewords_.size(); }
  const Word& operator[](std::size_t j) const { return codewords_[j]; }

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  ChannelSpec spec_;
  std::vector<Word> codewords_;
};

/// Pairwise prefix-freeness check, OpenMP-parallel over rows.
bool is_prefix_code(const Codebook& cb);
/// Serial reference for is_prefix_code.
bool is_prefix_code_serial(const Codebook& cb);

/// sum_j prod_i q_i^{-l_ij}
Rational kraft_sum(const Codebook& cb);

/// A multiset of probabilities, each in (0, 1].
class ProbMultiset {
 public:
  ProbMultiset() = default;
  explicit ProbMultiset(std::vector<Rational> probs);

  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](std::size_t j) const { return probs_[j]; }
  const std::vector<Rational>& values() const { return probs_; }
  Rational total() const;
  bool is_distribution() const { return total() == 1; }

  friend bool operator==(const ProbMultiset&, const ProbMultiset&) = default;

 private:
  std::vector<Rational> probs_;
};

/// -sum p ln p in nats. Throws std::invalid_argument unless the total is exactly 1.
ExactReal entropy(const ProbMultiset& p);
/// sum_j p_j |c_j| where assignment[j] is the probability of codeword j.
ExactReal expected_length(const Codebook& cb, const ProbMultiset& assignment);
/// expected_length - entropy.
ExactReal redundancy(const Codebook& cb, const ProbMultiset& assignment);

}  // namespace mcpc
