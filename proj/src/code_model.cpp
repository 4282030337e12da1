#include "mcpc/code_model.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace mcpc {

ChannelSpec::ChannelSpec(std::vector<std::uint32_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("channel spec needs at least one channel");
  for (auto q : sizes_) {
    if (q < 2) throw std::invalid_argument("channel alphabet sizes must be >= 2");
  }
  ln_sizes_.reserve(sizes_.size());
  for (auto q : sizes_) ln_sizes_.push_back(exact_from_ln(Rational(q)));
}

BigInt ChannelSpec::product() const {
  BigInt p = 1;
  for (auto q : sizes_) p *= q;
  return p;
}

std::uint64_t ChannelSpec::sum() const {
  std::uint64_t s = 0;
  for (auto q : sizes_) s += q;
  return s;
}

bool Word::is_all_epsilon() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Component& c) { return c.empty(); });
}

bool Word::conforms_to(const ChannelSpec& spec) const {
  if (components_.size() != spec.n()) return false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (Symbol s : components_[i]) {
      if (s >= spec[i]) return false;
    }
  }
  return true;
}

LengthTuple length_tuple(const Word& w) {
  LengthTuple lt(w.n());
  for (std::size_t i = 0; i < w.n(); ++i) lt[i] = w[i].size();
  return lt;
}

ExactReal descriptive_length(const LengthTuple& lengths, const ChannelSpec& spec) {
  if (lengths.size() != spec.n()) throw std::invalid_argument("length tuple does not match spec");
  ExactReal total;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] != 0) total += spec.ln_size(i) * Rational(static_cast<unsigned long>(lengths[i]));
  }
  return total;
}

ExactReal descriptive_length(const Word& w, const ChannelSpec& spec) {
  return descriptive_length(length_tuple(w), spec);
}

bool is_prefix_of(const Component& a, const Component& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool prefix_free_pair(const Word& a, const Word& b) {
  for (std::size_t i = 0; i < a.n(); ++i) {
    if (!is_prefix_of(a[i], b[i]) && !is_prefix_of(b[i], a[i])) return true;
  }
  return false;
}

bool extends(const Word& w, const Word& prefix) {
  for (std::size_t i = 0; i < w.n(); ++i) {
    if (!is_prefix_of(prefix[i], w[i])) return false;
  }
  return true;
}

Codebook::Codebook(ChannelSpec spec, std::vector<Word> codewords)
    : spec_(std::move(spec)), codewords_(std::move(codewords)) {
  for (const auto& w : codewords_) {
    if (!w.conforms_to(spec_)) throw std::invalid_argument("codeword does not conform to channel spec");
    if (codewords_.size() > 1 && w.is_all_epsilon()) {
      throw std::invalid_argument("the all-epsilon word is only allowed in a codebook of size 1");
    }
  }
  std::vector<Word> sorted = codewords_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate codeword");
  }
}

bool is_prefix_code_serial(const Codebook& cb) {
  const auto& words = cb.codewords();
  for (std::size_t a = 0; a < words.size(); ++a) {
    for (std::size_t b = a + 1; b < words.size(); ++b) {
      if (!prefix_free_pair(words[a], words[b])) return false;
    }
  }
  return true;
}

bool is_prefix_code(const Codebook& cb) {
  const auto& words = cb.codewords();
  const auto m = static_cast<std::int64_t>(words.size());
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t a = 0; a < m; ++a) {
    if (!ok.load(std::memory_order_relaxed)) continue;
    for (std::int64_t b = a + 1; b < m; ++b) {
      if (!prefix_free_pair(words[a], words[b])) {
        ok.store(false, std::memory_order_relaxed);
        break;
      }
    }
  }
  return ok.load();
}

Rational kraft_sum(const Codebook& cb) {
  Rational total = 0;
  const auto& spec = cb.spec();
  for (const auto& w : cb.codewords()) {
    BigInt den = 1, power;
    for (std::size_t i = 0; i < w.n(); ++i) {
      mpz_ui_pow_ui(power.get_mpz_t(), spec[i], w[i].size());
      den *= power;
    }
    total += make_rational(1, den);
  }
  return total;
}

ProbMultiset::ProbMultiset(std::vector<Rational> probs) : probs_(std::move(probs)) {
  for (auto& p : probs_) {
    p.canonicalize();
    if (p <= 0 || p > 1) throw std::invalid_argument("probabilities must lie in (0, 1]");
  }
}

Rational ProbMultiset::total() const {
  Rational s = 0;
  for (const auto& p : probs_) s += p;
  return s;
}

ExactReal entropy(const ProbMultiset& p) {
  if (!p.is_distribution()) throw std::invalid_argument("entropy: probabilities must sum to 1");
  // Equal probabilities share one factorization.
  std::vector<Rational> sorted = p.values();
  std::sort(sorted.begin(), sorted.end());
  ExactReal h;
  for (std::size_t k = 0; k < sorted.size();) {
    std::size_t run = k;
    while (run < sorted.size() && sorted[run] == sorted[k]) ++run;
    h -= exact_from_ln(sorted[k]) * (sorted[k] * Rational(static_cast<unsigned long>(run - k)));
    k = run;
  }
  return h;
}

ExactReal expected_length(const Codebook& cb, const ProbMultiset& assignment) {
  if (assignment.size() != cb.size()) throw std::invalid_argument("assignment size does not match codebook");
  if (!assignment.is_distribution()) throw std::invalid_argument("assignment must sum to 1");
  // Accumulate per-channel rational weights first: sum_i (sum_j p_j l_ij) ln q_i.
  std::vector<Rational> weight(cb.spec().n(), Rational(0));
  for (std::size_t j = 0; j < cb.size(); ++j) {
    for (std::size_t i = 0; i < cb.spec().n(); ++i) {
      weight[i] += assignment[j] * Rational(static_cast<unsigned long>(cb[j][i].size()));
    }
  }
  ExactReal total;
  for (std::size_t i = 0; i < weight.size(); ++i) total += cb.spec().ln_size(i) * weight[i];
  return total;
}

ExactReal redundancy(const Codebook& cb, const ProbMultiset& assignment) {
  return expected_length(cb, assignment) - entropy(assignment);
}

}  // namespace mcpc
