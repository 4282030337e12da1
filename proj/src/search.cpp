#include "mcpc/search.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace mcpc {

std::vector<std::size_t> sorted_assignment(const ProbMultiset& p, const std::vector<ExactReal>& lengths) {
  if (p.size() != lengths.size()) throw std::invalid_argument("sorted_assignment: size mismatch");
  std::vector<std::size_t> by_prob(p.size()), by_len(p.size());
  std::iota(by_prob.begin(), by_prob.end(), 0);
  std::iota(by_len.begin(), by_len.end(), 0);
  std::stable_sort(by_prob.begin(), by_prob.end(), [&p](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  std::stable_sort(by_len.begin(), by_len.end(),
                   [&lengths](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });
  std::vector<std::size_t> pairing(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) pairing[by_len[k]] = by_prob[k];
  return pairing;
}

namespace {

using Clock = std::chrono::steady_clock;
using Cost = std::int64_t;
constexpr std::size_t kMaxPrimes = 64;

Cost add(Cost a, Cost b) {
  Cost r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("search: cost overflow");
  return r;
}

Cost mul(Cost a, Cost b) {
  Cost r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("search: cost overflow");
  return r;
}

void check_input(const ProbMultiset& p) {
  if (p.size() == 0) throw std::invalid_argument("search: empty probability multiset");
  if (!p.is_distribution()) throw std::invalid_argument("search: probabilities must sum to 1");
}

SearchResult finalize(DecodingTree tree, const ProbMultiset& p, const ChannelSpec& spec, bool certified,
                      std::size_t states) {
  auto leaves = tree.leaf_words(spec.n());
  std::sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Word> words;
  std::vector<ExactReal> lengths;
  for (auto& [label, w] : leaves) {
    lengths.push_back(descriptive_length(w, spec));
    words.push_back(std::move(w));
  }
  Codebook cb(spec, std::move(words));
  auto pairing = sorted_assignment(p, lengths);
  std::vector<Rational> probs;
  for (auto k : pairing) probs.push_back(p[k]);
  ProbMultiset assignment(std::move(probs));
  ExactReal expected = expected_length(cb, assignment);
  const bool at_entropy = expected == entropy(p);
  return SearchResult{std::move(tree), std::move(cb), std::move(assignment), std::move(expected), at_entropy,
                      certified, states};
}

// Sub-multisets of p are states: a mixed-radix index whose digit k counts the
// copies of the k-th distinct probability. Costs are scaled by the common
// denominator D and stored as integer exponents over the primes of the sizes.
class SubsetDp {
 public:
  SubsetDp(const ProbMultiset& p, const ChannelSpec& spec) : spec_(spec) {
    std::vector<Rational> sorted = p.values();
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (const auto& v : sorted) {
      if (!values_.empty() && values_.back() == v) {
        ++counts_.back();
      } else {
        values_.push_back(v);
        counts_.push_back(1);
      }
    }
    BigInt states = 1;
    for (auto c : counts_) {
      stride_.push_back(states.get_ui());
      states *= static_cast<unsigned long>(c + 1);
      if (states > BigInt(1UL << 40)) break;
    }
    too_large_ = states > BigInt(1UL << 40);
    state_count_ = too_large_ ? 0 : states.get_ui();

    BigInt d = 1;
    for (const auto& v : values_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
    if (!d.fits_slong_p()) throw std::overflow_error("search: common denominator too large");
    for (const auto& v : values_) weight_of_type_.push_back(BigInt(v.get_num() * (d / v.get_den())).get_si());
    denominator_ = d;

    std::set<std::uint64_t> primes;
    for (auto q : spec.sizes()) {
      for (const auto& [pr, e] : factorize(BigInt(q))) primes.insert(pr);
    }
    primes_.assign(primes.begin(), primes.end());
    if (primes_.size() > kMaxPrimes) throw std::invalid_argument("search: too many distinct primes");
    for (auto q : spec.sizes()) {
      std::vector<Cost> e(primes_.size(), 0);
      for (const auto& [pr, k] : factorize(BigInt(q))) {
        e[static_cast<std::size_t>(std::find(primes_.begin(), primes_.end(), pr) - primes_.begin())] =
            static_cast<Cost>(k);
      }
      ln_size_.push_back(std::move(e));
    }
    qmax_ = *std::max_element(spec.sizes().begin(), spec.sizes().end());
  }

  bool too_large(std::size_t max_states) const { return too_large_ || state_count_ > max_states; }
  std::size_t state_count() const { return state_count_; }

  // Returns false when the deadline passed first.
  bool solve(bool parallel, std::optional<Clock::time_point> deadline) {
    const std::size_t S = state_count_, R = primes_.size();
    size_.assign(S, 0);
    weight_.assign(S, 0);
    first_.assign(S, 0);
    std::vector<std::vector<std::size_t>> levels;
    for (std::size_t s = 0; s < S; ++s) {
      std::size_t size = 0;
      Cost w = 0;
      bool have_first = false;
      for (std::size_t k = 0; k < counts_.size(); ++k) {
        auto dgt = digit(s, k);
        size += dgt;
        w = add(w, mul(static_cast<Cost>(dgt), weight_of_type_[k]));
        if (dgt && !have_first) {
          first_[s] = k;
          have_first = true;
        }
      }
      size_[s] = size;
      weight_[s] = w;
      if (levels.size() <= size) levels.resize(size + 1);
      levels[size].push_back(s);
    }
    opt_.assign(S * R, 0);
    best_class_.assign(S, 0);
    split_.assign((qmax_ + 1) * S * R, 0);
    split_arg_.assign((qmax_ + 1) * S, 0);
    group_.assign((qmax_ + 1) * S * R, 0);
    group_is_opt_.assign((qmax_ + 1) * S, 1);

    std::atomic<bool> expired{false};
    for (std::size_t level = 1; level < levels.size(); ++level) {
      const auto& states = levels[level];
      const auto count = static_cast<std::int64_t>(states.size());
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
      for (std::int64_t k = 0; k < count; ++k) {
        if (expired.load(std::memory_order_relaxed)) continue;
        if (deadline && Clock::now() > *deadline) {
          expired.store(true);
          continue;
        }
        solve_state(states[static_cast<std::size_t>(k)]);
      }
      if (expired.load()) return false;
    }
    return true;
  }

  DecodingTree build_tree() const {
    DecodingTree tree;
    std::size_t next_label = 0;
    tree.set_root(build(state_count_ - 1, tree, next_label));
    return tree;
  }

  ExactReal optimum() const {
    ExactReal v;
    const Cost* root = &opt_[(state_count_ - 1) * primes_.size()];
    for (std::size_t r = 0; r < primes_.size(); ++r) {
      v += ExactReal::ln_prime(primes_[r], make_rational(BigInt(static_cast<long>(root[r])), denominator_));
    }
    return v;
  }

 private:
  std::size_t digit(std::size_t s, std::size_t k) const { return (s / stride_[k]) % (counts_[k] + 1); }

  Cost* split_cost(std::size_t k, std::size_t s) { return &split_[(k * state_count_ + s) * primes_.size()]; }
  Cost* group_cost(std::size_t k, std::size_t s) {
    return k == 1 ? &opt_[s * primes_.size()] : &group_[(k * state_count_ + s) * primes_.size()];
  }

  bool less(const Cost* a, const Cost* b) const {
    std::array<Cost, kMaxPrimes> diff{};
    const std::size_t R = primes_.size();
    for (std::size_t r = 0; r < R; ++r) diff[r] = a[r] - b[r];
    return log_combination_sign(primes_, std::span<const Cost>(diff.data(), R)) < 0;
  }

  void solve_state(std::size_t s) {
    const std::size_t R = primes_.size();
    if (size_[s] == 1) {
      for (std::size_t k = 2; k <= qmax_; ++k) {
        group_is_opt_[k * state_count_ + s] = 1;
        std::fill_n(group_cost(k, s), R, 0);
      }
      return;
    }
    // Splits: t holds at least one copy of the first type present in s.
    std::vector<bool> have(qmax_ + 1, false);
    std::array<Cost, kMaxPrimes> cand{};
    const std::size_t types = counts_.size();
    std::vector<std::size_t> limit(types), t(types, 0);
    for (std::size_t k = 0; k < types; ++k) limit[k] = digit(s, k);
    const std::size_t f = first_[s];
    t[f] = 1;
    std::size_t t_index = stride_[f];
    for (;;) {
      if (t_index != s) {
        const std::size_t rest = s - t_index;
        const Cost* ot = &opt_[t_index * R];
        for (std::size_t k = 2; k <= qmax_; ++k) {
          const Cost* g = group_cost(k - 1, rest);
          for (std::size_t r = 0; r < R; ++r) cand[r] = add(ot[r], g[r]);
          Cost* best = split_cost(k, s);
          if (!have[k] || less(cand.data(), best)) {
            std::copy_n(cand.data(), R, best);
            split_arg_[k * state_count_ + s] = static_cast<std::uint32_t>(t_index);
            have[k] = true;
          }
        }
      }
      // Odometer step over t <= s with t_f >= 1.
      std::size_t k = 0;
      for (; k < types; ++k) {
        if (t[k] < limit[k]) {
          ++t[k];
          t_index += stride_[k];
          break;
        }
        const std::size_t low = (k == f) ? 1 : 0;
        t_index -= (t[k] - low) * stride_[k];
        t[k] = low;
      }
      if (k == types) break;
    }

    Cost* o = &opt_[s * R];
    bool have_opt = false;
    for (std::size_t c = 0; c < spec_.n(); ++c) {
      const Cost* sp = split_cost(spec_[c], s);
      for (std::size_t r = 0; r < R; ++r) cand[r] = add(mul(weight_[s], ln_size_[c][r]), sp[r]);
      if (!have_opt || less(cand.data(), o)) {
        std::copy_n(cand.data(), R, o);
        best_class_[s] = static_cast<std::uint32_t>(c);
        have_opt = true;
      }
    }
    for (std::size_t k = 2; k <= qmax_; ++k) {
      const Cost* sp = split_cost(k, s);
      const bool use_opt = !less(sp, o);
      group_is_opt_[k * state_count_ + s] = use_opt;
      std::copy_n(use_opt ? o : sp, R, group_cost(k, s));
    }
  }

  void gather(std::size_t s, std::size_t k, std::vector<std::size_t>& groups) const {
    if (k == 1 || group_is_opt_[k * state_count_ + s]) {
      groups.push_back(s);
      return;
    }
    split(s, k, groups);
  }

  void split(std::size_t s, std::size_t k, std::vector<std::size_t>& groups) const {
    const std::size_t t = split_arg_[k * state_count_ + s];
    groups.push_back(t);
    gather(s - t, k - 1, groups);
  }

  std::int32_t build(std::size_t s, DecodingTree& tree, std::size_t& next_label) const {
    if (size_[s] == 1) return tree.add_leaf(next_label++);
    const std::size_t c = best_class_[s];
    std::vector<std::size_t> groups;
    split(s, spec_[c], groups);
    std::vector<std::int32_t> slots(spec_[c], DecodingTree::kAbsent);
    for (std::size_t g = 0; g < groups.size(); ++g) slots[g] = build(groups[g], tree, next_label);
    return tree.add_internal(c, std::move(slots));
  }

  const ChannelSpec& spec_;
  std::vector<Rational> values_;  // distinct, descending
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> stride_;
  std::size_t state_count_ = 0;
  bool too_large_ = false;
  BigInt denominator_;
  std::vector<Cost> weight_of_type_;
  std::vector<std::uint64_t> primes_;
  std::vector<std::vector<Cost>> ln_size_;
  std::size_t qmax_ = 2;

  std::vector<std::size_t> size_;
  std::vector<Cost> weight_;
  std::vector<std::size_t> first_;
  std::vector<Cost> opt_;
  std::vector<std::uint32_t> best_class_;
  std::vector<Cost> split_;  // best split into 2..k groups, per k
  std::vector<std::uint32_t> split_arg_;
  std::vector<Cost> group_;  // best split into 1..k groups, per k
  std::vector<char> group_is_opt_;
};

SearchResult run_search(const ProbMultiset& p, const ChannelSpec& spec, const SearchOptions& options,
                        bool parallel) {
  check_input(p);
  std::optional<Clock::time_point> deadline;
  if (options.budget) deadline = Clock::now() + *options.budget;
  SubsetDp dp(p, spec);
  if (dp.too_large(options.max_states)) return greedy_tree_code(p, spec);
  if (!dp.solve(parallel, deadline)) return greedy_tree_code(p, spec);
  SearchResult r = finalize(dp.build_tree(), p, spec, true, dp.state_count());
  if (r.expected != dp.optimum()) throw std::logic_error("search: reconstructed tree misses the optimum");
  return r;
}

DecodingTree huffman_on_channel(const ProbMultiset& p, std::size_t channel, const ChannelSpec& spec) {
  struct Item {
    Rational weight;
    std::size_t order;
    std::int32_t node;
  };
  auto later = [](const Item& a, const Item& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.order > b.order;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(later)> heap(later);
  DecodingTree tree;
  std::size_t order = 0;
  const std::size_t q = spec[channel], m = p.size();
  const std::size_t dummies = (q - 1 - (m - 1) % (q - 1)) % (q - 1);
  for (std::size_t d = 0; d < dummies; ++d) heap.push({Rational(0), order++, DecodingTree::kAbsent});
  for (std::size_t j = 0; j < m; ++j) heap.push({p[j], order++, tree.add_leaf(j)});
  while (heap.size() > 1) {
    Rational w = 0;
    std::vector<std::int32_t> slots;
    for (std::size_t k = 0; k < q; ++k) {
      w += heap.top().weight;
      slots.push_back(heap.top().node);
      heap.pop();
    }
    heap.push({w, order++, tree.add_internal(channel, std::move(slots))});
  }
  tree.set_root(heap.top().node);
  return tree;
}

}  // namespace

SearchResult greedy_tree_code(const ProbMultiset& p, const ChannelSpec& spec) {
  check_input(p);
  std::optional<SearchResult> best;
  for (std::size_t c = 0; c < spec.n(); ++c) {
    SearchResult r = finalize(huffman_on_channel(p, c, spec), p, spec, false, 0);
    if (!best || r.expected < best->expected) best = std::move(r);
  }
  return std::move(*best);
}

SearchResult optimal_tree_code(const ProbMultiset& p, const ChannelSpec& spec, const SearchOptions& options) {
  return run_search(p, spec, options, true);
}

SearchResult optimal_tree_code_serial(const ProbMultiset& p, const ChannelSpec& spec,
                                      const SearchOptions& options) {
  return run_search(p, spec, options, false);
}

}  // namespace mcpc
