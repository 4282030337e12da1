#include "oracles.hpp"

#include <mpfr.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>

namespace oracle {

namespace {

constexpr mpfr_prec_t kBits = 700;  // > 200 decimal digits

struct Mpfr {
  mpfr_t v;
  Mpfr() { mpfr_init2(v, kBits); mpfr_set_zero(v, 1); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

void evaluate(const ExactReal& a, Mpfr& out) {
  mpfr_set_zero(out.v, 1);
  Mpfr term, lnp;
  for (const auto& [p, c] : a.terms()) {
    mpfr_set_ui(lnp.v, p, MPFR_RNDN);
    mpfr_log(lnp.v, lnp.v, MPFR_RNDN);
    mpfr_mul_q(term.v, lnp.v, c.get_mpq_t(), MPFR_RNDN);
    mpfr_add(out.v, out.v, term.v, MPFR_RNDN);
  }
}

}  // namespace

int mpfr_sign_of_difference(const ExactReal& a, const ExactReal& b) {
  Mpfr x, y, tol;
  evaluate(a, x);
  evaluate(b, y);
  mpfr_sub(x.v, x.v, y.v, MPFR_RNDN);
  mpfr_set_str(tol.v, "1e-50", 10, MPFR_RNDN);
  Mpfr absx;
  mpfr_abs(absx.v, x.v, MPFR_RNDN);
  if (mpfr_cmp(absx.v, tol.v) < 0) return 0;
  return mpfr_sgn(x.v);
}

std::string mpfr_ln_decimal(const Rational& x, int digits) {
  Mpfr v;
  mpfr_set_q(v.v, x.get_mpq_t(), MPFR_RNDN);
  mpfr_log(v.v, v.v, MPFR_RNDN);
  std::vector<char> buf(128 + static_cast<std::size_t>(digits));
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rf", digits, v.v);
  return std::string(buf.data());
}

Codebook random_codebook(std::mt19937_64& rng, std::size_t max_channels, std::uint32_t max_q, std::size_t max_len,
                         std::size_t max_words) {
  std::uniform_int_distribution<std::size_t> nd(1, max_channels), ld(0, max_len), md(0, max_words);
  std::uniform_int_distribution<std::uint32_t> qd(2, max_q);
  const std::size_t n = nd(rng);
  std::vector<std::uint32_t> sizes(n);
  for (auto& q : sizes) q = qd(rng);
  ChannelSpec spec(sizes);
  const std::size_t m = md(rng);
  std::set<Word> words;
  for (std::size_t tries = 0; words.size() < m && tries < 10 * m + 10; ++tries) {
    Word w = Word::epsilon(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto len = ld(rng);
      std::uniform_int_distribution<std::uint32_t> sd(0, sizes[i] - 1);
      for (std::size_t k = 0; k < len; ++k) w[i].push_back(sd(rng));
    }
    if (w.is_all_epsilon()) continue;
    words.insert(std::move(w));
  }
  std::vector<Word> list(words.begin(), words.end());
  std::shuffle(list.begin(), list.end(), rng);
  return Codebook(spec, std::move(list));
}

bool classic_prefix_free(const std::vector<std::vector<std::uint32_t>>& strings) {
  for (std::size_t a = 0; a < strings.size(); ++a) {
    for (std::size_t b = 0; b < strings.size(); ++b) {
      if (a == b) continue;
      const auto& x = strings[a];
      const auto& y = strings[b];
      if (x.size() <= y.size() && std::equal(x.begin(), x.end(), y.begin())) return false;
    }
  }
  return true;
}

ProbMultiset random_distribution(std::mt19937_64& rng, std::size_t m, std::uint64_t total) {
  // Stars and bars: m-1 distinct cut points in [1, total-1].
  std::vector<std::uint64_t> cuts(total - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(m - 1);
  cuts.push_back(0);
  cuts.push_back(total);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> probs;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    probs.push_back(mcpc::make_rational(BigInt(static_cast<unsigned long>(cuts[k + 1] - cuts[k])),
                                        BigInt(static_cast<unsigned long>(total))));
  }
  return ProbMultiset(std::move(probs));
}

namespace {

using Tuple = std::vector<std::size_t>;
using LeafSet = std::vector<Tuple>;  // sorted

// Every multiset of leaf length tuples realized by some decoding tree with m leaves.
const std::set<LeafSet>& leaf_sets(std::size_t m, const ChannelSpec& spec, std::map<std::size_t, std::set<LeafSet>>& memo) {
  if (auto it = memo.find(m); it != memo.end()) return it->second;
  std::set<LeafSet> out;
  if (m == 1) {
    out.insert(LeafSet{Tuple(spec.n(), 0)});
  } else {
    for (std::size_t c = 0; c < spec.n(); ++c) {
      // Ordered compositions of m into k parts, 2 <= k <= q_c, one part per occupied slot.
      std::vector<std::size_t> parts;
      std::function<void(std::size_t)> compose = [&](std::size_t left) {
        if (left == 0) {
          if (parts.size() < 2) return;
          std::vector<LeafSet> acc{LeafSet{}};
          for (auto part : parts) {
            std::vector<LeafSet> next;
            for (const auto& child : leaf_sets(part, spec, memo)) {
              for (const auto& base : acc) {
                LeafSet merged = base;
                for (auto t : child) {
                  ++t[c];
                  merged.push_back(t);
                }
                next.push_back(std::move(merged));
              }
            }
            acc = std::move(next);
          }
          for (auto& s : acc) {
            std::sort(s.begin(), s.end());
            out.insert(std::move(s));
          }
          return;
        }
        if (parts.size() == spec[c]) return;
        for (std::size_t k = 1; k <= left; ++k) {
          parts.push_back(k);
          compose(left - k);
          parts.pop_back();
        }
      };
      compose(m);
    }
  }
  return memo.emplace(m, std::move(out)).first->second;
}

}  // namespace

ExactReal brute_force_optimum(const ProbMultiset& p, const ChannelSpec& spec) {
  const std::size_t m = p.size();
  std::map<std::size_t, std::set<LeafSet>> memo;
  // Scale probabilities to integers over a common denominator.
  BigInt den = 1;
  for (const auto& v : p.values()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  std::vector<long> w;
  for (const auto& v : p.values()) w.push_back(BigInt(v.get_num() * (den / v.get_den())).get_si());

  std::set<std::vector<long>> weight_vectors;  // per-channel sum of w_j * l_j
  for (const auto& leaves : leaf_sets(m, spec, memo)) {
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<long> acc(spec.n(), 0);
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t c = 0; c < spec.n(); ++c) acc[c] += w[perm[j]] * static_cast<long>(leaves[j][c]);
      }
      weight_vectors.insert(std::move(acc));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::optional<ExactReal> best;
  for (const auto& acc : weight_vectors) {
    ExactReal v;
    for (std::size_t c = 0; c < spec.n(); ++c) {
      v += mcpc::exact_from_ln(Rational(spec[c])) * mcpc::make_rational(BigInt(acc[c]), den);
    }
    if (!best || v < *best) best = v;
  }
  return *best;
}

ExactReal huffman_expected(const ProbMultiset& p, std::uint32_t q) {
  std::priority_queue<Rational, std::vector<Rational>, std::greater<>> heap;
  for (const auto& v : p.values()) heap.push(v);
  while ((heap.size() - 1) % (q - 1) != 0) heap.push(Rational(0));
  Rational internal = 0;
  while (heap.size() > 1) {
    Rational sum = 0;
    for (std::uint32_t k = 0; k < q; ++k) {
      sum += heap.top();
      heap.pop();
    }
    internal += sum;
    heap.push(sum);
  }
  return mcpc::exact_from_ln(Rational(q)) * internal;
}

std::uint64_t selvage_unit_count_by_rule(const ChannelSpec& spec) {
  const std::size_t n = spec.n();
  std::uint64_t total = 1;
  for (auto q : spec.sizes()) total *= q;
  std::uint64_t count = 0;
  std::vector<std::uint32_t> s(n, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<std::uint32_t>(rest % spec[i]);
      rest /= spec[i];
    }
    bool clash = false;
    for (std::size_t j = 0; j < n && !clash; ++j) {
      bool all = s[(j + 1) % n] == 1;
      for (std::size_t i = 0; i < n && all; ++i) {
        if (i != j && i != (j + 1) % n && s[i] != 0) all = false;
      }
      clash = all;
    }
    if (!clash) ++count;
  }
  return count;
}

std::vector<std::vector<std::uint64_t>> naive_solutions(const ChannelSpec& spec, std::uint64_t rhs) {
  std::vector<std::uint64_t> cap(spec.n(), 0);
  for (std::size_t i = 0; i < spec.n(); ++i) {
    std::uint64_t v = 1;
    while (v <= rhs / spec[i]) {
      v *= spec[i];
      ++cap[i];
    }
  }
  std::vector<std::vector<std::uint64_t>> out;
  std::vector<std::uint64_t> x(spec.n(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == spec.n()) {
      BigInt prod = 1;
      for (std::size_t k = 0; k < spec.n(); ++k) {
        for (std::uint64_t e = 0; e < x[k]; ++e) prod *= spec[k];
      }
      if (prod == BigInt(static_cast<unsigned long>(rhs))) out.push_back(x);
      return;
    }
    for (std::uint64_t v = 0; v <= cap[i]; ++v) {
      x[i] = v;
      rec(i + 1);
    }
    x[i] = 0;
  };
  rec(0);
  return out;
}

}  // namespace oracle
