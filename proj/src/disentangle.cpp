#include "mcpc/disentangle.hpp"

#include <algorithm>
#include <map>

#include "mcpc/search.hpp"
#include "mcpc/selvage.hpp"

namespace mcpc {

ProductSpec make_product_spec(const ChannelSpec& base, const Partition& partition) {
  if (partition.n() != base.n()) throw std::invalid_argument("partition does not match spec");
  std::vector<std::uint32_t> sizes;
  for (const auto& part : partition.parts()) {
    BigInt prod = 1;
    for (auto i : part) prod *= base[i];
    if (!prod.fits_uint_p()) throw std::invalid_argument("part product exceeds 32 bits");
    sizes.push_back(static_cast<std::uint32_t>(prod.get_ui()));
  }
  return ProductSpec{base, partition, ChannelSpec(std::move(sizes))};
}

DisentangleInput make_disentangle_input(ProductSpec spec, std::size_t failing_part, Exponents x) {
  const auto& base = spec.base;
  if (failing_part >= spec.partition.t()) throw std::invalid_argument("failing part out of range");
  if (x.size() != base.n()) throw std::invalid_argument("witness has wrong length");
  const IndexSet& part = spec.partition[failing_part];
  BigInt lhs = 1, power;
  for (std::size_t i = 0; i < base.n(); ++i) {
    if (!x[i]) continue;
    mpz_ui_pow_ui(power.get_mpz_t(), base[i], x[i]);
    lhs *= power;
  }
  if (lhs != complement_product(part, base)) throw std::invalid_argument("witness does not solve the separation equation");
  if (std::none_of(part.begin(), part.end(), [&x](std::size_t i) { return x[i] > 0; })) {
    throw std::invalid_argument("witness is zero on the failing part");
  }
  IndexSet positive;
  for (std::size_t i = 0; i < base.n(); ++i) {
    if (x[i] > 0) positive.push_back(i);
  }
  return DisentangleInput{std::move(spec), failing_part, std::move(x), std::move(positive)};
}

Codebook lift_to_base(const Codebook& cb, const ProductSpec& spec) {
  if (!(cb.spec() == spec.product_sizes)) throw std::invalid_argument("codebook is not over the product sizes");
  const auto owner = spec.partition.part_of();
  std::vector<Word> words;
  for (const auto& w : cb.codewords()) {
    Word lifted = Word::epsilon(spec.base.n());
    for (std::size_t i = 0; i < spec.base.n(); ++i) {
      const Component& c = w[owner[i]];
      if (std::any_of(c.begin(), c.end(), [](Symbol s) { return s > 1; })) {
        throw std::invalid_argument("lift_to_base: component uses a symbol other than 0 or 1");
      }
      lifted[i] = c;
    }
    words.push_back(std::move(lifted));
  }
  return Codebook(spec.base, std::move(words));
}

namespace {

// Every word with component i = fixed[i] followed by free[i] arbitrary symbols,
// in lexicographic order.
std::vector<Word> enumerate_extensions(const ChannelSpec& spec, const Word& fixed,
                                       const std::vector<std::size_t>& free) {
  std::vector<Word> out;
  Word w = fixed;
  auto rec = [&](auto&& self, std::size_t i, std::size_t k) -> void {
    if (i == spec.n()) {
      out.push_back(w);
      return;
    }
    if (k == free[i]) {
      self(self, i + 1, 0);
      return;
    }
    for (Symbol s = 0; s < spec[i]; ++s) {
      w[i].push_back(s);
      self(self, i, k + 1);
      w[i].pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

bool extends_any(const Word& w, const std::vector<Word>& prefixes) {
  return std::any_of(prefixes.begin(), prefixes.end(), [&w](const Word& p) { return extends(w, p); });
}

std::optional<std::size_t> case1_channel(const DisentangleInput& in) {
  for (auto i : in.spec.partition[in.failing_part]) {
    if (in.witness[i] > 0 && in.spec.base[i] > 2) return i;
  }
  return std::nullopt;
}

struct Case2Channels {
  std::size_t i_star;
  std::size_t i_dagger;
  std::size_t r;
};

std::optional<Case2Channels> case2_channels(const DisentangleInput& in) {
  const auto& base = in.spec.base;
  const auto& part = in.spec.partition[in.failing_part];
  std::optional<std::size_t> i_star;
  for (auto i : part) {
    if (in.witness[i] == 0) continue;
    if (base[i] != 2) return std::nullopt;
    if (!i_star) i_star = i;
  }
  if (!i_star) return std::nullopt;
  for (std::size_t i = 0; i < base.n(); ++i) {
    if (std::binary_search(part.begin(), part.end(), i) || in.witness[i] > 0) continue;
    std::uint32_t q = base[i];
    std::size_t r = 0;
    while (q % 2 == 0) {
      q /= 2;
      ++r;
    }
    if (q == 1) return Case2Channels{*i_star, i, r};
  }
  return std::nullopt;
}

std::vector<Word> lifted_core(const ProductSpec& spec) {
  return lift_to_base(selvage_core(spec.product_sizes), spec).codewords();
}

ProbMultiset paired_spa(const Codebook& code, const ProbMultiset& spa) {
  std::vector<ExactReal> lengths;
  for (const auto& w : code.codewords()) lengths.push_back(descriptive_length(w, code.spec()));
  if (lengths.size() != spa.size()) throw std::logic_error("disentangle: code size differs from the assembly");
  std::vector<Rational> probs;
  for (auto k : sorted_assignment(spa, lengths)) probs.push_back(spa[k]);
  return ProbMultiset(std::move(probs));
}

DecodingTree require_tree(const Codebook& cb) {
  auto d = decide_tree_decodable(cb);
  if (auto* tree = std::get_if<DecodingTree>(&d)) return std::move(*tree);
  throw std::logic_error("disentangle: built code is not tree-decodable");
}

void check_t(const ProductSpec& spec) {
  if (spec.partition.t() < 3) throw NoApplicableCase("the product sizes need at least 3 parts");
}

}  // namespace

bool case1_applicable(const DisentangleInput& in) { return case1_channel(in).has_value(); }
bool case2_applicable(const DisentangleInput& in) { return case2_channels(in).has_value(); }

DisentangleOutput disentangle_case1(const DisentangleInput& in) {
  check_t(in.spec);
  const auto i_star_opt = case1_channel(in);
  if (!i_star_opt) throw NoApplicableCase("Case 1 needs a witness position with q > 2 in the failing part");
  const std::size_t i_star = *i_star_opt;
  const ChannelSpec& base = in.spec.base;
  const std::size_t n = base.n(), t = in.spec.partition.t(), js = in.failing_part;
  const std::size_t prev = (js + t - 1) % t;
  const IndexSet& part = in.spec.partition[js];
  auto in_part = [&part](std::size_t i) { return std::binary_search(part.begin(), part.end(), i); };

  std::vector<Word> core = lifted_core(in.spec);
  Word& replaced = core[js];
  replaced = Word::epsilon(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (in.witness[i] > 0) replaced[i].assign(in.witness[i], i == i_star ? 2 : 0);
  }

  // Leaves below each root slot, minus the subtrees under core rows.
  std::vector<Word> rest;
  for (Symbol s = 0; s < base[i_star]; ++s) {
    Word fixed = Word::epsilon(n);
    fixed[i_star].push_back(s);
    std::vector<std::size_t> free(n, 1);
    free[i_star] = 0;
    std::vector<Word> removed;
    if (s == 0) {
      for (std::size_t j = 0; j < t; ++j) {
        if (j != js && j != prev) removed.push_back(core[j]);
      }
    } else if (s == 1) {
      removed.push_back(core[prev]);
    } else if (s == 2) {
      for (std::size_t i = 0; i < n; ++i) {
        free[i] = (i == i_star ? in.witness[i] - 1 : in.witness[i]) + (in_part(i) ? 1 : 0);
      }
      removed.push_back(core[js]);
    }
    for (auto& w : enumerate_extensions(base, fixed, free)) {
      if (!extends_any(w, removed)) rest.push_back(std::move(w));
    }
  }

  std::vector<Word> all = core;
  all.insert(all.end(), rest.begin(), rest.end());
  Codebook code(base, all);

  // Root of class i_star; each slot's sub-codebook is cut recursively.
  DecodingTree tree;
  std::vector<std::int32_t> slots(base[i_star], DecodingTree::kAbsent);
  for (Symbol s = 0; s < base[i_star]; ++s) {
    std::vector<std::size_t> labels;
    std::vector<Word> stripped;
    for (std::size_t k = 0; k < all.size(); ++k) {
      if (all[k][i_star].empty() || all[k][i_star].front() != s) continue;
      Word w = all[k];
      w[i_star].erase(w[i_star].begin());
      labels.push_back(k);
      stripped.push_back(std::move(w));
    }
    if (labels.empty()) continue;
    if (labels.size() == 1) {
      DecodingTree leaf;
      leaf.set_root(leaf.add_leaf(0));
      slots[s] = tree.graft(leaf, labels);
      continue;
    }
    slots[s] = tree.graft(require_tree(Codebook(base, std::move(stripped))), labels);
  }
  tree.set_root(tree.add_internal(i_star, std::move(slots)));

  ProbMultiset spa = selvage_code(in.spec.product_sizes).spa;
  ProbMultiset assignment = paired_spa(code, spa);
  return DisentangleOutput{DisentangleCase::kCase1, js, in.witness, i_star, std::nullopt, std::move(code),
                           std::move(tree), std::move(spa), std::move(assignment)};
}

DisentangleOutput disentangle_case2(const DisentangleInput& in) {
  check_t(in.spec);
  const auto ch = case2_channels(in);
  if (!ch) {
    throw NoApplicableCase(
        "Case 2 needs every witness position of the failing part to have q = 2 and a zero-witness "
        "position outside it whose size is a power of 2");
  }
  const ChannelSpec& base = in.spec.base;
  const std::size_t n = base.n(), t = in.spec.partition.t();
  const std::size_t jd = in.spec.partition.part_of()[ch->i_dagger];
  const std::size_t one_row = (jd + t - 2) % t;

  std::vector<Word> core = lifted_core(in.spec);
  for (std::size_t j = 0; j < t; ++j) {
    if (j == jd) continue;
    core[j][ch->i_star].insert(core[j][ch->i_star].end(), ch->r, j == one_row ? 1 : 0);
    core[j][ch->i_dagger].clear();
  }

  std::vector<std::size_t> free(n, 1);
  free[ch->i_star] = 1 + ch->r;
  free[ch->i_dagger] = 0;
  std::vector<Word> all = core;
  for (auto& w : enumerate_extensions(base, Word::epsilon(n), free)) {
    if (!extends_any(w, core)) all.push_back(std::move(w));
  }
  Codebook code(base, std::move(all));
  DecodingTree tree = require_tree(code);

  ProbMultiset spa = selvage_code(in.spec.product_sizes).spa;
  ProbMultiset assignment = paired_spa(code, spa);
  return DisentangleOutput{DisentangleCase::kCase2, in.failing_part, in.witness, ch->i_star, ch->i_dagger,
                           std::move(code), std::move(tree), std::move(spa), std::move(assignment)};
}

std::optional<DisentangleOutput> disentangle(const ChannelSpec& base, const Partition& partition) {
  ProductSpec spec = make_product_spec(base, partition);
  std::vector<DisentangleInput> inputs;
  for (std::size_t j = 0; j < partition.t(); ++j) {
    for (auto& w : violating_solutions(partition[j], base)) inputs.push_back(make_disentangle_input(spec, j, w.x));
  }
  if (inputs.empty()) return std::nullopt;
  for (const auto& in : inputs) {
    if (case1_applicable(in)) return disentangle_case1(in);
  }
  for (const auto& in : inputs) {
    if (case2_applicable(in)) return disentangle_case2(in);
  }
  throw NoApplicableCase("no failing part and witness meets the premises of Case 1 or Case 2");
}

DisentangleReport verify_disentangle(const DisentangleOutput& out, const ProductSpec& spec) {
  DisentangleReport r;
  const Codebook& code = out.code;
  r.prefix = is_prefix_code(code);
  if (r.prefix) {
    r.tree_decodable = is_tree_decodable(code) && tree_decodes(out.tree, code);
  }
  r.kraft_one = kraft_sum(code) == 1;
  r.zero_redundancy = out.assignment.size() == code.size() && out.assignment.is_distribution() &&
                      redundancy(code, out.assignment).is_zero();
  const BigInt expected = spec.base.product() - BigInt(static_cast<unsigned long>(spec.product_sizes.sum())) +
                          BigInt(static_cast<unsigned long>(spec.partition.t()));
  r.size_formula = BigInt(static_cast<unsigned long>(code.size())) == expected;
  return r;
}

}  // namespace mcpc
