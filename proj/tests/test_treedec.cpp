#include <gtest/gtest.h>

#include <random>

#include "mcpc/io.hpp"
#include "mcpc/treedec.hpp"
#include "oracles.hpp"

using namespace mcpc;

namespace {

Codebook load(const std::string& name) { return parse_codebook(read_file(std::string(MCPC_TEST_DATA) + "/" + name)); }

Word w(std::initializer_list<Component> parts) { return Word(std::vector<Component>(parts)); }

const NotDecodable& failure(const TreeDecision& d) {
  static const NotDecodable none{};
  const auto* f = std::get_if<NotDecodable>(&d);
  EXPECT_NE(f, nullptr);
  return f ? *f : none;
}

}  // namespace

TEST(TreeDec, TwoChannelCodeHasTree) {
  const Codebook cb = load("two_channel.cb");
  const TreeDecision d = decide_tree_decodable(cb);
  ASSERT_TRUE(std::holds_alternative<DecodingTree>(d));
  const auto& tree = std::get<DecodingTree>(d);
  EXPECT_TRUE(tree_decodes(tree, cb));
  EXPECT_EQ(tree.to_sexpr(), "(0 L0 (1 L1 (0 _ L2)))");
  EXPECT_EQ(tree.leaf_count(), 3u);
}

TEST(TreeDec, CyclicCoreIsInterweave) {
  const Codebook cb = load("cyclic_core.cb");
  EXPECT_TRUE(is_prefix_code(cb));
  EXPECT_TRUE(epsilon_blocked(cb));
  const TreeDecision d = decide_tree_decodable(cb);
  const auto& f = failure(d);
  EXPECT_EQ(f.codeword_indices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(f.witness.words, cb.codewords());
}

TEST(TreeDec, DoubleEpsilonMatrixAndThreeRowRemainder) {
  const Codebook cb = load("double_eps.cb");
  EXPECT_TRUE(is_prefix_code(cb));
  EXPECT_FALSE(is_tree_decodable(cb));
  const auto eps = epsilon_locating(cb);
  for (const auto& rows : eps) EXPECT_EQ(rows.size(), 2u);
  // Drop the second and fourth rows; still no decoding tree.
  const Codebook three(cb.spec(), {cb[0], cb[2], cb[4]});
  EXPECT_TRUE(is_prefix_code(three));
  EXPECT_FALSE(is_tree_decodable(three));
  const auto eps3 = epsilon_locating(three);
  EXPECT_EQ(eps3[0].size(), 2u);
}

TEST(TreeDec, TrimStripsPrefixAndDummyChannel) {
  const Codebook cb = load("trim_to_core.cb");
  const TrimResult t = trim(cb);
  const std::vector<Word> expected{w({{}, {1}, {0}}), w({{0}, {}, {1}}), w({{1}, {0}, {}})};
  EXPECT_EQ(t.words, expected);
  EXPECT_EQ(t.removed_prefix, w({{1}, {0}, {1}, {0}}));
  EXPECT_EQ(t.removed_channels, (std::vector<std::size_t>{3}));
  EXPECT_EQ(t.kept_channels, (std::vector<std::size_t>{0, 1, 2}));
  const TreeDecision d = decide_tree_decodable(cb);
  const auto& f = failure(d);
  EXPECT_EQ(f.witness.words, expected);
}

TEST(TreeDec, TrimOfTrimmedCoreIsIdentity) {
  const Codebook cb = load("cyclic_core.cb");
  const TrimResult t = trim(cb);
  EXPECT_EQ(t.words, cb.codewords());
  EXPECT_EQ(t.removed_prefix, Word::epsilon(3));
  EXPECT_TRUE(t.removed_channels.empty());
  EXPECT_EQ(t.codebook(cb.spec()), cb);
}

TEST(TreeDec, RejectsNonPrefixInput) {
  EXPECT_THROW(decide_tree_decodable(load("not_prefix.cb")), std::invalid_argument);
}

TEST(TreeDec, SexprRoundTripAndValidation) {
  const ChannelSpec spec({2, 2});
  const DecodingTree t = DecodingTree::parse("(0 L0 (1 L1 (0 _ L2)))");
  EXPECT_EQ(t.to_sexpr(), "(0 L0 (1 L1 (0 _ L2)))");
  EXPECT_NO_THROW(t.validate(spec));
  EXPECT_THROW(DecodingTree::parse("(0 L0").validate(spec), std::invalid_argument);
  EXPECT_THROW(DecodingTree::parse("(0 L0 L1 L2)").validate(spec), std::invalid_argument);
  EXPECT_THROW(DecodingTree::parse("(2 L0 L1)").validate(spec), std::invalid_argument);
  EXPECT_THROW(DecodingTree::parse("(0 _ _)").validate(spec), std::invalid_argument);
}

TEST(TreeDec, DecodeRoundTrip) {
  const Codebook cb = load("two_channel.cb");
  const auto tree = std::get<DecodingTree>(decide_tree_decodable(cb));
  const std::vector<std::size_t> source{2, 0, 1, 1, 2, 0, 0};
  SymbolStreams streams(encode(cb, source));
  EXPECT_EQ(decode_all(tree, streams), source);
  EXPECT_TRUE(streams.exhausted());
  SymbolStreams truncated({{1}, {}});
  EXPECT_THROW(decode(tree, truncated), DecodeError);
  SymbolStreams vacant({{1, 0}, {1}});
  EXPECT_THROW(decode(tree, vacant), DecodeError);
}

TEST(TreeDec, GraftRelabels) {
  DecodingTree sub = DecodingTree::parse("(0 L0 L1)");
  DecodingTree t;
  const std::vector<std::size_t> relabel{5, 3};
  const auto child = t.graft(sub, relabel);
  t.set_root(t.add_internal(1, {t.add_leaf(0), child}));
  EXPECT_EQ(t.to_sexpr(), "(1 L0 (0 L5 L3))");
}

TEST(TreeDec, GuillotineReplayReproducesBlocks) {
  const Codebook cb = load("two_channel.cb");
  const auto tree = std::get<DecodingTree>(decide_tree_decodable(cb));
  const Container c = container_of(cb);
  const GuillotineReplay r = replay_guillotine(tree, c);
  ASSERT_EQ(r.leaves.size(), cb.size());
  BigInt covered = 0;
  for (const auto& [label, block] : r.leaves) {
    EXPECT_EQ(block, block_of(cb[label], c));
    covered += block.volume();
  }
  for (const auto& b : r.vacant) covered += b.volume();
  EXPECT_EQ(covered, c.volume());
}

namespace {

// Independent decidability check: exhaustive search without memoization or
// trimming, cutting directly on the untrimmed words.
bool cuttable(const std::vector<Word>& words, const ChannelSpec& spec) {
  if (words.size() <= 1) return true;
  for (std::size_t i = 0; i < spec.n(); ++i) {
    bool ok = true;
    for (const auto& x : words) ok = ok && !x[i].empty();
    if (!ok) continue;
    std::vector<std::vector<Word>> groups(spec[i]);
    for (auto x : words) {
      const Symbol s = x[i].front();
      x[i].erase(x[i].begin());
      groups[s].push_back(std::move(x));
    }
    bool all = true;
    for (const auto& g : groups) all = all && cuttable(g, spec);
    if (all) return true;
  }
  // All remaining words might share a full epsilon column pattern only when
  // a word became all-epsilon, which a prefix code allows only alone.
  return false;
}

}  // namespace

TEST(TreeDec, AgreesWithUnmemoizedSearch) {
  std::mt19937_64 rng(29);
  int prefix_codes = 0, decodable = 0;
  for (int k = 0; k < 3000; ++k) {
    const Codebook cb = oracle::random_codebook(rng, 3, 3, 3, 7);
    if (cb.size() == 0 || !is_prefix_code(cb)) continue;
    ++prefix_codes;
    const TreeDecision d = decide_tree_decodable(cb);
    const bool want = cuttable(cb.codewords(), cb.spec());
    ASSERT_EQ(std::holds_alternative<DecodingTree>(d), want) << print_codebook(cb);
    if (want) {
      ++decodable;
      ASSERT_TRUE(tree_decodes(std::get<DecodingTree>(d), cb));
    } else {
      const auto& f = std::get<NotDecodable>(d);
      ASSERT_TRUE(epsilon_blocked(f.witness.codebook(cb.spec())));
    }
  }
  EXPECT_GT(prefix_codes, 100);
  EXPECT_GT(decodable, 10);
  EXPECT_LT(decodable, prefix_codes);
}
