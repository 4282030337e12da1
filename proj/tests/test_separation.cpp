#include <gtest/gtest.h>

#include <random>

#include "mcpc/separation.hpp"
#include "oracles.hpp"

using namespace mcpc;

namespace {

Partition parts(std::vector<IndexSet> p, std::size_t n) { return Partition(std::move(p), n); }

}  // namespace

TEST(Separation, FactorMatrix) {
  const FactorMatrix m = factor_matrix(ChannelSpec({4, 6, 10, 15}));
  EXPECT_EQ(m.primes, (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(m.entries[0], (std::vector<unsigned long>{2, 1, 1, 0}));
  EXPECT_EQ(m.entries[1], (std::vector<unsigned long>{0, 1, 0, 1}));
  EXPECT_EQ(m.entries[2], (std::vector<unsigned long>{0, 0, 1, 1}));
}

TEST(Separation, SolutionsMatchNaiveBox) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::uint32_t> q(2, 12);
  std::uniform_int_distribution<std::size_t> n(1, 4);
  for (int k = 0; k < 300; ++k) {
    std::vector<std::uint32_t> sizes(n(rng));
    for (auto& v : sizes) v = q(rng);
    const ChannelSpec spec(sizes);
    std::uint64_t rhs = 1;
    for (int f = 0; f < 3; ++f) rhs *= q(rng);
    const auto got = enumerate_solutions(spec, BigInt(static_cast<unsigned long>(rhs)));
    ASSERT_EQ(got, oracle::naive_solutions(spec, rhs));
  }
}

TEST(Separation, EarlyStop) {
  int seen = 0;
  for_each_solution(ChannelSpec({2, 4, 2}), BigInt(16), [&](const Exponents&) { return ++seen < 2; });
  EXPECT_EQ(seen, 2);
}

TEST(Separation, FourSixTenFifteen) {
  const ChannelSpec spec({4, 6, 10, 15});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_FALSE(is_separated({i}, spec)) << i;
  EXPECT_TRUE(is_t_separation(parts({{0, 1}, {2, 3}}, 4), spec));
  EXPECT_FALSE(find_t_separation(spec, 3).has_value());
  EXPECT_FALSE(find_t_separation(spec, 4).has_value());
  const auto two = find_t_separation(spec, 2);
  ASSERT_TRUE(two.has_value());
  EXPECT_EQ(format_partition(*two, spec), "{{4,6},{10,15}}");
  // 6 * 10 * 15 = 900 = 4 * 15^2
  const auto wit = separation_witness({0}, spec);
  ASSERT_TRUE(wit.has_value());
  EXPECT_EQ(wit->violating_position, 0u);
  EXPECT_EQ(complement_product({0}, spec), 900);
  EXPECT_EQ(above_tree_line_sufficient(spec).verdict, TreeLineVerdict::kUnknown);
}

TEST(Separation, StatedFixtures) {
  EXPECT_TRUE(find_t_separation(ChannelSpec({4, 6, 10}), 3).has_value());
  const ChannelSpec s643({6, 4, 3});
  const Partition singles = parts({{0}, {1}, {2}}, 3);
  EXPECT_TRUE(is_t_separation(singles, s643));
  EXPECT_FALSE(natural_separation_check(singles, s643));
  EXPECT_TRUE(find_t_separation(ChannelSpec({5, 3, 2}), 3).has_value());
  EXPECT_FALSE(find_t_separation(ChannelSpec({6, 3, 2}), 3).has_value());
  EXPECT_TRUE(natural_separation_check(singles, ChannelSpec({5, 3, 2})));
}

TEST(Separation, TreeLineReport) {
  const TreeLineReport r = above_tree_line_sufficient(ChannelSpec({5, 3, 2}));
  EXPECT_EQ(r.verdict, TreeLineVerdict::kAboveTreeLine);
  EXPECT_EQ(r.separable_t, (std::vector<std::size_t>{3}));
  ASSERT_EQ(r.separations.size(), 1u);
  EXPECT_EQ(above_tree_line_sufficient(ChannelSpec({6, 3, 2})).verdict, TreeLineVerdict::kUnknown);
}

TEST(Separation, PartitionValidationAndText) {
  EXPECT_THROW(parts({{0}, {0, 1}}, 2), std::invalid_argument);
  EXPECT_THROW(parts({{0}}, 2), std::invalid_argument);
  EXPECT_THROW(parts({{0, 1}, {}}, 2), std::invalid_argument);
  const Partition p = parts({{2, 3}, {0, 1}}, 4);
  EXPECT_EQ(p[0], (IndexSet{0, 1}));
  EXPECT_EQ(format_positions(p), "0,1|2,3");
  EXPECT_EQ(parse_partition("0,1|2,3", 4), p);
  EXPECT_EQ(Partition::from_rgs({0, 0, 1, 1}), p);
  EXPECT_EQ(p.part_of(), (std::vector<std::size_t>{0, 0, 1, 1}));
  EXPECT_THROW(parse_partition("0|2", 3), std::invalid_argument);
}

TEST(Separation, ParallelMatchesSerial) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<std::uint32_t> q(2, 30);
  std::uniform_int_distribution<std::size_t> n(2, 7);
  for (int k = 0; k < 150; ++k) {
    std::vector<std::uint32_t> sizes(n(rng));
    for (auto& v : sizes) v = q(rng);
    const ChannelSpec spec(sizes);
    for (std::size_t t = 1; t <= spec.n(); ++t) {
      const auto a = find_t_separation(spec, t);
      const auto b = find_t_separation_serial(spec, t);
      ASSERT_EQ(a.has_value(), b.has_value());
      if (a) {
        ASSERT_EQ(*a, *b);
        ASSERT_TRUE(is_t_separation(*a, spec));
      }
    }
  }
}

TEST(Separation, NaturalCheckIsSufficient) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<std::uint32_t> q(2, 40);
  int natural = 0;
  for (int k = 0; k < 2000; ++k) {
    const std::size_t n = 2 + k % 4;
    std::vector<std::uint32_t> sizes(n);
    for (auto& v : sizes) v = q(rng);
    std::vector<std::size_t> rgs(n, 0);
    std::size_t top = 0;
    for (std::size_t i = 1; i < n; ++i) {
      rgs[i] = std::uniform_int_distribution<std::size_t>(0, top + 1)(rng);
      top = std::max(top, rgs[i]);
    }
    const Partition p = Partition::from_rgs(rgs);
    const ChannelSpec spec(sizes);
    if (natural_separation_check(p, spec)) {
      ++natural;
      ASSERT_TRUE(is_t_separation(p, spec)) << format_partition(p, spec);
    }
  }
  EXPECT_GT(natural, 50);
}
