#include <gtest/gtest.h>

#include <random>

#include "mcpc/io.hpp"
#include "mcpc/rpg.hpp"
#include "oracles.hpp"

using namespace mcpc;

TEST(Rpg, ContainerAndBlocks) {
  const Codebook cb = parse_codebook("channels: 2 2\ncodeword: 0 | -\ncodeword: 1 | 0\ncodeword: 11 | 1\n");
  const Container c = container_of(cb);
  EXPECT_EQ(c.max_lengths, (LengthTuple{2, 1}));
  EXPECT_EQ(c.edges(), (std::vector<BigInt>{4, 2}));
  EXPECT_EQ(c.volume(), 8);
  const Block b0 = block_of(cb[0], c);
  EXPECT_EQ(b0.origin, (std::vector<BigInt>{0, 0}));
  EXPECT_EQ(b0.size, (std::vector<BigInt>{2, 2}));
  const Block b1 = block_of(cb[1], c);
  EXPECT_EQ(b1.origin, (std::vector<BigInt>{2, 0}));
  EXPECT_EQ(b1.size, (std::vector<BigInt>{2, 1}));
  const Block b2 = block_of(cb[2], c);
  EXPECT_EQ(b2.origin, (std::vector<BigInt>{3, 1}));
  EXPECT_EQ(b2.volume(), 1);
  EXPECT_TRUE(blocks_disjoint(b0, b1));
  EXPECT_TRUE(blocks_disjoint(b1, b2));
  EXPECT_THROW(block_of(Word({{1, 1, 1}, {}}), c), std::invalid_argument);
  EXPECT_TRUE(overlap_free(cb));
}

TEST(Rpg, BlockVolumesMatchKraft) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Codebook cb = oracle::random_codebook(rng, 3, 4, 3, 6);
    if (cb.size() == 0) continue;
    const Container c = container_of(cb);
    BigInt vol = 0;
    for (const auto& w : cb.codewords()) vol += block_of(w, c).volume();
    EXPECT_EQ(make_rational(vol, c.volume()), kraft_sum(cb));
  }
}

TEST(Rpg, OverlapMatchesPrefixOnRandomCodebooks) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 1000; ++k) {
    const Codebook cb = oracle::random_codebook(rng, 4, 3, 3, 8);
    const bool prefix = is_prefix_code(cb);
    ASSERT_EQ(prefix, overlap_free(cb));
    ASSERT_EQ(prefix, overlap_free_serial(cb));
    ASSERT_EQ(prefix, is_prefix_code_serial(cb));
  }
}

TEST(Rpg, SingleChannelReducesToClassicalPrefixFreeness) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 300; ++k) {
    const Codebook cb = oracle::random_codebook(rng, 1, 3, 4, 6);
    std::vector<std::vector<std::uint32_t>> strings;
    for (const auto& w : cb.codewords()) strings.push_back(w[0]);
    ASSERT_EQ(is_prefix_code(cb), oracle::classic_prefix_free(strings));
  }
}

TEST(Rpg, DumpBlocks) {
  const Codebook cb = parse_codebook("channels: 2 2\ncodeword: 0 | -\ncodeword: 1 | 0\n");
  const std::string text = dump_blocks(cb);
  EXPECT_NE(text.find("origin=(0,0) size=(1,2)"), std::string::npos) << text;
  EXPECT_NE(text.find("origin=(1,0) size=(1,1)"), std::string::npos) << text;
}
