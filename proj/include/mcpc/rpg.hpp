#pragma once

#include <string>
#include <vector>

#include "mcpc/code_model.hpp"

namespace mcpc {

/// The hyper-rectangle [0, q_i^{lmax_i}) per dimension that holds every block
/// of a codebook. Always derived from a codebook.
struct Container {
  ChannelSpec spec;
  LengthTuple max_lengths;

  /// q_i^{lmax_i} per dimension.
  std::vector<BigInt> edges() const;
  BigInt volume() const;
};

Container container_of(const Codebook& cb);

/// Axis-aligned integer box: [origin_i, origin_i + size_i) per dimension.
struct Block {
  std::vector<BigInt> origin;
  std::vector<BigInt> size;

  BigInt volume() const;
  friend bool operator==(const Block&, const Block&) = default;
};

/// The cells whose leading digits spell `w`. Throws std::invalid_argument when a
/// component is longer than the container allows.
Block block_of(const Word& w, const Container& container);

/// True iff the interval projections are disjoint in at least one dimension.
bool blocks_disjoint(const Block& a, const Block& b);

/// Pairwise disjointness of all codeword blocks; OpenMP-parallel over rows.
bool overlap_free(const Codebook& cb);
bool overlap_free_serial(const Codebook& cb);

/// One line per block, "origin=(..) size=(..)", for codebooks with n <= 3.
std::string dump_blocks(const Codebook& cb);

}  // namespace mcpc
