#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

#include "mcpc/code_model.hpp"
#include "mcpc/treedec.hpp"

namespace mcpc {

/// pairing[j] is the index into `p` of the probability placed on length j:
/// largest probability with smallest length. Ties keep input order on both sides.
std::vector<std::size_t> sorted_assignment(const ProbMultiset& p, const std::vector<ExactReal>& lengths);

struct SearchOptions {
  /// Wall-clock limit; none means run to completion.
  std::optional<std::chrono::milliseconds> budget;
  /// Sub-multiset states beyond this count are treated as an exhausted budget.
  std::size_t max_states = std::size_t{1} << 22;
};

struct SearchResult {
  DecodingTree tree;  // leaf j decodes codebook[j]
  Codebook codebook;
  ProbMultiset assignment;  // assignment[j] is the probability of codebook[j]
  ExactReal expected;
  bool optimal_is_entropy = false;
  /// True when the value is the proven minimum; false for the greedy fallback.
  bool certified = false;
  std::size_t states = 0;
};

/// Minimum expected descriptive length over all decoding trees with |p|
/// leaves. Dynamic programming over sub-multisets S of p:
///   OPT(S) = min_c [ W(S) ln q_c + min over splits of S into 2..q_c groups of sum OPT(group) ]
/// evaluated level by level in |S|, the states of one level in parallel.
/// Costs are compared exactly. On budget exhaustion the best greedy tree is
/// returned with certified = false.
SearchResult optimal_tree_code(const ProbMultiset& p, const ChannelSpec& spec, const SearchOptions& options = {});
SearchResult optimal_tree_code_serial(const ProbMultiset& p, const ChannelSpec& spec,
                                      const SearchOptions& options = {});

/// Best single-channel q-ary Huffman tree over the channels. Never certified.
SearchResult greedy_tree_code(const ProbMultiset& p, const ChannelSpec& spec);

}  // namespace mcpc
