#pragma once

#include <vector>

#include "mcpc/code_model.hpp"

namespace mcpc {

struct SelvageOutput {
  Codebook core;
  Codebook full;  // core rows first, then unit words in lexicographic order
  ProbMultiset spa;  // spa[j] belongs to full[j]
  BigInt unit_count;
};

/// Row j: epsilon on channel j, "1" on channel (j+1) mod n, "0" elsewhere.
/// Throws std::invalid_argument when n < 3.
Codebook selvage_core(const ChannelSpec& spec);

/// Length-(1,...,1) words that are prefix-free with every core row, in
/// lexicographic order. The parallel version marks candidates concurrently.
std::vector<Word> selvage_unit_words(const Codebook& core);
std::vector<Word> selvage_unit_words_serial(const Codebook& core);

/// Throws std::logic_error if the unit word count disagrees with
/// prod q_i - sum q_i.
SelvageOutput selvage_code(const ChannelSpec& spec);

struct SelvageReport {
  bool core_prefix = false;
  bool full_prefix = false;
  bool core_not_tree_decodable = false;
  bool full_not_tree_decodable = false;
  bool zero_redundancy = false;
  bool kraft_one = false;
  bool unit_count_formula = false;

  bool all() const {
    return core_prefix && full_prefix && core_not_tree_decodable && full_not_tree_decodable &&
           zero_redundancy && kraft_one && unit_count_formula;
  }
};

SelvageReport verify_selvage(const SelvageOutput& out);

}  // namespace mcpc
