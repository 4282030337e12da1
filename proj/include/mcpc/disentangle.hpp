#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mcpc/code_model.hpp"
#include "mcpc/separation.hpp"
#include "mcpc/treedec.hpp"

namespace mcpc {

/// Q together with a partition and the per-part products Q^x.
struct ProductSpec {
  ChannelSpec base;
  Partition partition;
  ChannelSpec product_sizes;
};

/// Throws std::invalid_argument when a part product exceeds 32 bits.
ProductSpec make_product_spec(const ChannelSpec& base, const Partition& partition);

/// A part that is not separated, with a solution that touches it.
struct DisentangleInput {
  ProductSpec spec;
  std::size_t failing_part;
  Exponents witness;
  IndexSet positive;  // positions with witness > 0
};

/// Throws std::invalid_argument unless `x` solves the separation equation of
/// `failing_part` and is positive somewhere on it.
DisentangleInput make_disentangle_input(ProductSpec spec, std::size_t failing_part, Exponents x);

/// c(i) = c_x(j) for the part j holding position i. Throws
/// std::invalid_argument if a component carries a symbol other than 0 or 1.
Codebook lift_to_base(const Codebook& cb, const ProductSpec& spec);

class NoApplicableCase : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class DisentangleCase { kCase1, kCase2 };

struct DisentangleOutput {
  DisentangleCase which;
  std::size_t failing_part;
  Exponents witness;
  std::size_t i_star;
  std::optional<std::size_t> i_dagger;  // Case 2 only
  Codebook code;  // rewritten core rows first (row j for part j), then the rest
  DecodingTree tree;
  ProbMultiset spa;  // the selvage probability assembly of the product sizes
  ProbMultiset assignment;  // spa paired with `code` by sorted assignment
};

/// Applicable when some position of the failing part with positive witness
/// has q > 2.
bool case1_applicable(const DisentangleInput& in);
/// Applicable when every such position has q = 2 and some position outside
/// the failing part with zero witness has q = 2^r, r >= 1.
bool case2_applicable(const DisentangleInput& in);

/// Both throw NoApplicableCase when their premises fail, and std::logic_error
/// if the built code turns out not to be tree-decodable.
DisentangleOutput disentangle_case1(const DisentangleInput& in);
DisentangleOutput disentangle_case2(const DisentangleInput& in);

/// Scans failing parts and their witnesses in order and runs Case 1 on the
/// first match; failing that, Case 2. Returns nullopt when the partition is a
/// t-separation. Throws NoApplicableCase when neither case applies.
std::optional<DisentangleOutput> disentangle(const ChannelSpec& base, const Partition& partition);

struct DisentangleReport {
  bool prefix = false;
  bool tree_decodable = false;
  bool kraft_one = false;
  bool zero_redundancy = false;
  bool size_formula = false;

  bool all() const { return prefix && tree_decodable && kraft_one && zero_redundancy && size_formula; }
};

DisentangleReport verify_disentangle(const DisentangleOutput& out, const ProductSpec& spec);

}  // namespace mcpc
