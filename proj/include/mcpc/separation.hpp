#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcpc/code_model.hpp"

namespace mcpc {

/// Exponent of each prime (rows) in each channel size (columns).
struct FactorMatrix {
  std::vector<std::uint64_t> primes;  // ascending
  std::vector<std::vector<unsigned long>> entries;  // entries[row][position]
};

FactorMatrix factor_matrix(const ChannelSpec& spec);

/// x indexed by channel position.
using Exponents = std::vector<std::uint64_t>;

/// Calls `visit` on every non-negative x with prod q_i^{x_i} = rhs, in
/// lexicographic order; stops early when `visit` returns false.
void for_each_solution(const ChannelSpec& spec, const BigInt& rhs,
                       const std::function<bool(const Exponents&)>& visit);
std::vector<Exponents> enumerate_solutions(const ChannelSpec& spec, const BigInt& rhs);

/// Sorted, duplicate-free channel positions.
using IndexSet = std::vector<std::size_t>;

struct SeparationWitness {
  Exponents x;
  std::size_t violating_position;  // first position of the part with x > 0
};

/// prod of q_i over positions outside `part`.
BigInt complement_product(const IndexSet& part, const ChannelSpec& spec);

/// Every solution for the complement product that is positive somewhere on
/// `part`, in lexicographic order.
std::vector<SeparationWitness> violating_solutions(const IndexSet& part, const ChannelSpec& spec);
/// The lexicographically smallest violating solution, if any.
std::optional<SeparationWitness> separation_witness(const IndexSet& part, const ChannelSpec& spec);
inline bool is_separated(const IndexSet& part, const ChannelSpec& spec) {
  return !separation_witness(part, spec).has_value();
}

/// A set partition of channel positions. Parts are kept in order of their
/// smallest element.
class Partition {
 public:
  /// Throws std::invalid_argument unless `parts` is a disjoint cover of
  /// {0, ..., n-1} by non-empty sets.
  Partition(std::vector<IndexSet> parts, std::size_t n);
  /// From a restricted-growth string: position i goes to part rgs[i].
  static Partition from_rgs(const std::vector<std::size_t>& rgs);

  std::size_t t() const { return parts_.size(); }
  std::size_t n() const { return n_; }
  const IndexSet& operator[](std::size_t j) const { return parts_[j]; }
  const std::vector<IndexSet>& parts() const { return parts_; }
  /// part_of()[i] is the part holding position i.
  std::vector<std::size_t> part_of() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<IndexSet> parts_;
  std::size_t n_ = 0;
};

/// "{{4,6},{10,15}}" using channel sizes.
std::string format_partition(const Partition& p, const ChannelSpec& spec);
/// "0,1|2,3" using positions; parse_partition accepts the same form.
std::string format_positions(const Partition& p);
Partition parse_partition(const std::string& text, std::size_t n);

bool is_t_separation(const Partition& p, const ChannelSpec& spec);

/// First t-part partition in restricted-growth order that is a t-separation.
/// The parallel version precomputes separation of every subset concurrently
/// and then scans; both return the same partition. Throws for n > 16.
std::optional<Partition> find_t_separation(const ChannelSpec& spec, std::size_t t);
std::optional<Partition> find_t_separation_serial(const ChannelSpec& spec, std::size_t t);

/// Every element of every part has a prime factor dividing no size outside
/// its part. Sufficient for a t-separation, not necessary.
bool natural_separation_check(const Partition& p, const ChannelSpec& spec);

enum class TreeLineVerdict { kAboveTreeLine, kUnknown };

struct TreeLineReport {
  std::vector<std::size_t> separable_t;  // t >= 3 with a t-separation
  std::vector<Partition> separations;  // one per entry of separable_t
  TreeLineVerdict verdict = TreeLineVerdict::kUnknown;
};

TreeLineReport above_tree_line_sufficient(const ChannelSpec& spec);

}  // namespace mcpc
