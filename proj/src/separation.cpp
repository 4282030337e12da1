#include "mcpc/separation.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcpc {

FactorMatrix factor_matrix(const ChannelSpec& spec) {
  std::set<std::uint64_t> primes;
  std::vector<std::vector<std::pair<std::uint64_t, unsigned long>>> f;
  for (auto q : spec.sizes()) {
    f.push_back(factorize(BigInt(q)));
    for (const auto& [p, e] : f.back()) primes.insert(p);
  }
  FactorMatrix m;
  m.primes.assign(primes.begin(), primes.end());
  m.entries.assign(m.primes.size(), std::vector<unsigned long>(spec.n(), 0));
  for (std::size_t r = 0; r < m.primes.size(); ++r) {
    for (std::size_t i = 0; i < spec.n(); ++i) {
      for (const auto& [p, e] : f[i]) {
        if (p == m.primes[r]) m.entries[r][i] = e;
      }
    }
  }
  return m;
}

namespace {

struct Backtrack {
  const FactorMatrix& m;
  const std::function<bool(const Exponents&)>& visit;
  std::vector<std::uint64_t> remaining;  // p-adic valuations still to cover
  Exponents x;
  bool stopped = false;

  std::uint64_t bound(std::size_t i) const {
    std::uint64_t b = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t r = 0; r < m.primes.size(); ++r) {
      if (m.entries[r][i] != 0) b = std::min<std::uint64_t>(b, remaining[r] / m.entries[r][i]);
    }
    return b;
  }

  void run(std::size_t i) {
    if (stopped) return;
    if (i == x.size()) {
      if (std::all_of(remaining.begin(), remaining.end(), [](auto v) { return v == 0; })) {
        stopped = !visit(x);
      }
      return;
    }
    const auto b = bound(i);
    for (std::uint64_t k = 0; k <= b && !stopped; ++k) {
      x[i] = k;
      run(i + 1);
      if (k == b || stopped) break;
      for (std::size_t r = 0; r < m.primes.size(); ++r) remaining[r] -= m.entries[r][i];
    }
    for (std::size_t r = 0; r < m.primes.size(); ++r) remaining[r] += m.entries[r][i] * x[i];
    x[i] = 0;
  }
};

}  // namespace

void for_each_solution(const ChannelSpec& spec, const BigInt& rhs,
                       const std::function<bool(const Exponents&)>& visit) {
  if (rhs < 1) throw std::invalid_argument("enumerate_solutions: rhs must be positive");
  FactorMatrix m = factor_matrix(spec);
  Backtrack bt{m, visit, std::vector<std::uint64_t>(m.primes.size(), 0), Exponents(spec.n(), 0)};
  BigInt rest = rhs;
  for (std::size_t r = 0; r < m.primes.size(); ++r) {
    BigInt p(static_cast<unsigned long>(m.primes[r]));
    while (rest % p == 0) {
      rest /= p;
      ++bt.remaining[r];
    }
  }
  if (rest != 1) return;  // a prime outside the sizes divides rhs
  bt.run(0);
}

std::vector<Exponents> enumerate_solutions(const ChannelSpec& spec, const BigInt& rhs) {
  std::vector<Exponents> out;
  for_each_solution(spec, rhs, [&out](const Exponents& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

namespace {

void check_part(const IndexSet& part, std::size_t n) {
  if (part.empty()) throw std::invalid_argument("part must be non-empty");
  for (std::size_t k = 0; k < part.size(); ++k) {
    if (part[k] >= n) throw std::invalid_argument("part position out of range");
    if (k > 0 && part[k] <= part[k - 1]) throw std::invalid_argument("part must be sorted and duplicate-free");
  }
}

std::optional<std::size_t> first_positive(const Exponents& x, const IndexSet& part) {
  for (auto i : part) {
    if (x[i] > 0) return i;
  }
  return std::nullopt;
}

}  // namespace

BigInt complement_product(const IndexSet& part, const ChannelSpec& spec) {
  BigInt prod = 1;
  for (std::size_t i = 0; i < spec.n(); ++i) {
    if (!std::binary_search(part.begin(), part.end(), i)) prod *= spec[i];
  }
  return prod;
}

std::vector<SeparationWitness> violating_solutions(const IndexSet& part, const ChannelSpec& spec) {
  check_part(part, spec.n());
  std::vector<SeparationWitness> out;
  for_each_solution(spec, complement_product(part, spec), [&](const Exponents& x) {
    if (auto pos = first_positive(x, part)) out.push_back({x, *pos});
    return true;
  });
  return out;
}

std::optional<SeparationWitness> separation_witness(const IndexSet& part, const ChannelSpec& spec) {
  check_part(part, spec.n());
  std::optional<SeparationWitness> w;
  for_each_solution(spec, complement_product(part, spec), [&](const Exponents& x) {
    if (auto pos = first_positive(x, part)) {
      w = SeparationWitness{x, *pos};
      return false;
    }
    return true;
  });
  return w;
}

Partition::Partition(std::vector<IndexSet> parts, std::size_t n) : parts_(std::move(parts)), n_(n) {
  if (parts_.empty()) throw std::invalid_argument("partition needs at least one part");
  std::vector<bool> seen(n, false);
  for (auto& part : parts_) {
    std::sort(part.begin(), part.end());
    check_part(part, n);
    for (auto i : part) {
      if (seen[i]) throw std::invalid_argument("partition parts overlap");
      seen[i] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("partition does not cover every channel");
  }
  std::sort(parts_.begin(), parts_.end(), [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
}

Partition Partition::from_rgs(const std::vector<std::size_t>& rgs) {
  std::vector<IndexSet> parts;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    if (rgs[i] > parts.size()) throw std::invalid_argument("not a restricted-growth string");
    if (rgs[i] == parts.size()) parts.emplace_back();
    parts[rgs[i]].push_back(i);
  }
  return Partition(std::move(parts), rgs.size());
}

std::vector<std::size_t> Partition::part_of() const {
  std::vector<std::size_t> owner(n_);
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    for (auto i : parts_[j]) owner[i] = j;
  }
  return owner;
}

std::string format_partition(const Partition& p, const ChannelSpec& spec) {
  std::ostringstream os;
  os << "{";
  for (std::size_t j = 0; j < p.t(); ++j) {
    os << (j ? "," : "") << "{";
    for (std::size_t k = 0; k < p[j].size(); ++k) os << (k ? "," : "") << spec[p[j][k]];
    os << "}";
  }
  os << "}";
  return os.str();
}

std::string format_positions(const Partition& p) {
  std::ostringstream os;
  for (std::size_t j = 0; j < p.t(); ++j) {
    os << (j ? "|" : "");
    for (std::size_t k = 0; k < p[j].size(); ++k) os << (k ? "," : "") << p[j][k];
  }
  return os.str();
}

Partition parse_partition(const std::string& text, std::size_t n) {
  std::vector<IndexSet> parts;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, '|')) {
    IndexSet part;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("bad partition element '" + item + "'");
      }
      part.push_back(std::stoul(item));
    }
    parts.push_back(std::move(part));
  }
  return Partition(std::move(parts), n);
}

bool is_t_separation(const Partition& p, const ChannelSpec& spec) {
  if (p.n() != spec.n()) throw std::invalid_argument("partition does not match spec");
  return std::all_of(p.parts().begin(), p.parts().end(),
                     [&spec](const IndexSet& part) { return is_separated(part, spec); });
}

namespace {

constexpr std::size_t kMaxPartitionChannels = 16;

// All restricted-growth strings of length n with exactly t blocks, lexicographic.
std::vector<std::vector<std::size_t>> rgs_with_blocks(std::size_t n, std::size_t t) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> a(n, 0);
  auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (n - i < t - used) return;  // not enough positions left to open the missing blocks
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (std::size_t v = 0; v <= used && v < t; ++v) {
      a[i] = v;
      self(self, i + 1, std::max(used, v + 1));
    }
  };
  if (n > 0 && t >= 1 && t <= n) {
    a[0] = 0;
    rec(rec, 1, 1);
  }
  return out;
}

void check_t(const ChannelSpec& spec, std::size_t t) {
  if (t < 1 || t > spec.n()) throw std::invalid_argument("t must lie in [1, n]");
  if (spec.n() > kMaxPartitionChannels) throw std::invalid_argument("partition search supports at most 16 channels");
}

}  // namespace

std::optional<Partition> find_t_separation_serial(const ChannelSpec& spec, std::size_t t) {
  check_t(spec, t);
  for (const auto& rgs : rgs_with_blocks(spec.n(), t)) {
    Partition p = Partition::from_rgs(rgs);
    if (is_t_separation(p, spec)) return p;
  }
  return std::nullopt;
}

std::optional<Partition> find_t_separation(const ChannelSpec& spec, std::size_t t) {
  check_t(spec, t);
  const std::size_t n = spec.n();
  const auto subsets = static_cast<std::int64_t>(1) << n;
  std::vector<char> separated(static_cast<std::size_t>(subsets), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t mask = 1; mask < subsets; ++mask) {
    IndexSet part;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) part.push_back(i);
    }
    separated[static_cast<std::size_t>(mask)] = is_separated(part, spec);
  }

  const auto candidates = rgs_with_blocks(n, t);
  const auto count = static_cast<std::int64_t>(candidates.size());
  std::atomic<std::int64_t> first{count};
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < count; ++k) {
    if (k >= first.load(std::memory_order_relaxed)) continue;
    std::vector<std::uint64_t> masks(t, 0);
    for (std::size_t i = 0; i < n; ++i) masks[candidates[static_cast<std::size_t>(k)][i]] |= std::uint64_t{1} << i;
    bool ok = std::all_of(masks.begin(), masks.end(), [&](std::uint64_t m) { return separated[m] != 0; });
    if (!ok) continue;
    auto cur = first.load();
    while (k < cur && !first.compare_exchange_weak(cur, k)) {
    }
  }
  if (first.load() == count) return std::nullopt;
  return Partition::from_rgs(candidates[static_cast<std::size_t>(first.load())]);
}

bool natural_separation_check(const Partition& p, const ChannelSpec& spec) {
  if (p.n() != spec.n()) throw std::invalid_argument("partition does not match spec");
  const auto owner = p.part_of();
  for (std::size_t i = 0; i < spec.n(); ++i) {
    bool found = false;
    for (const auto& [prime, e] : factorize(BigInt(spec[i]))) {
      bool exclusive = true;
      for (std::size_t k = 0; k < spec.n(); ++k) {
        if (owner[k] != owner[i] && spec[k] % prime == 0) {
          exclusive = false;
          break;
        }
      }
      if (exclusive) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

TreeLineReport above_tree_line_sufficient(const ChannelSpec& spec) {
  TreeLineReport r;
  for (std::size_t t = 3; t <= spec.n(); ++t) {
    if (auto p = find_t_separation(spec, t)) {
      r.separable_t.push_back(t);
      r.separations.push_back(std::move(*p));
    }
  }
  if (!r.separable_t.empty()) r.verdict = TreeLineVerdict::kAboveTreeLine;
  return r;
}

}  // namespace mcpc
