#include "mcpc/rpg.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>

namespace mcpc {

namespace {

BigInt ipow(std::uint32_t base, std::size_t exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

std::vector<Block> all_blocks(const Codebook& cb) {
  Container c = container_of(cb);
  std::vector<Block> blocks;
  blocks.reserve(cb.size());
  for (const auto& w : cb.codewords()) blocks.push_back(block_of(w, c));
  return blocks;
}

}  // namespace

std::vector<BigInt> Container::edges() const {
  std::vector<BigInt> e;
  for (std::size_t i = 0; i < spec.n(); ++i) e.push_back(ipow(spec[i], max_lengths[i]));
  return e;
}

BigInt Container::volume() const {
  BigInt v = 1;
  for (const auto& e : edges()) v *= e;
  return v;
}

Container container_of(const Codebook& cb) {
  LengthTuple lmax(cb.spec().n(), 0);
  for (const auto& w : cb.codewords()) {
    for (std::size_t i = 0; i < w.n(); ++i) lmax[i] = std::max(lmax[i], w[i].size());
  }
  return Container{cb.spec(), std::move(lmax)};
}

BigInt Block::volume() const {
  BigInt v = 1;
  for (const auto& s : size) v *= s;
  return v;
}

Block block_of(const Word& w, const Container& container) {
  const auto n = container.spec.n();
  if (w.n() != n) throw std::invalid_argument("block_of: word has wrong channel count");
  Block b;
  b.origin.resize(n);
  b.size.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto q = container.spec[i];
    const auto len = w[i].size();
    if (len > container.max_lengths[i]) throw std::invalid_argument("block_of: word does not fit container");
    BigInt value = 0;
    for (Symbol s : w[i]) value = value * q + s;
    b.size[i] = ipow(q, container.max_lengths[i] - len);
    b.origin[i] = value * b.size[i];
  }
  return b;
}

bool blocks_disjoint(const Block& a, const Block& b) {
  for (std::size_t i = 0; i < a.origin.size(); ++i) {
    if (a.origin[i] + a.size[i] <= b.origin[i] || b.origin[i] + b.size[i] <= a.origin[i]) return true;
  }
  return false;
}

bool overlap_free_serial(const Codebook& cb) {
  auto blocks = all_blocks(cb);
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < blocks.size(); ++b) {
      if (!blocks_disjoint(blocks[a], blocks[b])) return false;
    }
  }
  return true;
}

bool overlap_free(const Codebook& cb) {
  auto blocks = all_blocks(cb);
  const auto m = static_cast<std::int64_t>(blocks.size());
  std::atomic<bool> ok{true};
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t a = 0; a < m; ++a) {
    if (!ok.load(std::memory_order_relaxed)) continue;
    for (std::int64_t b = a + 1; b < m; ++b) {
      if (!blocks_disjoint(blocks[a], blocks[b])) {
        ok.store(false, std::memory_order_relaxed);
        break;
      }
    }
  }
  return ok.load();
}

std::string dump_blocks(const Codebook& cb) {
  if (cb.spec().n() > 3) throw std::invalid_argument("dump_blocks: only n <= 3 is supported");
  std::ostringstream os;
  auto list = [&os](const std::vector<BigInt>& v) {
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << ")";
  };
  for (const auto& b : all_blocks(cb)) {
    os << "origin=";
    list(b.origin);
    os << " size=";
    list(b.size);
    os << "\n";
  }
  return os.str();
}

}  // namespace mcpc
