#include "mcpc/selvage.hpp"

#include <cstdint>
#include <stdexcept>

#include "mcpc/treedec.hpp"

namespace mcpc {

namespace {

std::uint64_t unit_space(const ChannelSpec& spec) {
  BigInt total = spec.product();
  if (!total.fits_ulong_p() || total > BigInt(1UL << 32)) {
    throw std::invalid_argument("selvage: unit word space too large");
  }
  return total.get_ui();
}

// Mixed-radix digits, channel n-1 least significant, so index order is lexicographic.
Word unit_word(const ChannelSpec& spec, std::uint64_t index) {
  Word w = Word::epsilon(spec.n());
  for (std::size_t i = spec.n(); i-- > 0;) {
    w[i].push_back(static_cast<Symbol>(index % spec[i]));
    index /= spec[i];
  }
  return w;
}

bool clear_of_core(const Word& w, const Codebook& core) {
  for (const auto& c : core.codewords()) {
    if (!prefix_free_pair(w, c)) return false;
  }
  return true;
}

}  // namespace

Codebook selvage_core(const ChannelSpec& spec) {
  const std::size_t n = spec.n();
  if (n < 3) throw std::invalid_argument("selvage core needs at least 3 channels");
  std::vector<Word> rows;
  for (std::size_t j = 0; j < n; ++j) {
    Word w = Word::epsilon(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      w[i].push_back(i == (j + 1) % n ? 1 : 0);
    }
    rows.push_back(std::move(w));
  }
  return Codebook(spec, std::move(rows));
}

std::vector<Word> selvage_unit_words_serial(const Codebook& core) {
  const auto total = unit_space(core.spec());
  std::vector<Word> out;
  for (std::uint64_t k = 0; k < total; ++k) {
    Word w = unit_word(core.spec(), k);
    if (clear_of_core(w, core)) out.push_back(std::move(w));
  }
  return out;
}

std::vector<Word> selvage_unit_words(const Codebook& core) {
  const auto total = static_cast<std::int64_t>(unit_space(core.spec()));
  std::vector<char> keep(static_cast<std::size_t>(total), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < total; ++k) {
    keep[static_cast<std::size_t>(k)] = clear_of_core(unit_word(core.spec(), static_cast<std::uint64_t>(k)), core);
  }
  std::vector<Word> out;
  for (std::int64_t k = 0; k < total; ++k) {
    if (keep[static_cast<std::size_t>(k)]) out.push_back(unit_word(core.spec(), static_cast<std::uint64_t>(k)));
  }
  return out;
}

SelvageOutput selvage_code(const ChannelSpec& spec) {
  Codebook core = selvage_core(spec);
  std::vector<Word> units = selvage_unit_words(core);
  const BigInt product = spec.product();
  const BigInt expected = product - BigInt(static_cast<unsigned long>(spec.sum()));
  if (BigInt(static_cast<unsigned long>(units.size())) != expected) {
    throw std::logic_error("selvage: unit word count disagrees with prod q - sum q");
  }

  std::vector<Word> all = core.codewords();
  std::vector<Rational> probs;
  for (std::size_t j = 0; j < spec.n(); ++j) probs.push_back(make_rational(BigInt(spec[j]), product));
  for (auto& u : units) {
    all.push_back(std::move(u));
    probs.push_back(make_rational(BigInt(1), product));
  }
  return SelvageOutput{std::move(core), Codebook(spec, std::move(all)), ProbMultiset(std::move(probs)), expected};
}

SelvageReport verify_selvage(const SelvageOutput& out) {
  SelvageReport r;
  const auto& spec = out.full.spec();
  r.core_prefix = is_prefix_code(out.core);
  r.full_prefix = is_prefix_code(out.full);
  r.core_not_tree_decodable = r.core_prefix && !is_tree_decodable(out.core);
  r.full_not_tree_decodable = r.full_prefix && !is_tree_decodable(out.full);
  r.zero_redundancy = out.spa.is_distribution() && redundancy(out.full, out.spa).is_zero();
  r.kraft_one = kraft_sum(out.full) == 1;
  r.unit_count_formula =
      out.unit_count == spec.product() - BigInt(static_cast<unsigned long>(spec.sum())) &&
      BigInt(static_cast<unsigned long>(out.full.size() - out.core.size())) == out.unit_count;
  return r;
}

}  // namespace mcpc
