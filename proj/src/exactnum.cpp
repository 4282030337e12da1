#include "mcpc/exactnum.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mcpc {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_u64(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_rho(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

void add_term(std::vector<ExactReal::Term>& terms, u64 p, const Rational& c) {
  auto it = std::lower_bound(terms.begin(), terms.end(), p,
                             [](const ExactReal::Term& t, u64 key) { return t.first < key; });
  if (it != terms.end() && it->first == p) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  } else if (c != 0) {
    terms.insert(it, {p, c});
  }
}

// Products up to this many bits are compared directly.
constexpr std::size_t kDirectBits = 1 << 14;
// Above this precision the bounds give up and the products are formed.
constexpr std::size_t kMaxBoundBits = 1 << 20;

std::size_t bit_length(const BigInt& v) { return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2); }

// lo <= atanh(u/v) * 2^bits <= hi for 0 <= u/v <= 1/3. Every rounding is a
// floor, so the truncated sum is a lower bound; the upper bound adds the
// accumulated floor losses (< 2.2 per term) and the geometric tail (< 2.5).
std::pair<BigInt, BigInt> atanh_bounds(const BigInt& u, const BigInt& v, std::size_t bits) {
  BigInt power = (u << bits) / v;
  const BigInt u2 = u * u, v2 = v * v;
  BigInt sum = 0, term;
  unsigned long k = 0;
  for (;; ++k) {
    term = power / (2 * k + 1);
    if (term == 0) break;
    sum += term;
    power = power * u2 / v2;
  }
  return {sum, sum + 3 * (k + 1)};
}

// lo <= ln(p) * 2^bits <= hi, via ln p = m ln 2 + 2 atanh((p - 2^m) / (p + 2^m)).
std::pair<BigInt, BigInt> ln_bounds(u64 p, std::size_t bits) {
  const auto [a_lo, a_hi] = atanh_bounds(1, 3, bits);
  const BigInt pp(static_cast<unsigned long>(p));
  const std::size_t m = bit_length(pp) - 1;
  const BigInt two_m = BigInt(1) << m;
  const auto [r_lo, r_hi] = atanh_bounds(pp - two_m, pp + two_m, bits);
  return {2 * (BigInt(static_cast<unsigned long>(m)) * a_lo + r_lo),
          2 * (BigInt(static_cast<unsigned long>(m)) * a_hi + r_hi)};
}

int sign_from_bounds(std::span<const u64> primes, std::span<const BigInt> exps, std::size_t bits) {
  std::size_t widest = 0;
  for (const auto& e : exps) widest = std::max(widest, bit_length(e));
  for (bits = std::max(bits, widest + 64); bits <= kMaxBoundBits; bits *= 2) {
    BigInt lo = 0, hi = 0;
    for (std::size_t k = 0; k < primes.size(); ++k) {
      if (exps[k] == 0) continue;
      const auto [l, h] = ln_bounds(primes[k], bits);
      lo += exps[k] * (exps[k] > 0 ? l : h);
      hi += exps[k] * (exps[k] > 0 ? h : l);
    }
    if (lo > 0) return 1;
    if (hi < 0) return -1;
  }
  return 0;  // undecided
}

int sign_from_products(std::span<const u64> primes, std::span<const BigInt> exps) {
  BigInt lhs = 1, rhs = 1, power;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    BigInt e = exps[k];
    if (e == 0) continue;
    bool positive = e > 0;
    if (!positive) e = -e;
    if (!e.fits_ulong_p()) throw std::overflow_error("log_combination_sign: exponent too large");
    mpz_ui_pow_ui(power.get_mpz_t(), primes[k], e.get_ui());
    (positive ? lhs : rhs) *= power;
  }
  int c = cmp(lhs, rhs);
  return (c > 0) - (c < 0);
}

int combination_sign(std::span<const u64> primes, std::span<const BigInt> exps) {
  bool any_pos = false, any_neg = false;
  std::size_t product_bits = 0;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    any_pos = any_pos || exps[k] > 0;
    any_neg = any_neg || exps[k] < 0;
    if (exps[k] != 0 && product_bits <= kDirectBits) {
      const BigInt mag = abs(exps[k]);
      const std::size_t pb = bit_length(BigInt(static_cast<unsigned long>(primes[k])));
      product_bits = mag > kDirectBits ? kDirectBits + 1 : product_bits + mag.get_ui() * pb;
    }
  }
  if (!any_neg) return any_pos ? 1 : 0;
  if (!any_pos) return -1;
  if (product_bits <= kDirectBits) return sign_from_products(primes, exps);
  // Distinct primes have Q-linearly independent logarithms, so a non-zero
  // combination is decided at finite precision.
  if (int s = sign_from_bounds(primes, exps, 128)) return s;
  return sign_from_products(primes, exps);
}

}  // namespace

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::vector<std::pair<std::uint64_t, unsigned long>> factorize(const BigInt& value) {
  if (value <= 0) throw std::invalid_argument("factorize: value must be positive");
  BigInt rest = value;
  std::vector<u64> primes;
  for (u64 p = 2; p < (1U << 16); p += (p == 2 ? 1 : 2)) {
    if (BigInt(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      primes.push_back(p);
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
  }
  if (rest > 1) {
    if (!rest.fits_ulong_p()) throw std::domain_error("factorize: cofactor exceeds 64 bits");
    factor_u64(rest.get_ui(), primes);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, unsigned long>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

ExactReal ExactReal::ln_prime(std::uint64_t p, const Rational& c) {
  ExactReal r;
  if (c != 0) r.terms_.emplace_back(p, c);
  return r;
}

Rational ExactReal::coefficient(std::uint64_t p) const {
  for (const auto& [prime, c] : terms_) {
    if (prime == p) return c;
  }
  return 0;
}

ExactReal& ExactReal::operator+=(const ExactReal& other) {
  for (const auto& [p, c] : other.terms_) add_term(terms_, p, c);
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other) {
  for (const auto& [p, c] : other.terms_) add_term(terms_, p, -c);
  return *this;
}

ExactReal& ExactReal::operator*=(const Rational& scale) {
  if (scale == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& term : terms_) term.second *= scale;
  return *this;
}

ExactReal ExactReal::operator-() const {
  ExactReal r = *this;
  for (auto& term : r.terms_) term.second = -term.second;
  return r;
}

bool operator==(const ExactReal& a, const ExactReal& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].first != b.terms_[k].first || a.terms_[k].second != b.terms_[k].second) {
      return false;
    }
  }
  return true;
}

std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b) {
  return exact_compare(a, b);
}

std::string ExactReal::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1) os << mag.get_str() << "*";
    os << "ln(" << p << ")";
  }
  return os.str();
}

ExactReal exact_from_ln(const Rational& x) {
  if (x <= 0) throw std::invalid_argument("exact_from_ln: argument must be positive");
  ExactReal r;
  for (const auto& [p, e] : factorize(x.get_num())) r += ExactReal::ln_prime(p, Rational(e));
  for (const auto& [p, e] : factorize(x.get_den())) r -= ExactReal::ln_prime(p, Rational(e));
  return r;
}

int log_combination_sign(std::span<const std::uint64_t> primes, std::span<const BigInt> exponents) {
  return combination_sign(primes, exponents);
}

int log_combination_sign(std::span<const std::uint64_t> primes,
                         std::span<const std::int64_t> exponents) {
  std::vector<BigInt> wide;
  wide.reserve(exponents.size());
  for (auto e : exponents) wide.emplace_back(static_cast<long>(e));
  return combination_sign(primes, wide);
}

std::strong_ordering exact_compare(const ExactReal& a, const ExactReal& b) {
  ExactReal diff = a - b;
  if (diff.is_zero()) return std::strong_ordering::equal;
  BigInt common = 1;
  for (const auto& term : diff.terms()) {
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), term.second.get_den_mpz_t());
  }
  std::vector<std::uint64_t> primes;
  std::vector<BigInt> exps;
  for (const auto& [p, c] : diff.terms()) {
    primes.push_back(p);
    exps.push_back(c.get_num() * (common / c.get_den()));
  }
  int s = log_combination_sign(primes, exps);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace mcpc
