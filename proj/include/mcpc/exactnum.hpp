#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mcpc {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Builds num/den in lowest terms. Throws std::invalid_argument when den == 0.
Rational make_rational(const BigInt& num, const BigInt& den);

/// Prime factorization as (prime, exponent) pairs in ascending prime order.
/// Values with a cofactor above 2^64 that is not removed by trial division
/// are rejected with std::domain_error.
std::vector<std::pair<std::uint64_t, unsigned long>> factorize(const BigInt& value);

/// An exact real of the form  sum_p c_p * ln(p)  over primes p with rational
/// coefficients c_p. Terms are kept sorted by prime and zero coefficients are
/// never stored, so two values are equal iff their term lists are identical
/// (unique factorization).
class ExactReal {
 public:
  using Term = std::pair<std::uint64_t, Rational>;

  ExactReal() = default;

  /// c * ln(p); p must be prime (not checked).
  static ExactReal ln_prime(std::uint64_t p, const Rational& c = 1);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Coefficient of ln(p), zero when absent.
  Rational coefficient(std::uint64_t p) const;

  ExactReal& operator+=(const ExactReal& other);
  ExactReal& operator-=(const ExactReal& other);
  ExactReal& operator*=(const Rational& scale);
  ExactReal operator-() const;

  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const Rational& s) { return a *= s; }
  friend ExactReal operator*(const Rational& s, ExactReal a) { return a *= s; }

  friend bool operator==(const ExactReal& a, const ExactReal& b);
  friend std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b);

  /// Symbolic form, e.g. "9/4*ln(2)" or "ln(3) - 2*ln(5)"; "0" for zero.
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

/// ln(x) for x > 0, decomposed over the primes of x's numerator and denominator.
ExactReal exact_from_ln(const Rational& x);

/// Sign of (a - b), decided by comparing two products of prime powers.
std::strong_ordering exact_compare(const ExactReal& a, const ExactReal& b);

/// Sign of sum_k exponents[k] * ln(primes[k]) for integer exponents. This is the
/// integer core of exact_compare and is exposed for callers that keep their
/// values as scaled exponent vectors.
int log_combination_sign(std::span<const std::uint64_t> primes,
                         std::span<const BigInt> exponents);
int log_combination_sign(std::span<const std::uint64_t> primes,
                         std::span<const std::int64_t> exponents);

/// Correctly rounded fixed-point rendering with `digits` decimals.
/// Uses directed-rounding interval evaluation and refines until the
/// rounding digit is certain. Display only; never used for decisions.
std::string exact_to_decimal(const ExactReal& a, int digits);

}  // namespace mcpc
