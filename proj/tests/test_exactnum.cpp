#include <gtest/gtest.h>

#include <random>

#include "mcpc/exactnum.hpp"
#include "oracles.hpp"

using namespace mcpc;

TEST(ExactNum, FromLnDecomposesOverPrimes) {
  const ExactReal v = exact_from_ln(Rational(12));
  EXPECT_EQ(v.coefficient(2), 2);
  EXPECT_EQ(v.coefficient(3), 1);
  EXPECT_EQ(v.coefficient(5), 0);
  EXPECT_TRUE(exact_from_ln(Rational(1)).is_zero());
  EXPECT_EQ(exact_from_ln(Rational(3, 4)), ExactReal::ln_prime(3) - ExactReal::ln_prime(2, 2));
}

TEST(ExactNum, ZeroCoefficientIsNotStored) {
  EXPECT_TRUE(ExactReal::ln_prime(7, 0).is_zero());
  const ExactReal a = ExactReal::ln_prime(2) + ExactReal::ln_prime(3);
  EXPECT_EQ((a - ExactReal::ln_prime(3)).terms().size(), 1u);
  EXPECT_TRUE((a - a).is_zero());
}

TEST(ExactNum, ArithmeticAndScaling) {
  ExactReal a = exact_from_ln(Rational(6)) * Rational(1, 2);
  EXPECT_EQ(a.coefficient(2), Rational(1, 2));
  EXPECT_EQ((-a).coefficient(3), Rational(-1, 2));
  a *= Rational(0);
  EXPECT_TRUE(a.is_zero());
}

TEST(ExactNum, CompareIdentities) {
  EXPECT_EQ(exact_compare(exact_from_ln(Rational(8)), ExactReal::ln_prime(2, 3)), std::strong_ordering::equal);
  // 9 > 8
  EXPECT_EQ(exact_compare(ExactReal::ln_prime(3, 2), ExactReal::ln_prime(2, 3)), std::strong_ordering::greater);
  // 2^10 = 1024 < 3^7 = 2187
  EXPECT_LT(ExactReal::ln_prime(2, 10), ExactReal::ln_prime(3, 7));
  // ln 2 / 2 vs ln 3 / 3: 2^3 = 8 < 9 = 3^2
  EXPECT_LT(ExactReal::ln_prime(2, Rational(1, 2)), ExactReal::ln_prime(3, Rational(1, 3)));
  EXPECT_GT(ExactReal::ln_prime(5), ExactReal());
  EXPECT_LT(-ExactReal::ln_prime(5), ExactReal());
}

TEST(ExactNum, CompareNearTies) {
  // 3^12 = 531441 vs 2^19 = 524288
  EXPECT_GT(ExactReal::ln_prime(3, 12), ExactReal::ln_prime(2, 19));
  // 2^a 5^b close to 10^k style: 2^10 * 5^3 = 128000 vs 3^10 * 2 = 118098
  EXPECT_GT(ExactReal::ln_prime(2, 10) + ExactReal::ln_prime(5, 3), ExactReal::ln_prime(3, 10) + ExactReal::ln_prime(2));
}

TEST(ExactNum, LogCombinationSign) {
  const std::vector<std::uint64_t> primes{2, 3};
  const std::vector<std::int64_t> e1{3, -2};  // 8/9
  EXPECT_EQ(log_combination_sign(primes, std::span<const std::int64_t>(e1)), -1);
  const std::vector<std::int64_t> e2{0, 0};
  EXPECT_EQ(log_combination_sign(primes, std::span<const std::int64_t>(e2)), 0);
  const std::vector<BigInt> e3{BigInt(-19), BigInt(12)};
  EXPECT_EQ(log_combination_sign(primes, std::span<const BigInt>(e3)), 1);
}

TEST(ExactNum, RandomComparisonsAgreeWithHighPrecision) {
  std::mt19937_64 rng(11);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
  std::uniform_int_distribution<int> pick(0, 5), num(-40, 40), den(1, 12), count(1, 4);
  for (int trial = 0; trial < 500; ++trial) {
    auto make = [&] {
      ExactReal v;
      for (int k = count(rng); k > 0; --k) v += ExactReal::ln_prime(primes[pick(rng)], Rational(num(rng), den(rng)));
      return v;
    };
    const ExactReal a = make(), b = make();
    const int want = oracle::mpfr_sign_of_difference(a, b);
    const auto got = exact_compare(a, b);
    const int g = got < 0 ? -1 : (got > 0 ? 1 : 0);
    ASSERT_EQ(g, want) << a.to_string() << " vs " << b.to_string();
  }
}

TEST(ExactNum, ToString) {
  EXPECT_EQ(ExactReal().to_string(), "0");
  EXPECT_EQ(ExactReal::ln_prime(2, Rational(9, 4)).to_string(), "9/4*ln(2)");
  EXPECT_EQ((ExactReal::ln_prime(3) - ExactReal::ln_prime(5, 2)).to_string(), "ln(3) - 2*ln(5)");
}

TEST(ExactNum, DecimalRendering) {
  EXPECT_EQ(exact_to_decimal(exact_from_ln(Rational(2)), 6), "0.693147");
  EXPECT_EQ(exact_to_decimal(ExactReal(), 3), "0.000");
  EXPECT_EQ(exact_to_decimal(-exact_from_ln(Rational(2)), 4), "-0.6931");
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(1, 500);
  for (int k = 0; k < 100; ++k) {
    const Rational x(d(rng), d(rng));
    const int digits = 1 + k % 40;
    if (x == 1) continue;
    EXPECT_EQ(exact_to_decimal(exact_from_ln(x), digits), oracle::mpfr_ln_decimal(x, digits)) << x.get_str();
  }
}

TEST(ExactNum, Factorize) {
  using F = std::vector<std::pair<std::uint64_t, unsigned long>>;
  EXPECT_EQ(factorize(BigInt(360)), (F{{2, 3}, {3, 2}, {5, 1}}));
  EXPECT_EQ(factorize(BigInt(1)), F{});
  EXPECT_EQ(factorize(BigInt(97)), (F{{97, 1}}));
}

TEST(ExactNum, MakeRational) {
  EXPECT_EQ(make_rational(BigInt(6), BigInt(-4)), Rational(-3, 2));
  EXPECT_THROW(make_rational(BigInt(1), BigInt(0)), std::invalid_argument);
}

TEST(ExactNum, HugeExponentsAgreeWithHighPrecision) {
  std::mt19937_64 rng(13);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13, 1000003, 4294967291ULL};
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_int_distribution<long> num(-1000000007L, 1000000007L), den(1, 999999937L);
  for (int trial = 0; trial < 300; ++trial) {
    ExactReal a, b;
    for (int k = 0; k < 3; ++k) {
      a += ExactReal::ln_prime(primes[pick(rng)], make_rational(BigInt(num(rng)), BigInt(den(rng))));
      b += ExactReal::ln_prime(primes[pick(rng)], make_rational(BigInt(num(rng)), BigInt(den(rng))));
    }
    const int want = oracle::mpfr_sign_of_difference(a, b);
    const auto got = exact_compare(a, b);
    ASSERT_EQ(got < 0 ? -1 : (got > 0 ? 1 : 0), want) << a.to_string() << " vs " << b.to_string();
  }
  // 3^(10^12) vs 2^(1584962500721): ln 3 / ln 2 = 1.58496250072115...
  const std::vector<std::uint64_t> p{2, 3};
  const std::vector<BigInt> above{BigInt(-1584962500721L), BigInt(1000000000000L)};
  const std::vector<BigInt> below{BigInt(-1584962500722L), BigInt(1000000000000L)};
  EXPECT_EQ(log_combination_sign(p, std::span<const BigInt>(above)), 1);
  EXPECT_EQ(log_combination_sign(p, std::span<const BigInt>(below)), -1);
}
