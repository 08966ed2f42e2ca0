#include "ssrank/padic.hpp"

#include <random>

#include <gtest/gtest.h>

using ssrank::Rational;
using ssrank::Valuation;
using ssrank::padic::PadicNumber;

namespace {

// Brute-force inverse modulo m for small moduli.
std::int64_t brute_inverse(std::int64_t a, std::int64_t m) {
  for (std::int64_t y = 1; y < m; ++y) {
    if ((a * y) % m == 1) return y;
  }
  return -1;
}

PadicNumber random_padic(std::mt19937_64& rng, std::uint32_t p, int precision) {
  std::uniform_int_distribution<std::int64_t> dist(-1'000'000'000, 1'000'000'000);
  std::uniform_int_distribution<int> shift(0, 3);
  return PadicNumber::from_integer(p, dist(rng), precision).shifted(shift(rng));
}

}  // namespace

TEST(PadicValuation, ExactZeroIsInfinite) {
  EXPECT_TRUE(PadicNumber::zero(3).valuation().is_infinite());
}

TEST(PadicValuation, HandFactorization) {
  // 18 = 2 * 3^2
  auto x = PadicNumber::from_integer(3, 18, 20);
  EXPECT_EQ(x.valuation(), Valuation::exact(Rational(2)));
  EXPECT_EQ(x.unit(), 2u);
}

TEST(PadicValuation, AllKnownDigitsZeroGivesLowerBound) {
  auto x = PadicNumber::from_integer(3, 9, 2);
  EXPECT_TRUE(x.is_zero());
  EXPECT_FALSE(x.is_exact_zero());
  EXPECT_EQ(x.valuation(), Valuation::at_least(Rational(2)));
}

TEST(PadicInvertUnit, MatchesBruteForce) {
  auto x = PadicNumber::from_integer(3, 2, 3);
  auto y = x.invert_unit();
  EXPECT_EQ(y.residue(), 14u);
  EXPECT_EQ(static_cast<std::int64_t>(y.residue()), brute_inverse(2, 27));
  EXPECT_EQ(PadicNumber::from_integer(5, 1, 20).invert_unit().residue(), 1u);
}

TEST(PadicInvertUnit, NonUnitNamesValuation) {
  auto x = PadicNumber::from_integer(3, 3, 20);
  try {
    (void)x.invert_unit();
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("valuation 1"), std::string::npos);
  }
}

TEST(PadicReducePrecision, Examples) {
  auto x = PadicNumber::from_integer(3, 28, 5).reduce_precision(3);
  EXPECT_EQ(x.residue(), 1u);
  EXPECT_EQ(x.precision(), 3);
  auto one = PadicNumber::from_integer(3, 1, 2);
  EXPECT_TRUE(one.reduce_precision(2).equals_at_precision(one));
  EXPECT_THROW((void)one.reduce_precision(4), std::invalid_argument);
}

TEST(PadicReducePrecision, ValuationNeverInflated) {
  // 3^4 known mod 3^6 reduced to 3^3 becomes zero-to-precision, not valuation 4.
  auto x = PadicNumber::from_integer(3, 81, 6).reduce_precision(3);
  EXPECT_EQ(x.valuation(), Valuation::at_least(Rational(3)));
}

TEST(PadicArithmetic, NegativeValuation) {
  auto third = PadicNumber::p_power(3, -1, 19);
  auto x = PadicNumber::from_integer(3, 3, 20) * third;
  EXPECT_TRUE(x.equals_at_precision(PadicNumber::from_integer(3, 1, 20)));
  EXPECT_EQ(third.valuation(), Valuation::exact(Rational(-1)));
}

TEST(PadicArithmetic, CancellationIsZeroToPrecisionNotExact) {
  auto a = PadicNumber::from_integer(5, 7, 20);
  auto d = a - a;
  EXPECT_TRUE(d.is_zero());
  EXPECT_FALSE(d.is_exact_zero());
  EXPECT_TRUE((PadicNumber::zero(5) * a).is_exact_zero());
}

TEST(PadicText, RoundTrip) {
  for (auto x : {PadicNumber::from_integer(3, -18, 20), PadicNumber::p_power(3, -2, 10), PadicNumber::zero(3),
                 PadicNumber::zero_to_precision(3, 7)}) {
    auto y = PadicNumber::parse(3, x.to_string());
    EXPECT_EQ(y.to_string(), x.to_string());
  }
  EXPECT_EQ(PadicNumber::from_integer(3, 18, 20).to_string(), "2 * 3^2 (mod 3^20)");
}

TEST(PadicDecimal, LongLiteralReducesExactly) {
  // 3^40 + 1 is congruent to 1 modulo 3^20.
  auto x = PadicNumber::from_decimal(3, "12157665459056928802", 20);
  EXPECT_TRUE(x.equals_at_precision(PadicNumber::from_integer(3, 1, 20)));
  EXPECT_TRUE(PadicNumber::from_decimal(3, "000", 20).is_exact_zero());
  EXPECT_THROW((void)PadicNumber::from_decimal(3, "12x", 20), std::invalid_argument);
}

TEST(PadicProperties, RingLaws) {
  std::mt19937_64 rng(20240611);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (int iter = 0; iter < 300; ++iter) {
      auto a = random_padic(rng, p, 20), b = random_padic(rng, p, 20), c = random_padic(rng, p, 20);
      EXPECT_TRUE(((a + b) + c).equals_at_precision(a + (b + c)));
      EXPECT_TRUE((a * (b + c)).equals_at_precision(a * b + a * c));
      EXPECT_TRUE((a * b).equals_at_precision(b * a));
    }
  }
}

TEST(PadicProperties, ValuationMultiplicative) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    auto a = random_padic(rng, 3, 20), b = random_padic(rng, 3, 20);
    if (!a.valuation().is_exact() || !b.valuation().is_exact()) continue;
    EXPECT_EQ((a * b).valuation(), a.valuation() + b.valuation());
  }
}

TEST(PadicProperties, InvertUnitIsInvolution) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    auto a = PadicNumber::from_integer(5, static_cast<std::int64_t>(rng() % 1'000'000) * 5 + 1 + iter % 4, 20);
    EXPECT_TRUE(a.invert_unit().invert_unit().equals_at_precision(a));
    EXPECT_TRUE((a * a.invert_unit()).equals_at_precision(PadicNumber::from_integer(5, 1, 20)));
  }
}
