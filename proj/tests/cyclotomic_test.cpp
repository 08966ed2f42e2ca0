#include "ssrank/cyclotomic.hpp"

#include <random>

#include <gtest/gtest.h>

using ssrank::Rational;
using ssrank::Valuation;
using ssrank::cyclo::CycloElement;
using ssrank::cyclo::epsilon_at;
using ssrank::cyclo::phi_at_zeta;
using ssrank::cyclo::phi_poly;
using ssrank::padic::PadicNumber;

namespace {

using IntPoly = std::vector<std::int64_t>;

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  IntPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

IntPoly one_plus_x_pow_minus_one(int m) {
  IntPoly r{1};
  for (int i = 0; i < m; ++i) r = mul(r, {1, 1});
  r[0] -= 1;
  return r;
}

// Exact division of integer polynomials by a monic divisor.
IntPoly divide_monic(IntPoly num, const IntPoly& den) {
  IntPoly q(num.size() - den.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = num[k + den.size() - 1];
    for (std::size_t j = 0; j < den.size(); ++j) num[k + j] -= q[k] * den[j];
  }
  for (auto c : num) EXPECT_EQ(c, 0);
  return q;
}

// ((1+X)^{p^n}-1)/((1+X)^{p^{n-1}}-1), after removing the common factor X.
IntPoly phi_oracle(int p, int n) {
  int big = 1;
  for (int i = 0; i < n; ++i) big *= p;
  IntPoly num = one_plus_x_pow_minus_one(big);
  IntPoly den = one_plus_x_pow_minus_one(big / p);
  num.erase(num.begin());
  den.erase(den.begin());
  // den is not monic at the bottom; reverse-free: divide using its leading coefficient 1.
  return divide_monic(num, den);
}

CycloElement random_element(std::mt19937_64& rng, std::uint32_t p, int level, int precision) {
  const auto d = ssrank::cyclo::field_degree(p, level);
  std::vector<PadicNumber> c;
  std::uniform_int_distribution<std::int64_t> dist(-100000, 100000);
  for (std::int64_t i = 0; i < d; ++i) c.push_back(PadicNumber::from_integer(p, dist(rng), precision));
  return CycloElement::from_coefficients(p, level, c);
}

}  // namespace

TEST(PhiPoly, SmallCasesByHand) {
  auto f = phi_poly(3, 1);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0].centered_integer(), 3);
  EXPECT_EQ(f[1].centered_integer(), 3);
  EXPECT_EQ(f[2].centered_integer(), 1);
  auto g = phi_poly(5, 1);
  std::vector<std::int64_t> expected{5, 10, 10, 5, 1};
  ASSERT_EQ(g.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(g[i].centered_integer(), expected[i]);
  EXPECT_THROW((void)phi_poly(3, 0), std::invalid_argument);
}

TEST(PhiPoly, MatchesPolynomialDivisionAndIsEisenstein) {
  for (auto [p, n] : {std::pair{3, 2}, std::pair{3, 3}, std::pair{5, 2}}) {
    auto oracle = phi_oracle(p, n);
    auto f = phi_poly(static_cast<std::uint32_t>(p), n);
    ASSERT_EQ(f.size(), oracle.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      EXPECT_TRUE(f[i].equals_at_precision(PadicNumber::from_integer(p, oracle[i], 20))) << p << " " << n << " " << i;
      if (i + 1 < f.size()) EXPECT_GE(f[i].valuation_lower_bound(), 1);
    }
    EXPECT_EQ(f.front().centered_integer(), p);
    EXPECT_EQ(f.back().centered_integer(), 1);
  }
}

TEST(CycloVal, Uniformizers) {
  EXPECT_EQ(CycloElement::uniformizer(3, 1).valuation(), Valuation::exact(Rational(1, 2)));
  EXPECT_EQ(CycloElement::uniformizer(3, 2).valuation(), Valuation::exact(Rational(1, 6)));
  for (int n : {1, 2, 3}) {
    auto p_elem = CycloElement::constant(PadicNumber::from_integer(5, 5, 20), n);
    EXPECT_EQ(p_elem.valuation(), Valuation::exact(Rational(1)));
  }
}

TEST(CycloVal, UniformizerPowerWrapsToP) {
  // eps^d = p * unit because Phi_{p^n}(1+X) is Eisenstein.
  for (int n : {1, 2, 3}) {
    auto d = ssrank::cyclo::field_degree(3, n);
    auto e = CycloElement::uniformizer(3, n).times_uniformizer_power(d - 1);
    EXPECT_EQ(e.valuation(), Valuation::exact(Rational(1)));
  }
}

TEST(PhiAtZeta, Cases) {
  auto q = phi_at_zeta(3, 1, 2);
  EXPECT_EQ(q.valuation(), Valuation::exact(Rational(1, 3)));
  // eps_1 = Phi_3(zeta_9) * eps_2, division free.
  auto eps1 = epsilon_at(3, 1, 2);
  auto eps2 = epsilon_at(3, 2, 2);
  EXPECT_TRUE((q * eps2).equals_at_precision(eps1));
  EXPECT_TRUE((eps1 / eps2).equals_at_precision(q));
  EXPECT_TRUE(phi_at_zeta(3, 2, 2).is_exact_zero());
  auto three = phi_at_zeta(3, 2, 1);
  EXPECT_TRUE(three.equals_at_precision(CycloElement::constant(PadicNumber::from_integer(3, 3, 20), 1)));
}

TEST(CycloNorm, ConjugateProductOfUniformizerIsP) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto zeta = CycloElement::uniformizer(p, 1) + CycloElement::constant(PadicNumber::from_integer(p, 1, 20), 1);
    auto one = CycloElement::constant(PadicNumber::from_integer(p, 1, 20), 1);
    auto power = one;
    auto product = one;
    for (std::uint32_t a = 1; a < p; ++a) {
      power = power * zeta;
      product = product * (power - one);
    }
    EXPECT_TRUE(product.equals_at_precision(CycloElement::constant(PadicNumber::from_integer(p, p, 20), 1)));
  }
}

TEST(CycloProperties, ValuationMultiplicative) {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 60; ++iter) {
    int level = 1 + iter % 3;
    auto a = random_element(rng, 3, level, 20), b = random_element(rng, 3, level, 20);
    auto va = a.valuation(), vb = b.valuation();
    ASSERT_TRUE(va.is_exact() && vb.is_exact());
    EXPECT_EQ((a * b).valuation(), va + vb);
  }
}

TEST(CycloProperties, InverseRoundTrip) {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 30; ++iter) {
    int level = 1 + iter % 3;
    std::uint32_t p = iter % 2 ? 3 : 5;
    if (p == 5 && level == 3) level = 2;
    auto a = random_element(rng, p, level, 20).times_uniformizer_power(iter % 4);
    auto inv = a.inverse();
    EXPECT_EQ(inv.valuation().value(), -a.valuation().value());
    auto one = CycloElement::constant(PadicNumber::from_integer(p, 1, 20), level);
    EXPECT_TRUE((a * inv).equals_at_precision(one));
    EXPECT_GE((a * inv).precision(), 10);
  }
}

TEST(CycloProperties, LiftPreservesValuationAndProducts) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 20; ++iter) {
    auto a = random_element(rng, 3, 1, 20), b = random_element(rng, 3, 1, 20);
    auto la = a.lift_to(3), lb = b.lift_to(3);
    EXPECT_EQ(la.valuation(), a.valuation());
    EXPECT_TRUE((la * lb).equals_at_precision((a * b).lift_to(3)));
  }
  // eps_1 lifted from level 1 agrees with the direct embedding.
  EXPECT_TRUE(CycloElement::uniformizer(5, 1).lift_to(2).equals_at_precision(epsilon_at(5, 1, 2)));
}

TEST(CycloArithmetic, LevelsNeverMix) {
  EXPECT_THROW((void)(CycloElement::uniformizer(3, 1) + CycloElement::uniformizer(3, 2)), std::invalid_argument);
}
