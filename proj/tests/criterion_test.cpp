#include "ssrank/criterion.hpp"

#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

using ssrank::Rational;
using ssrank::Valuation;
using ssrank::cyclo::CycloElement;
using ssrank::cyclo::epsilon_at;
using ssrank::iwasawa::IwasawaSeries;
using ssrank::logmat::evaluate_hn;
using ssrank::logmat::IndexTuple;
using ssrank::logmat::minor_at;
using ssrank::logmat::tuple_i0;
using ssrank::logmat::tuple_i1;
using ssrank::logmat::tuple_jn;
using ssrank::padic::PadicNumber;
using namespace ssrank::criterion;
using namespace testing_support;

namespace {

std::int64_t choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ColemanFamily constant_family(const FrobeniusData& d, std::int64_t c0, std::int64_t c1) {
  ColemanFamily fam;
  fam.provenance = "test";
  fam.entries.emplace(tuple_i0(d), IwasawaSeries::from_integers(d.prime(), {c0}));
  fam.entries.emplace(tuple_i1(d), IwasawaSeries::from_integers(d.prime(), {c1}));
  return normalize_family(d, fam);
}

std::vector<SyntheticSpec> all_specs(const FrobeniusData& d, std::mt19937_64& rng, int mu, std::int64_t max_lambda) {
  std::vector<SyntheticSpec> out;
  for (const auto& j : enumerate_index_tuples(d)) {
    out.push_back({j, mu, static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_lambda + 1))});
  }
  return out;
}

Rational delta_valuation(std::int64_t p, int n) {
  Rational v(0);
  std::int64_t pj = 1;
  for (int j = 1; j <= n - 1; ++j) {
    pj *= p;
    if (j % 2 == 1) v += Rational(1, pj);
  }
  return v;
}

}  // namespace

TEST(EnumerateIndexTuples, Examples) {
  auto d = elliptic_ap(3, 0);
  auto t = enumerate_index_tuples(d);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].to_string(), "({1})");
  EXPECT_EQ(t[1].to_string(), "({2})");
  auto id = int_matrix(3, {{1, 0}, {0, 1}});
  auto two = FrobeniusData::create(3, 1, {{"a", 1, id}, {"b", 1, id}});
  auto t2 = enumerate_index_tuples(two);
  EXPECT_EQ(t2.size(), 6u);
  EXPECT_TRUE(std::is_sorted(t2.begin(), t2.end()));
  EXPECT_NE(std::find(t2.begin(), t2.end(), tuple_i0(two)), t2.end());
  EXPECT_NE(std::find(t2.begin(), t2.end(), tuple_i1(two)), t2.end());
}

TEST(EnumerateIndexTuples, CountsMatchBinomialConvolution) {
  std::mt19937_64 rng(2);
  for (int g = 1; g <= 2; ++g) {
    for (int f1 = 1; f1 <= 2; ++f1) {
      for (int f2 = 0; f2 <= 2; ++f2) {
        std::vector<ssrank::logmat::PrimeBlock> blocks{{"a", f1, random_unit_matrix(rng, 3, 2 * g * f1)}};
        if (f2 > 0) blocks.push_back({"b", f2, random_unit_matrix(rng, 3, 2 * g * f2)});
        auto d = FrobeniusData::create(3, g, blocks);
        const std::int64_t target = g * (f1 + f2);
        std::int64_t expected = 0;
        for (std::int64_t k = 0; k <= target; ++k) expected += choose(2 * g * f1, k) * choose(2 * g * f2, target - k);
        EXPECT_EQ(static_cast<std::int64_t>(enumerate_index_tuples(d).size()), expected) << g << f1 << f2;
      }
    }
  }
}

TEST(ColemanFamilyShape, MissingTuplesAreFlagged) {
  auto d = elliptic_ap(3, 0);
  ColemanFamily fam;
  fam.entries.emplace(tuple_i0(d), IwasawaSeries::from_integers(3, {1}));
  auto n = normalize_family(d, fam);
  ASSERT_EQ(n.missing.size(), 1u);
  EXPECT_EQ(n.missing[0], tuple_i1(d));
  EXPECT_TRUE(n.at(tuple_i1(d)).is_exact_zero());
  ColemanFamily bad;
  bad.entries.emplace(IndexTuple{{{1, 2}}}, IwasawaSeries::from_integers(3, {1}));
  EXPECT_THROW(normalize_family(d, bad), std::invalid_argument);
}

TEST(KeySum, EllipticExamples) {
  auto d = elliptic_ap(3, 0);
  auto fam = constant_family(d, 1, 1);
  auto k1 = key_sum(d, fam, 1);
  EXPECT_EQ(k1.verdict.kind, VerdictKind::nonzero_at_n);
  EXPECT_TRUE(k1.sum.equals_at_precision(CycloElement::constant(PadicNumber::from_integer(3, 1, 20), 1)));
  auto k2 = key_sum(d, fam, 2);
  EXPECT_EQ(k2.verdict.kind, VerdictKind::nonzero_at_n);
  EXPECT_EQ(k2.sum.valuation(), Valuation::exact(Rational(1, 3)));
  EXPECT_TRUE(k2.sum.equals_at_precision(-(epsilon_at(3, 1, 2) / epsilon_at(3, 2, 2))));
  ColemanFamily zero;
  auto kz = key_sum(d, normalize_family(d, zero), 3);
  EXPECT_EQ(kz.verdict.kind, VerdictKind::zero_at_n);
  EXPECT_TRUE(kz.sum.is_exact_zero());
}

TEST(KeySum, CancellationToPrecisionIsIndeterminate) {
  // At n = 1 only J = I_1 has a nonzero minor; its series cancels to precision.
  auto d = elliptic_ap(3, 0);
  ColemanFamily fam;
  auto c = IwasawaSeries::from_integers(3, {5});
  fam.entries.emplace(tuple_i1(d), c - c);
  auto k = key_sum(d, normalize_family(d, fam), 1);
  EXPECT_EQ(k.verdict.kind, VerdictKind::indeterminate);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_frobenius(elliptic_ap(3, 0), 0), Classification::anti_diagonal);
  EXPECT_EQ(classify_frobenius(elliptic_ap(3, 3), 0), Classification::anti_diagonal_mod_p);
  EXPECT_EQ(classify_frobenius(single_prime(3, 1, 1, int_matrix(3, {{1, 1}, {1, 2}})), 0), Classification::general);
}

TEST(Gl2Frobenius, Examples) {
  auto zero = PadicNumber::zero(3), minus_one = PadicNumber::from_integer(3, -1, 20);
  auto b = gl2_frobenius(3, zero, minus_one, 1);
  EXPECT_TRUE(b.C(0, 0).is_exact_zero());
  EXPECT_EQ(b.C(0, 1).centered_integer(), -1);
  EXPECT_EQ(b.C(1, 0).centered_integer(), 1);
  EXPECT_TRUE(b.C(1, 1).is_exact_zero());
  auto d = FrobeniusData::create(3, 1, {gl2_frobenius(3, PadicNumber::from_integer(3, 3, 20), minus_one, 1)});
  EXPECT_EQ(classify_frobenius(d, 0), Classification::anti_diagonal_mod_p);
  EXPECT_THROW(gl2_frobenius(3, PadicNumber::from_integer(3, 1, 20), minus_one, 1), std::invalid_argument);
  EXPECT_THROW(gl2_frobenius(3, zero, PadicNumber::from_integer(3, 3, 20), 1), std::invalid_argument);
  auto big = FrobeniusData::create(3, 1, {gl2_frobenius(3, PadicNumber::from_integer(3, 6, 20), minus_one, 2)});
  EXPECT_EQ(big.size(0), 4u);
  EXPECT_EQ(classify_frobenius(big, 0), Classification::anti_diagonal_mod_p);
}

TEST(Dominance, AntiDiagonalUnitsCertifiedFromOne) {
  auto d = elliptic_ap(3, 0);
  auto v = dominance_certificate(d, constant_family(d, 1, 2), 3);
  EXPECT_EQ(v.kind, VerdictKind::certified_for_all_large_n);
  ASSERT_TRUE(v.threshold.has_value());
  EXPECT_EQ(v.threshold->n0, 1);
}

TEST(Dominance, ModPCertifiedWithComputedThreshold) {
  auto d = elliptic_ap(3, 3);
  std::mt19937_64 rng(9);
  auto fam = synthetic_family(d, {{tuple_i0(d), 0, 2}, {tuple_i1(d), 0, 0}}, 17);
  auto v = dominance_certificate(d, fam, 4);
  ASSERT_EQ(v.kind, VerdictKind::certified_for_all_large_n) << v.diagnostic;
  const int n0 = v.threshold->n0;
  EXPECT_GE(n0, 1);
  for (int n = n0; n <= 5; ++n) {
    auto at = dominance_at(d, fam, n);
    EXPECT_EQ(at.kind, VerdictKind::nonzero_at_n);
    EXPECT_EQ(at.witness.dominant, tuple_jn(d, n));
  }
  if (n0 > 1) {
    auto before = dominance_at(d, fam, n0 - 1);
    EXPECT_FALSE(before.kind == VerdictKind::nonzero_at_n && before.witness.dominant == tuple_jn(d, n0 - 1));
  }
}

TEST(Dominance, UnequalMuIsIndeterminate) {
  auto d = elliptic_ap(3, 0);
  auto v = dominance_certificate(d, constant_family(d, 1, 3), 2);
  EXPECT_EQ(v.kind, VerdictKind::indeterminate);
  EXPECT_NE(v.diagnostic.find("mu-invariant hypothesis fails"), std::string::npos);
  auto z = dominance_certificate(d, constant_family(d, 1, 0), 2);
  EXPECT_EQ(z.kind, VerdictKind::indeterminate);
  EXPECT_NE(z.diagnostic.find("is zero"), std::string::npos);
  auto g = single_prime(3, 1, 1, int_matrix(3, {{1, 1}, {1, 2}}));
  EXPECT_EQ(dominance_certificate(g, constant_family(g, 1, 1), 1).kind, VerdictKind::indeterminate);
}

TEST(CriterionProperties, OnlyJnSurvivesForAntiDiagonal) {
  std::mt19937_64 rng(51);
  for (int iter = 0; iter < 4; ++iter) {
    std::vector<ssrank::logmat::PrimeBlock> blocks{{"a", 1, antidiag(rng, 3, 1, false)}};
    if (iter % 2) blocks.push_back({"b", 1, antidiag(rng, 3, 1, false)});
    else blocks[0] = {"a", 2, antidiag(rng, 3, 2, false)};
    auto d = FrobeniusData::create(3, 1, blocks);
    for (int n = 1; n <= 4; ++n) {
      auto hn = evaluate_hn(d, n);
      for (const auto& j : enumerate_index_tuples(d)) {
        auto m = minor_at(hn, tuple_i0(d), j);
        if (j == tuple_jn(d, n)) {
          EXPECT_EQ(m.valuation(), Valuation::exact(Rational(d.degree()) * delta_valuation(3, n)));
        } else {
          EXPECT_TRUE(m.is_exact_zero()) << j.to_string() << " n=" << n;
        }
      }
    }
  }
}

TEST(CriterionProperties, ModPMinorValuationsAndGap) {
  std::mt19937_64 rng(52);
  for (int iter = 0; iter < 6; ++iter) {
    const std::uint32_t p = iter % 3 == 2 ? 5 : 3;
    std::vector<ssrank::logmat::PrimeBlock> blocks{{"a", 1, antidiag(rng, p, 1, true)}};
    if (iter % 2) blocks.push_back({"b", 1, antidiag(rng, p, 1, true)});
    else blocks[0] = {"a", 2, antidiag(rng, p, 2, true)};
    auto d = FrobeniusData::create(p, 1, blocks);
    for (int n = 1; n <= (p == 3 ? 4 : 3); ++n) {
      auto hn = evaluate_hn(d, n);
      const Rational vd = delta_valuation(p, n);
      auto mjn = minor_at(hn, tuple_i0(d), tuple_jn(d, n));
      ASSERT_EQ(mjn.valuation(), Valuation::exact(Rational(d.degree()) * vd));
      EXPECT_LT(vd, Rational(1));
      EXPECT_LT(vd, Rational(static_cast<std::int64_t>(p), static_cast<std::int64_t>(p * p - 1)));
      for (const auto& j : enumerate_index_tuples(d)) {
        if (j == tuple_jn(d, n)) continue;
        auto m = minor_at(hn, tuple_i0(d), j);
        if (m.is_exact_zero()) continue;
        auto v = m.valuation();
        if (!v.is_exact()) continue;
        EXPECT_GE(v.value() - mjn.valuation().value(), Rational(1) - vd) << j.to_string() << " n=" << n;
        EXPECT_GE(v.value() - mjn.valuation().value(), gap_constant(p));
      }
    }
  }
}

TEST(CriterionProperties, DominanceNeverContradictsKeySum) {
  std::mt19937_64 rng(53);
  for (int iter = 0; iter < 8; ++iter) {
    auto d = elliptic_ap(3, 3 * static_cast<std::int64_t>(rng() % 20) - 30);
    auto fam = synthetic_family(d, all_specs(d, rng, static_cast<int>(iter % 2), 3), 100 + iter);
    for (int n = 1; n <= 4; ++n) {
      auto dom = dominance_at(d, fam, n);
      if (dom.kind != VerdictKind::nonzero_at_n) continue;
      auto ks = key_sum(d, fam, n);
      EXPECT_EQ(ks.verdict.kind, VerdictKind::nonzero_at_n);
      EXPECT_EQ(ks.sum.valuation(), dom.witness.dominant_valuation);
    }
  }
}
