// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssrank/criterion.hpp"
#include "ssrank/iwasawa.hpp"
#include "ssrank/logmat.hpp"
#include "test_support.hpp"

using namespace ssrank;
using namespace ssrank::logmat;
using namespace testing_support;
using criterion::VerdictKind;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Rational delta_sum(std::int64_t p, int n) {
  Rational v(0);
  std::int64_t pj = 1;
  for (int j = 1; j <= n - 1; ++j) {
    pj *= p;
    if (j % 2 == 1) v += Rational(1, pj);
  }
  return v;
}

std::int64_t ipow(std::int64_t p, int k) {
  std::int64_t r = 1;
  while (k-- > 0) r *= p;
  return r;
}

std::vector<std::uint64_t> binomial_row(int n) {
  std::vector<std::uint64_t> row(n + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = i; k >= 1; --k) row[k] += row[k - 1];
  return row;
}

Outcome closed_form_agreement() {
  Outcome o;
  int checked = 0;
  for (std::uint32_t p : {3u, 5u}) {
    for (std::size_t h : {1u, 2u}) {
      for (int seed = 0; seed < 50; ++seed) {
        std::mt19937_64 rng(1000 * p + 100 * h + seed);
        const auto data = single_prime(p, 1, static_cast<int>(h), antidiag(rng, p, h, false));
        const auto [b1, b2] = antidiag_blocks(data, 0);
        for (int n = 1; n <= 6; ++n) {
          const auto cf = closed_form_h_antidiag(b1, b2, n, 20);
          const auto direct = evaluate_hvn(data, 0, n);
          for (std::size_t i = 0; i < direct.rows(); ++i) {
            for (std::size_t j = 0; j < direct.cols(); ++j) {
              const auto& a = cf.h(i, j);
              const auto& b = direct(i, j);
              const bool ok = a.is_exact_zero() == b.is_exact_zero() && a.equals_at_precision(b) &&
                              (a.is_exact_zero() || a.precision() == b.precision());
              if (!ok) {
                std::ostringstream os;
                os << "p=" << p << " h=" << h << " seed=" << seed << " n=" << n << " entry (" << i << "," << j << ")";
                o.fail(os.str());
              }
            }
          }
          ++checked;
        }
      }
    }
  }
  o.detail = o.pass ? std::to_string(checked) + " (config, n) pairs" : o.detail;
  return o;
}

Outcome lower_half_vanishing() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::size_t entries = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int g = trial % 2 ? 2 : 1;
    const int f = 3 - g;
    const auto data = single_prime(3, g, f, random_unit_matrix(rng, 3, 4));
    for (int n = 1; n <= 4; ++n) {
      const auto report = lower_half_vanishing_check(data, 0, n);
      entries += report.entries_checked;
      if (!report.passed()) o.fail("trial " + std::to_string(trial) + " n=" + std::to_string(n));
      const auto direct = evaluate_hvn(data, 0, n);
      for (std::size_t i = 2; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          if (!direct(i, j).is_exact_zero()) o.fail("trial " + std::to_string(trial) + " entry not exactly zero");
    }
  }
  if (o.pass) o.detail = std::to_string(entries) + " bottom-half entries exactly zero";
  return o;
}

Outcome delta_valuation() {
  Outcome o;
  for (std::uint32_t p : {3u, 5u}) {
    for (int n = 1; n <= 8; ++n) {
      const auto v = delta_n(p, n, 20).valuation();
      const Rational expected = delta_sum(p, n);
      if (v != Valuation::exact(expected)) o.fail("p=" + std::to_string(p) + " n=" + std::to_string(n) + ": " + v.to_string());
      if (!(expected < Rational(1))) o.fail("sum not below 1");
    }
  }
  if (o.pass) o.detail = "p in {3,5}, n <= 8";
  return o;
}

Outcome weierstrass_identity() {
  Outcome o;
  std::mt19937_64 rng(77);
  int evaluations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t p = trial % 2 ? 5 : 3;
    const int mu = static_cast<int>(rng() % 3);
    const std::int64_t lambda = static_cast<std::int64_t>(rng() % 6);
    const auto f = iwasawa::synthetic_series(p, mu, lambda, 3, rng, 20);
    for (int n = 1; n <= 5; ++n) {
      const std::int64_t d = ipow(p, n - 1) * (p - 1);
      if (d <= lambda) continue;
      const auto value = iwasawa::eval_at_character(f, iwasawa::Character::at_level(p, n)).value;
      const Valuation expected = Valuation::exact(Rational(mu) + Rational(lambda, d));
      if (value.valuation() != expected) {
        o.fail("trial " + std::to_string(trial) + " n=" + std::to_string(n) + ": " + value.valuation().to_string() +
               " vs " + expected.to_string());
      }
      ++evaluations;
    }
  }
  if (o.pass) o.detail = std::to_string(evaluations) + " evaluations";
  return o;
}

Outcome only_jn_and_key_sum() {
  Outcome o;
  for (std::uint32_t p : {3u, 5u}) {
    const auto data = elliptic_ap(p, 0);
    criterion::ColemanFamily family;
    family.provenance = "unit constants";
    std::int64_t c = 1;
    for (const auto& j : criterion::enumerate_index_tuples(data)) {
      family.entries.emplace(j, iwasawa::IwasawaSeries::from_integers(p, {c}));
      c = c % (p - 1) + 1;
    }
    family = criterion::normalize_family(data, family);
    for (int n = 1; n <= 6; ++n) {
      const auto ks = criterion::key_sum(data, family, n);
      if (ks.verdict.kind != VerdictKind::nonzero_at_n) o.fail("p=" + std::to_string(p) + " key_sum at n=" + std::to_string(n));
      const auto hn = evaluate_hn(data, n);
      const auto jn = tuple_jn(data, n);
      for (const auto& j : criterion::enumerate_index_tuples(data)) {
        const auto m = minor_at(hn, tuple_i0(data), j);
        if (j == jn ? m.is_exact_zero() : !m.is_exact_zero()) {
          o.fail("p=" + std::to_string(p) + " n=" + std::to_string(n) + " J=" + j.to_string());
        }
      }
    }
  }
  if (o.pass) o.detail = "p in {3,5}, n <= 6";
  return o;
}

Outcome dominance_soundness() {
  Outcome o;
  std::mt19937_64 rng(606);
  int confirmed = 0;
  int max_n0 = 0;
  for (int trial = 0; trial < 20; ++trial) {
    FrobeniusData data = [&] {
      if (trial % 4 == 3) {
        return FrobeniusData::create(3, 1, {PrimeBlock{"a", 1, antidiag(rng, 3, 1, true)}, PrimeBlock{"b", 1, antidiag(rng, 3, 1, true)}});
      }
      if (trial % 4 == 2) return single_prime(3, 1, 2, antidiag(rng, 3, 2, true));
      return elliptic_ap(3, 3 * (static_cast<std::int64_t>(rng() % 21) - 10));
    }();
    const int mu = static_cast<int>(rng() % 2);
    std::vector<criterion::SyntheticSpec> specs;
    for (const auto& j : criterion::enumerate_index_tuples(data)) {
      specs.push_back({j, mu, static_cast<std::int64_t>(rng() % 5)});
    }
    const auto family = criterion::synthetic_family(data, specs, 5000 + trial);
    const auto cert = criterion::dominance_certificate(data, family, 1);
    const std::string tag = "trial " + std::to_string(trial);
    if (cert.kind != VerdictKind::certified_for_all_large_n || !cert.threshold) {
      o.fail(tag + ": not certified (" + cert.diagnostic + ")");
      continue;
    }
    const int n0 = cert.threshold->n0;
    max_n0 = std::max(max_n0, n0);
    const int top = std::max(n0, cert.threshold->n_tail) + 1;
    for (int n = n0; n <= top; ++n) {
      const auto at = criterion::dominance_at(data, family, n);
      const auto ks = criterion::key_sum(data, family, n);
      if (at.kind != VerdictKind::nonzero_at_n || ks.verdict.kind != VerdictKind::nonzero_at_n ||
          ks.sum.valuation() != at.witness.dominant_valuation) {
        o.fail(tag + ": level " + std::to_string(n) + " not confirmed by key_sum");
      } else {
        ++confirmed;
      }
    }
    if (n0 > 1) {
      const auto before = criterion::dominance_at(data, family, n0 - 1);
      if (before.kind == VerdictKind::nonzero_at_n && before.witness.dominant == tuple_jn(data, n0 - 1)) {
        o.fail(tag + ": N0 = " + std::to_string(n0) + " is not minimal");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(confirmed) + " levels confirmed, max N0 = " + std::to_string(max_n0);
  return o;
}

Outcome structural_checks() {
  Outcome o;
  std::mt19937_64 rng(707);
  int shapes = 0;
  for (int g = 1; g <= 2; ++g) {
    for (int primes = 1; primes <= 2; ++primes) {
      for (int f1 = 1; f1 <= 2; ++f1) {
        for (int f2 = 1; f2 <= (primes == 2 ? 2 : 1); ++f2) {
          for (std::uint32_t p : {3u, 5u}) {
            std::vector<PrimeBlock> blocks{{"a", f1, random_unit_matrix(rng, p, 2 * g * f1)}};
            if (primes == 2) blocks.push_back({"b", f2, random_unit_matrix(rng, p, 2 * g * f2)});
            const auto data = FrobeniusData::create(p, g, blocks);
            for (std::size_t v = 0; v < data.num_primes(); ++v) {
              const Valuation expected = Valuation::exact(Rational(-g * data.block(v).f));
              if (data.det_cphi_valuation(v) != expected ||
                  padic::val_p(padic_determinant(build_cphi(data, v))) != expected) {
                o.fail("det C_phi valuation at g=" + std::to_string(g) + " f=" + std::to_string(data.block(v).f));
              }
            }
            std::vector<std::uint64_t> conv{1};
            for (const auto& b : blocks) {
              const auto row = binomial_row(2 * g * b.f);
              std::vector<std::uint64_t> next(conv.size() + row.size() - 1, 0);
              for (std::size_t i = 0; i < conv.size(); ++i)
                for (std::size_t j = 0; j < row.size(); ++j) next[i + j] += conv[i] * row[j];
              conv = next;
            }
            const auto target = static_cast<std::size_t>(g * data.degree());
            const auto tuples = criterion::enumerate_index_tuples(data);
            if (tuples.size() != conv[target]) {
              o.fail("tuple count " + std::to_string(tuples.size()) + " vs " + std::to_string(conv[target]));
            }
            ++shapes;
          }
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(shapes) + " shapes";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed form equals direct product", closed_form_agreement},
      {"lower half vanishes exactly", lower_half_vanishing},
      {"delta_n valuation sum and bound", delta_valuation},
      {"Weierstrass valuation identity", weierstrass_identity},
      {"only J_n survives, key sum nonzero", only_jn_and_key_sum},
      {"dominance soundness and minimal N0", dominance_soundness},
      {"det C_phi valuation and tuple counts", structural_checks},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (i == 0 && secs >= 60.0) o.fail("runtime " + std::to_string(secs) + " s exceeds 60 s");
    std::printf("%s criterion %zu: %s (%s) [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
