#include "ssrank/criterion.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ssrank::criterion {

namespace {

using logmat::EvaluatedHn;

void subsets_of_size(int universe, std::size_t k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= universe; ++i) {
    cur.push_back(i);
    subsets_of_size(universe, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// For an at_least bound the comparison is against the bound itself.
bool dominates(const Valuation& v, const Valuation& other) {
  return other.is_infinite() || v.value() < other.value();
}

Witness summarize(std::vector<TermReport> terms) {
  Witness w;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!terms[i].total.is_exact()) continue;
    if (!best || terms[i].total.value() < terms[*best].total.value()) best = i;
  }
  if (best) {
    bool strict = true;
    std::optional<Valuation> runner;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i == *best) continue;
      const auto& t = terms[i].total;
      if (!dominates(terms[*best].total, t)) strict = false;
      if (!t.is_infinite() && (!runner || t.value() < runner->value())) runner = t;
    }
    w.dominant_valuation = terms[*best].total;
    if (runner) w.runner_up = *runner;
    if (strict) w.dominant = terms[*best].tuple;
  }
  w.terms = std::move(terms);
  return w;
}

struct Terms {
  std::vector<TermReport> reports;
  std::vector<CycloElement> values;
};

Terms compute_terms(const FrobeniusData& data, const ColemanFamily& coleman, int n) {
  const EvaluatedHn hn = logmat::evaluate_hn(data, n);
  const IndexTuple i0 = logmat::tuple_i0(data);
  const auto theta = iwasawa::Character::at_level(data.prime(), n);
  const std::int64_t d = cyclo::field_degree(data.prime(), n);
  Terms out;
  for (const auto& j : enumerate_index_tuples(data)) {
    const CycloElement minor = logmat::minor_at(hn, i0, j);
    const auto& series = coleman.at(j);
    const CycloElement col = iwasawa::eval_at_character(series, theta).value;
    const CycloElement term = minor * col;
    TermReport r;
    r.tuple = j;
    r.minor = minor.valuation();
    r.coleman = col.valuation();
    r.total = term.valuation();
    if (!series.is_exact_zero()) {
      const auto inv = iwasawa::newton_invariants(series);
      if (inv.certified && d > inv.lambda) r.predicted_coleman = Rational(inv.mu) + Rational(inv.lambda, d);
    }
    out.reports.push_back(std::move(r));
    out.values.push_back(term);
  }
  return out;
}

void require_level(int n) {
  if (n < 1) throw std::invalid_argument("level n must be at least 1");
}

Verdict indeterminate(int n, std::string why) {
  Verdict v;
  v.n = n;
  v.diagnostic = std::move(why);
  return v;
}

}  // namespace

std::vector<IndexTuple> enumerate_index_tuples(const FrobeniusData& data) {
  const auto target = static_cast<std::size_t>(data.g() * data.degree());
  std::vector<IndexTuple> out;
  IndexTuple cur;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t used) {
    if (v == data.num_primes()) {
      if (used == target) out.push_back(cur);
      return;
    }
    const auto side = static_cast<int>(data.size(v));
    for (std::size_t k = 0; k <= data.size(v) && used + k <= target; ++k) {
      std::vector<std::vector<int>> subs;
      std::vector<int> tmp;
      subsets_of_size(side, k, 1, tmp, subs);
      for (auto& s : subs) {
        cur.parts.push_back(std::move(s));
        rec(v + 1, used + k);
        cur.parts.pop_back();
      }
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

const IwasawaSeries& ColemanFamily::at(const IndexTuple& j) const {
  auto it = entries.find(j);
  if (it == entries.end()) throw std::out_of_range("no Coleman series for tuple " + j.to_string());
  return it->second;
}

ColemanFamily normalize_family(const FrobeniusData& data, ColemanFamily family) {
  for (const auto& [j, series] : family.entries) {
    logmat::validate_tuple(data, j);
    if (series.prime() != data.prime()) {
      throw std::invalid_argument("Coleman series for " + j.to_string() + " has the wrong prime");
    }
  }
  family.missing.clear();
  for (const auto& j : enumerate_index_tuples(data)) {
    if (family.entries.count(j) == 0) {
      family.entries.emplace(j, IwasawaSeries::zero(data.prime()));
      family.missing.push_back(j);
    }
  }
  return family;
}

ColemanFamily synthetic_family(const FrobeniusData& data, const std::vector<SyntheticSpec>& specs,
                               std::uint64_t seed, std::int64_t extra_degree) {
  std::mt19937_64 rng(seed);
  ColemanFamily family;
  family.provenance = "synthetic (seed " + std::to_string(seed) + ")";
  for (const auto& s : specs) {
    logmat::validate_tuple(data, s.tuple);
    family.entries.insert_or_assign(
        s.tuple, iwasawa::synthetic_series(data.prime(), s.mu, s.lambda, extra_degree, rng, data.precision()));
  }
  return normalize_family(data, std::move(family));
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::nonzero_at_n:
      return "nonzero-at-n";
    case VerdictKind::zero_at_n:
      return "zero-at-n";
    case VerdictKind::indeterminate:
      return "indeterminate";
    case VerdictKind::certified_for_all_large_n:
      return "certified-for-all-large-n";
  }
  return "indeterminate";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::anti_diagonal:
      return "anti-diagonal";
    case Classification::anti_diagonal_mod_p:
      return "anti-diagonal-mod-p";
    case Classification::general:
      return "general";
  }
  return "general";
}

KeySum key_sum(const FrobeniusData& data, const ColemanFamily& coleman, int n) {
  require_level(n);
  Terms terms = compute_terms(data, coleman, n);
  CycloElement sum = CycloElement::zero(data.prime(), n);
  for (const auto& t : terms.values) sum = sum + t;
  KeySum out{sum, {}};
  out.verdict.n = n;
  out.verdict.witness = summarize(std::move(terms.reports));
  if (sum.is_exact_zero()) {
    out.verdict.kind = VerdictKind::zero_at_n;
  } else if (sum.valuation().is_exact()) {
    out.verdict.kind = VerdictKind::nonzero_at_n;
  } else {
    out.verdict.diagnostic = "sum vanishes to precision " + std::to_string(sum.precision());
  }
  return out;
}

Classification classify_frobenius(const FrobeniusData& data, std::size_t v) {
  const auto& c = data.block(v).C;
  const std::size_t h = data.half_size(v);
  bool zero_diagonal = true, divisible_diagonal = true;
  logmat::PadicMatrix b1(h, h, PadicNumber::zero(data.prime())), b2 = b1;
  for (std::size_t i = 0; i < 2 * h; ++i) {
    for (std::size_t j = 0; j < 2 * h; ++j) {
      const auto& x = c(i, j);
      if ((i < h) == (j < h)) {
        if (!x.is_zero()) zero_diagonal = false;
        if (x.valuation_lower_bound() < 1) divisible_diagonal = false;
      } else if (i < h) {
        b1(i, j - h) = x;
      } else {
        b2(i - h, j) = x;
      }
    }
  }
  if (zero_diagonal) return Classification::anti_diagonal;
  if (divisible_diagonal && logmat::padic_determinant(b1).is_unit() && logmat::padic_determinant(b2).is_unit()) {
    return Classification::anti_diagonal_mod_p;
  }
  return Classification::general;
}

Verdict dominance_at(const FrobeniusData& data, const ColemanFamily& coleman, int n) {
  require_level(n);
  Verdict out;
  out.n = n;
  out.witness = summarize(compute_terms(data, coleman, n).reports);
  const bool all_zero = std::all_of(out.witness.terms.begin(), out.witness.terms.end(),
                                    [](const TermReport& t) { return t.total.is_infinite(); });
  if (all_zero) {
    out.kind = VerdictKind::zero_at_n;
  } else if (out.witness.dominant) {
    out.kind = VerdictKind::nonzero_at_n;
  } else {
    out.diagnostic = "no term has strictly minimal valuation";
  }
  return out;
}

Rational gap_constant(std::uint32_t p) {
  const auto q = static_cast<std::int64_t>(p);
  return Rational(1) - Rational(q, q * q - 1);
}

Verdict dominance_certificate(const FrobeniusData& data, const ColemanFamily& coleman, int n) {
  require_level(n);
  for (std::size_t v = 0; v < data.num_primes(); ++v) {
    if (classify_frobenius(data, v) == Classification::general) {
      return indeterminate(n, "block anti-diagonal mod p hypothesis fails at prime '" + data.block(v).label + "'");
    }
  }
  std::optional<std::pair<IndexTuple, int>> first_mu;
  std::int64_t lambda_max = 0, lambda_min = 0;
  bool any = false;
  std::map<IndexTuple, std::int64_t> lambdas;
  for (const auto& j : enumerate_index_tuples(data)) {
    const auto& series = coleman.at(j);
    if (series.is_exact_zero()) continue;
    const auto inv = iwasawa::newton_invariants(series);
    if (!inv.certified) {
      return indeterminate(n, "mu/lambda of col" + j.to_string() + " not certified at current precision");
    }
    if (!first_mu) {
      first_mu = {j, inv.mu};
    } else if (first_mu->second != inv.mu) {
      return indeterminate(n, "mu-invariant hypothesis fails: mu(col" + first_mu->first.to_string() +
                                  ") = " + std::to_string(first_mu->second) + " but mu(col" + j.to_string() +
                                  ") = " + std::to_string(inv.mu));
    }
    lambdas[j] = inv.lambda;
    lambda_max = any ? std::max(lambda_max, inv.lambda) : inv.lambda;
    lambda_min = any ? std::min(lambda_min, inv.lambda) : inv.lambda;
    any = true;
  }
  const IndexTuple i0 = logmat::tuple_i0(data), i1 = logmat::tuple_i1(data);
  for (const auto& j : {i0, i1}) {
    if (lambdas.count(j) == 0) return indeterminate(n, "col_{J_n} hypothesis fails: col" + j.to_string() + " is zero");
  }

  ThresholdDetails t;
  t.gap_constant = gap_constant(data.prime());
  t.lambda_spread = std::max<std::int64_t>(0, std::max(lambdas[i0], lambdas[i1]) - lambda_min);
  t.n_tail = 1;
  for (;;) {
    const std::int64_t d = cyclo::field_degree(data.prime(), t.n_tail);
    if (d > lambda_max && Rational(t.lambda_spread, d) < t.gap_constant) break;
    ++t.n_tail;
  }
  for (int m = 1; m <= t.n_tail; ++m) {
    const Verdict at = dominance_at(data, coleman, m);
    const bool ok = at.kind == VerdictKind::nonzero_at_n && at.witness.dominant == logmat::tuple_jn(data, m);
    if (!ok) t.failing_levels.push_back(m);
  }
  t.n0 = t.failing_levels.empty() ? 1 : t.failing_levels.back() + 1;

  Verdict out = dominance_at(data, coleman, n);
  out.kind = VerdictKind::certified_for_all_large_n;
  std::ostringstream os;
  os << "J_n term strictly dominant for all n >= " << t.n0 << " (gap >= " << ssrank::to_string(t.gap_constant)
     << ", lambda spread " << t.lambda_spread << ", exact checks up to n = " << t.n_tail << ")";
  out.diagnostic = os.str();
  out.threshold = t;
  return out;
}

logmat::PrimeBlock gl2_frobenius(std::uint32_t p, const PadicNumber& a, const PadicNumber& b, int f,
                                 const std::string& label) {
  padic::require_odd_prime(p);
  if (f < 1) throw std::invalid_argument("gl2_frobenius: f must be at least 1");
  if (a.is_nonzero() && a.valuation_lower_bound() < 1) {
    throw std::invalid_argument("gl2_frobenius: a must lie in pZ_p (val_p(a) = " + a.valuation().to_string() + ")");
  }
  if (!b.is_unit()) {
    throw std::invalid_argument("gl2_frobenius: b must be a p-adic unit (val_p(b) = " + b.valuation().to_string() + ")");
  }
  const auto size = static_cast<std::size_t>(f);
  logmat::PadicMatrix c(2 * size, 2 * size, PadicNumber::zero(p));
  const PadicNumber one = PadicNumber::p_power(p, 0, b.precision());
  for (std::size_t i = 0; i < size; ++i) {
    c(i, size + i) = b;
    c(size + i, i) = one;
    c(size + i, size + i) = a;
  }
  return {label, f, c};
}

}  // namespace ssrank::criterion
