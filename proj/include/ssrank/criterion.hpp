#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssrank/iwasawa.hpp"
#include "ssrank/logmat.hpp"

namespace ssrank::criterion {

using cyclo::CycloElement;
using iwasawa::IwasawaSeries;
using logmat::FrobeniusData;
using logmat::IndexTuple;
using padic::PadicNumber;

/// Every tuple (I_v) with I_v in {1..2 g f_v} and total size g[F:Q], in
/// lexicographic order.
std::vector<IndexTuple> enumerate_index_tuples(const FrobeniusData& data);

/// Coleman determinants col_J, one series per index tuple.
struct ColemanFamily {
  std::string provenance;
  std::map<IndexTuple, IwasawaSeries> entries;
  /// Tuples absent from the input; they hold the zero series.
  std::vector<IndexTuple> missing;

  const IwasawaSeries& at(const IndexTuple& j) const;
};

/// Checks every key against the shape of `data` (std::invalid_argument on a
/// foreign key) and fills absent tuples with the zero series.
ColemanFamily normalize_family(const FrobeniusData& data, ColemanFamily family);

struct SyntheticSpec {
  IndexTuple tuple;
  int mu = 0;
  std::int64_t lambda = 0;
};

/// Polynomials with the requested (mu, lambda) per tuple, from a seeded generator.
ColemanFamily synthetic_family(const FrobeniusData& data, const std::vector<SyntheticSpec>& specs,
                               std::uint64_t seed, std::int64_t extra_degree = 3);

enum class VerdictKind { nonzero_at_n, zero_at_n, indeterminate, certified_for_all_large_n };

std::string to_string(VerdictKind k);

struct TermReport {
  IndexTuple tuple;
  Valuation minor = Valuation::infinite();
  Valuation coleman = Valuation::infinite();
  Valuation total = Valuation::infinite();
  /// mu + lambda / (p^n - p^(n-1)) when the invariants are certified and apply.
  std::optional<Rational> predicted_coleman;
};

struct Witness {
  std::optional<IndexTuple> dominant;
  Valuation dominant_valuation = Valuation::infinite();
  Valuation runner_up = Valuation::infinite();
  std::vector<TermReport> terms;
};

struct ThresholdDetails {
  int n0 = 1;
  /// From here on the gap bound alone guarantees dominance of J_n.
  int n_tail = 1;
  Rational gap_constant{0};
  std::int64_t lambda_spread = 0;
  std::vector<int> failing_levels;
};

struct Verdict {
  VerdictKind kind = VerdictKind::indeterminate;
  int n = 0;
  Witness witness;
  std::optional<ThresholdDetails> threshold;
  std::string diagnostic;
};

struct KeySum {
  CycloElement sum;
  Verdict verdict;
};

/// S = sum_J minor(I_0, J) col_J(eps_n).
KeySum key_sum(const FrobeniusData& data, const ColemanFamily& coleman, int n);

enum class Classification { anti_diagonal, anti_diagonal_mod_p, general };

std::string to_string(Classification c);

Classification classify_frobenius(const FrobeniusData& data, std::size_t v);

/// Per-level analysis: nonzero-at-n when one term has strictly minimal exact
/// valuation, otherwise indeterminate. Valuations are exact, no hypotheses.
Verdict dominance_at(const FrobeniusData& data, const ColemanFamily& coleman, int n);

/// 1 - p/(p^2 - 1): lower bound on the valuation gap between the J_n minor and
/// every other minor for block anti-diagonal (mod p) data.
Rational gap_constant(std::uint32_t p);

/// Certified-for-all-large-n with N0 when the block and mu hypotheses hold,
/// otherwise indeterminate naming the failing hypothesis. The witness
/// describes level n.
Verdict dominance_certificate(const FrobeniusData& data, const ColemanFamily& coleman, int n);

/// C = (0 | b I_f ; I_f | a I_f) over the basis {x_i w} then {x_i phi(w)}.
logmat::PrimeBlock gl2_frobenius(std::uint32_t p, const PadicNumber& a, const PadicNumber& b, int f,
                                 const std::string& label = "v");

}  // namespace ssrank::criterion
