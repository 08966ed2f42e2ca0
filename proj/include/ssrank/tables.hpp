#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace ssrank::detail {

/// C(M, i) mod p^R for i = 0..min(M, upto).
std::vector<std::uint64_t> binomial_residues(std::uint32_t p, std::int64_t exponent, int relative_digits,
                                             std::int64_t upto);

/// Phi_{p^n}(1+X) modulo p^R.
struct PhiTable {
  std::int64_t degree = 0;
  /// All coefficients, low degree first; dense[degree] == 1.
  std::vector<std::uint64_t> dense;
  /// (index, coefficient) for the nonzero coefficients below the leading one.
  std::vector<std::pair<std::int64_t, std::uint64_t>> sparse_lower;
};

/// Shared, immutable, cached per (p, n, R). Thread-safe.
std::shared_ptr<const PhiTable> phi_table(std::uint32_t p, int n, int relative_digits);

}  // namespace ssrank::detail
