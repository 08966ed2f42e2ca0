#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "ssrank/padic.hpp"
#include "ssrank/valuation.hpp"

namespace ssrank::cyclo {

using padic::PadicNumber;

/// Coefficients low degree first.
using PadicPolynomial = std::vector<PadicNumber>;

/// [Q_p(zeta_{p^n}) : Q_p] = p^(n-1)(p-1); 1 at level 0.
std::int64_t field_degree(std::uint32_t p, int level);

/// Coefficients of Phi_{p^n}(1+X) = ((1+X)^{p^n}-1)/((1+X)^{p^{n-1}}-1), monic of
/// degree p^(n-1)(p-1). Requires n >= 1.
PadicPolynomial phi_poly(std::uint32_t p, int n, int precision = padic::kDefaultPrecision);

/// Coefficients of (1+X)^M modulo p^precision, degrees 0..M.
PadicPolynomial binomial_poly(std::uint32_t p, std::int64_t exponent, int precision);

/// An element of Q_p(zeta_{p^n}) written in the power basis of the uniformizer
/// eps_n = zeta_{p^n} - 1, reduced modulo Phi_{p^n}(1+X).
///
/// All coefficients share one absolute precision N. Internally the element is
/// p^shift * sum(digit_i eps^i) with digits modulo p^(N - shift). Values are
/// immutable; levels never mix implicitly.
class CycloElement {
 public:
  /// Exact zero at the given level.
  static CycloElement zero(std::uint32_t p, int level);
  static CycloElement zero_to_precision(std::uint32_t p, int level, int precision);
  static CycloElement constant(const PadicNumber& c, int level);
  /// sum c_i eps^i, reduced modulo Phi_{p^n}(1+X); any length is accepted.
  static CycloElement from_coefficients(std::uint32_t p, int level, const PadicPolynomial& coefficients);
  /// sum r_i eps^i with integer residues r_i known modulo p^precision.
  static CycloElement from_residues(std::uint32_t p, int level, int precision, std::vector<std::uint64_t> residues);
  /// eps_n itself.
  static CycloElement uniformizer(std::uint32_t p, int level, int precision = padic::kDefaultPrecision);

  CycloElement() = default;

  std::uint32_t prime() const { return prime_; }
  int level() const { return level_; }
  std::int64_t degree() const { return field_degree(prime_, level_); }
  int precision() const { return precision_; }
  bool is_exact_zero() const { return state_ == State::exact_zero; }
  bool is_zero() const { return state_ != State::nonzero; }

  /// Coefficient of eps^i, 0 <= i < degree().
  PadicNumber coefficient(std::int64_t i) const;
  PadicPolynomial coefficients() const;

  /// min_i (val_p(a_i) + i/d); the minimizing index is unique.
  Valuation valuation() const;

  CycloElement operator-() const;
  friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
  friend CycloElement operator*(const PadicNumber& c, const CycloElement& x);
  friend CycloElement operator/(const CycloElement& a, const CycloElement& b) { return a * b.inverse(); }

  /// Multiplication by p^k (exact).
  CycloElement shifted(int k) const;
  /// Multiplication by eps^k, k >= 0 (exact).
  CycloElement times_uniformizer_power(std::int64_t k) const;
  /// Multiplicative inverse. Throws std::domain_error unless the valuation is
  /// determined.
  CycloElement inverse() const;
  /// The same element viewed at level n >= level(), via zeta_{p^n}^{p^(n-m)} = zeta_{p^m}.
  CycloElement lift_to(int level) const;
  CycloElement reduce_precision(int new_precision) const;

  /// Difference vanishes at the common precision (exact zeros compare equal).
  bool equals_at_precision(const CycloElement& other) const;

  std::string to_string() const;

 private:
  enum class State : std::uint8_t { nonzero, zero_to_precision, exact_zero };
  using Digits = std::vector<std::uint64_t>;

  static CycloElement build(std::uint32_t p, int level, int shift, int precision, Digits digits);
  int relative_digits() const { return precision_ - shift_; }
  int shift_lower_bound() const;

  std::uint32_t prime_ = 3;
  int level_ = 0;
  State state_ = State::exact_zero;
  int shift_ = 0;
  int precision_ = padic::kExactPrecision;
  Digits digits_;
};

/// eps_m = zeta_{p^m} - 1 embedded at level n >= m (eps_0 = 0).
CycloElement epsilon_at(std::uint32_t p, int m, int n, int precision = padic::kDefaultPrecision);

/// Phi_{p^k}(zeta_{p^n}): exact zero when k = n, eps_{n-k}/eps_{n-k+1} when
/// k < n, and p when k > n.
CycloElement phi_at_zeta(std::uint32_t p, int k, int n, int precision = padic::kDefaultPrecision);

/// Exact rational valuation of x.
inline Valuation cyclo_val(const CycloElement& x) { return x.valuation(); }

std::ostream& operator<<(std::ostream& os, const CycloElement& x);

}  // namespace ssrank::cyclo
