#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "ssrank/valuation.hpp"

namespace ssrank::padic {

/// Working precision used when a run does not override it.
inline constexpr int kDefaultPrecision = 20;

/// Precision reported by values that are zero by construction.
inline constexpr int kExactPrecision = 1 << 28;

/// Throws std::invalid_argument unless p is an odd prime.
void require_odd_prime(std::uint32_t p);

/// Largest absolute precision representable for prime p.
int max_precision(std::uint32_t p);

/// An element of Q_p known modulo p^N (absolute precision N).
///
/// Nonzero values are stored as p^v * u with u a unit residue modulo p^(N - v).
/// A value whose known digits all vanish is "zero to precision N"; only values
/// built as exact zero (or produced from one by multiplication) are exact.
/// Instances are immutable.
class PadicNumber {
 public:
  /// Exact zero.
  static PadicNumber zero(std::uint32_t p);
  static PadicNumber zero_to_precision(std::uint32_t p, int precision);
  static PadicNumber from_integer(std::uint32_t p, std::int64_t value, int precision);
  /// Parses an optionally signed decimal integer of any length.
  static PadicNumber from_decimal(std::uint32_t p, std::string_view text, int precision);
  /// p^valuation * unit, where unit may carry further factors of p.
  static PadicNumber from_parts(std::uint32_t p, int valuation, std::uint64_t unit, int precision);
  static PadicNumber p_power(std::uint32_t p, int k, int precision);
  /// Inverse of `u * p^v (mod p^N)` text form; also accepts "0" and "0 (mod p^N)".
  static PadicNumber parse(std::uint32_t p, std::string_view text);

  PadicNumber() = default;

  std::uint32_t prime() const { return prime_; }
  int precision() const { return precision_; }
  bool is_exact_zero() const { return state_ == State::exact_zero; }
  /// Zero at the known precision (exactly zero or all known digits zero).
  bool is_zero() const { return state_ != State::nonzero; }
  bool is_nonzero() const { return state_ == State::nonzero; }

  /// Exact valuation for nonzero values, `at_least(N)` when all known digits
  /// vanish, infinite for exact zero.
  Valuation valuation() const;
  /// Integer lower bound on the valuation (N for zero-to-precision values).
  int valuation_lower_bound() const;
  /// Unit part residue modulo p^(N - v); 0 for zero values.
  std::uint64_t unit() const { return unit_; }
  bool is_unit() const { return is_nonzero() && valuation_ == 0; }

  /// Residue of the value modulo p^precision; requires valuation >= 0.
  std::uint64_t residue() const;
  /// Signed representative in (-p^N/2, p^N/2]; requires valuation >= 0.
  std::int64_t centered_integer() const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);

  /// Multiplication by p^k; exact, shifts both valuation and precision.
  PadicNumber shifted(int k) const;
  /// The same value known to a smaller precision.
  PadicNumber reduce_precision(int new_precision) const;
  /// Multiplicative inverse of a unit. Throws std::domain_error otherwise.
  PadicNumber invert_unit() const;
  /// Multiplicative inverse of any determined nonzero value.
  PadicNumber inverse() const;

  /// Congruence at the smaller of the two precisions.
  bool equals_at_precision(const PadicNumber& other) const;

  /// "u * p^v (mod p^N)".
  std::string to_string() const;

 private:
  enum class State : std::uint8_t { nonzero, zero_to_precision, exact_zero };
  static PadicNumber normalized(std::uint32_t p, int valuation, std::uint64_t residue, int precision);

  std::uint32_t prime_ = 3;
  State state_ = State::exact_zero;
  int valuation_ = 0;
  int precision_ = kExactPrecision;
  std::uint64_t unit_ = 0;
};

/// val_p as a free function.
Valuation val_p(const PadicNumber& x);

std::ostream& operator<<(std::ostream& os, const PadicNumber& x);

}  // namespace ssrank::padic
