#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ssrank/cyclotomic.hpp"
#include "ssrank/padic.hpp"

namespace ssrank::iwasawa {

using cyclo::CycloElement;
using cyclo::PadicPolynomial;
using padic::PadicNumber;

/// A power series in X = gamma - 1 over Z_p (or Q_p for the logarithmic
/// matrices), known modulo X^D and modulo each coefficient's p-precision.
///
/// Polynomials are series known exactly in X; their D is the stored length.
class IwasawaSeries {
 public:
  static IwasawaSeries zero(std::uint32_t p);
  static IwasawaSeries polynomial(std::uint32_t p, PadicPolynomial coefficients);
  /// Known modulo X^truncation; missing coefficients below the truncation are zero.
  static IwasawaSeries truncated(std::uint32_t p, PadicPolynomial coefficients, std::int64_t truncation);
  static IwasawaSeries from_integers(std::uint32_t p, const std::vector<std::int64_t>& coefficients,
                                     int precision = padic::kDefaultPrecision);
  static IwasawaSeries constant(const PadicNumber& c);

  std::uint32_t prime() const { return prime_; }
  const PadicPolynomial& coefficients() const { return coefficients_; }
  PadicNumber coefficient(std::int64_t i) const;
  /// D: the series is known modulo X^D.
  std::int64_t x_truncation() const { return static_cast<std::int64_t>(coefficients_.size()); }
  bool is_polynomial() const { return polynomial_; }
  /// Smallest coefficient precision (kExactPrecision when every coefficient is exact zero).
  int p_precision() const;
  /// Every stored coefficient is zero at its precision.
  bool is_zero() const;
  bool is_exact_zero() const;

  friend IwasawaSeries operator+(const IwasawaSeries& a, const IwasawaSeries& b);
  friend IwasawaSeries operator-(const IwasawaSeries& a, const IwasawaSeries& b);
  friend IwasawaSeries operator*(const IwasawaSeries& a, const IwasawaSeries& b);
  friend IwasawaSeries operator*(const PadicNumber& c, const IwasawaSeries& f);
  IwasawaSeries operator-() const;

  /// Quotient by a monic polynomial when the remainder vanishes at precision.
  std::optional<IwasawaSeries> divide_exact(const PadicPolynomial& monic) const;

  std::string to_string() const;

 private:
  IwasawaSeries(std::uint32_t p, PadicPolynomial c, bool polynomial);
  std::uint32_t prime_ = 3;
  PadicPolynomial coefficients_;
  bool polynomial_ = true;
};

/// omega_n(X) = (1+X)^{p^n} - 1.
IwasawaSeries omega_poly(std::uint32_t p, int n, int precision = padic::kDefaultPrecision);

/// A character of Gamma of conductor p^(n+1), trivial on Delta. It sends the
/// fixed topological generator to zeta_{p^n}, so evaluation happens at eps_n.
class Character {
 public:
  Character(std::uint32_t p, int conductor_exponent);
  static Character at_level(std::uint32_t p, int n) { return Character(p, n + 1); }
  std::uint32_t prime() const { return prime_; }
  int conductor_exponent() const { return conductor_exponent_; }
  int level() const { return conductor_exponent_ - 1; }

 private:
  std::uint32_t prime_;
  int conductor_exponent_;
};

struct Evaluation {
  CycloElement value;
  /// Valuation lower bound D/(p^(n-1)(p-1)) on the discarded tail; empty for polynomials.
  std::optional<Rational> tail_bound;
};

/// f(eps_n) for the character's level n.
Evaluation eval_at_character(const IwasawaSeries& f, const Character& theta);

struct MuLambda {
  int mu = 0;
  std::int64_t lambda = 0;
  /// The Newton polygon's first vertex is fully determined.
  bool certified = false;
};

/// mu = min val_p(a_i), lambda = least index attaining it.
MuLambda newton_invariants(const IwasawaSeries& f);

struct WeierstrassReport {
  bool applicable = false;
  std::string diagnostic;
  MuLambda invariants;
  int n = 0;
  Valuation evaluated = Valuation::infinite();
  Rational predicted{0};
  bool agrees = false;
};

/// Compares ord_p(f(eps_n)) with mu + lambda/(p^n - p^(n-1)).
WeierstrassReport weierstrass_valuation_check(const IwasawaSeries& f, int n);

/// A polynomial with prescribed invariants: p^mu times (p * r_i below lambda, a
/// unit at lambda, arbitrary above up to lambda + extra_degree).
IwasawaSeries synthetic_series(std::uint32_t p, int mu, std::int64_t lambda, std::int64_t extra_degree,
                               std::mt19937_64& rng, int precision = padic::kDefaultPrecision);

}  // namespace ssrank::iwasawa
