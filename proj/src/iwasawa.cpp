#include "ssrank/iwasawa.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ssrank/modarith.hpp"

namespace ssrank::iwasawa {

namespace {

void trim_exact_zeros(PadicPolynomial& c) {
  while (!c.empty() && c.back().is_exact_zero()) c.pop_back();
}

}  // namespace

IwasawaSeries::IwasawaSeries(std::uint32_t p, PadicPolynomial c, bool polynomial)
    : prime_(p), coefficients_(std::move(c)), polynomial_(polynomial) {
  if (polynomial_) trim_exact_zeros(coefficients_);
}

IwasawaSeries IwasawaSeries::zero(std::uint32_t p) { return IwasawaSeries(p, {}, true); }

IwasawaSeries IwasawaSeries::polynomial(std::uint32_t p, PadicPolynomial coefficients) {
  padic::require_odd_prime(p);
  return IwasawaSeries(p, std::move(coefficients), true);
}

IwasawaSeries IwasawaSeries::truncated(std::uint32_t p, PadicPolynomial coefficients, std::int64_t truncation) {
  padic::require_odd_prime(p);
  if (truncation < 0 || static_cast<std::int64_t>(coefficients.size()) > truncation) {
    throw std::invalid_argument("truncated series: more coefficients than the truncation degree");
  }
  coefficients.resize(static_cast<std::size_t>(truncation), PadicNumber::zero(p));
  return IwasawaSeries(p, std::move(coefficients), false);
}

IwasawaSeries IwasawaSeries::from_integers(std::uint32_t p, const std::vector<std::int64_t>& coefficients,
                                           int precision) {
  PadicPolynomial c;
  c.reserve(coefficients.size());
  for (auto v : coefficients) c.push_back(PadicNumber::from_integer(p, v, precision));
  return polynomial(p, std::move(c));
}

IwasawaSeries IwasawaSeries::constant(const PadicNumber& c) { return polynomial(c.prime(), {c}); }

PadicNumber IwasawaSeries::coefficient(std::int64_t i) const {
  if (i < 0) throw std::out_of_range("negative series index");
  if (i < x_truncation()) return coefficients_[static_cast<std::size_t>(i)];
  if (polynomial_) return PadicNumber::zero(prime_);
  throw std::out_of_range("coefficient beyond the X-truncation of a series");
}

int IwasawaSeries::p_precision() const {
  int prec = padic::kExactPrecision;
  for (const auto& c : coefficients_) prec = std::min(prec, c.precision());
  return prec;
}

bool IwasawaSeries::is_zero() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const auto& c) { return c.is_zero(); });
}

bool IwasawaSeries::is_exact_zero() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const auto& c) { return c.is_exact_zero(); });
}

IwasawaSeries operator+(const IwasawaSeries& a, const IwasawaSeries& b) {
  if (a.prime_ != b.prime_) throw std::invalid_argument("series of different primes");
  const bool poly = a.polynomial_ && b.polynomial_;
  std::int64_t len = std::max(a.x_truncation(), b.x_truncation());
  if (!a.polynomial_) len = std::min(len, a.x_truncation());
  if (!b.polynomial_) len = std::min(len, b.x_truncation());
  PadicPolynomial c;
  c.reserve(static_cast<std::size_t>(len));
  for (std::int64_t i = 0; i < len; ++i) c.push_back(a.coefficient(i) + b.coefficient(i));
  return IwasawaSeries(a.prime_, std::move(c), poly);
}

IwasawaSeries IwasawaSeries::operator-() const {
  PadicPolynomial c;
  c.reserve(coefficients_.size());
  for (const auto& x : coefficients_) c.push_back(-x);
  return IwasawaSeries(prime_, std::move(c), polynomial_);
}

IwasawaSeries operator-(const IwasawaSeries& a, const IwasawaSeries& b) { return a + (-b); }

IwasawaSeries operator*(const IwasawaSeries& a, const IwasawaSeries& b) {
  if (a.prime_ != b.prime_) throw std::invalid_argument("series of different primes");
  const bool poly = a.polynomial_ && b.polynomial_;
  if (poly && (a.coefficients_.empty() || b.coefficients_.empty())) return IwasawaSeries::zero(a.prime_);
  std::int64_t len = a.x_truncation() + b.x_truncation() - 1;
  if (!a.polynomial_) len = std::min(len, a.x_truncation());
  if (!b.polynomial_) len = std::min(len, b.x_truncation());
  len = std::max<std::int64_t>(len, 0);
  PadicPolynomial c(static_cast<std::size_t>(len), PadicNumber::zero(a.prime_));
  for (std::int64_t i = 0; i < a.x_truncation() && i < len; ++i) {
    const auto& ai = a.coefficients_[static_cast<std::size_t>(i)];
    if (ai.is_exact_zero()) continue;
    for (std::int64_t j = 0; j < b.x_truncation() && i + j < len; ++j) {
      const auto& bj = b.coefficients_[static_cast<std::size_t>(j)];
      if (bj.is_exact_zero()) continue;
      auto& slot = c[static_cast<std::size_t>(i + j)];
      slot = slot + ai * bj;
    }
  }
  return IwasawaSeries(a.prime_, std::move(c), poly);
}

IwasawaSeries operator*(const PadicNumber& s, const IwasawaSeries& f) {
  PadicPolynomial c;
  c.reserve(f.coefficients_.size());
  for (const auto& x : f.coefficients_) c.push_back(s * x);
  return IwasawaSeries(f.prime_, std::move(c), f.polynomial_);
}

std::optional<IwasawaSeries> IwasawaSeries::divide_exact(const PadicPolynomial& monic) const {
  if (!polynomial_) throw std::invalid_argument("divide_exact applies to polynomials only");
  if (monic.empty()) throw std::invalid_argument("division by the empty polynomial");
  const std::size_t dg = monic.size() - 1;
  if (coefficients_.empty()) return zero(prime_);
  if (coefficients_.size() <= dg) {
    if (is_zero()) return zero(prime_);
    return std::nullopt;
  }
  PadicPolynomial rem = coefficients_;
  PadicPolynomial q(rem.size() - dg, PadicNumber::zero(prime_));
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = rem[k + dg];
    if (q[k].is_exact_zero()) continue;
    for (std::size_t j = 0; j <= dg; ++j) rem[k + j] = rem[k + j] - q[k] * monic[j];
  }
  for (std::size_t i = 0; i < dg; ++i) {
    if (!rem[i].is_zero()) return std::nullopt;
  }
  return polynomial(prime_, std::move(q));
}

std::string IwasawaSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i].is_exact_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coefficients_[i] << ")";
    if (i > 0) os << "*X^" << i;
  }
  if (first) os << "0";
  if (!polynomial_) os << " + O(X^" << coefficients_.size() << ")";
  return os.str();
}

IwasawaSeries omega_poly(std::uint32_t p, int n, int precision) {
  if (n < 0) throw std::invalid_argument("omega_poly: n must be nonnegative");
  auto c = cyclo::binomial_poly(p, static_cast<std::int64_t>(detail::ipow(p, n)), precision);
  c[0] = PadicNumber::zero(p);
  return IwasawaSeries::polynomial(p, std::move(c));
}

Character::Character(std::uint32_t p, int conductor_exponent) : prime_(p), conductor_exponent_(conductor_exponent) {
  padic::require_odd_prime(p);
  if (conductor_exponent < 2) throw std::invalid_argument("character conductor exponent must be at least 2");
}

Evaluation eval_at_character(const IwasawaSeries& f, const Character& theta) {
  if (f.prime() != theta.prime()) throw std::invalid_argument("character and series have different primes");
  const int n = theta.level();
  Evaluation out{CycloElement::from_coefficients(f.prime(), n, f.coefficients()), std::nullopt};
  if (!f.is_polynomial()) {
    const std::int64_t d = cyclo::field_degree(f.prime(), n);
    const Rational bound(f.x_truncation(), d);
    out.tail_bound = bound;
    // eps^D = eps^(D mod d) (p U)^(D div d): the tail is divisible by p^(D div d).
    const int tail_digits = static_cast<int>(f.x_truncation() / d);
    if (tail_digits < out.value.precision()) {
      out.value = out.value.reduce_precision(tail_digits);
    }
  }
  return out;
}

MuLambda newton_invariants(const IwasawaSeries& f) {
  MuLambda out;
  const auto& c = f.coefficients();
  int best = 0;
  std::int64_t at = -1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_nonzero()) continue;
    const int v = c[i].valuation_lower_bound();
    if (at < 0 || v < best) {
      best = v;
      at = static_cast<std::int64_t>(i);
    }
  }
  if (at < 0) return out;
  if (best < 0) throw std::domain_error("newton_invariants: coefficient outside Z_p");
  out.mu = best;
  out.lambda = at;
  out.certified = true;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_nonzero() || c[i].is_exact_zero()) continue;
    // Unknown digits: need the lower bound to clear the minimum (strictly below lambda).
    const int lb = c[i].valuation_lower_bound();
    const bool below = static_cast<std::int64_t>(i) < at;
    if ((below && lb <= best) || (!below && lb < best)) out.certified = false;
  }
  // Unknown coefficients past the truncation may undercut a positive mu.
  if (!f.is_polynomial() && best > 0) out.certified = false;
  return out;
}

WeierstrassReport weierstrass_valuation_check(const IwasawaSeries& f, int n) {
  WeierstrassReport r;
  r.n = n;
  r.invariants = newton_invariants(f);
  if (!r.invariants.certified) {
    r.diagnostic = "mu/lambda not certified at current precision";
    return r;
  }
  if (n < 1) {
    r.diagnostic = "n too small: level must be at least 1";
    return r;
  }
  const std::int64_t d = cyclo::field_degree(f.prime(), n);
  if (d <= r.invariants.lambda) {
    r.diagnostic = "n too small: p^(n-1)(p-1) = " + std::to_string(d) + " <= lambda = " +
                   std::to_string(r.invariants.lambda);
    return r;
  }
  r.applicable = true;
  r.predicted = Rational(r.invariants.mu) + Rational(r.invariants.lambda, d);
  auto ev = eval_at_character(f, Character::at_level(f.prime(), n));
  r.evaluated = ev.value.valuation();
  r.agrees = r.evaluated.is_exact() && r.evaluated.value() == r.predicted;
  if (!r.agrees) r.diagnostic = "evaluated valuation " + r.evaluated.to_string() + " != " + to_string(r.predicted);
  return r;
}

IwasawaSeries synthetic_series(std::uint32_t p, int mu, std::int64_t lambda, std::int64_t extra_degree,
                               std::mt19937_64& rng, int precision) {
  if (mu < 0 || lambda < 0 || extra_degree < 0) throw std::invalid_argument("synthetic_series: negative parameter");
  std::uniform_int_distribution<std::int64_t> any(0, 1'000'000'000);
  PadicPolynomial c;
  const auto scale = PadicNumber::p_power(p, mu, precision + mu);
  for (std::int64_t i = 0; i <= lambda + extra_degree; ++i) {
    std::int64_t r = any(rng);
    if (i < lambda) {
      r *= p;
    } else if (i == lambda) {
      r = r - r % p + 1 + static_cast<std::int64_t>(any(rng) % (p - 1));
    }
    c.push_back(scale * PadicNumber::from_integer(p, r, precision));
  }
  return IwasawaSeries::polynomial(p, std::move(c));
}

}  // namespace ssrank::iwasawa
