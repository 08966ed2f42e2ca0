#include "ssrank/cyclotomic.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ssrank/modarith.hpp"
#include "ssrank/tables.hpp"

namespace ssrank {

namespace detail {

std::vector<u64> binomial_residues(std::uint32_t p, std::int64_t exponent, int relative_digits, std::int64_t upto) {
  const std::int64_t top = std::min(exponent, upto);
  const u64 m = ipow(p, relative_digits);
  std::vector<u64> out(static_cast<std::size_t>(top + 1), 0);
  // C(M, i) = p^e * u with u a unit residue, updated by (M - i)/(i + 1).
  u64 unit = 1 % m;
  int e = 0;
  out[0] = unit;
  for (std::int64_t i = 0; i < top; ++i) {
    u64 num = static_cast<u64>(exponent - i);
    u64 den = static_cast<u64>(i + 1);
    e += strip_p(num, p) - strip_p(den, p);
    unit = mulmod(mulmod(unit, num % m, m), invmod(den % m, m), m);
    out[static_cast<std::size_t>(i + 1)] = e >= relative_digits ? 0 : mulmod(unit, ipow(p, e), m);
  }
  return out;
}

namespace {

std::shared_ptr<const PhiTable> compute_phi_table(std::uint32_t p, int n, int relative_digits) {
  auto table = std::make_shared<PhiTable>();
  const std::int64_t d = cyclo::field_degree(p, n);
  const u64 m = ipow(p, relative_digits);
  const std::int64_t step = static_cast<std::int64_t>(ipow(p, n - 1));
  table->degree = d;
  table->dense.assign(static_cast<std::size_t>(d + 1), 0);
  for (std::uint32_t j = 0; j < p; ++j) {
    auto row = binomial_residues(p, step * j, relative_digits, d);
    for (std::size_t i = 0; i < row.size(); ++i) table->dense[i] = addmod(table->dense[i], row[i], m);
  }
  for (std::int64_t i = 0; i < d; ++i) {
    if (table->dense[static_cast<std::size_t>(i)] != 0) {
      table->sparse_lower.emplace_back(i, table->dense[static_cast<std::size_t>(i)]);
    }
  }
  return table;
}

}  // namespace

std::shared_ptr<const PhiTable> phi_table(std::uint32_t p, int n, int relative_digits) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, int, int>, std::shared_ptr<const PhiTable>> cache;
  const auto key = std::make_tuple(p, n, relative_digits);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto table = compute_phi_table(p, n, relative_digits);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace detail

namespace cyclo {

using detail::u128;
using detail::u64;

std::int64_t field_degree(std::uint32_t p, int level) {
  if (level < 0) throw std::invalid_argument("negative cyclotomic level");
  if (level == 0) return 1;
  return static_cast<std::int64_t>(detail::ipow(p, level - 1)) * (p - 1);
}

PadicPolynomial binomial_poly(std::uint32_t p, std::int64_t exponent, int precision) {
  padic::require_odd_prime(p);
  auto row = detail::binomial_residues(p, exponent, precision, exponent);
  PadicPolynomial out;
  out.reserve(row.size());
  for (u64 r : row) out.push_back(PadicNumber::from_parts(p, 0, r, precision));
  return out;
}

PadicPolynomial phi_poly(std::uint32_t p, int n, int precision) {
  padic::require_odd_prime(p);
  if (n < 1) throw std::invalid_argument("phi_poly: level must be at least 1");
  if (precision < 1 || precision > padic::max_precision(p)) throw std::invalid_argument("phi_poly: bad precision");
  auto table = detail::phi_table(p, n, precision);
  PadicPolynomial out;
  out.reserve(table->dense.size());
  for (u64 r : table->dense) out.push_back(PadicNumber::from_parts(p, 0, r, precision));
  return out;
}

namespace {

// Reduces c (residues mod p^R) modulo Phi_{p^n}(1+X) in place and truncates to d.
void reduce_mod_phi(std::vector<u64>& c, std::uint32_t p, int level, int relative_digits) {
  const std::int64_t d = field_degree(p, level);
  if (static_cast<std::int64_t>(c.size()) <= d) {
    c.resize(static_cast<std::size_t>(d), 0);
    return;
  }
  if (level == 0) {
    c.resize(1);
    return;
  }
  const u64 m = detail::ipow(p, relative_digits);
  auto table = detail::phi_table(p, level, relative_digits);
  for (std::int64_t i = static_cast<std::int64_t>(c.size()) - 1; i >= d; --i) {
    const u64 t = c[static_cast<std::size_t>(i)];
    if (t == 0) continue;
    const u64 neg = m - t;
    u64* base = c.data() + (i - d);
    for (const auto& [j, coef] : table->sparse_lower) {
      base[j] = static_cast<u64>((u128(neg) * coef + base[j]) % m);
    }
  }
  c.resize(static_cast<std::size_t>(d));
}

}  // namespace

CycloElement CycloElement::zero(std::uint32_t p, int level) {
  CycloElement z;
  z.prime_ = p;
  z.level_ = level;
  return z;
}

CycloElement CycloElement::zero_to_precision(std::uint32_t p, int level, int precision) {
  CycloElement z;
  z.prime_ = p;
  z.level_ = level;
  z.state_ = State::zero_to_precision;
  z.precision_ = precision;
  return z;
}

CycloElement CycloElement::build(std::uint32_t p, int level, int shift, int precision, Digits digits) {
  if (shift >= precision) return zero_to_precision(p, level, precision);
  const int cap = padic::max_precision(p);
  if (precision - shift > cap) {
    precision = shift + cap;
    const u64 m = detail::ipow(p, cap);
    for (auto& x : digits) x %= m;
  }
  digits.resize(static_cast<std::size_t>(field_degree(p, level)), 0);
  // Pull out the common power of p.
  int common = precision - shift;
  bool any = false;
  for (u64 x : digits) {
    if (x == 0) continue;
    any = true;
    u64 y = x;
    int k = 0;
    while (k < common && y % p == 0) {
      y /= p;
      ++k;
    }
    common = std::min(common, k);
    if (common == 0) break;
  }
  if (!any) return zero_to_precision(p, level, precision);
  if (common > 0) {
    const u64 f = detail::ipow(p, common);
    for (auto& x : digits) x /= f;
    shift += common;
  }
  CycloElement r;
  r.prime_ = p;
  r.level_ = level;
  r.state_ = State::nonzero;
  r.shift_ = shift;
  r.precision_ = precision;
  r.digits_ = std::move(digits);
  return r;
}

int CycloElement::shift_lower_bound() const {
  switch (state_) {
    case State::nonzero:
      return shift_;
    case State::zero_to_precision:
      return precision_;
    case State::exact_zero:
      break;
  }
  return padic::kExactPrecision;
}

CycloElement CycloElement::constant(const PadicNumber& c, int level) {
  return from_coefficients(c.prime(), level, PadicPolynomial{c});
}

CycloElement CycloElement::from_coefficients(std::uint32_t p, int level, const PadicPolynomial& coefficients) {
  int precision = padic::kExactPrecision;
  int shift = padic::kExactPrecision;
  for (const auto& c : coefficients) {
    if (c.prime() != p && !c.is_exact_zero()) throw std::invalid_argument("coefficient prime mismatch");
    if (c.is_exact_zero()) continue;
    precision = std::min(precision, c.precision());
    shift = std::min(shift, c.valuation_lower_bound());
  }
  if (precision == padic::kExactPrecision) return zero(p, level);
  if (shift >= precision) return zero_to_precision(p, level, precision);
  const int cap = padic::max_precision(p);
  if (precision - shift > cap) precision = shift + cap;
  const int relative = precision - shift;
  const u64 m = detail::ipow(p, relative);
  Digits digits(coefficients.size(), 0);
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const auto& c = coefficients[i];
    if (!c.is_nonzero()) continue;
    const int v = c.valuation_lower_bound();
    if (v >= precision) continue;
    digits[i] = (c.unit() % detail::ipow(p, precision - v)) * detail::ipow(p, v - shift) % m;
  }
  reduce_mod_phi(digits, p, level, relative);
  return build(p, level, shift, precision, std::move(digits));
}

CycloElement CycloElement::from_residues(std::uint32_t p, int level, int precision, std::vector<u64> residues) {
  if (precision < 1 || precision > padic::max_precision(p)) {
    throw std::invalid_argument("from_residues: precision out of range");
  }
  const u64 m = detail::ipow(p, precision);
  for (auto& x : residues) x %= m;
  reduce_mod_phi(residues, p, level, precision);
  return build(p, level, 0, precision, std::move(residues));
}

CycloElement CycloElement::uniformizer(std::uint32_t p, int level, int precision) {
  if (level < 1) throw std::invalid_argument("uniformizer requires level >= 1");
  PadicPolynomial c{PadicNumber::zero(p), PadicNumber::from_integer(p, 1, precision)};
  return from_coefficients(p, level, c);
}

PadicNumber CycloElement::coefficient(std::int64_t i) const {
  if (i < 0 || i >= degree()) throw std::out_of_range("cyclotomic coefficient index");
  if (is_exact_zero()) return PadicNumber::zero(prime_);
  if (state_ == State::zero_to_precision) return PadicNumber::zero_to_precision(prime_, precision_);
  return PadicNumber::from_parts(prime_, shift_, digits_[static_cast<std::size_t>(i)], precision_);
}

PadicPolynomial CycloElement::coefficients() const {
  PadicPolynomial out;
  const std::int64_t d = degree();
  out.reserve(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < d; ++i) out.push_back(coefficient(i));
  return out;
}

Valuation CycloElement::valuation() const {
  if (is_exact_zero()) return Valuation::infinite();
  if (state_ == State::zero_to_precision) return Valuation::at_least(Rational(precision_));
  const std::int64_t d = degree();
  std::int64_t best = 0;
  bool found = false;
  for (std::int64_t i = 0; i < d; ++i) {
    u64 x = digits_[static_cast<std::size_t>(i)];
    if (x == 0) continue;
    const std::int64_t v = shift_ + detail::strip_p(x, prime_);
    const std::int64_t key = v * d + i;
    if (!found || key < best) {
      best = key;
      found = true;
    }
  }
  return Valuation::exact(Rational(best, d));
}

CycloElement CycloElement::operator-() const {
  if (state_ != State::nonzero) return *this;
  CycloElement r = *this;
  const u64 m = detail::ipow(prime_, relative_digits());
  for (auto& x : r.digits_) x = detail::negmod(x, m);
  return r;
}

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
  if (a.level_ != b.level_) throw std::invalid_argument("adding cyclotomic elements of different levels");
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const std::uint32_t p = a.prime_;
  const int precision = std::min(a.precision_, b.precision_);
  const int shift = std::min(a.shift_lower_bound(), b.shift_lower_bound());
  if (shift >= precision) return CycloElement::zero_to_precision(p, a.level_, precision);
  const u64 m = detail::ipow(p, precision - shift);
  CycloElement::Digits digits(static_cast<std::size_t>(a.degree()), 0);
  auto accumulate = [&](const CycloElement& x) {
    if (x.state_ != CycloElement::State::nonzero || x.shift_ >= precision) return;
    const u64 own = detail::ipow(p, precision - x.shift_);
    const u64 scale = detail::ipow(p, x.shift_ - shift);
    for (std::size_t i = 0; i < digits.size(); ++i) {
      digits[i] = detail::addmod(digits[i], (x.digits_[i] % own) * scale, m);
    }
  };
  accumulate(a);
  accumulate(b);
  return CycloElement::build(p, a.level_, shift, precision, std::move(digits));
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) { return a + (-b); }

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
  if (a.level_ != b.level_) throw std::invalid_argument("multiplying cyclotomic elements of different levels");
  if (a.is_exact_zero()) return a;
  if (b.is_exact_zero()) return b;
  const std::uint32_t p = a.prime_;
  const int precision = std::min(a.precision_ + b.shift_lower_bound(), b.precision_ + a.shift_lower_bound());
  if (a.is_zero() || b.is_zero()) return CycloElement::zero_to_precision(p, a.level_, precision);
  const int shift = a.shift_ + b.shift_;
  const int relative = precision - shift;
  const u64 m = detail::ipow(p, relative);
  auto trimmed = [&](const CycloElement::Digits& x) {
    std::size_t n = x.size();
    while (n > 0 && x[n - 1] % m == 0) --n;
    return n;
  };
  const std::size_t la = trimmed(a.digits_);
  const std::size_t lb = trimmed(b.digits_);
  if (la == 0 || lb == 0) return CycloElement::zero_to_precision(p, a.level_, precision);
  CycloElement::Digits bd(b.digits_.begin(), b.digits_.begin() + static_cast<std::ptrdiff_t>(lb));
  for (auto& x : bd) x %= m;
  CycloElement::Digits c(la + lb - 1, 0);
  for (std::size_t i = 0; i < la; ++i) {
    const u64 ai = a.digits_[i] % m;
    if (ai == 0) continue;
    u64* out = c.data() + i;
    for (std::size_t j = 0; j < lb; ++j) out[j] = static_cast<u64>((u128(ai) * bd[j] + out[j]) % m);
  }
  reduce_mod_phi(c, p, a.level_, relative);
  return CycloElement::build(p, a.level_, shift, precision, std::move(c));
}

CycloElement operator*(const PadicNumber& c, const CycloElement& x) {
  if (c.is_exact_zero()) return CycloElement::zero(x.prime_, x.level_);
  if (x.is_exact_zero()) return x;
  const std::uint32_t p = x.prime_;
  const int precision = std::min(c.precision() + x.shift_lower_bound(), x.precision_ + c.valuation_lower_bound());
  if (c.is_zero() || x.is_zero()) return CycloElement::zero_to_precision(p, x.level_, precision);
  const int shift = x.shift_ + c.valuation_lower_bound();
  const u64 m = detail::ipow(p, precision - shift);
  const u64 u = c.unit() % m;
  CycloElement::Digits digits(x.digits_.size());
  for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = detail::mulmod(u, x.digits_[i] % m, m);
  return CycloElement::build(p, x.level_, shift, precision, std::move(digits));
}

CycloElement CycloElement::shifted(int k) const {
  if (is_exact_zero()) return *this;
  CycloElement r = *this;
  r.precision_ += k;
  if (state_ == State::nonzero) r.shift_ += k;
  return r;
}

CycloElement CycloElement::times_uniformizer_power(std::int64_t k) const {
  if (k < 0) throw std::invalid_argument("negative uniformizer power");
  if (is_zero() || k == 0) return *this;
  if (level_ == 0) throw std::invalid_argument("level 0 has no uniformizer");
  Digits c(static_cast<std::size_t>(k) + digits_.size(), 0);
  std::copy(digits_.begin(), digits_.end(), c.begin() + static_cast<std::ptrdiff_t>(k));
  reduce_mod_phi(c, prime_, level_, relative_digits());
  return build(prime_, level_, shift_, precision_, std::move(c));
}

CycloElement CycloElement::inverse() const {
  if (state_ != State::nonzero) {
    throw std::domain_error("inverse of a cyclotomic element with valuation " + valuation().to_string());
  }
  const std::uint32_t p = prime_;
  const std::int64_t d = degree();
  // Locate the unique coefficient realising the valuation v0 + i0/d.
  std::int64_t best = 0, i0 = 0, v0 = 0;
  bool found = false;
  for (std::int64_t i = 0; i < d; ++i) {
    u64 x = digits_[static_cast<std::size_t>(i)];
    if (x == 0) continue;
    const std::int64_t v = shift_ + detail::strip_p(x, p);
    if (!found || v * d + i < best) {
      best = v * d + i;
      i0 = i;
      v0 = v;
      found = true;
    }
  }
  // x * eps^(d - i0) = p^(v0+1) * u with u an integral unit (u = x * p^-v0 when i0 = 0).
  const int lift = static_cast<int>(i0 == 0 ? v0 : v0 + 1);
  const CycloElement z = i0 == 0 ? *this : times_uniformizer_power(d - i0);
  const CycloElement unit = z.shifted(-lift);
  if (unit.state_ != State::nonzero || unit.shift_ != 0) {
    throw std::domain_error("inverse: precision exhausted while normalizing");
  }
  const int relative = unit.precision_;
  if (relative < 1) throw std::domain_error("inverse: precision exhausted");
  const u64 m = detail::ipow(p, relative);
  // Newton iteration y <- y + y(1 - u y); the eps-adic error doubles each step.
  Digits seed(static_cast<std::size_t>(d), 0);
  seed[0] = detail::invmod(unit.digits_[0] % m, m);
  CycloElement y = build(p, level_, 0, relative, std::move(seed));
  const CycloElement one = constant(PadicNumber::from_integer(p, 1, relative), level_);
  const int max_steps = 2 + std::bit_width(static_cast<std::uint64_t>(d * relative));
  for (int step = 0; step < max_steps; ++step) {
    CycloElement err = one - unit * y;
    if (err.is_zero()) break;
    y = y + y * err;
  }
  CycloElement inv = i0 == 0 ? y : y.times_uniformizer_power(d - i0);
  return inv.shifted(-lift);
}

CycloElement CycloElement::lift_to(int level) const {
  if (level < level_) throw std::invalid_argument("lift_to: target level below source level");
  if (level == level_) return *this;
  if (is_exact_zero()) return zero(prime_, level);
  if (state_ == State::zero_to_precision) return zero_to_precision(prime_, level, precision_);
  if (level_ == 0) return constant(coefficient(0), level);
  const CycloElement eps = epsilon_at(prime_, level_, level, padic::max_precision(prime_));
  const std::int64_t d = degree();
  CycloElement acc = constant(coefficient(d - 1), level);
  for (std::int64_t i = d - 2; i >= 0; --i) acc = acc * eps + constant(coefficient(i), level);
  return acc;
}

CycloElement CycloElement::reduce_precision(int new_precision) const {
  if (new_precision > precision_) throw std::invalid_argument("cannot raise precision of a cyclotomic element");
  if (state_ != State::nonzero) return zero_to_precision(prime_, level_, new_precision);
  Digits digits = digits_;
  if (new_precision > shift_) {
    const u64 m = detail::ipow(prime_, new_precision - shift_);
    for (auto& x : digits) x %= m;
  }
  return build(prime_, level_, shift_, new_precision, std::move(digits));
}

bool CycloElement::equals_at_precision(const CycloElement& other) const {
  if (is_exact_zero() && other.is_exact_zero()) return true;
  return (*this - other).is_zero();
}

std::string CycloElement::to_string() const {
  std::ostringstream os;
  os << "[p=" << prime_ << " level " << level_ << "] ";
  if (is_exact_zero()) return os.str() + "0";
  if (state_ == State::zero_to_precision) {
    os << "0 (mod " << prime_ << "^" << precision_ << ")";
    return os.str();
  }
  bool first = true;
  for (std::int64_t i = 0; i < degree(); ++i) {
    if (digits_[static_cast<std::size_t>(i)] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coefficient(i).to_string() << ")";
    if (i > 0) os << "*e^" << i;
  }
  return os.str();
}

CycloElement epsilon_at(std::uint32_t p, int m, int n, int precision) {
  if (m < 0 || m > n) throw std::invalid_argument("epsilon_at: need 0 <= m <= n");
  if (m == 0) return CycloElement::zero(p, n);
  auto coeffs = binomial_poly(p, static_cast<std::int64_t>(detail::ipow(p, n - m)), precision);
  coeffs[0] = PadicNumber::zero(p);
  return CycloElement::from_coefficients(p, n, coeffs);
}

CycloElement phi_at_zeta(std::uint32_t p, int k, int n, int precision) {
  if (k < 1 || n < 1) throw std::invalid_argument("phi_at_zeta: levels must be at least 1");
  if (k == n) return CycloElement::zero(p, n);
  if (k > n) return CycloElement::constant(PadicNumber::from_integer(p, p, precision), n);
  return CycloElement::from_coefficients(p, n, phi_poly(p, k, precision));
}

std::ostream& operator<<(std::ostream& os, const CycloElement& x) { return os << x.to_string(); }

}  // namespace cyclo
}  // namespace ssrank
