#include "ssrank/padic.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "ssrank/modarith.hpp"

namespace ssrank::padic {

using detail::u64;

void require_odd_prime(std::uint32_t p) {
  bool prime = p >= 3 && p % 2 == 1;
  for (std::uint32_t d = 3; prime && d * d <= p; d += 2) {
    if (p % d == 0) prime = false;
  }
  if (!prime) throw std::invalid_argument("p = " + std::to_string(p) + " is not an odd prime");
}

int max_precision(std::uint32_t p) { return detail::digit_capacity(p); }

namespace {

void require_precision(std::uint32_t p, int precision) {
  if (precision < 1) throw std::invalid_argument("precision must be positive");
  if (precision > max_precision(p)) {
    throw std::invalid_argument("precision " + std::to_string(precision) + " exceeds the supported maximum " +
                                std::to_string(max_precision(p)) + " for p = " + std::to_string(p));
  }
}

}  // namespace

PadicNumber PadicNumber::zero(std::uint32_t p) {
  PadicNumber z;
  z.prime_ = p;
  return z;
}

PadicNumber PadicNumber::zero_to_precision(std::uint32_t p, int precision) {
  PadicNumber z;
  z.prime_ = p;
  z.state_ = State::zero_to_precision;
  z.precision_ = precision;
  return z;
}

PadicNumber PadicNumber::normalized(std::uint32_t p, int valuation, u64 residue, int precision) {
  if (valuation >= precision || residue == 0) return zero_to_precision(p, precision);
  const int cap = max_precision(p);
  int relative = precision - valuation;
  if (relative > cap) {
    relative = cap;
    precision = valuation + cap;
  }
  residue %= detail::ipow(p, relative);
  if (residue == 0) return zero_to_precision(p, precision);
  valuation += detail::strip_p(residue, p);
  PadicNumber x;
  x.prime_ = p;
  x.state_ = State::nonzero;
  x.valuation_ = valuation;
  x.precision_ = precision;
  x.unit_ = residue;
  return x;
}

PadicNumber PadicNumber::from_integer(std::uint32_t p, std::int64_t value, int precision) {
  require_precision(p, precision);
  if (value == 0) return zero(p);
  return normalized(p, 0, detail::reduce_signed(value, detail::ipow(p, precision)), precision);
}

PadicNumber PadicNumber::from_decimal(std::uint32_t p, std::string_view text, int precision) {
  require_precision(p, precision);
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty integer literal");
  const u64 m = detail::ipow(p, precision);
  u64 r = 0;
  bool all_zero = true;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("invalid integer literal '" + std::string(text) + "'");
    if (c != '0') all_zero = false;
    r = detail::addmod(detail::mulmod(r, 10 % m, m), static_cast<u64>(c - '0') % m, m);
  }
  if (all_zero) return zero(p);
  if (negative) r = detail::negmod(r, m);
  return normalized(p, 0, r, precision);
}

PadicNumber PadicNumber::from_parts(std::uint32_t p, int valuation, std::uint64_t unit, int precision) {
  if (precision - valuation > max_precision(p)) precision = valuation + max_precision(p);
  return normalized(p, valuation, unit, precision);
}

PadicNumber PadicNumber::p_power(std::uint32_t p, int k, int precision) {
  return normalized(p, k, 1, precision);
}

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed p-adic literal near '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// Parses "P^k" and checks P.
int parse_power(std::string_view s, std::uint32_t p) {
  s = trim(s);
  auto caret = s.find('^');
  if (caret == std::string_view::npos) throw std::invalid_argument("expected p^k in '" + std::string(s) + "'");
  if (parse_int(s.substr(0, caret)) != static_cast<int>(p)) {
    throw std::invalid_argument("prime mismatch in '" + std::string(s) + "'");
  }
  return parse_int(s.substr(caret + 1));
}

}  // namespace

PadicNumber PadicNumber::parse(std::uint32_t p, std::string_view text) {
  text = trim(text);
  if (text == "0") return zero(p);
  auto open = text.find("(mod");
  if (open == std::string_view::npos || text.back() != ')') {
    throw std::invalid_argument("malformed p-adic literal '" + std::string(text) + "'");
  }
  int precision = parse_power(text.substr(open + 4, text.size() - open - 5), p);
  std::string_view head = trim(text.substr(0, open));
  if (head == "0") return zero_to_precision(p, precision);
  auto star = head.find('*');
  if (star == std::string_view::npos) throw std::invalid_argument("malformed p-adic literal '" + std::string(text) + "'");
  std::string_view unit_text = trim(head.substr(0, star));
  u64 unit = 0;
  auto res = std::from_chars(unit_text.data(), unit_text.data() + unit_text.size(), unit);
  if (res.ec != std::errc() || res.ptr != unit_text.data() + unit_text.size() || unit % p == 0) {
    throw std::invalid_argument("malformed unit in '" + std::string(text) + "'");
  }
  int valuation = parse_power(head.substr(star + 1), p);
  if (precision <= valuation) throw std::invalid_argument("precision below valuation in '" + std::string(text) + "'");
  return from_parts(p, valuation, unit, precision);
}

Valuation PadicNumber::valuation() const {
  switch (state_) {
    case State::nonzero:
      return Valuation::exact(Rational(valuation_));
    case State::zero_to_precision:
      return Valuation::at_least(Rational(precision_));
    case State::exact_zero:
      break;
  }
  return Valuation::infinite();
}

int PadicNumber::valuation_lower_bound() const {
  switch (state_) {
    case State::nonzero:
      return valuation_;
    case State::zero_to_precision:
      return precision_;
    case State::exact_zero:
      break;
  }
  return kExactPrecision;
}

std::uint64_t PadicNumber::residue() const {
  if (is_exact_zero()) return 0;
  if (state_ == State::zero_to_precision) return 0;
  if (valuation_ < 0) throw std::domain_error("residue of a non-integral p-adic number");
  return unit_ * detail::ipow(prime_, valuation_);
}

std::int64_t PadicNumber::centered_integer() const {
  u64 r = residue();
  if (is_exact_zero() || r == 0) return 0;
  u64 m = detail::ipow(prime_, precision_);
  if (r > m / 2) return -static_cast<std::int64_t>(m - r);
  return static_cast<std::int64_t>(r);
}

PadicNumber PadicNumber::operator-() const {
  if (!is_nonzero()) return *this;
  PadicNumber r = *this;
  r.unit_ = detail::negmod(unit_, detail::ipow(prime_, precision_ - valuation_));
  return r;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  if (a.prime_ != b.prime_) throw std::invalid_argument("adding p-adic numbers of different primes");
  const std::uint32_t p = a.prime_;
  const int precision = std::min(a.precision_, b.precision_);
  const int vmin = std::min(a.valuation_lower_bound(), b.valuation_lower_bound());
  if (vmin >= precision) return PadicNumber::zero_to_precision(p, precision);
  const u64 m = detail::ipow(p, precision - vmin);
  auto aligned = [&](const PadicNumber& x) -> u64 {
    if (!x.is_nonzero() || x.valuation_ >= precision) return 0;
    return (x.unit_ % detail::ipow(p, precision - x.valuation_)) * detail::ipow(p, x.valuation_ - vmin);
  };
  return PadicNumber::normalized(p, vmin, detail::addmod(aligned(a), aligned(b), m), precision);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  if (a.is_exact_zero()) return a;
  if (b.is_exact_zero()) return b;
  if (a.prime_ != b.prime_) throw std::invalid_argument("multiplying p-adic numbers of different primes");
  const std::uint32_t p = a.prime_;
  const int precision = std::min(a.precision_ + b.valuation_lower_bound(), b.precision_ + a.valuation_lower_bound());
  if (!a.is_nonzero() || !b.is_nonzero()) return PadicNumber::zero_to_precision(p, precision);
  const int v = a.valuation_ + b.valuation_;
  const u64 m = detail::ipow(p, precision - v);
  return PadicNumber::normalized(p, v, detail::mulmod(a.unit_ % m, b.unit_ % m, m), precision);
}

PadicNumber PadicNumber::shifted(int k) const {
  if (is_exact_zero()) return *this;
  PadicNumber r = *this;
  r.precision_ += k;
  if (is_nonzero()) r.valuation_ += k;
  return r;
}

PadicNumber PadicNumber::reduce_precision(int new_precision) const {
  if (new_precision < 1) throw std::invalid_argument("precision must be positive");
  if (new_precision > precision_) {
    throw std::invalid_argument("cannot raise precision from " + std::to_string(precision_) + " to " +
                                std::to_string(new_precision));
  }
  if (is_exact_zero()) return zero_to_precision(prime_, new_precision);
  if (!is_nonzero()) return zero_to_precision(prime_, new_precision);
  return normalized(prime_, valuation_, unit_, new_precision);
}

PadicNumber PadicNumber::invert_unit() const {
  if (!is_unit()) {
    throw std::domain_error("invert_unit: argument is not a unit (valuation " + valuation().to_string() + ")");
  }
  const u64 m = detail::ipow(prime_, precision_);
  return normalized(prime_, 0, detail::invmod(unit_, m), precision_);
}

PadicNumber PadicNumber::inverse() const {
  if (!is_nonzero()) throw std::domain_error("inverse of a value with valuation " + valuation().to_string());
  const int relative = precision_ - valuation_;
  const u64 m = detail::ipow(prime_, relative);
  return normalized(prime_, -valuation_, detail::invmod(unit_, m), relative - valuation_);
}

bool PadicNumber::equals_at_precision(const PadicNumber& other) const { return (*this - other).is_zero(); }

std::string PadicNumber::to_string() const {
  switch (state_) {
    case State::exact_zero:
      return "0";
    case State::zero_to_precision:
      return "0 (mod " + std::to_string(prime_) + "^" + std::to_string(precision_) + ")";
    case State::nonzero:
      break;
  }
  return std::to_string(unit_) + " * " + std::to_string(prime_) + "^" + std::to_string(valuation_) + " (mod " +
         std::to_string(prime_) + "^" + std::to_string(precision_) + ")";
}

Valuation val_p(const PadicNumber& x) { return x.valuation(); }

std::ostream& operator<<(std::ostream& os, const PadicNumber& x) { return os << x.to_string(); }

}  // namespace ssrank::padic
