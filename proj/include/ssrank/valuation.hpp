#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include <boost/rational.hpp>

namespace ssrank {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// Valuation of a p-adic quantity, normalized so that ord_p(p) = 1.
///
/// A value whose known digits all vanish has no determinable valuation; it is
/// reported as `at_least(N)` where N is the absolute precision. Only values
/// that are zero by construction report `infinite`.
class Valuation {
 public:
  enum class Kind { exact, at_least, infinite };

  static Valuation exact(Rational v) { return Valuation(Kind::exact, v); }
  static Valuation at_least(Rational v) { return Valuation(Kind::at_least, v); }
  static Valuation infinite() { return Valuation(Kind::infinite, Rational(0)); }

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::exact; }
  bool is_infinite() const { return kind_ == Kind::infinite; }
  bool is_lower_bound() const { return kind_ == Kind::at_least; }

  /// The exact value, or the lower bound for `at_least`. Meaningless for
  /// `infinite`.
  Rational value() const { return value_; }

  /// True when this valuation is certainly strictly smaller than `other`.
  bool certainly_less_than(const Valuation& other) const;

  std::string to_string() const;

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.kind_ == b.kind_ && (a.kind_ == Kind::infinite || a.value_ == b.value_);
  }

 private:
  Valuation(Kind k, Rational v) : kind_(k), value_(v) {}
  Kind kind_;
  Rational value_;
};

/// Sum of two valuations (valuation of a product).
Valuation operator+(const Valuation& a, const Valuation& b);

std::ostream& operator<<(std::ostream& os, const Valuation& v);

}  // namespace ssrank
