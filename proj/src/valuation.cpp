#include "ssrank/valuation.hpp"

namespace ssrank {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

bool Valuation::certainly_less_than(const Valuation& other) const {
  if (kind_ != Kind::exact) return false;
  if (other.kind_ == Kind::infinite) return true;
  // `at_least b` is certainly above a when a < b.
  return value_ < other.value_;
}

std::string Valuation::to_string() const {
  switch (kind_) {
    case Kind::exact:
      return ssrank::to_string(value_);
    case Kind::at_least:
      return ">=" + ssrank::to_string(value_);
    case Kind::infinite:
      return "inf";
  }
  return "?";
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return Valuation::infinite();
  if (a.is_exact() && b.is_exact()) return Valuation::exact(a.value() + b.value());
  return Valuation::at_least(a.value() + b.value());
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.to_string(); }

}  // namespace ssrank
