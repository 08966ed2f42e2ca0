#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

// Residue arithmetic modulo p^R with R small enough that p^R < 2^63.

namespace ssrank::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Largest R with p^R < 2^63.
inline int digit_capacity(std::uint32_t p) {
  int r = 0;
  u128 acc = 1;
  while (acc * p < (u128(1) << 63)) {
    acc *= p;
    ++r;
  }
  return r;
}

inline u64 ipow(std::uint32_t p, int k) {
  u64 r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 negmod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

/// Inverse of a unit residue modulo m, via extended Euclid.
inline u64 invmod(u64 a, u64 m) {
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    __int128 q = old_r / r;
    __int128 t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("residue is not invertible");
  old_s %= static_cast<__int128>(m);
  if (old_s < 0) old_s += m;
  return static_cast<u64>(old_s);
}

/// Signed integer reduced modulo m.
inline u64 reduce_signed(std::int64_t v, u64 m) {
  if (v >= 0) return static_cast<u64>(v) % m;
  u64 mag = static_cast<u64>(-(v + 1)) + 1;
  return negmod(mag % m, m);
}

/// Strips factors of p from a nonzero residue; returns the number stripped.
inline int strip_p(u64& r, std::uint32_t p) {
  int k = 0;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  return k;
}

}  // namespace ssrank::detail
