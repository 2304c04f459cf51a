#pragma once

#include <cstdint>
#include <string>

#include "wickstar/error.hpp"

namespace wickstar {

// Exponent vector of a commutative monomial in up to 8 variables, one byte
// per exponent packed into a word.  Variable 0 sits in the most significant
// byte, so comparing raw words compares exponent vectors lexicographically;
// ordering is graded lex (total degree first).
class Mono {
public:
  static constexpr int max_vars = 8;

  constexpr Mono() = default;

  static Mono var(int v, int e = 1) {
    Mono m;
    m.set(v, e);
    return m;
  }

  int exp(int v) const { return int((bits_ >> shift(v)) & 0xffu); }

  void set(int v, int e) {
    require(v >= 0 && v < max_vars, errc::usage, "variable index out of range");
    require(e >= 0 && e < 256, errc::budget, "monomial exponent out of range");
    bits_ = (bits_ & ~(std::uint64_t(0xff) << shift(v))) |
            (std::uint64_t(e) << shift(v));
  }

  Mono raised(int v, int d) const {
    Mono m = *this;
    m.set(v, exp(v) + d);
    return m;
  }

  int deg() const {
    // byte-wise horizontal sum; valid while total degree < 256
    return int((bits_ * 0x0101010101010101ull) >> 56);
  }

  bool is_one() const { return bits_ == 0; }

  bool contains(const Mono& o) const {
    for (int v = 0; v < max_vars; ++v)
      if (exp(v) < o.exp(v)) return false;
    return true;
  }

  Mono times(const Mono& o) const {
    Mono m;
    for (int v = 0; v < max_vars; ++v) m.set(v, exp(v) + o.exp(v));
    return m;
  }

  Mono divided(const Mono& o) const {
    Mono m;
    for (int v = 0; v < max_vars; ++v) {
      int e = exp(v) - o.exp(v);
      require(e >= 0, errc::usage, "monomial does not divide");
      m.set(v, e);
    }
    return m;
  }

  std::uint64_t raw() const { return bits_; }

  friend bool operator==(const Mono& a, const Mono& b) { return a.bits_ == b.bits_; }
  friend bool operator!=(const Mono& a, const Mono& b) { return a.bits_ != b.bits_; }
  friend bool operator<(const Mono& a, const Mono& b) {
    int da = a.deg(), db = b.deg();
    if (da != db) return da < db;
    return a.bits_ > b.bits_;  // within a degree, z1-dominant terms first
  }

private:
  static constexpr int shift(int v) { return 8 * (max_vars - 1 - v); }

  std::uint64_t bits_ = 0;
};

}  // namespace wickstar
