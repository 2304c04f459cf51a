#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "wickstar/error.hpp"

namespace wickstar {

using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
  require(den != 0, errc::domain, "zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Rat rat_factorial(int m) {
  Rat r(1);
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

// base * (base-1) * ... * (base-count+1)
inline Rat rat_falling(int base, int count) {
  Rat r(1);
  for (int i = 0; i < count; ++i) r *= (base - i);
  return r;
}

inline Rat rat_binom(int n, int k) {
  if (k < 0 || k > n) return Rat(0);
  return rat_falling(n, k) / rat_factorial(k);
}

// Exact Gaussian rational re + im*i.  mpq_class keeps each part in lowest
// terms with positive denominator, so values have one representation.
struct GaussRat {
  Rat re, im;

  GaussRat() : re(0), im(0) {}
  GaussRat(int v) : re(v), im(0) {}
  GaussRat(long v) : re(v), im(0) {}
  GaussRat(Rat r) : re(std::move(r)), im(0) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRat i() { return GaussRat(Rat(0), Rat(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  GaussRat conj() const { return GaussRat(re, -im); }
  Rat norm() const { return re * re + im * im; }

  GaussRat& operator+=(const GaussRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRat& operator-=(const GaussRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRat& operator*=(const GaussRat& o) {
    Rat nre = re * o.re - im * o.im;
    Rat nim = re * o.im + im * o.re;
    re = std::move(nre);
    im = std::move(nim);
    return *this;
  }
  GaussRat& operator/=(const GaussRat& o) {
    require(!o.is_zero(), errc::domain, "division by zero");
    Rat nn = o.norm();
    Rat nre = (re * o.re + im * o.im) / nn;
    Rat nim = (im * o.re - re * o.im) / nn;
    re = std::move(nre);
    im = std::move(nim);
    return *this;
  }

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend GaussRat operator-(const GaussRat& a) { return GaussRat(-a.re, -a.im); }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

// Rendering: "0", "3/4", "i", "-2*i", "1/2+3*i", "1-i".
inline std::string to_string(const GaussRat& v) {
  if (v.is_zero()) return "0";
  std::string out;
  if (sgn(v.re) != 0) out += to_string(v.re);
  if (sgn(v.im) != 0) {
    Rat a = abs(v.im);
    std::string part = (a == 1) ? "i" : to_string(a) + "*i";
    if (out.empty())
      out += (sgn(v.im) < 0 ? "-" : "") + part;
    else
      out += (sgn(v.im) < 0 ? "-" : "+") + part;
  }
  return out;
}

}  // namespace wickstar
