#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/mono.hpp"
#include "wickstar/rational.hpp"

namespace wickstar {

// Taylor polynomial at the chart origin in the 2n commuting variables
// z1..zn, zbar1..zbarn (variable k is z_{k+1}, variable n+l is zbar_{l+1}).
// Trusted on total degree <= order(); kExactOrder marks polynomials that
// are exact, not truncations.  Invariants: no stored zero coefficients,
// no stored monomial of degree beyond order().
class Jet {
public:
  static constexpr int kExactOrder = 1 << 20;

  Jet() = default;
  explicit Jet(int n, int order = kExactOrder) : n_(n), order_(order) {
    require(n >= 1 && 2 * n <= Mono::max_vars, errc::usage,
            "dimension out of range");
  }

  static Jet constant(int n, GaussRat c, int order = kExactOrder) {
    Jet j(n, order);
    j.add_term(Mono(), std::move(c));
    return j;
  }

  static Jet variable(int n, int var, int order = kExactOrder) {
    Jet j(n, order);
    j.add_term(Mono::var(var), GaussRat(1));
    return j;
  }

  static Jet monomial(int n, Mono m, GaussRat c, int order = kExactOrder) {
    Jet j(n, order);
    j.add_term(m, std::move(c));
    return j;
  }

  int dim() const { return n_; }
  int vars() const { return 2 * n_; }
  int order() const { return order_; }
  bool exact() const { return order_ >= kExactOrder; }
  bool is_zero() const { return coef_.empty(); }
  const std::map<Mono, GaussRat>& terms() const { return coef_; }

  // lowest total degree present; kExactOrder for the zero jet
  int valuation() const {
    return coef_.empty() ? kExactOrder : coef_.begin()->first.deg();
  }

  // lower bound on the valuation of the function this jet truncates: the
  // unseen tail starts no earlier than order()+1
  int valuation_bound() const {
    int v = valuation();
    if (!exact()) v = std::min(v, order_ + 1);
    return v;
  }

  GaussRat coeff(const Mono& m) const {
    auto it = coef_.find(m);
    return it == coef_.end() ? GaussRat() : it->second;
  }

  GaussRat value_at_origin() const { return coeff(Mono()); }

  void add_term(const Mono& m, const GaussRat& c) {
    if (c.is_zero() || m.deg() > order_) return;
    auto it = coef_.find(m);
    if (it == coef_.end()) {
      coef_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) coef_.erase(it);
    }
  }

  void set_order(int order) {
    order_ = order;
    std::erase_if(coef_, [&](const auto& t) { return t.first.deg() > order_; });
  }

  Jet truncated(int order) const {
    Jet j = *this;
    j.set_order(std::min(order, order_));
    return j;
  }

  Jet& operator+=(const Jet& o) {
    check_dim(o);
    set_order(std::min(order_, o.order_));
    for (const auto& [m, c] : o.coef_) add_term(m, c);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_dim(o);
    set_order(std::min(order_, o.order_));
    for (const auto& [m, c] : o.coef_) add_term(m, -c);
    return *this;
  }

  void check_dim(const Jet& o) const {
    require(n_ == o.n_, errc::usage, "jet dimension mismatch");
  }

private:
  int n_ = 0;
  int order_ = kExactOrder;
  std::map<Mono, GaussRat> coef_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }

inline Jet operator-(const Jet& a) {
  Jet r(a.dim(), a.order());
  for (const auto& [m, c] : a.terms()) r.add_term(m, -c);
  return r;
}

inline Jet operator*(const GaussRat& s, const Jet& a) {
  Jet r(a.dim(), a.order());
  if (s.is_zero()) return r;
  for (const auto& [m, c] : a.terms()) r.add_term(m, s * c);
  return r;
}

// order of a product: each factor is trusted mod degrees > order, and a
// term of degree d multiplies terms of degree >= valuation of the other
// side, so the product is trusted through min(oa + vb, ob + va).
inline int product_order(const Jet& a, const Jet& b) {
  long oa = a.order(), ob = b.order();
  long va = a.valuation_bound(), vb = b.valuation_bound();
  long r = std::min(oa + vb, ob + va);
  return int(std::min(r, long(Jet::kExactOrder)));
}

inline Jet operator*(const Jet& a, const Jet& b) {
  a.check_dim(b);
  Jet r(a.dim(), product_order(a, b));
  for (const auto& [ma, ca] : a.terms()) {
    if (ma.deg() > r.order()) break;
    for (const auto& [mb, cb] : b.terms()) {
      Mono m = ma.times(mb);
      if (m.deg() > r.order()) continue;
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet partial(const Jet& a, int var) {
  require(var >= 0 && var < a.vars(), errc::usage, "variable out of range");
  Jet r(a.dim(), a.exact() ? Jet::kExactOrder : a.order() - 1);
  for (const auto& [m, c] : a.terms()) {
    int e = m.exp(var);
    if (e == 0) continue;
    r.add_term(m.raised(var, -1), GaussRat(Rat(e)) * c);
  }
  return r;
}

// 1/a as a geometric series in (a - a(0))/a(0).  Exact non-constant input
// has no polynomial inverse, so a finite order must be in force.
inline Jet invert(const Jet& a) {
  GaussRat c0 = a.value_at_origin();
  require(!c0.is_zero(), errc::domain,
          "division by a jet with zero constant term");
  Jet v = a;
  Jet cj = Jet::constant(a.dim(), c0, a.order());
  v -= cj;
  if (v.is_zero()) return Jet::constant(a.dim(), GaussRat(1) / c0, a.order());
  require(!a.exact(), errc::budget,
          "inverting a non-constant exact jet needs a truncation order");
  GaussRat inv0 = GaussRat(1) / c0;
  Jet u = ((-inv0) * v).truncated(a.order());
  // 1/a = inv0 * (1 + u + u^2 + ...); u has positive valuation, so the
  // series terminates once powers leave the fixed target order
  Jet acc = Jet::constant(a.dim(), GaussRat(1), a.order());
  Jet p = u;
  while (!p.is_zero()) {
    acc += p;
    p = (p * u).truncated(a.order());
  }
  return inv0 * acc;
}

inline Jet ipow(const Jet& a, long e) {
  if (e < 0) return ipow(invert(a), -e);
  Jet r = Jet::constant(a.dim(), GaussRat(1), a.order());
  Jet base = a;
  for (long k = e; k > 0; k >>= 1) {
    if (k & 1) r = r * base;
    if (k > 1) base = base * base;
  }
  return r;
}

// multi-index combinatorics shared by operator expansions
inline Rat mono_factorial(const Mono& m) {
  Rat c(1);
  for (int v = 0; v < Mono::max_vars; ++v) c *= rat_factorial(m.exp(v));
  return c;
}

inline Rat mono_falling(const Mono& from, const Mono& by) {
  Rat c(1);
  for (int v = 0; v < Mono::max_vars; ++v)
    c *= rat_falling(from.exp(v), by.exp(v));
  return c;
}

inline Rat mono_binom(const Mono& of, const Mono& over) {
  Rat c(1);
  for (int v = 0; v < Mono::max_vars; ++v)
    c *= rat_binom(of.exp(v), over.exp(v));
  return c;
}

inline bool mono_leq(const Mono& a, const Mono& b) {
  for (int v = 0; v < Mono::max_vars; ++v)
    if (a.exp(v) > b.exp(v)) return false;
  return true;
}

// all monomials in the first `vars` variables of total degree <= deg
inline std::vector<Mono> monos_upto(int vars, int deg) {
  std::vector<Mono> out{Mono()};
  std::size_t lo = 0;
  for (int d = 1; d <= deg; ++d) {
    std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i)
      for (int v = 0; v < vars; ++v) {
        Mono m = out[i].raised(v, 1);
        bool seen = false;
        for (std::size_t j = hi; j < out.size() && !seen; ++j)
          seen = out[j] == m;
        if (!seen) out.push_back(m);
      }
    lo = hi;
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct JetCompare {
  bool equal = true;
  int order = Jet::kExactOrder;  // region the comparison covers
  Mono witness;
  GaussRat lhs, rhs;
};

inline JetCompare compare_trusted(const Jet& a, const Jet& b) {
  a.check_dim(b);
  JetCompare r;
  r.order = std::min(a.order(), b.order());
  Jet d = a.truncated(r.order) - b.truncated(r.order);
  if (!d.is_zero()) {
    r.equal = false;
    r.witness = d.terms().begin()->first;
    r.lhs = a.coeff(r.witness);
    r.rhs = b.coeff(r.witness);
  }
  return r;
}

inline std::string var_name(int n, int v) {
  return (v < n) ? "z" + std::to_string(v + 1)
                 : "zbar" + std::to_string(v - n + 1);
}

inline std::string mono_string(int n, const Mono& m) {
  if (m.is_one()) return "1";
  std::string out;
  for (int v = 0; v < 2 * n; ++v) {
    int e = m.exp(v);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += var_name(n, v);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

// Terms in graded lex order, constant first: "1 - 2*z1*zbar1 + 3*z1^2*zbar1^2".
inline std::string to_string(const Jet& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : a.terms()) {
    GaussRat v = c;
    std::string sign;
    if (out.empty()) {
      if (v.is_real() && sgn(v.re) < 0) {
        sign = "-";
        v = -v;
      }
    } else {
      if (v.is_real() && sgn(v.re) < 0) {
        sign = " - ";
        v = -v;
      } else {
        sign = " + ";
      }
    }
    std::string cs = to_string(v);
    std::string body;
    if (m.is_one()) {
      body = cs;
    } else if (v.is_one()) {
      body = mono_string(a.dim(), m);
    } else {
      bool wrap = cs.find_first_of("+-", 1) != std::string::npos;
      body = (wrap ? "(" + cs + ")" : cs) + "*" + mono_string(a.dim(), m);
    }
    out += sign + body;
  }
  return out;
}

}  // namespace wickstar
