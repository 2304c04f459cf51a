#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/jet.hpp"
#include "wickstar/nu_series.hpp"

namespace wickstar {

// Fibrewise contraction data: the inverse metric jets g^{lk} feeding the
// Wick product (row l antiholomorphic, column k holomorphic).
struct Fibre {
  int n = 0;
  std::vector<Jet> g_inv;  // l*n + k

  const Jet& ginv(int l, int k) const { return g_inv[l * n + k]; }
};

inline Fibre flat_fibre(int n) {
  Fibre f;
  f.n = n;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      f.g_inv.push_back(l == k ? Jet::constant(n, GaussRat(1)) : Jet(n));
  return f;
}

// Term key of an element of the form algebra W (x) Lambda: the monomial
// nu^r zeta^za zetabar^zb dz^fh dzbar^fa (fh, fa are index bitmasks, the
// factors ordered by index, all dz before all dzbar).
struct WKey {
  int r = 0;
  Mono za, zb;
  std::uint32_t fh = 0, fa = 0;

  int deg_nu() const { return r; }
  int degp_s() const { return za.deg(); }
  int degpp_s() const { return zb.deg(); }
  int deg_s() const { return za.deg() + zb.deg(); }
  int degp_a() const { return std::popcount(fh); }
  int degpp_a() const { return std::popcount(fa); }
  int deg_a() const { return degp_a() + degpp_a(); }
  int degp() const { return r + degp_s(); }
  int degpp() const { return r + degpp_s(); }
  int deg() const { return 2 * r + deg_s(); }

  friend bool operator==(const WKey& a, const WKey& b) {
    return a.r == b.r && a.za == b.za && a.zb == b.zb && a.fh == b.fh &&
           a.fa == b.fa;
  }
  friend bool operator<(const WKey& a, const WKey& b) {
    if (a.r != b.r) return a.r < b.r;
    if (a.za != b.za) return a.za < b.za;
    if (a.zb != b.zb) return a.zb < b.zb;
    if (a.fh != b.fh) return a.fh < b.fh;
    return a.fa < b.fa;
  }
};

enum class Grading {
  deg_nu,
  degp_s,
  degpp_s,
  deg_s,
  degp_a,
  degpp_a,
  deg_a,
  Degp,
  Degpp,
  Deg
};

inline int grade_of(const WKey& k, Grading g) {
  switch (g) {
    case Grading::deg_nu: return k.deg_nu();
    case Grading::degp_s: return k.degp_s();
    case Grading::degpp_s: return k.degpp_s();
    case Grading::deg_s: return k.deg_s();
    case Grading::degp_a: return k.degp_a();
    case Grading::degpp_a: return k.degpp_a();
    case Grading::deg_a: return k.deg_a();
    case Grading::Degp: return k.degp();
    case Grading::Degpp: return k.degpp();
    case Grading::Deg: return k.deg();
  }
  fail(errc::internal, "unreachable grading");
}

// number of pairs (i in x, j in y) with j < i, i.e. inversions when the
// factors of y are merged after the factors of x
inline int merge_inversions(std::uint32_t x, std::uint32_t y) {
  int inv = 0;
  while (y) {
    int j = std::countr_zero(y);
    y &= y - 1;
    inv += std::popcount(x >> (j + 1));
  }
  return inv;
}

// sign of (dz^a dzbar^b) ^ (dz^c dzbar^d) relative to canonical order;
// 0 on repeated factors
inline int wedge_sign(std::uint32_t h1, std::uint32_t a1, std::uint32_t h2,
                      std::uint32_t a2) {
  if ((h1 & h2) || (a1 & a2)) return 0;
  int inv = std::popcount(a1) * std::popcount(h2) + merge_inversions(h1, h2) +
            merge_inversions(a1, a2);
  return (inv % 2 == 0) ? 1 : -1;
}

// Element of W (x) Lambda, trusted for Deg <= cap (Deg = 2 deg_nu + deg_s);
// kExactDeg marks elements with no unseen tail.  Jets carry their own
// truncation orders independently.
class WickEl {
public:
  static constexpr int kExactDeg = 1 << 20;

  WickEl() = default;
  explicit WickEl(int n, int cap = kExactDeg) : n_(n), cap_(cap) {}

  static WickEl term(int n, const WKey& k, const Jet& j, int cap = kExactDeg) {
    WickEl w(n, cap);
    w.add_term(k, j);
    return w;
  }

  int dim() const { return n_; }
  int cap() const { return cap_; }
  bool exact() const { return cap_ >= kExactDeg; }
  bool is_zero() const { return t_.empty(); }
  const std::map<WKey, Jet>& terms() const { return t_; }

  int deg_min() const { return min_deg_stored(); }

  // lower bound on the Deg of anything this element can contain, unseen
  // tail included
  int deg_min_bound() const {
    if (!t_.empty()) return min_deg_stored();
    return exact() ? kExactDeg : cap_ + 1;
  }

  void add_term(const WKey& k, const Jet& j) {
    if (k.deg() > cap_) return;
    require(j.dim() == n_, errc::usage, "jet dimension mismatch");
    if (j.is_zero() && j.exact()) return;
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_.emplace(k, j);
    } else {
      it->second += j;
      if (it->second.is_zero() && it->second.exact()) t_.erase(it);
    }
  }

  Jet coeff(const WKey& k) const {
    auto it = t_.find(k);
    return it == t_.end() ? Jet(n_) : it->second;
  }

  void set_cap(int cap) {
    cap_ = cap;
    std::erase_if(t_, [&](const auto& t) { return t.first.deg() > cap_; });
  }

  WickEl truncated(int cap) const {
    WickEl w = *this;
    w.set_cap(std::min(cap, cap_));
    return w;
  }

  WickEl truncated_jets(int order) const {
    WickEl w(n_, cap_);
    for (const auto& [k, j] : t_) w.add_term(k, j.truncated(order));
    return w;
  }

  WickEl& operator+=(const WickEl& o) {
    check_dim(o);
    set_cap(std::min(cap_, o.cap_));
    for (const auto& [k, j] : o.t_) add_term(k, j);
    return *this;
  }
  WickEl& operator-=(const WickEl& o) {
    check_dim(o);
    set_cap(std::min(cap_, o.cap_));
    for (const auto& [k, j] : o.t_) add_term(k, -j);
    return *this;
  }

  void check_dim(const WickEl& o) const {
    require(n_ == o.n_, errc::usage, "element dimension mismatch");
  }

private:
  int min_deg_stored() const {
    int m = kExactDeg;
    for (const auto& [k, j] : t_) m = std::min(m, k.deg());
    return m;
  }

  int n_ = 0;
  int cap_ = kExactDeg;
  std::map<WKey, Jet> t_;
};

inline WickEl operator+(WickEl a, const WickEl& b) { return a += b; }
inline WickEl operator-(WickEl a, const WickEl& b) { return a -= b; }

inline WickEl operator-(const WickEl& a) {
  WickEl r(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms()) r.add_term(k, -j);
  return r;
}

inline WickEl operator*(const GaussRat& s, const WickEl& a) {
  WickEl r(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms()) r.add_term(k, s * j);
  return r;
}

inline WickEl mul_jet(const Jet& f, const WickEl& a) {
  WickEl r(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms()) r.add_term(k, f * j);
  return r;
}

// multiply by nu^k: Deg shifts by 2k
inline WickEl nu_shift(const WickEl& a, int k) {
  int cap = a.exact() ? WickEl::kExactDeg : a.cap() + 2 * k;
  WickEl r(a.dim(), cap);
  for (const auto& [key, j] : a.terms()) {
    WKey nk = key;
    nk.r += k;
    r.add_term(nk, j);
  }
  return r;
}

inline std::map<int, WickEl> decompose(const WickEl& a, Grading g) {
  std::map<int, WickEl> out;
  for (const auto& [k, j] : a.terms()) {
    int q = grade_of(k, g);
    auto it = out.find(q);
    if (it == out.end()) it = out.emplace(q, WickEl(a.dim(), a.cap())).first;
    it->second.add_term(k, j);
  }
  return out;
}

inline WickEl component(const WickEl& a, Grading g, int q) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms())
    if (grade_of(k, g) == q) out.add_term(k, j);
  return out;
}

// projection setting zetabar = 0
inline WickEl pi_p(const WickEl& a) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms())
    if (k.zb.is_one()) out.add_term(k, j);
  return out;
}

// projection setting zeta = 0
inline WickEl pi_pp(const WickEl& a) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms())
    if (k.za.is_one()) out.add_term(k, j);
  return out;
}

// projection setting zeta = zetabar = 0
inline WickEl pi_full(const WickEl& a) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms())
    if (k.za.is_one() && k.zb.is_one()) out.add_term(k, j);
  return out;
}

inline bool is_fock(const WickEl& a) {
  for (const auto& [k, j] : a.terms())
    if (!k.zb.is_one()) return false;
  return true;
}

inline bool is_zero_form(const WickEl& a) {
  for (const auto& [k, j] : a.terms())
    if (k.fh || k.fa) return false;
  return true;
}

inline int floor_div(int a, int b) {
  int q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// scalar (fibre- and form-free) element as a nu-series; Deg = 2 deg_nu on
// scalars, so trust through nu^(cap/2)
inline NuSeries scalar_part(const WickEl& a) {
  int cap = a.exact() ? NuSeries::kExactCap : floor_div(a.cap(), 2);
  NuSeries s(a.dim(), cap);
  for (const auto& [k, j] : a.terms()) {
    require(k.za.is_one() && k.zb.is_one() && !k.fh && !k.fa, errc::usage,
            "element is not scalar");
    s.add_term(k.r, j);
  }
  return s;
}

// a function of z, zbar, nu seen as a central Wick element: no fibre
// variables at all, so the only unseen tail is in nu
inline WickEl scalar_embed(const NuSeries& f) {
  int cap = f.exact() ? WickEl::kExactDeg : 2 * f.cap() + 1;
  WickEl w(f.dim(), cap);
  for (const auto& [r, j] : f.terms()) {
    WKey k;
    k.r = r;
    w.add_term(k, j);
  }
  return w;
}

// terms with the given numbers of dz and dzbar factors
inline WickEl form_component(const WickEl& a, int dp, int dq) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms())
    if (k.degp_a() == dp && k.degpp_a() == dq) out.add_term(k, j);
  return out;
}

// coefficient of the canonically ordered form monomial (fh, fa)
inline WickEl form_coeff(const WickEl& a, std::uint32_t fh, std::uint32_t fa) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms())
    if (k.fh == fh && k.fa == fa) {
      WKey nk = k;
      nk.fh = 0;
      nk.fa = 0;
      out.add_term(nk, j);
    }
  return out;
}

struct WickCompare {
  bool equal = true;
  int deg_upto = WickEl::kExactDeg;  // Deg region both sides cover
  int jet_floor = Jet::kExactOrder;  // weakest jet region met among terms
  WKey witness{};                    // first offending term
  Mono witness_mono;                 // offending jet monomial within it
  GaussRat lhs, rhs;
};

// compare two elements over the intersection of their trusted regions
inline WickCompare compare_trusted(const WickEl& a, const WickEl& b) {
  a.check_dim(b);
  WickCompare out;
  out.deg_upto = std::min(a.cap(), b.cap());
  std::set<WKey> keys;
  for (const auto& [k, j] : a.terms())
    if (k.deg() <= out.deg_upto) keys.insert(k);
  for (const auto& [k, j] : b.terms())
    if (k.deg() <= out.deg_upto) keys.insert(k);
  for (const WKey& k : keys) {
    JetCompare jc = compare_trusted(a.coeff(k), b.coeff(k));
    out.jet_floor = std::min(out.jet_floor, jc.order);
    if (!jc.equal) {
      out.equal = false;
      out.witness = k;
      out.witness_mono = jc.witness;
      out.lhs = jc.lhs;
      out.rhs = jc.rhs;
      return out;
    }
  }
  return out;
}

// multiply by the form monomial dz^mh dzbar^ma from the left
inline WickEl wedge_left(std::uint32_t mh, std::uint32_t ma, const WickEl& a) {
  WickEl out(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms()) {
    int s = wedge_sign(mh, ma, k.fh, k.fa);
    if (s == 0) continue;
    WKey nk = k;
    nk.fh |= mh;
    nk.fa |= ma;
    out.add_term(nk, s < 0 ? -j : j);
  }
  return out;
}

// interior product i(d/dz^k)
inline WickEl interior_h(const WickEl& a, int k) {
  WickEl out(a.dim(), a.cap());
  std::uint32_t bit = 1u << k;
  for (const auto& [key, j] : a.terms()) {
    if (!(key.fh & bit)) continue;
    int inv = std::popcount(key.fh & (bit - 1));
    WKey nk = key;
    nk.fh &= ~bit;
    out.add_term(nk, (inv % 2) ? -j : j);
  }
  return out;
}

// interior product i(d/dzbar^l); passes all dz factors first
inline WickEl interior_a(const WickEl& a, int l) {
  WickEl out(a.dim(), a.cap());
  std::uint32_t bit = 1u << l;
  for (const auto& [key, j] : a.terms()) {
    if (!(key.fa & bit)) continue;
    int inv = std::popcount(key.fh) + std::popcount(key.fa & (bit - 1));
    WKey nk = key;
    nk.fa &= ~bit;
    out.add_term(nk, (inv % 2) ? -j : j);
  }
  return out;
}

namespace detail {

using MuMat = std::array<std::uint8_t, 16>;  // row-major n x n, n <= 4

// enumerate contraction matrices with row sums <= rowcap, column sums
// <= colcap (componentwise)
template <class F>
inline void enum_mu_rec(int n, int cell, std::array<int, 4>& rowleft,
                        std::array<int, 4>& colleft, MuMat& mu, int total,
                        F&& visit) {
  if (cell == n * n) {
    visit(mu, total);
    return;
  }
  int l = cell / n, k = cell % n;
  int top = std::min(rowleft[l], colleft[k]);
  for (int v = 0; v <= top; ++v) {
    mu[cell] = std::uint8_t(v);
    rowleft[l] -= v;
    colleft[k] -= v;
    enum_mu_rec(n, cell + 1, rowleft, colleft, mu, total + v, visit);
    rowleft[l] += v;
    colleft[k] += v;
  }
  mu[cell] = 0;
}

template <class F>
inline void enum_mu(int n, const Mono& rowcap, const Mono& colcap, F&& visit) {
  std::array<int, 4> rowleft{}, colleft{};
  for (int i = 0; i < n; ++i) {
    rowleft[i] = rowcap.exp(i);
    colleft[i] = colcap.exp(i);
  }
  MuMat mu{};
  enum_mu_rec(n, 0, rowleft, colleft, mu, 0, visit);
}

struct GPowCache {
  const Fibre& fib;
  std::map<MuMat, Jet> memo;

  explicit GPowCache(const Fibre& f) : fib(f) {}

  const Jet& get(const MuMat& mu) {
    auto it = memo.find(mu);
    if (it != memo.end()) return it->second;
    Jet p = Jet::constant(fib.n, GaussRat(1));
    for (int l = 0; l < fib.n; ++l)
      for (int k = 0; k < fib.n; ++k)
        for (int c = 0; c < mu[l * fib.n + k]; ++c) p = p * fib.ginv(l, k);
    return memo.emplace(mu, std::move(p)).first->second;
  }
};

inline Mono row_sums(int n, const MuMat& mu) {
  Mono m;
  for (int l = 0; l < n; ++l) {
    int s = 0;
    for (int k = 0; k < n; ++k) s += mu[l * n + k];
    m.set(l, s);
  }
  return m;
}

inline Mono col_sums(int n, const MuMat& mu) {
  Mono m;
  for (int k = 0; k < n; ++k) {
    int s = 0;
    for (int l = 0; l < n; ++l) s += mu[l * n + k];
    m.set(k, s);
  }
  return m;
}

inline Rat mu_coef(int n, const MuMat& mu, const Mono& beta, const Mono& gamma,
                   const Mono& row, const Mono& col) {
  Rat c(1);
  for (int l = 0; l < n; ++l) c *= rat_falling(beta.exp(l), row.exp(l));
  for (int k = 0; k < n; ++k) c *= rat_falling(gamma.exp(k), col.exp(k));
  for (int i = 0; i < n * n; ++i) c /= rat_factorial(mu[i]);
  return c;
}

}  // namespace detail

// The fibrewise Wick product: contract zetabar powers of the left factor
// against zeta powers of the right factor through g^{lk}, one power of nu
// per contraction.  Deg-graded, so the result is trusted through
// min(cap(a) + degmin(b), cap(b) + degmin(a)), clamped by the caller.
inline WickEl wick_mul(const WickEl& a, const WickEl& b, const Fibre& fib,
                       int clamp = WickEl::kExactDeg) {
  a.check_dim(b);
  require(a.dim() == fib.n, errc::usage, "fibre dimension mismatch");
  long cap = std::min(long(a.cap()) + b.deg_min_bound(),
                      long(b.cap()) + a.deg_min_bound());
  cap = std::min({cap, long(clamp), long(WickEl::kExactDeg)});
  WickEl out(a.dim(), int(cap));
  int n = a.dim();
  detail::GPowCache gpow(fib);
  for (const auto& [ka, ja] : a.terms()) {
    for (const auto& [kb, jb] : b.terms()) {
      if (long(ka.deg()) + kb.deg() > cap) continue;
      int ws = wedge_sign(ka.fh, ka.fa, kb.fh, kb.fa);
      if (ws == 0) continue;
      Jet prod = ja * jb;
      detail::enum_mu(n, ka.zb, kb.za, [&](const detail::MuMat& mu, int m) {
        Mono row = detail::row_sums(n, mu);
        Mono col = detail::col_sums(n, mu);
        Rat c = detail::mu_coef(n, mu, ka.zb, kb.za, row, col);
        WKey k;
        k.r = ka.r + kb.r + m;
        k.za = ka.za.times(kb.za.divided(col));
        k.zb = ka.zb.divided(row).times(kb.zb);
        k.fh = ka.fh | kb.fh;
        k.fa = ka.fa | kb.fa;
        Jet coef = GaussRat(ws < 0 ? -c : c) * prod;
        if (m > 0) coef = coef * gpow.get(mu);
        out.add_term(k, coef);
      });
    }
  }
  return out;
}

// graded commutator with respect to the antisymmetric (form) degree
inline WickEl graded_comm(const WickEl& a, const WickEl& b, const Fibre& fib,
                          int clamp = WickEl::kExactDeg) {
  a.check_dim(b);
  long cap = std::min(long(a.cap()) + b.deg_min_bound(),
                      long(b.cap()) + a.deg_min_bound());
  cap = std::min({cap, long(clamp), long(WickEl::kExactDeg)});
  WickEl acc(a.dim(), int(cap));
  for (const auto& [qa, ca] : decompose(a, Grading::deg_a))
    for (const auto& [qb, cb] : decompose(b, Grading::deg_a)) {
      WickEl t = wick_mul(ca, cb, fib, int(cap));
      WickEl u = wick_mul(cb, ca, fib, int(cap));
      acc += (qa * qb % 2 == 0) ? t - u : t + u;
    }
  return acc;
}

// action of w on the formal Fock space: T_w v = Pi'(w o v)
inline WickEl hat_apply(const WickEl& w, const WickEl& v, const Fibre& fib,
                        int clamp = WickEl::kExactDeg) {
  require(is_fock(v), errc::usage, "operand must be zetabar-free");
  return pi_p(wick_mul(w, v, fib, clamp));
}

// Independent route for the same action: read zetabar^l in w as the
// holomorphic fibre derivative nu g^{lk} d/dzeta^k in normal order (all
// derivatives to the right), then apply to v by direct substitution.
inline WickEl normal_ordered_apply(const WickEl& w, const WickEl& v,
                                   const Fibre& fib,
                                   int clamp = WickEl::kExactDeg) {
  require(is_fock(v), errc::usage, "operand must be zetabar-free");
  w.check_dim(v);
  long cap = std::min(long(w.cap()) + v.deg_min_bound(),
                      long(v.cap()) + w.deg_min_bound());
  cap = std::min({cap, long(clamp), long(WickEl::kExactDeg)});
  WickEl out(w.dim(), int(cap));
  int n = w.dim();
  detail::GPowCache gpow(fib);
  for (const auto& [ka, ja] : w.terms()) {
    for (const auto& [kb, jb] : v.terms()) {
      if (long(ka.deg()) + kb.deg() > cap) continue;
      int ws = wedge_sign(ka.fh, ka.fa, kb.fh, kb.fa);
      if (ws == 0) continue;
      Jet prod = ja * jb;
      detail::enum_mu(n, ka.zb, kb.za, [&](const detail::MuMat& mu, int m) {
        Mono row = detail::row_sums(n, mu);
        if (row != ka.zb) return;  // every fibre derivative must act
        Mono col = detail::col_sums(n, mu);
        Rat c = detail::mu_coef(n, mu, ka.zb, kb.za, row, col);
        WKey k;
        k.r = ka.r + kb.r + m;
        k.za = ka.za.times(kb.za.divided(col));
        k.fh = ka.fh | kb.fh;
        k.fa = ka.fa | kb.fa;
        Jet coef = GaussRat(ws < 0 ? -c : c) * prod;
        if (m > 0) coef = coef * gpow.get(mu);
        out.add_term(k, coef);
      });
    }
  }
  return out;
}

inline std::string form_string(std::uint32_t fh, std::uint32_t fa) {
  std::string out;
  for (int k = 0; k < 32; ++k)
    if (fh & (1u << k)) {
      if (!out.empty()) out += "*";
      out += "dz" + std::to_string(k + 1);
    }
  for (int l = 0; l < 32; ++l)
    if (fa & (1u << l)) {
      if (!out.empty()) out += "*";
      out += "dzbar" + std::to_string(l + 1);
    }
  return out;
}

inline std::string fibre_string(const WKey& k) {
  std::string out;
  for (int v = 0; v < Mono::max_vars; ++v) {
    int e = k.za.exp(v);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += "zeta" + std::to_string(v + 1);
    if (e > 1) out += "^" + std::to_string(e);
  }
  for (int v = 0; v < Mono::max_vars; ++v) {
    int e = k.zb.exp(v);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += "zetabar" + std::to_string(v + 1);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

// canonical rendering: terms sorted by (Deg, nu-exponent, zeta exponents,
// zetabar exponents, form monomial)
inline std::string to_string(const WickEl& a) {
  if (a.is_zero()) return "0";
  std::vector<const std::pair<const WKey, Jet>*> terms;
  for (const auto& t : a.terms()) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(), [](const auto* x, const auto* y) {
    const WKey& p = x->first;
    const WKey& q = y->first;
    if (p.deg() != q.deg()) return p.deg() < q.deg();
    return p < q;
  });
  std::string out;
  for (const auto* t : terms) {
    const WKey& k = t->first;
    const Jet& j = t->second;
    std::string piece;
    std::string js = to_string(j);
    if (js != "1") {
      bool wrap = js[0] == '-' ||
                  js.find_first_of("+-", 1) != std::string::npos;
      piece = wrap ? "(" + js + ")" : js;
    }
    if (k.r != 0) {
      if (!piece.empty()) piece += "*";
      piece += "nu^" + std::to_string(k.r);
    }
    std::string fs = fibre_string(k);
    if (!fs.empty()) {
      if (!piece.empty()) piece += "*";
      piece += fs;
    }
    std::string ms = form_string(k.fh, k.fa);
    if (!ms.empty()) {
      if (!piece.empty()) piece += "*";
      piece += ms;
    }
    if (piece.empty()) piece = "1";
    if (!out.empty()) out += " + ";
    out += piece;
  }
  return out;
}

}  // namespace wickstar
