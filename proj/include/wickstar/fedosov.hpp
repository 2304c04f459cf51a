#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/geometry.hpp"
#include "wickstar/nu_series.hpp"
#include "wickstar/wick.hpp"

namespace wickstar {

// Connection 1-form of the flat structure: the unique r with
// delta^-1 r = 0, delta r = R + nabla r + (1/nu) r o r, and no negative
// powers of nu, built degree by degree through Deg = deg_cap.
inline WickEl solve_r(const Kaehler& K, int deg_cap) {
  require(deg_cap >= 2, errc::usage, "degree cap must be at least 2");
  if (K.curv.is_zero() && K.curv.exact()) return WickEl(K.n);
  std::map<int, WickEl> comp;  // Deg-homogeneous pieces
  comp[3] = delta_inv(K.curv);
  for (int q = 3; q < deg_cap; ++q) {
    WickEl b = nabla(comp[q], K);
    for (int a = 3; a + 3 <= q + 2; ++a) {
      auto ia = comp.find(a), ib = comp.find(q + 2 - a);
      if (ia != comp.end() && ib != comp.end())
        b += nu_shift(wick_mul(ia->second, ib->second, K.fib), -1);
    }
    comp[q + 1] = delta_inv(b);
  }

  WickEl r(K.n);
  for (const auto& [q, c] : comp) r += c;
  r.set_cap(deg_cap);

  WickEl zero(K.n);
  require(compare_trusted(delta_inv(r), zero).equal, errc::internal,
          "connection form is not delta^-1-normalized");
  require(compare_trusted(pi_p(r), zero).equal &&
              compare_trusted(pi_pp(r), zero).equal,
          errc::internal, "connection form has a pure fibre part");
  for (const auto& [k, j] : r.terms())
    if (!j.is_zero())  // skip pure order markers
      require(k.r >= 0 && k.deg_a() == 1, errc::internal,
              "connection form term outside nu^(>=0) x Lambda^1");
  WickEl rhs = K.curv + nabla(r, K) +
               nu_shift(wick_mul(r, r, K.fib), -1);
  WickCompare cmp = compare_trusted(delta_op(r), rhs);
  require(cmp.equal, errc::internal, "flat connection residual nonzero");
  return r;
}

// D w = -delta w + nabla w + (1/nu)[r, w]
inline WickEl fedosov_D(const WickEl& w, const Kaehler& K, const WickEl& r) {
  return nabla(w, K) - delta_op(w) +
         nu_shift(graded_comm(r, w, K.fib), -1);
}

// antiholomorphic part: D'' w = -delta'' w + nabla'' w + (1/nu)[r'', w]
inline WickEl fedosov_Dpp(const WickEl& w, const Kaehler& K, const WickEl& r) {
  return nabla_anti(w, K) - delta_anti(w) +
         nu_shift(graded_comm(form_component(r, 0, 1), w, K.fib), -1);
}

// Flat section with prescribed scalar part: the unique 0-form w with
// D w = 0 and Pi(w) = f, from the fixed point of
// w = f + delta^-1(nabla w + (1/nu)[r, w]).
inline WickEl flat_lift(const NuSeries& f, const Kaehler& K, const WickEl& r,
                        int deg_cap) {
  WickEl base = scalar_embed(f);
  base.set_cap(std::min(base.cap(), deg_cap));
  WickEl w = base;
  int span = deg_cap - std::min(base.deg_min_bound(), 0) + 6;
  bool settled = false;
  for (int it = 0; it < span && !settled; ++it) {
    WickEl b = nabla(w, K) + nu_shift(graded_comm(r, w, K.fib), -1);
    WickEl next = base + delta_inv(b);
    next.set_cap(std::min(next.cap(), deg_cap));
    settled = next.cap() == w.cap() && compare_trusted(next, w).equal;
    w = std::move(next);
  }
  require(settled, errc::internal, "flat section iteration did not settle");
  require(compare_trusted(scalar_embed(scalar_part(pi_full(w))),
                          scalar_embed(f))
              .equal,
          errc::internal, "flat section lost its scalar part");
  require(compare_trusted(fedosov_D(w, K, r), WickEl(K.n, w.cap() - 1)).equal,
          errc::internal, "flat section is not parallel");
  return w;
}

// f * g = Pi(lift(f) o lift(g)); the scalar part converts the Deg trust
// of the factors into nu-order trust of the series
inline NuSeries star_product(const NuSeries& f, const NuSeries& g,
                             const Kaehler& K, const WickEl& r, int deg_cap) {
  WickEl wf = flat_lift(f, K, r, deg_cap);
  WickEl wg = flat_lift(g, K, r, deg_cap);
  return scalar_part(pi_full(wick_mul(wf, wg, K.fib)));
}

// hat D v = nabla v + (1/nu) Pi'(gamma o v), gamma = -theta + r, on
// Fock-valued forms
inline WickEl dhat(const WickEl& v, const Kaehler& K, const WickEl& r) {
  WickEl gamma = r - K.theta;
  return nabla(v, K) +
         nu_shift(pi_p(wick_mul(gamma, v, K.fib)), -1);
}

// Anti-flat section with prescribed holomorphic symbol: the unique w with
// D'' w = 0 and Pi' w = v, built from the Deg''-homogeneous recursion
// w(q+1) = delta''^-1(nabla'' w(q) + (1/nu) sum_p [r''(p+1), w(q-p)])
// applied to each nu-homogeneous piece of v.
inline WickEl dpp_lift(const WickEl& v, const Kaehler& K, const WickEl& r,
                       int degpp_cap) {
  require(is_fock(v) && is_zero_form(v), errc::usage,
          "symbol must be a fibre-holomorphic 0-form");
  WickEl rpp = form_component(r, 0, 1);
  std::map<int, WickEl> rc = decompose(rpp, Grading::Degpp);
  WickEl w(K.n, WickEl::kExactDeg);
  for (const auto& [m, piece] : decompose(v, Grading::deg_nu)) {
    WickEl u = nu_shift(piece, -m);
    std::map<int, WickEl> comp;
    comp[0] = u;
    for (int q = 0; q < degpp_cap; ++q) {
      WickEl b = nabla_anti(comp[q], K);
      for (int p = 0; p <= q; ++p) {
        auto ir = rc.find(p + 1);
        if (ir != rc.end())
          b += nu_shift(graded_comm(ir->second, comp[q - p], K.fib), -1);
      }
      comp[q + 1] = deltapp_inv(b);
    }
    // once the tail dies with nothing to revive it, the section is complete
    bool complete = r.exact() && rpp.is_zero() &&
                    comp[degpp_cap].exact() && comp[degpp_cap].is_zero();
    WickEl lift(K.n);
    for (const auto& [q, c] : comp) lift += c;
    if (!complete) lift.set_cap(std::min(lift.cap(), degpp_cap));
    w += nu_shift(lift, m);
  }
  require(compare_trusted(pi_p(w), v.truncated(w.cap())).equal, errc::internal,
          "anti-flat section lost its symbol");
  require(compare_trusted(fedosov_Dpp(w, K, r), WickEl(K.n, w.cap() - 1))
              .equal,
          errc::internal, "anti-flat section is not parallel");
  return w;
}

// the Fock product: v1 . v2 = Pi'(lift(v1) o lift(v2))
inline WickEl fock_product(const WickEl& v1, const WickEl& v2,
                           const Kaehler& K, const WickEl& r, int degpp_cap) {
  WickEl w1 = dpp_lift(v1, K, r, degpp_cap);
  WickEl w2 = dpp_lift(v2, K, r, degpp_cap);
  return pi_p(wick_mul(w1, w2, K.fib));
}

// star-product engine with a cache of flat sections
class FedosovEngine {
 public:
  FedosovEngine(Kaehler k, int deg_cap)
      : K(std::move(k)), deg_cap_(deg_cap), r_(solve_r(K, deg_cap)) {}

  const Kaehler K;

  int deg_cap() const { return deg_cap_; }
  const WickEl& r() const { return r_; }

  const WickEl& lift(const NuSeries& f) {
    // rendered content plus the trust markers it does not show
    std::string key = to_string(f) + "#" + std::to_string(f.cap());
    for (const auto& [r, j] : f.terms()) key += "," + std::to_string(j.order());
    auto it = lifts_.find(key);
    if (it != lifts_.end()) return it->second;
    return lifts_.emplace(key, flat_lift(f, K, r_, deg_cap_)).first->second;
  }

  NuSeries star(const NuSeries& f, const NuSeries& g) {
    return scalar_part(pi_full(wick_mul(lift(f), lift(g), K.fib)));
  }

  NuSeries star(const Jet& f, const Jet& g) {
    return star(NuSeries::of_jet(f), NuSeries::of_jet(g));
  }

 private:
  int deg_cap_;
  WickEl r_;
  std::map<std::string, WickEl> lifts_;
};

// Bidifferential coefficient tables: f * g = sum_r nu^r C_r(f, g) with
// C_r(f, g) = sum_{A,B} c_{r,A,B} d^A f d^B g over monomial multi-indices
// in (z, zbar); recovered from monomial probes by a triangular solve.
struct CrKey {
  int r = 0;
  Mono a, b;

  friend bool operator<(const CrKey& x, const CrKey& y) {
    if (x.r != y.r) return x.r < y.r;
    if (!(x.a == y.a)) return x.a < y.a;
    return x.b < y.b;
  }
  friend bool operator==(const CrKey& x, const CrKey& y) {
    return x.r == y.r && x.a == y.a && x.b == y.b;
  }
};

using StarFn = std::function<NuSeries(const Jet&, const Jet&)>;

struct CrTable {
  int n = 0;
  int nu_max = 0;
  int ord_max = 0;
  std::map<CrKey, Jet> c;

  Jet coeff(const CrKey& k) const {
    auto it = c.find(k);
    return it == c.end() ? Jet(n) : it->second;
  }
};

inline CrTable build_cr_table(const StarFn& star, int n, int nu_max,
                              int ord_max) {
  CrTable t;
  t.n = n;
  t.nu_max = nu_max;
  t.ord_max = ord_max;
  std::vector<Mono> probes = monos_upto(2 * n, ord_max);
  for (const Mono& pa : probes)
    for (const Mono& pb : probes) {
      NuSeries s = star(Jet::monomial(n, pa, GaussRat(1)),
                        Jet::monomial(n, pb, GaussRat(1)));
      require(s.val() >= 0, errc::internal,
              "star of functions produced negative nu powers");
      require(s.cap() >= nu_max, errc::budget,
              "star output trusted short of the requested nu order");
      for (int r = 0; r <= nu_max; ++r) {
        Jet residue = s.coeff(r);
        for (const Mono& a : probes)
          for (const Mono& b : probes) {
            if (a == pa && b == pb) continue;
            if (!mono_leq(a, pa) || !mono_leq(b, pb)) continue;
            auto it = t.c.find({r, a, b});
            if (it == t.c.end()) continue;
            GaussRat f(mono_falling(pa, a) *
                       mono_falling(pb, b));
            residue -= f * (it->second *
                            Jet::monomial(n,
                                          pa.divided(a).times(pb.divided(b)),
                                          GaussRat(1)));
          }
        Jet coef = GaussRat(Rat(1) / (mono_factorial(pa) *
                                      mono_factorial(pb))) *
                   residue;
        if (!coef.is_zero() || !coef.exact()) t.c.insert({{r, pa, pb}, coef});
      }
    }
  return t;
}

}  // namespace wickstar
