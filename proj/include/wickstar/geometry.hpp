#pragma once

#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/wick.hpp"

namespace wickstar {

namespace detail {

// Gauss-Jordan inverse of an n x n matrix of Gaussian rationals
inline std::vector<GaussRat> invert_const_matrix(int n,
                                                 const std::vector<GaussRat>& a) {
  std::vector<GaussRat> m = a;
  std::vector<GaussRat> inv(n * n);
  for (int i = 0; i < n; ++i) inv[i * n + i] = GaussRat(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int row = col; row < n; ++row)
      if (!m[row * n + col].is_zero()) {
        piv = row;
        break;
      }
    require(piv >= 0, errc::domain, "degenerate metric at the base point");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m[piv * n + j], m[col * n + j]);
        std::swap(inv[piv * n + j], inv[col * n + j]);
      }
    GaussRat d = m[col * n + col];
    for (int j = 0; j < n; ++j) {
      m[col * n + j] /= d;
      inv[col * n + j] /= d;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || m[row * n + col].is_zero()) continue;
      GaussRat f = m[row * n + col];
      for (int j = 0; j < n; ++j) {
        m[row * n + j] -= f * m[col * n + j];
        inv[row * n + j] -= f * inv[col * n + j];
      }
    }
  }
  return inv;
}

inline std::vector<Jet> matmul(int n, const std::vector<Jet>& a,
                               const std::vector<Jet>& b, int order) {
  std::vector<Jet> c;
  c.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s(a[0].dim(), order);
      for (int k = 0; k < n; ++k) s += (a[i * n + k] * b[k * n + j]).truncated(order);
      c.push_back(std::move(s));
    }
  return c;
}

}  // namespace detail

// Local Kaehler data built from a potential jet: metric, inverse metric,
// Christoffel symbols, the fibrewise curvature form R and the one-form
// theta realizing delta = (1/nu) ad(theta).
struct Kaehler {
  int n = 0;
  Jet phi;
  std::vector<Jet> g;         // g_{kl} at k*n + l
  Fibre fib;                  // g^{lk} at l*n + k
  std::vector<Jet> gam;       // Gamma^s_{ki} at (k*n + i)*n + s
  std::vector<Jet> gam_bar;   // Gammabar^t_{lj} at (l*n + j)*n + t
  WickEl curv;                // R
  WickEl theta;

  const Jet& metric(int k, int l) const { return g[k * n + l]; }
  const Jet& ginv(int l, int k) const { return fib.ginv(l, k); }
  const Jet& christoffel(int k, int i, int s) const {
    return gam[(k * n + i) * n + s];
  }
  const Jet& christoffel_bar(int l, int j, int t) const {
    return gam_bar[(l * n + j) * n + t];
  }
};

inline Kaehler build_kaehler(const Jet& phi) {
  Kaehler K;
  K.n = phi.dim();
  K.phi = phi;
  int n = K.n;

  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      K.g.push_back(partial(partial(phi, k), n + l));

  // the constant-matrix shortcut is sound only for exact metric jets
  bool const_metric = true;
  for (const Jet& e : K.g) {
    if (!e.exact()) const_metric = false;
    if (!e.is_zero() && e.valuation() > 0) const_metric = false;
    if (e.terms().size() > (e.value_at_origin().is_zero() ? 0u : 1u))
      const_metric = false;
  }

  std::vector<GaussRat> g0(n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) g0[k * n + l] = K.metric(k, l).value_at_origin();
  // rows of g0inv are indexed by l: g0inv[l*n+k] approximates g^{lk}
  std::vector<GaussRat> g0inv = detail::invert_const_matrix(n, g0);

  K.fib.n = n;
  if (const_metric) {
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        K.fib.g_inv.push_back(Jet::constant(n, g0inv[l * n + k]));
  } else {
    int order = Jet::kExactOrder;
    for (const Jet& e : K.g) order = std::min(order, e.order());
    require(order < Jet::kExactOrder, errc::budget,
            "curved metric needs a finite jet order; truncate the potential");
    // Neumann series: with A = G0 (I + N), N = G0^{-1}(G - G0) of positive
    // valuation, G^{-1} = (I - N + N^2 - ...) G0^{-1}
    std::vector<Jet> nmat(n * n, Jet(n, order));
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        Jet s(n, order);
        for (int m = 0; m < n; ++m) {
          Jet d = K.metric(m, j);
          d.add_term(Mono(), -g0[m * n + j]);
          s += g0inv[k * n + m] * d;
        }
        nmat[k * n + j] = s.truncated(order);
      }
    std::vector<Jet> acc(n * n, Jet(n, order));
    for (int i = 0; i < n; ++i) acc[i * n + i] = Jet::constant(n, GaussRat(1), order);
    std::vector<Jet> p = nmat;
    int sign = -1;
    bool nonzero = true;
    while (nonzero) {
      for (int i = 0; i < n * n; ++i)
        acc[i] += (sign < 0 ? GaussRat(-1) : GaussRat(1)) * p[i];
      p = detail::matmul(n, p, nmat, order);
      sign = -sign;
      nonzero = false;
      for (const Jet& e : p)
        if (!e.is_zero()) nonzero = true;
    }
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        Jet s(n, order);
        for (int m = 0; m < n; ++m) s += g0inv[m * n + k] * acc[l * n + m];
        K.fib.g_inv.push_back(s.truncated(order));
      }
    // certificate: g_{kl} g^{lm} = delta_k^m on the trusted region
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        Jet s(n, order);
        for (int l = 0; l < n; ++l) s += (K.metric(k, l) * K.ginv(l, m)).truncated(order);
        Jet expect = (k == m) ? Jet::constant(n, GaussRat(1), order) : Jet(n, order);
        require(compare_trusted(s, expect).equal, errc::internal,
                "metric inverse certificate failed");
      }
  }

  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < n; ++s) {
        Jet sum(n, Jet::kExactOrder);
        for (int l = 0; l < n; ++l) sum += K.ginv(l, s) * partial(K.metric(k, l), i);
        K.gam.push_back(sum);
      }
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < n; ++t) {
        Jet sum(n, Jet::kExactOrder);
        for (int k = 0; k < n; ++k)
          sum += K.ginv(t, k) * partial(K.metric(k, l), n + j);
        K.gam_bar.push_back(sum);
      }

  K.curv = WickEl(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet rj = partial(partial(K.metric(k, l), i), n + j);
          for (int t = 0; t < n; ++t)
            for (int s = 0; s < n; ++s)
              rj -= K.ginv(t, s) * partial(K.metric(k, t), i) *
                    partial(K.metric(s, l), n + j);
          WKey key;
          key.za = Mono::var(k);
          key.zb = Mono::var(l);
          key.fh = 1u << i;
          key.fa = 1u << j;
          K.curv.add_term(key, rj);
        }

  K.theta = WickEl(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      WKey kh;
      kh.zb = Mono::var(l);
      kh.fh = 1u << k;
      K.theta.add_term(kh, K.metric(k, l));
      WKey ka;
      ka.za = Mono::var(k);
      ka.fa = 1u << l;
      K.theta.add_term(ka, -K.metric(k, l));
    }
  return K;
}

inline Kaehler build_flat(int n) {
  Jet phi(n);
  for (int k = 0; k < n; ++k)
    phi += Jet::variable(n, k) * Jet::variable(n, n + k);
  return build_kaehler(phi);
}

// exterior differential on coefficients: dz^i d/dz^i + dzbar^j d/dzbar^j,
// new form factors wedge in from the left
inline WickEl exterior_d(const WickEl& w) {
  WickEl out(w.dim(), w.cap());
  int n = w.dim();
  for (const auto& [k, j] : w.terms()) {
    for (int v = 0; v < 2 * n; ++v) {
      Jet dj = partial(j, v);
      if (dj.is_zero() && dj.exact()) continue;
      std::uint32_t mh = v < n ? (1u << v) : 0u;
      std::uint32_t ma = v < n ? 0u : (1u << (v - n));
      int s = wedge_sign(mh, ma, k.fh, k.fa);
      if (s == 0) continue;
      WKey nk = k;
      nk.fh |= mh;
      nk.fa |= ma;
      out.add_term(nk, s < 0 ? -dj : dj);
    }
  }
  return out;
}

namespace detail {

enum class Half { holo, anti, both };

}  // namespace detail

// Kaehler connection nabla = d - Gamma^s_{ki} zeta^i (d/dzeta^s) dz^k
//                              - Gammabar^t_{lj} zetabar^j (d/dzetabar^t) dzbar^l
inline WickEl nabla(const WickEl& w, const Kaehler& K,
                    detail::Half half = detail::Half::both) {
  int n = w.dim();
  require(n == K.n, errc::usage, "dimension mismatch");
  WickEl out(n, w.cap());
  bool do_h = half != detail::Half::anti;
  bool do_a = half != detail::Half::holo;
  for (const auto& [key, jet] : w.terms()) {
    if (do_h)
      for (int i = 0; i < n; ++i) {
        Jet dj = partial(jet, i);
        int s = wedge_sign(1u << i, 0u, key.fh, key.fa);
        if (s == 0) continue;
        WKey nk = key;
        nk.fh |= 1u << i;
        out.add_term(nk, s < 0 ? -dj : dj);
      }
    if (do_a)
      for (int j = 0; j < n; ++j) {
        Jet dj = partial(jet, n + j);
        int s = wedge_sign(0u, 1u << j, key.fh, key.fa);
        if (s == 0) continue;
        WKey nk = key;
        nk.fa |= 1u << j;
        out.add_term(nk, s < 0 ? -dj : dj);
      }
    if (do_h)
      for (int s = 0; s < n; ++s) {
        int e = key.za.exp(s);
        if (e == 0) continue;
        for (int k = 0; k < n; ++k) {
          int ws = wedge_sign(1u << k, 0u, key.fh, key.fa);
          if (ws == 0) continue;
          for (int i = 0; i < n; ++i) {
            Jet cj = GaussRat(Rat(-e * ws)) * (K.christoffel(k, i, s) * jet);
            WKey nk = key;
            nk.za = key.za.raised(s, -1).raised(i, 1);
            nk.fh |= 1u << k;
            out.add_term(nk, cj);
          }
        }
      }
    if (do_a)
      for (int t = 0; t < n; ++t) {
        int e = key.zb.exp(t);
        if (e == 0) continue;
        for (int l = 0; l < n; ++l) {
          int ws = wedge_sign(0u, 1u << l, key.fh, key.fa);
          if (ws == 0) continue;
          for (int j = 0; j < n; ++j) {
            Jet cj = GaussRat(Rat(-e * ws)) * (K.christoffel_bar(l, j, t) * jet);
            WKey nk = key;
            nk.zb = key.zb.raised(t, -1).raised(j, 1);
            nk.fa |= 1u << l;
            out.add_term(nk, cj);
          }
        }
      }
  }
  return out;
}

inline WickEl nabla_holo(const WickEl& w, const Kaehler& K) {
  return nabla(w, K, detail::Half::holo);
}
inline WickEl nabla_anti(const WickEl& w, const Kaehler& K) {
  return nabla(w, K, detail::Half::anti);
}

// delta = (d/dzeta^k) dz^k + (d/dzetabar^l) dzbar^l; lowers Deg by one
inline WickEl delta_op(const WickEl& w,
                       detail::Half half = detail::Half::both) {
  int n = w.dim();
  WickEl out(n, w.exact() ? WickEl::kExactDeg : w.cap() - 1);
  for (const auto& [key, jet] : w.terms()) {
    if (half != detail::Half::anti)
      for (int k = 0; k < n; ++k) {
        int e = key.za.exp(k);
        if (e == 0) continue;
        int s = wedge_sign(1u << k, 0u, key.fh, key.fa);
        if (s == 0) continue;
        WKey nk = key;
        nk.za = key.za.raised(k, -1);
        nk.fh |= 1u << k;
        out.add_term(nk, GaussRat(Rat(e * s)) * jet);
      }
    if (half != detail::Half::holo)
      for (int l = 0; l < n; ++l) {
        int e = key.zb.exp(l);
        if (e == 0) continue;
        int s = wedge_sign(0u, 1u << l, key.fh, key.fa);
        if (s == 0) continue;
        WKey nk = key;
        nk.zb = key.zb.raised(l, -1);
        nk.fa |= 1u << l;
        out.add_term(nk, GaussRat(Rat(e * s)) * jet);
      }
  }
  return out;
}

inline WickEl delta_holo(const WickEl& w) {
  return delta_op(w, detail::Half::holo);
}
inline WickEl delta_anti(const WickEl& w) {
  return delta_op(w, detail::Half::anti);
}

// delta^{-1}: on a component with deg_s = p, deg_a = q it is
// (p+q)^{-1} (zeta^k i(d/dz^k) + zetabar^l i(d/dzbar^l)), zero when p+q=0;
// raises Deg by one
inline WickEl delta_inv(const WickEl& w) {
  int n = w.dim();
  WickEl out(n, w.exact() ? WickEl::kExactDeg : w.cap() + 1);
  for (const auto& [key, jet] : w.terms()) {
    int pq = key.deg_s() + key.deg_a();
    if (pq == 0) continue;
    GaussRat c = GaussRat(rat_of(1, pq));
    for (int k = 0; k < n; ++k) {
      if (!(key.fh & (1u << k))) continue;
      int inv = std::popcount(key.fh & ((1u << k) - 1));
      WKey nk = key;
      nk.za = key.za.raised(k, 1);
      nk.fh &= ~(1u << k);
      out.add_term(nk, (inv % 2 ? -c : c) * jet);
    }
    for (int l = 0; l < n; ++l) {
      if (!(key.fa & (1u << l))) continue;
      int inv = std::popcount(key.fh) + std::popcount(key.fa & ((1u << l) - 1));
      WKey nk = key;
      nk.zb = key.zb.raised(l, 1);
      nk.fa &= ~(1u << l);
      out.add_term(nk, (inv % 2 ? -c : c) * jet);
    }
  }
  return out;
}

// the antiholomorphic half, graded by deg''_s + deg''_a
inline WickEl deltapp_inv(const WickEl& w) {
  int n = w.dim();
  WickEl out(n, w.exact() ? WickEl::kExactDeg : w.cap() + 1);
  for (const auto& [key, jet] : w.terms()) {
    int pq = key.degpp_s() + key.degpp_a();
    if (pq == 0) continue;
    GaussRat c = GaussRat(rat_of(1, pq));
    for (int l = 0; l < n; ++l) {
      if (!(key.fa & (1u << l))) continue;
      int inv = std::popcount(key.fh) + std::popcount(key.fa & ((1u << l) - 1));
      WKey nk = key;
      nk.zb = key.zb.raised(l, 1);
      nk.fa &= ~(1u << l);
      out.add_term(nk, (inv % 2 ? -c : c) * jet);
    }
  }
  return out;
}

// eta_l = (1/nu) g_{kl} zeta^k
inline WickEl eta(int l, const Kaehler& K) {
  WickEl out(K.n);
  for (int k = 0; k < K.n; ++k) {
    WKey key;
    key.r = -1;
    key.za = Mono::var(k);
    out.add_term(key, K.metric(k, l));
  }
  return out;
}

// the formal form of the trivial deformation, omega = (i/nu) g_{kl} dz^k dzbar^l
inline WickEl omega(const Kaehler& K) {
  WickEl out(K.n);
  for (int k = 0; k < K.n; ++k)
    for (int l = 0; l < K.n; ++l) {
      WKey key;
      key.r = -1;
      key.fh = 1u << k;
      key.fa = 1u << l;
      out.add_term(key, GaussRat::i() * K.metric(k, l));
    }
  return out;
}

}  // namespace wickstar
