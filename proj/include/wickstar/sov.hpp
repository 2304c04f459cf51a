#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/geometry.hpp"
#include "wickstar/nu_series.hpp"

namespace wickstar {

// Formal differential operator with holomorphic derivatives only:
// A = sum_gamma a_gamma(z, zbar) d^gamma/dz^gamma.
struct HoloOp {
  int n = 0;
  std::map<Mono, Jet> a;

  explicit HoloOp(int n = 0) : n(n) {}

  bool is_zero() const { return a.empty(); }

  void add(const Mono& g, const Jet& j) {
    for (int v = n; v < Mono::max_vars; ++v)
      require(g.exp(v) == 0, errc::usage, "derivative index out of range");
    auto it = a.find(g);
    if (it == a.end()) {
      if (!j.is_zero() || !j.exact()) a.emplace(g, j);
      return;
    }
    it->second += j;
    if (it->second.is_zero() && it->second.exact()) a.erase(it);
  }

  Jet coeff(const Mono& g) const {
    auto it = a.find(g);
    return it == a.end() ? Jet(n) : it->second;
  }

  Jet apply(const Jet& f) const {
    Jet out(n, Jet::kExactOrder);
    for (const auto& [g, c] : a) {
      Jet d = f;
      for (int v = 0; v < n; ++v)
        for (int e = 0; e < g.exp(v); ++e) d = partial(d, v);
      out += c * d;
    }
    return out;
  }
};

inline HoloOp operator+(HoloOp x, const HoloOp& y) {
  for (const auto& [g, j] : y.a) x.add(g, j);
  return x;
}

inline HoloOp operator-(const HoloOp& x) {
  HoloOp out(x.n);
  for (const auto& [g, j] : x.a) out.add(g, -j);
  return out;
}

// the commutator [A, h] of A with multiplication by the jet h:
// sum_gamma a_gamma sum_{0 < mu <= gamma} binom(gamma, mu) (d^mu h) d^(gamma-mu)
inline HoloOp mult_comm(const HoloOp& x, const Jet& h) {
  HoloOp out(x.n);
  for (const auto& [g, c] : x.a)
    for (const Mono& mu : monos_upto(x.n, g.deg())) {
      if (mu.is_one() || !mono_leq(mu, g)) continue;
      Jet dh = h;
      for (int v = 0; v < x.n; ++v)
        for (int e = 0; e < mu.exp(v); ++e) dh = partial(dh, v);
      out.add(g.divided(mu), GaussRat(mono_binom(g, mu)) * (c * dh));
    }
  return out;
}

// the commutator [A, d/dzbar_l] = -sum (dbar_l a_gamma) d^gamma
inline HoloOp dbar_comm(const HoloOp& x, int l) {
  HoloOp out(x.n);
  for (const auto& [g, c] : x.a) out.add(g, -partial(c, x.n + l));
  return out;
}

// Formal potential Phi = sum_{r >= -1} nu^r Phi_r of a deformation of the
// Kaehler form; the trivial deformation keeps only the nu^-1 term.
struct FormalPotential {
  int n = 0;
  std::map<int, Jet> phi;

  Jet coeff(int r) const {
    auto it = phi.find(r);
    return it == phi.end() ? Jet(n) : it->second;
  }
};

inline FormalPotential trivial_potential(const Jet& phi_m1) {
  FormalPotential p;
  p.n = phi_m1.dim();
  p.phi.emplace(-1, phi_m1);
  return p;
}

// Left star-multiplication operator L_f = sum_r nu^r A_r of the product
// with separation of variables for the potential Phi.
struct LeftMult {
  int n = 0;
  int val = 0;     // lowest nu power
  int nu_cap = 0;  // A_r built and certified for r <= nu_cap
  std::map<int, HoloOp> ops;

  NuSeries apply(const NuSeries& g) const {
    long cap = std::min(long(nu_cap) + g.val_bound(),
                        long(val) + g.cap());
    cap = std::min(cap, long(NuSeries::kExactCap));
    NuSeries out(n, int(cap));
    for (const auto& [r, op] : ops)
      for (const auto& [s, js] : g.terms()) {
        if (long(r) + s > cap) continue;
        out.add_term(r + s, op.apply(js));
      }
    return out;
  }
};

// Build L_f for the product with separation of variables determined by the
// potential: L_f commutes with multiplication by zbar and with
// R_{dPhi/dzbar_l} = dPhi/dzbar_l + d/dzbar_l, and L_f 1 = f.  The level
// equations in nu are solved for the coefficients of A_r order by order,
// descending; every level equation is then rechecked exactly.
inline LeftMult build_left_mult(const NuSeries& f, const FormalPotential& pot,
                                const Kaehler& K, int nu_cap) {
  const int n = K.n;
  require(pot.n == n && f.dim() == n, errc::usage,
          "potential and function dimensions disagree");
  LeftMult L;
  L.n = n;
  L.val = std::min(f.val_bound(), nu_cap);
  L.nu_cap = std::min(nu_cap, f.cap());

  for (int t = L.val; t <= L.nu_cap; ++t) {
    // right-hand sides: rhs_l = -[A_{t-1}, dbar_l] - sum_s [A_{t-1-s}, dbar_l Phi_s]
    std::vector<HoloOp> rhs(n, HoloOp(n));
    for (int l = 0; l < n; ++l) {
      auto prev = L.ops.find(t - 1);
      if (prev != L.ops.end()) rhs[l] = -dbar_comm(prev->second, l);
      for (const auto& [s, phis] : pot.phi) {
        if (s < 0) continue;
        auto it = L.ops.find(t - 1 - s);
        if (it != L.ops.end())
          rhs[l] = rhs[l] + (-mult_comm(it->second, partial(phis, n + l)));
      }
    }

    HoloOp A(n);
    int maxord = t - L.val;
    const Jet phi_m1 = pot.coeff(-1);
    for (int p = maxord - 1; p >= 0; --p) {
      // at the coefficient of d^delta the unknowns of order p+1 appear as
      // (delta_k + 1) g_{kl} b_{delta+e_k}; the higher-order part is known
      for (const Mono& delta : monos_upto(n, p)) {
        if (delta.deg() != p) continue;
        std::vector<Jet> red(n, Jet(n, Jet::kExactOrder));
        for (int l = 0; l < n; ++l) {
          red[l] = rhs[l].coeff(delta);
          for (const Mono& mu : monos_upto(n, maxord - p)) {
            if (mu.deg() < 2) continue;
            Jet b = A.coeff(delta.times(mu));
            if (b.is_zero() && b.exact()) continue;
            Jet dphi = partial(phi_m1, n + l);
            for (int v = 0; v < n; ++v)
              for (int e = 0; e < mu.exp(v); ++e) dphi = partial(dphi, v);
            red[l] -= GaussRat(mono_binom(delta.times(mu), mu)) * (b * dphi);
          }
        }
        // invert the contraction with g; assign each unknown from the one
        // delta that drops its least variable, recheck the rest later
        for (int m = 0; m < n; ++m) {
          bool canonical = true;
          for (int v = 0; v < m; ++v)
            if (delta.exp(v) > 0) canonical = false;
          if (!canonical) continue;
          Jet c(n, Jet::kExactOrder);
          for (int l = 0; l < n; ++l) c += red[l] * K.ginv(l, m);
          A.add(delta.raised(m, 1),
                GaussRat(rat_of(1, delta.exp(m) + 1)) * c);
        }
      }
    }
    A.add(Mono(), f.coeff(t));
    L.ops.emplace(t, std::move(A));
  }

  // certify every level equation on the trusted jet regions
  for (int t = L.val; t <= L.nu_cap; ++t) {
    const HoloOp& A = L.ops.at(t);
    for (int l = 0; l < n; ++l) {
      HoloOp lhs = mult_comm(A, partial(pot.coeff(-1), n + l));
      HoloOp rhs(n);
      auto prev = L.ops.find(t - 1);
      if (prev != L.ops.end()) rhs = -dbar_comm(prev->second, l);
      for (const auto& [s, phis] : pot.phi) {
        if (s < 0) continue;
        auto it = L.ops.find(t - 1 - s);
        if (it != L.ops.end())
          rhs = rhs + (-mult_comm(it->second, partial(phis, n + l)));
      }
      HoloOp diff = lhs + (-rhs);
      for (const auto& [g, j] : diff.a)
        require(compare_trusted(j, Jet(n)).equal, errc::internal,
                "left multiplication level equation failed");
    }
  }
  return L;
}

// star product through the independent route: f * g = L_f g
inline NuSeries oracle_star(const NuSeries& f, const NuSeries& g,
                            const FormalPotential& pot, const Kaehler& K,
                            int nu_cap) {
  return build_left_mult(f, pot, K, nu_cap).apply(g);
}

// oracle engine with an operator cache
class OracleEngine {
 public:
  OracleEngine(Kaehler k, FormalPotential pot, int nu_cap)
      : K(std::move(k)), pot_(std::move(pot)), nu_cap_(nu_cap) {}

  const Kaehler K;

  int nu_cap() const { return nu_cap_; }
  const FormalPotential& potential() const { return pot_; }

  const LeftMult& left_op(const NuSeries& f) {
    std::string key = to_string(f) + "#" + std::to_string(f.cap());
    for (const auto& [r, j] : f.terms()) key += "," + std::to_string(j.order());
    auto it = ops_.find(key);
    if (it != ops_.end()) return it->second;
    return ops_.emplace(key, build_left_mult(f, pot_, K, nu_cap_))
        .first->second;
  }

  NuSeries star(const NuSeries& f, const NuSeries& g) {
    return left_op(f).apply(g);
  }

  NuSeries star(const Jet& f, const Jet& g) {
    return star(NuSeries::of_jet(f), NuSeries::of_jet(g));
  }

 private:
  FormalPotential pot_;
  int nu_cap_;
  std::map<std::string, LeftMult> ops_;
};

}  // namespace wickstar
