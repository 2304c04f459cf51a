#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/fedosov.hpp"
#include "wickstar/geometry.hpp"
#include "wickstar/nu_series.hpp"
#include "wickstar/sov.hpp"
#include "wickstar/wick.hpp"

namespace wickstar {

enum class CheckStatus { pass, fail, budget };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::budget: return "budget";
  }
  return "?";
}

// One verified identity: what was checked, at which truncation, on which
// sample family, and the first failing term if any.
struct CheckReport {
  std::string id;
  std::string statement;
  std::string params;
  std::string samples;
  CheckStatus status = CheckStatus::pass;
  std::string witness;
};

struct VerifyParams {
  int nu_order = 3;        // certify star identities mod nu^{nu_order+1}
  int deg_cap = 8;         // Deg bound for the connection form and lifts
  std::uint64_t seed = 1;  // recorded in every report
  int samples = 6;         // random elements per sampled identity
};

// Deterministic generator of small-height coefficients and low-degree
// monomials; fully specified arithmetic so reports are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int pick(int lo, int hi) {
    return lo + int(eng_() % std::uint64_t(hi - lo + 1));
  }

  GaussRat rat() {
    Rat re = rat_of(pick(-3, 3), pick(1, 2));
    Rat im(0);
    if (pick(0, 3) == 0) im = rat_of(pick(-2, 2), 1);
    if (re == 0 && im == 0) re = 1;
    return GaussRat(re, im);
  }

  Mono mono(int vars, int maxdeg) {
    Mono m;
    int d = pick(0, maxdeg);
    for (int i = 0; i < d; ++i) m = m.raised(pick(0, vars - 1), 1);
    return m;
  }

  Jet jet(int n, int maxdeg, int terms) {
    Jet j(n);
    for (int t = 0; t < terms; ++t)
      j += Jet::monomial(n, mono(2 * n, maxdeg), rat());
    return j;
  }

  WickEl fock(int n, int fibdeg, int jetdeg, int terms) {
    WickEl v(n);
    for (int t = 0; t < terms; ++t) {
      WKey k;
      k.za = mono(n, fibdeg);
      v = v + WickEl::term(n, k, jet(n, jetdeg, 2));
    }
    return v;
  }

  // zero-form section; every term carries at least zb_min zetabar factors
  // and at least za_min zeta factors
  WickEl section(int n, int za_min, int zb_min) {
    WickEl w(n);
    for (int t = 0; t < 3; ++t) {
      WKey k;
      k.za = mono(n, 2);
      k.zb = mono(n, 2);
      while (k.za.deg() < za_min) k.za = k.za.raised(pick(0, n - 1), 1);
      while (k.zb.deg() < zb_min) k.zb = k.zb.raised(pick(0, n - 1), 1);
      w = w + WickEl::term(n, k, jet(n, 2, 2));
    }
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

namespace detail {

inline std::string diff_note(int n, const JetCompare& c) {
  if (c.equal) return "";
  return "coeff(" + mono_string(n, c.witness) + "): " + to_string(c.lhs) +
         " != " + to_string(c.rhs);
}

inline std::string diff_note(int n, const SeriesCompare& c) {
  if (c.equal) return "";
  return "nu^" + std::to_string(c.witness_nu) + " coeff(" +
         mono_string(n, c.witness) + "): " + to_string(c.lhs) +
         " != " + to_string(c.rhs);
}

inline std::string diff_note(int n, const WickCompare& c) {
  if (c.equal) return "";
  return fibre_string(c.witness) + form_string(c.witness.fh, c.witness.fa) +
         " coeff(" + mono_string(n, c.witness_mono) + "): " +
         to_string(c.lhs) + " != " + to_string(c.rhs);
}

// Accumulates comparisons into one report; the first failure wins, a
// too-small trusted window downgrades to budget unless a failure was seen.
class Checker {
 public:
  Checker(std::string id, std::string statement, std::string params) {
    rep_.id = std::move(id);
    rep_.statement = std::move(statement);
    rep_.params = std::move(params);
  }

  void expect(bool ok, const std::string& note) {
    if (!ok && rep_.status != CheckStatus::fail) {
      rep_.status = CheckStatus::fail;
      rep_.witness = note;
    }
  }

  void window(bool ok, const std::string& note) {
    if (!ok && rep_.status == CheckStatus::pass) {
      rep_.status = CheckStatus::budget;
      rep_.witness = note;
    }
  }

  CheckReport done(const std::string& samples_note) {
    rep_.samples = samples_note;
    return rep_;
  }

 private:
  CheckReport rep_;
};

// fibre derivative d/dzeta (bar = false) or d/dzetabar (bar = true)
inline WickEl d_fibre(const WickEl& a, int v, bool bar) {
  WickEl out(a.dim(), a.exact() ? WickEl::kExactDeg : a.cap() - 1);
  for (const auto& [k, j] : a.terms()) {
    const Mono& m = bar ? k.zb : k.za;
    int e = m.exp(v);
    if (e == 0) continue;
    WKey nk = k;
    if (bar)
      nk.zb = m.raised(v, -1);
    else
      nk.za = m.raised(v, -1);
    out.add_term(nk, GaussRat(e) * j);
  }
  return out;
}

// commutative fibre product without contractions, zero-forms only
inline WickEl fibre_mul_plain(const WickEl& a, const WickEl& b) {
  require(a.exact() && b.exact(), errc::internal,
          "plain fibre product expects exact operands");
  WickEl out(a.dim());
  for (const auto& [ka, ja] : a.terms())
    for (const auto& [kb, jb] : b.terms()) {
      require(!ka.fh && !ka.fa && !kb.fh && !kb.fa, errc::internal,
              "plain fibre product expects zero-forms");
      WKey k;
      k.r = ka.r + kb.r;
      k.za = ka.za.times(kb.za);
      k.zb = ka.zb.times(kb.zb);
      out.add_term(k, ja * jb);
    }
  return out;
}

inline bool advance_tuple(std::vector<int>& t, int base) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (++t[i] < base) return true;
    t[i] = 0;
  }
  return false;
}

// The iterated-contraction formula, written as a literal sum over index
// tuples: sum_r (nu^r/r!) g^{l1 k1}...g^{lr kr}
// (d^r a / dzetabar^{l1}..dzetabar^{lr}) (d^r b / dzeta^{k1}..dzeta^{kr}).
inline WickEl contraction_formula(const WickEl& a, const WickEl& b,
                                  const Fibre& fib) {
  int n = a.dim();
  int rmax = 0;
  for (const auto& [k, j] : a.terms()) rmax = std::max(rmax, k.zb.deg());
  WickEl out = fibre_mul_plain(a, b);
  for (int r = 1; r <= rmax; ++r) {
    GaussRat scale(Rat(1) / rat_factorial(r));
    std::vector<int> lv(r, 0);
    do {
      WickEl da = a;
      for (int i = 0; i < r; ++i) da = d_fibre(da, lv[i], true);
      std::vector<int> kv(r, 0);
      do {
        WickEl db = b;
        for (int i = 0; i < r; ++i) db = d_fibre(db, kv[i], false);
        Jet coef = Jet::constant(n, GaussRat(1));
        for (int i = 0; i < r; ++i) coef = coef * fib.ginv(lv[i], kv[i]);
        out += nu_shift(mul_jet(coef, scale * fibre_mul_plain(da, db)), r);
      } while (advance_tuple(kv, n));
    } while (advance_tuple(lv, n));
  }
  return out;
}

// The same formula on scalar functions: antiholomorphic derivatives of f,
// holomorphic derivatives of g, contracted through the constant inverse
// metric.
inline NuSeries base_contraction_formula(const Jet& f, const Jet& g,
                                         const Kaehler& K, int rmax) {
  int n = f.dim();
  NuSeries out(n, rmax);
  out.add_term(0, f * g);
  for (int r = 1; r <= rmax; ++r) {
    GaussRat scale(Rat(1) / rat_factorial(r));
    std::vector<int> lv(r, 0);
    do {
      Jet df = f;
      for (int i = 0; i < r; ++i) df = partial(df, n + lv[i]);
      std::vector<int> kv(r, 0);
      do {
        Jet dg = g;
        for (int i = 0; i < r; ++i) dg = partial(dg, kv[i]);
        Jet coef = Jet::constant(n, scale);
        for (int i = 0; i < r; ++i) coef = coef * K.ginv(lv[i], kv[i]);
        out.add_term(r, coef * df * dg);
      } while (advance_tuple(kv, n));
    } while (advance_tuple(lv, n));
  }
  return out;
}

}  // namespace detail

// Runs exact checks of the algebra and operator identities behind the star
// product on one Kaehler setup.  Operator identities are evaluated on every
// basis Fock monomial within small degree caps; algebra identities on
// seeded random elements.
class VerifySuite {
 public:
  VerifySuite(Kaehler K, VerifyParams p)
      : K_(std::move(K)),
        p_(p),
        fed_(K_, p.deg_cap),
        orc_(K_, trivial_potential(K_.phi), p.nu_order) {}

  static const std::vector<std::pair<std::string, std::string>>& catalog() {
    static const std::vector<std::pair<std::string, std::string>> c = {
        {"unit", "the constant function is a two-sided unit for the star "
                 "product"},
        {"assoc", "the star product is associative"},
        {"flat-wick", "for constant metrics the star product equals the "
                      "iterated-contraction exponential formula"},
        {"lemma1", "a section annihilates the vacuum exactly when it has no "
                   "zetabar-free part, and its range loses all scalar parts "
                   "exactly when it has no zeta-free part"},
        {"lemma2", "applying the Fock connection twice equals (1/nu) times "
                   "left multiplication by the curvature"},
        {"lemma3", "the connection form annihilates scalar-valued forms and "
                   "its range has no scalar part"},
        {"lemma4", "the holomorphic flat derivative of a scalar function is "
                   "its plain holomorphic derivative"},
        {"lemma5", "the Fock connection commutes with left multiplication "
                   "through the derivative of the multiplier"},
        {"lemma6i", "the Fock connection and the contraction form operator "
                    "anticommute to zero"},
        {"lemma6ii", "(1/nu) times the graded commutator of the contraction "
                     "form operator with the connection form operator is "
                     "left multiplication by the delta-image of the "
                     "connection form"},
        {"lemma6iii", "the contraction form operator squares to i nu^2 "
                      "times the Kaehler two-form"},
        {"prop1", "the flat connection commutes with left multiplication "
                  "through the flat derivative of the multiplier"},
        {"prop2", "the flat Fock connection squares to i times the Kaehler "
                  "two-form"},
        {"prop3", "the antiholomorphic lift keeps its symbol, is "
                  "annihilated by the antiholomorphic flat connection, and "
                  "extends nu-homogeneously"},
        {"lemma7", "left multiplication by an antiflat section equals Fock "
                   "multiplication by its symbol"},
        {"lemma8", "right Fock multiplication by eta is the antiholomorphic "
                   "flat derivative"},
        {"lemma9", "the holomorphic flat derivative acts on Fock products "
                   "by the derivation rule with antiflat multipliers"},
        {"prop4", "symbols of parallel sections are exactly the kernel of "
                  "the holomorphic flat derivative"},
        {"prop5", "the shifted antiholomorphic potential derivatives lie in "
                  "the kernel of the holomorphic flat derivative"},
        {"theorem", "right star multiplication by zbar is pointwise and by "
                    "the antiholomorphic potential derivative is pointwise "
                    "plus the antiholomorphic derivative, with the mirror "
                    "law on the left"},
        {"sov-shape", "star coefficients differentiate the left factor only "
                      "antiholomorphically and the right factor only "
                      "holomorphically"},
        {"oracle-equiv", "the parallel-section star product coincides with "
                         "the potential-recursion star product"},
    };
    return c;
  }

  CheckReport run(const std::string& id) {
    try {
      if (id == "unit") return check_unit();
      if (id == "assoc") return check_assoc();
      if (id == "flat-wick") return check_flat_wick();
      if (id == "lemma1") return check_lemma1();
      if (id == "lemma2") return check_lemma2();
      if (id == "lemma3") return check_lemma3();
      if (id == "lemma4") return check_lemma4();
      if (id == "lemma5") return check_lemma5();
      if (id == "lemma6i") return check_lemma6i();
      if (id == "lemma6ii") return check_lemma6ii();
      if (id == "lemma6iii") return check_lemma6iii();
      if (id == "prop1") return check_prop1();
      if (id == "prop2") return check_prop2();
      if (id == "prop3") return check_prop3();
      if (id == "lemma7") return check_lemma7();
      if (id == "lemma8") return check_lemma8();
      if (id == "lemma9") return check_lemma9();
      if (id == "prop4") return check_prop4();
      if (id == "prop5") return check_prop5();
      if (id == "theorem") return check_theorem();
      if (id == "sov-shape") return check_sov_shape();
      if (id == "oracle-equiv") return check_oracle_equiv();
      fail(errc::usage, "unknown check id: " + id);
    } catch (const error& e) {
      CheckReport r;
      r.id = id;
      r.statement = statement_of(id);
      r.params = params_string();
      r.status =
          e.code() == errc::budget ? CheckStatus::budget : CheckStatus::fail;
      r.witness = e.what();
      return r;
    }
  }

  std::vector<CheckReport> run_suite(const std::string& selector) {
    std::vector<CheckReport> out;
    for (const auto& [id, st] : catalog())
      if (selector == "all" || id.rfind(selector, 0) == 0) out.push_back(run(id));
    require(!out.empty(), errc::usage, "no check matches: " + selector);
    return out;
  }

  const Kaehler& kaehler() const { return K_; }
  FedosovEngine& engine() { return fed_; }
  OracleEngine& oracle() { return orc_; }

 private:
  Kaehler K_;
  VerifyParams p_;
  FedosovEngine fed_;
  OracleEngine orc_;
  CrTable table_;
  bool have_table_ = false;

  int n() const { return K_.n; }

  static std::string statement_of(const std::string& id) {
    for (const auto& [i, s] : catalog())
      if (i == id) return s;
    return "";
  }

  std::uint64_t seed_for(const std::string& id) const {
    std::uint64_t h = p_.seed;
    for (std::size_t i = 0; i < catalog().size(); ++i)
      if (catalog()[i].first == id) h = h * 1000003u + i + 1;
    return h;
  }

  std::string params_string() const {
    std::string J = K_.phi.exact() ? "exact"
                                   : std::to_string(K_.phi.order());
    return "n=" + std::to_string(n()) + " N=" + std::to_string(p_.nu_order) +
           " T=" + std::to_string(p_.deg_cap) + " J=" + J +
           " seed=" + std::to_string(p_.seed);
  }

  void need_star() const {
    require(p_.deg_cap >= 2 * p_.nu_order + 2, errc::budget,
            "Deg bound " + std::to_string(p_.deg_cap) + " is below 2N+2 for "
            "nu order " + std::to_string(p_.nu_order));
    require(K_.phi.exact() || K_.phi.order() >= 2 * p_.nu_order + 4,
            errc::budget,
            "jet order " + std::to_string(K_.phi.order()) +
                " is below 2N+4 for nu order " + std::to_string(p_.nu_order));
  }

  void need_fibre() const {
    require(p_.deg_cap >= 4, errc::budget,
            "Deg bound too small for fibre operator checks");
    require(K_.phi.exact() || K_.phi.order() >= 6, errc::budget,
            "jet order too small for fibre operator checks");
  }

  WickEl one() const {
    return WickEl::term(n(), WKey{}, Jet::constant(n(), GaussRat(1)));
  }

  WickEl scalar(const Jet& f) const { return WickEl::term(n(), WKey{}, f); }

  WickEl theta_op(const WickEl& x) const {
    return pi_p(wick_mul(K_.theta, x, K_.fib));
  }

  WickEl dk(const WickEl& x, int k) const {
    return form_coeff(dhat(x, K_, fed_.r()), 1u << k, 0);
  }

  WickEl dlbar(const WickEl& x, int l) const {
    return form_coeff(dhat(x, K_, fed_.r()), 0, 1u << l);
  }

  std::vector<Jet> basis_jets(int maxdeg) const {
    std::vector<Jet> out;
    for (const Mono& m : monos_upto(2 * n(), maxdeg))
      out.push_back(Jet::monomial(n(), m, GaussRat(1)));
    return out;
  }

  std::vector<WickEl> basis_fock(int jetdeg, int fibdeg) const {
    std::vector<WickEl> out;
    for (const Mono& jm : monos_upto(2 * n(), jetdeg))
      for (const Mono& fm : monos_upto(n(), fibdeg)) {
        WKey k;
        k.za = fm;
        out.push_back(WickEl::term(n(), k, Jet::monomial(n(), jm, GaussRat(1))));
      }
    return out;
  }

  const CrTable& cr_table() {
    if (!have_table_) {
      table_ = build_cr_table(
          [this](const Jet& f, const Jet& g) { return fed_.star(f, g); },
          n(), std::min(p_.nu_order, 2), 2);
      have_table_ = true;
    }
    return table_;
  }

  bool vanishes(const WickEl& x) const {
    return compare_trusted(x, WickEl(x.dim())).equal;
  }

  CheckReport check_unit() {
    detail::Checker ck("unit", statement_of("unit"), params_string());
    need_star();
    Rng rng(seed_for("unit"));
    Jet onej = Jet::constant(n(), GaussRat(1));
    for (int s = 0; s < p_.samples; ++s) {
      Jet f = rng.jet(n(), 3, 4);
      SeriesCompare a = compare_trusted(fed_.star(onej, f), NuSeries::of_jet(f));
      ck.expect(a.equal, "1*f: " + detail::diff_note(n(), a));
      SeriesCompare b = compare_trusted(fed_.star(f, onej), NuSeries::of_jet(f));
      ck.expect(b.equal, "f*1: " + detail::diff_note(n(), b));
      ck.window(a.nu_upto >= p_.nu_order && b.nu_upto >= p_.nu_order,
                "trusted nu window ends before nu order");
    }
    return ck.done(std::to_string(p_.samples) + " random jets");
  }

  CheckReport check_assoc() {
    detail::Checker ck("assoc", statement_of("assoc"), params_string());
    need_star();
    Rng rng(seed_for("assoc"));
    for (int s = 0; s < p_.samples; ++s) {
      Jet f = rng.jet(n(), 3, 3), g = rng.jet(n(), 3, 3), h = rng.jet(n(), 3, 3);
      NuSeries lhs = fed_.star(fed_.star(f, g), NuSeries::of_jet(h));
      NuSeries rhs = fed_.star(NuSeries::of_jet(f), fed_.star(g, h));
      SeriesCompare c = compare_trusted(lhs, rhs);
      ck.expect(c.equal, detail::diff_note(n(), c));
      ck.window(c.nu_upto >= p_.nu_order,
                "trusted nu window ends before nu order");
    }
    return ck.done(std::to_string(p_.samples) + " random triples");
  }

  CheckReport check_flat_wick() {
    detail::Checker ck("flat-wick", statement_of("flat-wick"),
                       params_string());
    require(p_.deg_cap >= 2 * p_.nu_order + 2, errc::budget,
            "Deg bound below 2N+2 for nu order " +
                std::to_string(p_.nu_order));
    Rng rng(seed_for("flat-wick"));

    Jet phi2(2);
    phi2 += Jet::monomial(2, Mono::var(0).times(Mono::var(2)), GaussRat(1));
    phi2 += Jet::monomial(2, Mono::var(1).times(Mono::var(3)), GaussRat(1));
    phi2 += Jet::monomial(2, Mono::var(0).times(Mono::var(3)),
                          GaussRat(rat_of(1, 2)));
    phi2 += Jet::monomial(2, Mono::var(1).times(Mono::var(2)),
                          GaussRat(rat_of(1, 2)));
    Kaehler flats[2] = {build_flat(1), build_kaehler(phi2)};

    for (const Kaehler& K : flats) {
      FedosovEngine E(K, p_.deg_cap);
      for (int s = 0; s < p_.samples; ++s) {
        Jet f = rng.jet(K.n, 3, 3), g = rng.jet(K.n, 3, 3);
        NuSeries lhs = E.star(f, g);
        NuSeries rhs = detail::base_contraction_formula(f, g, K,
                                                        p_.nu_order + 1);
        SeriesCompare c = compare_trusted(lhs, rhs);
        ck.expect(c.equal,
                  "n=" + std::to_string(K.n) + ": " + detail::diff_note(K.n, c));
        ck.window(c.nu_upto >= p_.nu_order,
                  "trusted nu window ends before nu order");

        WickEl a = rng.section(K.n, 0, 0);
        WickEl b = rng.section(K.n, 0, 0);
        WickCompare fc = compare_trusted(
            wick_mul(a, b, K.fib), detail::contraction_formula(a, b, K.fib));
        ck.expect(fc.equal, "fibre product vs formula, n=" +
                                std::to_string(K.n) + ": " +
                                detail::diff_note(K.n, fc));
      }
    }
    return ck.done(std::to_string(2 * p_.samples) +
                   " random pairs on two constant metrics, base and fibre");
  }

  CheckReport check_lemma1() {
    detail::Checker ck("lemma1", statement_of("lemma1"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma1"));
    for (int s = 0; s < p_.samples; ++s) {
      WickEl wA = rng.section(n(), 0, 1);
      ck.expect(vanishes(hat_apply(wA, one(), K_.fib)),
                "zetabar-positive section does not kill the vacuum");

      WKey tk;
      tk.za = rng.mono(n(), 2);
      WickEl wB = wA + WickEl::term(n(), tk, Jet::constant(n(), GaussRat(1)));
      ck.expect(!vanishes(hat_apply(wB, one(), K_.fib)),
                "section with a zetabar-free part still kills the vacuum");
      WickCompare pb = compare_trusted(hat_apply(wB, one(), K_.fib), pi_p(wB));
      ck.expect(pb.equal,
                "vacuum image is not the zetabar-free part: " +
                    detail::diff_note(n(), pb));

      WickEl wC = rng.section(n(), 1, 0);
      WickEl v = rng.fock(n(), 2, 2, 2);
      ck.expect(vanishes(pi_full(hat_apply(wC, v, K_.fib))),
                "zeta-positive section produced a scalar part");

      WKey sk;
      sk.zb = Mono::var(0);
      WickEl wD = wC + WickEl::term(n(), sk, Jet::constant(n(), GaussRat(1)));
      WKey vk;
      vk.za = Mono::var(0);
      WickEl probe = WickEl::term(n(), vk, Jet::constant(n(), GaussRat(1)));
      ck.expect(!vanishes(pi_full(hat_apply(wD, probe, K_.fib))),
                "section with a zeta-free part still avoids scalars");
    }
    return ck.done(std::to_string(p_.samples) +
                   " random sections, both directions");
  }

  CheckReport check_lemma2() {
    detail::Checker ck("lemma2", statement_of("lemma2"), params_string());
    need_fibre();
    int count = 0;
    for (const WickEl& v : basis_fock(2, 2)) {
      WickEl lhs = nabla(nabla(v, K_), K_);
      WickEl rhs = nu_shift(hat_apply(K_.curv, v, K_.fib), -1);
      WickCompare c = compare_trusted(lhs, rhs);
      ck.expect(c.equal, detail::diff_note(n(), c));
      ++count;
    }
    return ck.done(std::to_string(count) + " basis Fock monomials");
  }

  CheckReport check_lemma3() {
    detail::Checker ck("lemma3", statement_of("lemma3"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma3"));
    const WickEl& r = fed_.r();
    ck.expect(vanishes(hat_apply(r, one(), K_.fib)),
              "connection form does not kill the vacuum");
    for (int s = 0; s < p_.samples; ++s) {
      WKey fk;
      fk.fh = rng.pick(0, (1 << n()) - 1);
      fk.fa = rng.pick(0, (1 << n()) - 1);
      WickEl u = WickEl::term(n(), fk, rng.jet(n(), 2, 2));
      ck.expect(vanishes(hat_apply(r, u, K_.fib)),
                "connection form does not kill a scalar-valued form");
      WickEl v = rng.fock(n(), 2, 2, 2);
      ck.expect(vanishes(pi_full(hat_apply(r, v, K_.fib))),
                "connection form image has a scalar part");
    }
    return ck.done("vacuum, " + std::to_string(p_.samples) +
                   " scalar forms and Fock elements");
  }

  CheckReport check_lemma4() {
    detail::Checker ck("lemma4", statement_of("lemma4"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma4"));
    std::vector<Jet> fs = basis_jets(2);
    for (int s = 0; s < 2; ++s) fs.push_back(rng.jet(n(), 3, 3));
    for (const Jet& f : fs)
      for (int k = 0; k < n(); ++k) {
        WickCompare c =
            compare_trusted(dk(scalar(f), k), scalar(partial(f, k)));
        ck.expect(c.equal, detail::diff_note(n(), c));
      }
    return ck.done(std::to_string(fs.size()) + " scalar functions");
  }

  CheckReport check_lemma5() {
    detail::Checker ck("lemma5", statement_of("lemma5"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma5"));
    for (int s = 0; s < p_.samples; ++s) {
      WickEl w = rng.section(n(), 0, 0);
      WickEl v = rng.fock(n(), 2, 2, 2);
      WickEl lhs = nabla(hat_apply(w, v, K_.fib), K_) -
                   hat_apply(w, nabla(v, K_), K_.fib);
      WickEl rhs = hat_apply(nabla(w, K_), v, K_.fib);
      WickCompare c = compare_trusted(lhs, rhs);
      ck.expect(c.equal, detail::diff_note(n(), c));
    }
    return ck.done(std::to_string(p_.samples) + " random section pairs");
  }

  CheckReport check_lemma6i() {
    detail::Checker ck("lemma6i", statement_of("lemma6i"), params_string());
    need_fibre();
    int count = 0;
    for (const WickEl& v : basis_fock(2, 2)) {
      WickEl lhs = nabla(theta_op(v), K_) + theta_op(nabla(v, K_));
      ck.expect(vanishes(lhs), "anticommutator nonzero on a basis monomial");
      ++count;
    }
    return ck.done(std::to_string(count) + " basis Fock monomials");
  }

  CheckReport check_lemma6ii() {
    detail::Checker ck("lemma6ii", statement_of("lemma6ii"), params_string());
    need_fibre();
    const WickEl& r = fed_.r();
    WickEl dr = delta_op(r);
    int count = 0;
    for (const WickEl& v : basis_fock(2, 2)) {
      WickEl lhs = nu_shift(theta_op(hat_apply(r, v, K_.fib)) +
                                hat_apply(r, theta_op(v), K_.fib),
                            -1);
      WickEl rhs = hat_apply(dr, v, K_.fib);
      WickCompare c = compare_trusted(lhs, rhs);
      ck.expect(c.equal, detail::diff_note(n(), c));
      ++count;
    }
    return ck.done(std::to_string(count) + " basis Fock monomials");
  }

  CheckReport check_lemma6iii() {
    detail::Checker ck("lemma6iii", statement_of("lemma6iii"),
                       params_string());
    need_fibre();
    WickEl rhs_el = GaussRat::i() * nu_shift(omega(K_), 2);
    WickCompare el = compare_trusted(wick_mul(K_.theta, K_.theta, K_.fib),
                                     rhs_el);
    ck.expect(el.equal,
              "element identity: " + detail::diff_note(n(), el));
    int count = 0;
    for (const WickEl& v : basis_fock(2, 2)) {
      WickCompare c = compare_trusted(theta_op(theta_op(v)),
                                      pi_p(wick_mul(rhs_el, v, K_.fib)));
      ck.expect(c.equal, detail::diff_note(n(), c));
      ++count;
    }
    return ck.done("element identity and " + std::to_string(count) +
                   " basis Fock monomials");
  }

  CheckReport check_prop1() {
    detail::Checker ck("prop1", statement_of("prop1"), params_string());
    need_fibre();
    Rng rng(seed_for("prop1"));
    const WickEl& r = fed_.r();
    for (int s = 0; s < p_.samples; ++s) {
      WickEl w = rng.section(n(), 0, 0);
      WickEl v = rng.fock(n(), 2, 2, 2);
      WickEl lhs = dhat(hat_apply(w, v, K_.fib), K_, r) -
                   hat_apply(w, dhat(v, K_, r), K_.fib);
      WickEl rhs = hat_apply(fedosov_D(w, K_, r), v, K_.fib);
      WickCompare c = compare_trusted(lhs, rhs);
      ck.expect(c.equal, detail::diff_note(n(), c));
    }
    return ck.done(std::to_string(p_.samples) + " random section pairs");
  }

  CheckReport check_prop2() {
    detail::Checker ck("prop2", statement_of("prop2"), params_string());
    need_fibre();
    const WickEl& r = fed_.r();
    WickEl om = omega(K_);
    int count = 0;
    for (const WickEl& v : basis_fock(2, 2)) {
      WickEl lhs = dhat(dhat(v, K_, r), K_, r);
      WickEl rhs = GaussRat::i() * pi_p(wick_mul(om, v, K_.fib));
      WickCompare c = compare_trusted(lhs, rhs);
      ck.expect(c.equal, detail::diff_note(n(), c));
      ++count;
    }
    return ck.done(std::to_string(count) + " basis Fock monomials");
  }

  CheckReport check_prop3() {
    detail::Checker ck("prop3", statement_of("prop3"), params_string());
    need_fibre();
    Rng rng(seed_for("prop3"));
    const WickEl& r = fed_.r();
    int count = p_.samples;
    for (int s = 0; s < count; ++s) {
      WickEl v = rng.fock(n(), 2, 2, 2);
      WickEl w = dpp_lift(v, K_, r, p_.deg_cap);
      WickCompare sym = compare_trusted(pi_p(w), v.truncated(w.cap()));
      ck.expect(sym.equal, "symbol: " + detail::diff_note(n(), sym));
      WickCompare par = compare_trusted(fedosov_Dpp(w, K_, r),
                                        WickEl(n(), w.cap() - 1));
      ck.expect(par.equal, "parallel: " + detail::diff_note(n(), par));
      WickCompare hom = compare_trusted(
          dpp_lift(nu_shift(v, 1), K_, r, p_.deg_cap), nu_shift(w, 1));
      ck.expect(hom.equal, "homogeneity: " + detail::diff_note(n(), hom));
    }
    return ck.done(std::to_string(count) + " random Fock symbols");
  }

  CheckReport check_lemma7() {
    detail::Checker ck("lemma7", statement_of("lemma7"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma7"));
    const WickEl& r = fed_.r();
    int count = p_.samples;
    for (int s = 0; s < count; ++s) {
      WickEl v = rng.fock(n(), 2, 2, 2);
      WickEl u = rng.fock(n(), 2, 2, 2);
      WickEl w = dpp_lift(v, K_, r, p_.deg_cap);
      WickCompare c = compare_trusted(hat_apply(w, u, K_.fib),
                                      fock_product(v, u, K_, r, p_.deg_cap));
      ck.expect(c.equal, detail::diff_note(n(), c));
    }
    return ck.done(std::to_string(count) + " random Fock pairs");
  }

  CheckReport check_lemma8() {
    detail::Checker ck("lemma8", statement_of("lemma8"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma8"));
    const WickEl& r = fed_.r();
    int count = p_.samples;
    for (int s = 0; s < count; ++s) {
      WickEl v = rng.fock(n(), 2, 2, 2);
      for (int l = 0; l < n(); ++l) {
        WickCompare c =
            compare_trusted(fock_product(v, eta(l, K_), K_, r, p_.deg_cap),
                            dlbar(v, l));
        ck.expect(c.equal, detail::diff_note(n(), c));
      }
    }
    return ck.done(std::to_string(count) + " random Fock elements, all l");
  }

  CheckReport check_lemma9() {
    detail::Checker ck("lemma9", statement_of("lemma9"), params_string());
    need_fibre();
    Rng rng(seed_for("lemma9"));
    const WickEl& r = fed_.r();
    int count = p_.samples;
    for (int s = 0; s < count; ++s) {
      WickEl v = rng.fock(n(), 2, 2, 2);
      WickEl u = rng.fock(n(), 2, 2, 2);
      WickEl w = dpp_lift(v, K_, r, p_.deg_cap);
      for (int k = 0; k < n(); ++k) {
        WickEl lhs = dk(fock_product(v, u, K_, r, p_.deg_cap), k) -
                     fock_product(v, dk(u, k), K_, r, p_.deg_cap);
        WickEl mid = hat_apply(form_coeff(fedosov_D(w, K_, r), 1u << k, 0),
                               u, K_.fib);
        WickEl rhs = fock_product(dk(v, k), u, K_, r, p_.deg_cap);
        WickCompare a = compare_trusted(lhs, mid);
        ck.expect(a.equal, "commutator vs lifted derivative: " +
                               detail::diff_note(n(), a));
        WickCompare b = compare_trusted(mid, rhs);
        ck.expect(b.equal, "lifted derivative vs symbol derivative: " +
                               detail::diff_note(n(), b));
      }
    }
    return ck.done(std::to_string(count) + " random Fock pairs, all k");
  }

  CheckReport check_prop4() {
    detail::Checker ck("prop4", statement_of("prop4"), params_string());
    need_star();
    Rng rng(seed_for("prop4"));
    const WickEl& r = fed_.r();
    int count = p_.samples;
    for (int s = 0; s < count; ++s) {
      Jet f = rng.jet(n(), 3, 3);
      const WickEl& w = fed_.lift(NuSeries::of_jet(f));
      WickEl v = pi_p(w);
      ck.expect(vanishes(form_component(dhat(v, K_, r), 1, 0)),
                "parallel-section symbol is not holomorphically flat");
      WickCompare c =
          compare_trusted(dpp_lift(v, K_, r, p_.deg_cap), w);
      ck.expect(c.equal, "antiholomorphic lift of the symbol is not the "
                         "parallel section: " + detail::diff_note(n(), c));
    }
    Jet z1 = Jet::variable(n(), 0);
    Jet mixed = Jet::variable(n(), 0) * Jet::variable(n(), n());
    for (const Jet& f : {z1, mixed}) {
      WickEl v0 = scalar(f);
      ck.expect(!vanishes(form_component(dhat(v0, K_, r), 1, 0)),
                "plain symbol unexpectedly holomorphically flat");
      WickEl w0 = dpp_lift(v0, K_, r, p_.deg_cap);
      ck.expect(!vanishes(form_component(fedosov_D(w0, K_, r), 1, 0)),
                "antiflat lift of a non-flat symbol is parallel");
    }
    return ck.done(std::to_string(count) +
                   " parallel sections and 2 non-flat witnesses");
  }

  CheckReport check_prop5() {
    detail::Checker ck("prop5", statement_of("prop5"), params_string());
    need_fibre();
    const WickEl& r = fed_.r();
    for (int l = 0; l < n(); ++l) {
      WKey pk;
      pk.r = -1;
      WickEl Q = WickEl::term(n(), pk, partial(K_.phi, n() + l)) + eta(l, K_);
      ck.expect(vanishes(form_component(dhat(Q, K_, r), 1, 0)),
                "Q is not holomorphically flat at l=" + std::to_string(l));
    }
    int count = 0;
    for (const WickEl& v : basis_fock(1, 2))
      for (int k = 0; k < n(); ++k)
        for (int l = 0; l < n(); ++l) {
          WickEl lhs = dlbar(dk(v, k), l) - dk(dlbar(v, l), k);
          WickEl rhs = nu_shift(mul_jet(K_.metric(k, l), v), -1);
          WickCompare c = compare_trusted(lhs, rhs);
          ck.expect(c.equal, detail::diff_note(n(), c));
          ++count;
        }
    return ck.done("all Q_l and " + std::to_string(count) +
                   " bracket evaluations");
  }

  CheckReport check_theorem() {
    detail::Checker ck("theorem", statement_of("theorem"), params_string());
    need_star();
    Rng rng(seed_for("theorem"));
    std::vector<Jet> fs = basis_jets(2);
    while (int(fs.size()) < std::max(8, p_.samples + 4))
      fs.push_back(rng.jet(n(), 3, 3));
    Jet zero(n());
    for (int l = 0; l < n(); ++l) {
      Jet h = partial(K_.phi, n() + l);
      Jet zb = Jet::variable(n(), n() + l);
      for (const Jet& f : fs) {
        NuSeries s = fed_.star(f, h);
        ck.window(s.cap() >= p_.nu_order,
                  "trusted nu window ends before nu order");
        JetCompare c0 = compare_trusted(s.coeff(0), f * h);
        ck.expect(c0.equal, "pointwise part: " + detail::diff_note(n(), c0));
        JetCompare c1 = compare_trusted(s.coeff(1), partial(f, n() + l));
        ck.expect(c1.equal, "derivative part: " + detail::diff_note(n(), c1));
        for (int q = 2; q <= std::min(s.cap(), p_.nu_order + 1); ++q) {
          JetCompare cq = compare_trusted(s.coeff(q), zero);
          ck.expect(cq.equal, "nu^" + std::to_string(q) + " tail: " +
                                  detail::diff_note(n(), cq));
        }
        SeriesCompare cz = compare_trusted(fed_.star(f, zb),
                                           NuSeries::of_jet(f * zb));
        ck.expect(cz.equal, "zbar law: " + detail::diff_note(n(), cz));
      }
    }
    for (int k = 0; k < n(); ++k) {
      Jet h = partial(K_.phi, k);
      for (const Jet& f : fs) {
        NuSeries s = fed_.star(h, f);
        JetCompare c0 = compare_trusted(s.coeff(0), h * f);
        ck.expect(c0.equal, "mirror pointwise part: " +
                                detail::diff_note(n(), c0));
        JetCompare c1 = compare_trusted(s.coeff(1), partial(f, k));
        ck.expect(c1.equal, "mirror derivative part: " +
                                detail::diff_note(n(), c1));
        for (int q = 2; q <= std::min(s.cap(), p_.nu_order + 1); ++q) {
          JetCompare cq = compare_trusted(s.coeff(q), zero);
          ck.expect(cq.equal, "mirror nu^" + std::to_string(q) + " tail: " +
                                  detail::diff_note(n(), cq));
        }
      }
    }
    shape_expect(ck);
    return ck.done(std::to_string(fs.size()) +
                   " functions per direction, plus the coefficient table");
  }

  void shape_expect(detail::Checker& ck) {
    const CrTable& t = cr_table();
    JetCompare u =
        compare_trusted(t.coeff(CrKey{}), Jet::constant(n(), GaussRat(1)));
    ck.expect(u.equal,
              "nu^0 unit coefficient: " + detail::diff_note(n(), u));
    for (const auto& [key, c] : t.c) {
      if (compare_trusted(c, Jet(n())).equal) continue;
      bool a_anti = true, b_holo = true;
      for (int v = 0; v < n(); ++v)
        if (key.a.exp(v) > 0) a_anti = false;
      for (int v = n(); v < 2 * n(); ++v)
        if (key.b.exp(v) > 0) b_holo = false;
      if (key.r == 0) {
        ck.expect(key.a.is_one() && key.b.is_one() &&
                      compare_trusted(c, Jet::constant(n(), GaussRat(1))).equal,
                  "nu^0 coefficient is not plain multiplication at slot (" +
                      mono_string(n(), key.a) + ", " + mono_string(n(), key.b) +
                      ")");
      } else {
        ck.expect(a_anti && b_holo,
                  "mixed-direction slot nu^" + std::to_string(key.r) + " (" +
                      mono_string(n(), key.a) + ", " + mono_string(n(), key.b) +
                      ") is nonzero: " + to_string(c));
      }
    }
  }

  CheckReport check_sov_shape() {
    detail::Checker ck("sov-shape", statement_of("sov-shape"),
                       params_string());
    need_star();
    Rng rng(seed_for("sov-shape"));
    shape_expect(ck);
    Jet zero(n());
    for (int s = 0; s < p_.samples; ++s) {
      Jet f = rng.jet(n(), 3, 3);
      for (int k = 0; k < n(); ++k) {
        Jet a = Jet::variable(n(), k);
        for (const Jet& holo : {a, a * a}) {
          NuSeries t = fed_.star(holo, f);
          JetCompare c0 = compare_trusted(t.coeff(0), holo * f);
          ck.expect(c0.equal, "left holomorphic multiplication: " +
                                  detail::diff_note(n(), c0));
          for (int q = 1; q <= std::min(t.cap(), p_.nu_order + 1); ++q)
            ck.expect(compare_trusted(t.coeff(q), zero).equal,
                      "left holomorphic factor leaks to nu^" +
                          std::to_string(q));
        }
        Jet b = Jet::variable(n(), n() + k);
        for (const Jet& anti : {b, b * b}) {
          NuSeries t = fed_.star(f, anti);
          JetCompare c0 = compare_trusted(t.coeff(0), f * anti);
          ck.expect(c0.equal, "right antiholomorphic multiplication: " +
                                  detail::diff_note(n(), c0));
          for (int q = 1; q <= std::min(t.cap(), p_.nu_order + 1); ++q)
            ck.expect(compare_trusted(t.coeff(q), zero).equal,
                      "right antiholomorphic factor leaks to nu^" +
                          std::to_string(q));
        }
      }
    }
    return ck.done("coefficient table and " + std::to_string(p_.samples) +
                   " pointwise-law samples");
  }

  CheckReport check_oracle_equiv() {
    detail::Checker ck("oracle-equiv", statement_of("oracle-equiv"),
                       params_string());
    need_star();
    Rng rng(seed_for("oracle-equiv"));
    for (int s = 0; s < p_.samples; ++s) {
      Jet f = rng.jet(n(), 3, 3), g = rng.jet(n(), 3, 3);
      SeriesCompare c = compare_trusted(fed_.star(f, g), orc_.star(f, g));
      ck.expect(c.equal, detail::diff_note(n(), c));
      ck.window(c.nu_upto >= p_.nu_order,
                "trusted nu window ends before nu order");
    }
    return ck.done(std::to_string(p_.samples) + " random pairs");
  }
};

inline bool all_passed(const std::vector<CheckReport>& reps) {
  for (const CheckReport& r : reps)
    if (r.status != CheckStatus::pass) return false;
  return true;
}

// plain-text table, fixed column order
inline std::string render_table(const std::vector<CheckReport>& reps) {
  std::size_t wid = 5, wst = 6;
  for (const CheckReport& r : reps) {
    wid = std::max(wid, r.id.size());
    wst = std::max(wst, to_string(r.status).size());
  }
  std::string out;
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  out += pad("check", wid) + "  " + pad("status", wst) + "  detail\n";
  int ok = 0;
  for (const CheckReport& r : reps) {
    out += pad(r.id, wid) + "  " + pad(to_string(r.status), wst) + "  ";
    out += r.samples + " [" + r.params + "]";
    if (r.status != CheckStatus::pass) out += " -- " + r.witness;
    out += "\n";
    if (r.status == CheckStatus::pass) ++ok;
  }
  out += std::to_string(ok) + "/" + std::to_string(reps.size()) +
         " checks passed\n";
  return out;
}

// one check per line: id, status, params, witness-if-fail
inline std::string render_lines(const std::vector<CheckReport>& reps) {
  std::string out;
  for (const CheckReport& r : reps) {
    out += r.id + "\t" + to_string(r.status) + "\t" + r.params;
    if (r.status != CheckStatus::pass) out += "\t" + r.witness;
    out += "\n";
  }
  return out;
}

}  // namespace wickstar
