#include <catch2/catch_amalgamated.hpp>

#include "wickstar/expr.hpp"
#include "wickstar/fedosov.hpp"

using namespace wickstar;

namespace {

Kaehler fubini_study(int J) {
  return build_kaehler(expand_jet("log(1 + z1*zbar1)", 1, J, {}));
}

bool vanishes(const WickEl& d) {
  return compare_trusted(d, WickEl(d.dim())).equal;
}

bool same(const WickEl& a, const WickEl& b) {
  return compare_trusted(a, b).equal;
}

}  // namespace

TEST_CASE("the connection form vanishes exactly on a flat fibre") {
  Kaehler K = build_flat(2);
  WickEl r = solve_r(K, 8);
  CHECK(r.is_zero());
  CHECK(r.exact());
}

TEST_CASE("connection form for the Fubini-Study potential") {
  Kaehler K = fubini_study(8);
  WickEl r = solve_r(K, 6);
  CHECK(r.cap() == 6);
  CHECK(vanishes(delta_inv(r)));
  CHECK(vanishes(pi_p(r)));
  CHECK(vanishes(pi_pp(r)));
  for (const auto& [k, j] : r.terms()) {
    if (j.is_zero()) continue;  // order markers carry no claim
    CHECK(k.r >= 0);
    CHECK(k.deg_a() == 1);
  }

  // lowest piece: delta^-1 R with R = -2 g^2 zeta zetabar dz dzbar
  WickEl r3 = component(r, Grading::Deg, 3);
  WKey dz_key;
  dz_key.za = Mono::var(0, 1);
  dz_key.zb = Mono::var(0, 2);
  dz_key.fh = 1u;
  Jet expect = GaussRat(Rat(1, 2)) * expand_jet("(1 + z1*zbar1)^-4", 1, 4, {});
  CHECK(compare_trusted(r3.coeff(dz_key), expect).equal);
  WKey dzbar_key;
  dzbar_key.za = Mono::var(0, 2);
  dzbar_key.zb = Mono::var(0, 1);
  dzbar_key.fa = 1u;
  CHECK(compare_trusted(r3.coeff(dzbar_key), -expect).equal);

  // defining equation, rechecked outside the constructor
  WickEl lhs = delta_op(r);
  WickEl rhs = K.curv + nabla(r, K) + nu_shift(wick_mul(r, r, K.fib), -1);
  CHECK(same(lhs, rhs));
}

TEST_CASE("flat sections over a flat fibre are shifted arguments") {
  Kaehler K = build_flat(1);
  WickEl r = solve_r(K, 8);
  WickEl w = flat_lift(NuSeries::of_jet(Jet::variable(1, 0)), K, r, 8);
  CHECK(to_string(w) == "z1 + zeta1");
  WickEl w2 =
      flat_lift(NuSeries::of_jet(expand_jet("z1*zbar1", 1, 0, {})), K, r, 8);
  CHECK(to_string(w2) ==
        "z1*zbar1 + z1*zetabar1 + zbar1*zeta1 + zeta1*zetabar1");
  CHECK(vanishes(fedosov_D(w2, K, r)));
}

TEST_CASE("ground star products over the flat fibre") {
  FedosovEngine E(build_flat(1), 8);
  Jet z = Jet::variable(1, 0), zbar = Jet::variable(1, 1);
  NuSeries s = E.star(zbar, z);
  CHECK(to_string(s) == "nu^0: z1*zbar1\nnu^1: 1");
  CHECK(s.cap() == 4);
  CHECK(to_string(E.star(z, zbar)) == "nu^0: z1*zbar1");

  // associativity sample: (zbar * z) * zbar == zbar * (z * zbar)
  NuSeries lhs = E.star(E.star(NuSeries::of_jet(zbar), NuSeries::of_jet(z)),
                        NuSeries::of_jet(zbar));
  NuSeries rhs = E.star(NuSeries::of_jet(zbar),
                        E.star(NuSeries::of_jet(z), NuSeries::of_jet(zbar)));
  CHECK(compare_trusted(lhs, rhs).equal);
}

TEST_CASE("curved star product reproduces the right multiplication law") {
  FedosovEngine E(fubini_study(10), 8);
  // h = the zbar1-derivative of the potential; f * (h/nu) must equal
  // (h/nu) f + d f/dzbar1
  Jet h = expand_jet("z1 * (1 + z1*zbar1)^-1", 1, 8, {});
  Jet f = Jet::variable(1, 1);  // zbar1
  NuSeries s = E.star(f, h);
  CHECK(compare_trusted(s.coeff(0), f * h).equal);
  CHECK(compare_trusted(s.coeff(1), Jet::constant(1, GaussRat(1))).equal);
  for (int q = 2; q <= s.cap(); ++q)
    CHECK(compare_trusted(s.coeff(q), Jet(1)).equal);

  // holomorphic left factor multiplies pointwise
  Jet g = expand_jet("z1^2", 1, 8, {});
  NuSeries t = E.star(g, h);
  CHECK(compare_trusted(t.coeff(0), g * h).equal);
  for (int q = 1; q <= t.cap(); ++q)
    CHECK(compare_trusted(t.coeff(q), Jet(1)).equal);
}

TEST_CASE("anti-flat sections and the Fock product") {
  Kaehler K = fubini_study(8);
  WickEl r = solve_r(K, 6);
  WickEl v = WickEl::term(1, WKey{0, Mono::var(0, 1), Mono(), 0, 0},
                          Jet::constant(1, GaussRat(1)));
  WickEl w = dpp_lift(v, K, r, 5);
  CHECK(same(pi_p(w), v.truncated(w.cap())));
  CHECK(vanishes(fedosov_Dpp(w, K, r)));

  // the symbol action of the section is left Fock multiplication
  WickEl u = WickEl::term(1, WKey{0, Mono::var(0, 1), Mono(), 0, 0},
                          expand_jet("zbar1", 1, 6, {}));
  WickEl via_hat = hat_apply(w, u, K.fib);
  WickEl via_fock = fock_product(v, u, K, r, 5);
  CHECK(same(via_hat, via_fock));
}

TEST_CASE("bidifferential coefficients of the flat star product") {
  FedosovEngine E(build_flat(1), 10);
  CrTable t = build_cr_table([&](const Jet& f, const Jet& g) {
    return E.star(f, g);
  }, 1, 2, 2);
  Mono zb1 = Mono::var(1, 1), z1 = Mono::var(0, 1);
  CHECK(to_string(t.coeff({0, Mono(), Mono()})) == "1");
  CHECK(to_string(t.coeff({1, zb1, z1})) == "1");
  CHECK(to_string(t.coeff({2, Mono::var(1, 2), Mono::var(0, 2)})) == "1/2");
  // every slot that differentiates the left factor holomorphically or the
  // right factor antiholomorphically vanishes
  for (const auto& [k, j] : t.c) {
    if (k.r == 0) continue;
    bool left_anti = k.a.exp(0) == 0, right_holo = k.b.exp(1) == 0;
    if (!left_anti || !right_holo) CHECK(compare_trusted(j, Jet(1)).equal);
  }
  CHECK(compare_trusted(t.coeff({1, zb1, zb1}), Jet(1)).equal);
  CHECK(compare_trusted(t.coeff({2, zb1, z1}), Jet(1)).equal);
}
