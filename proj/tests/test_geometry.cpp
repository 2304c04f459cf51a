#include <catch2/catch_amalgamated.hpp>

#include "wickstar/expr.hpp"
#include "wickstar/geometry.hpp"

using namespace wickstar;

namespace {

Kaehler fubini_study(int J) {
  return build_kaehler(expand_jet("log(1 + z1*zbar1)", 1, J, {}));
}

bool vanishes(const WickEl& d) {
  for (const auto& [k, j] : d.terms())
    if (!compare_trusted(j, Jet(d.dim())).equal) return false;
  return true;
}

bool same(const WickEl& a, const WickEl& b) { return vanishes(a - b); }

}  // namespace

TEST_CASE("kaehler data from the Fubini-Study potential") {
  Kaehler K = fubini_study(6);
  CHECK(to_string(K.metric(0, 0)) == "1 - 2*z1*zbar1 + 3*z1^2*zbar1^2");
  CHECK(K.metric(0, 0).order() == 4);
  CHECK(to_string(K.ginv(0, 0)) == "1 + 2*z1*zbar1 + z1^2*zbar1^2");
  CHECK(to_string(K.christoffel(0, 0, 0)) == "-2*zbar1 + 2*z1*zbar1^2");
  CHECK(to_string(K.christoffel_bar(0, 0, 0)) == "-2*z1 + 2*z1^2*zbar1");
  // R = -2 zeta zetabar dz dzbar + higher
  WKey key;
  key.za = Mono::var(0);
  key.zb = Mono::var(0);
  key.fh = 1u;
  key.fa = 1u;
  CHECK(to_string(K.curv.coeff(key).value_at_origin()) == "-2");
  CHECK(to_string(K.theta) ==
        "(1 - 2*z1*zbar1 + 3*z1^2*zbar1^2)*zetabar1*dz1 + "
        "(-1 + 2*z1*zbar1 - 3*z1^2*zbar1^2)*zeta1*dzbar1");
}

TEST_CASE("flat and constant metrics stay exact") {
  Kaehler K = build_flat(2);
  CHECK(K.metric(0, 0).exact());
  CHECK(to_string(K.ginv(0, 0)) == "1");
  CHECK(K.curv.is_zero());
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int s = 0; s < 2; ++s) CHECK(K.christoffel(k, i, s).is_zero());

  Kaehler K2 = build_kaehler(
      expand_jet("z1*zbar1 + 1/2*z1*zbar2 + 1/2*z2*zbar1 + z2*zbar2", 2, 8, {}));
  CHECK(to_string(K2.ginv(0, 0)) == "4/3");
  CHECK(to_string(K2.ginv(0, 1)) == "-2/3");
  // certificate: g g^{-1} = id
  Jet s(2);
  for (int l = 0; l < 2; ++l) s += K2.metric(0, l) * K2.ginv(l, 0);
  CHECK(to_string(s) == "1");

  CHECK_THROWS_AS(build_kaehler(expand_jet("z1*zbar1 + z2*zbar2 "
                                           "+ z1*zbar2 + z2*zbar1",
                                           2, 6, {})),
                  error);  // determinant zero: degenerate
}

TEST_CASE("delta and its inverse") {
  // ground case: delta^{-1}(zeta zetabar dz dzbar) = (1/4)(zeta^2 zetabar dzbar - zeta zetabar^2 dz)
  WKey k;
  k.za = Mono::var(0);
  k.zb = Mono::var(0);
  k.fh = 1u;
  k.fa = 1u;
  WickEl w = WickEl::term(1, k, Jet::constant(1, GaussRat(1)));
  CHECK(to_string(delta_inv(w)) ==
        "(-1/4)*zeta1*zetabar1^2*dz1 + 1/4*zeta1^2*zetabar1*dzbar1");

  // Hodge-type decomposition: w = delta delta^{-1} w + delta^{-1} delta w
  // on terms with deg_s + deg_a > 0
  Kaehler K = fubini_study(6);
  WickEl sample = K.theta + K.curv + delta_inv(K.curv);
  WickEl lhs = delta_op(delta_inv(sample)) + delta_inv(delta_op(sample));
  CHECK(same(lhs.truncated(sample.cap() - 1), sample.truncated(lhs.cap())));

  // delta^{-1} squares to zero, and so does delta
  CHECK(vanishes(delta_inv(delta_inv(sample))));
  CHECK(vanishes(delta_op(delta_op(sample))));
}

TEST_CASE("delta is the inner derivation by theta") {
  for (bool curved : {false, true}) {
    Kaehler K = curved ? fubini_study(8) : build_flat(1);
    Jet f = Jet::variable(1, 0) + GaussRat(2) * Jet::variable(1, 1);
    WKey k1;
    k1.za = Mono::var(0, 2);
    WKey k2;
    k2.zb = Mono::var(0);
    k2.fh = 1u;
    k2.r = 1;
    WickEl w = WickEl::term(1, k1, f) + WickEl::term(1, k2, f);
    WickEl lhs = delta_op(w);
    WickEl rhs = nu_shift(graded_comm(K.theta, w, K.fib), -1);
    CHECK(same(lhs, rhs));
  }
}

TEST_CASE("nabla extends the exterior derivative and has curvature R") {
  Kaehler K = fubini_study(8);
  // on scalars nabla = d
  WickEl s = scalar_embed(NuSeries::of_jet(K.phi));
  CHECK(same(nabla(s, K), exterior_d(s)));

  // nabla^2 w = (1/nu) [R, w] on samples
  WKey k1;
  k1.za = Mono::var(0, 2);
  WKey k2;
  k2.zb = Mono::var(0);
  k2.r = 1;
  WickEl w = WickEl::term(1, k1, Jet::variable(1, 1)) +
             WickEl::term(1, k2, Jet::constant(1, GaussRat(1)));
  WickEl lhs = nabla(nabla(w, K), K);
  WickEl rhs = nu_shift(graded_comm(K.curv, w, K.fib), -1);
  CHECK(same(lhs.truncated_jets(4), rhs.truncated_jets(4)));

  // the metric is nabla-parallel: nabla(theta) = 0
  CHECK(vanishes(nabla(K.theta, K).truncated_jets(3)));
}

TEST_CASE("omega is closed and eta has the stated shape") {
  Kaehler K = build_kaehler(
      expand_jet("z1*zbar1 + z2*zbar2 + z1*zbar1*z2*zbar2", 2, 8, {})
          .truncated(8));
  CHECK(vanishes(exterior_d(omega(K))));
  CHECK(to_string(eta(0, build_flat(1))) == "nu^-1*zeta1");
}
