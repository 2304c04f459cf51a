#include <catch2/catch_amalgamated.hpp>

#include "wickstar/expr.hpp"
#include "wickstar/jet.hpp"
#include "wickstar/mono.hpp"
#include "wickstar/nu_series.hpp"
#include "wickstar/rational.hpp"

using namespace wickstar;

TEST_CASE("gaussian rational field ops") {
  GaussRat a(rat_of(1, 2), rat_of(3, 1));  // 1/2 + 3i
  GaussRat b(rat_of(2, 1), rat_of(-1, 1)); // 2 - i
  CHECK(to_string(a) == "1/2+3*i");
  CHECK(to_string(b) == "2-i");
  CHECK(to_string(a * b) == "4+11/2*i");
  CHECK(a * b / b == a);
  CHECK((a - a).is_zero());
  CHECK(to_string(GaussRat::i() * GaussRat::i()) == "-1");
  CHECK(to_string(GaussRat(rat_of(0), rat_of(-2, 3))) == "-2/3*i");
  CHECK_THROWS_AS(a / GaussRat(), error);
}

TEST_CASE("monomials pack and order graded-lex") {
  Mono z = Mono::var(0);
  Mono w = Mono::var(1, 2);
  CHECK(z.deg() == 1);
  CHECK(w.deg() == 2);
  CHECK(z.times(w).deg() == 3);
  CHECK(z.times(w).exp(1) == 2);
  CHECK(z < w);                                  // degree first
  CHECK(Mono::var(0, 1) < Mono::var(1, 1));      // then lex, var 0 first
  CHECK(z.times(w).divided(z) == w);
  CHECK(Mono().is_one());
  Mono big = Mono::var(2, 5);
  CHECK(big.raised(2, -1) == Mono::var(2, 4));
}

TEST_CASE("jet arithmetic and truncation orders") {
  // f = 1 + z1, g = 1 + zbar1, both exact in dimension 1
  Jet f = Jet::constant(1, GaussRat(1)) + Jet::variable(1, 0);
  Jet g = Jet::constant(1, GaussRat(1)) + Jet::variable(1, 1);
  Jet p = f * g;
  CHECK(p.exact());
  CHECK(to_string(p) == "1 + z1 + zbar1 + z1*zbar1");
  CHECK(to_string(partial(p, 0)) == "1 + zbar1");
  CHECK(to_string(partial(p, 1)) == "1 + z1");
  CHECK(partial(partial(p, 0), 0).is_zero());

  Jet t = p.truncated(1);
  CHECK(t.order() == 1);
  CHECK(to_string(t) == "1 + z1 + zbar1");
  // product order: trusted through min(o_a + val_b, o_b + val_a)
  Jet q = t * Jet::variable(1, 0);
  CHECK(q.order() == 2);
  CHECK(to_string(q) == "z1 + z1^2 + z1*zbar1");
}

TEST_CASE("jet inversion against multiplication") {
  // frozen case: 1/(1 - 2 z zbar + 3 z^2 zbar^2) = 1 + 2 z zbar + z^2 zbar^2 + ...
  Jet u = Jet::variable(1, 0) * Jet::variable(1, 1);
  Jet g = Jet::constant(1, GaussRat(1)) - GaussRat(2) * u + GaussRat(3) * (u * u);
  Jet gi = invert(g.truncated(4));
  CHECK(to_string(gi) == "1 + 2*z1*zbar1 + z1^2*zbar1^2");
  JetCompare c = compare_trusted(g * gi, Jet::constant(1, GaussRat(1)));
  CHECK(c.equal);
  CHECK(c.order == 4);

  CHECK_THROWS_AS(invert(u), error);  // zero constant term
  CHECK_THROWS_AS(invert(g), error);  // exact non-constant needs an order
}

TEST_CASE("expression parser golden cases") {
  ExprNode e = parse_potential("log(1 + z1*zbar1)", 1);
  Jet fs = expand_jet(e, 1, 6, {});
  // log(1+u) = u - u^2/2 + u^3/3
  Jet u = Jet::variable(1, 0) * Jet::variable(1, 1);
  Jet expect = u - GaussRat(rat_of(1, 2)) * (u * u) +
               GaussRat(rat_of(1, 3)) * (u * u * u);
  CHECK(compare_trusted(fs, expect.truncated(6)).equal);
  CHECK(fs.order() == 6);

  Jet hyp = expand_jet("-log(1 - z1*zbar1)", 1, 6, {});
  Jet expect2 = u + GaussRat(rat_of(1, 2)) * (u * u) +
                GaussRat(rat_of(1, 3)) * (u * u * u);
  CHECK(compare_trusted(hyp, expect2).equal);

  // polynomial expressions stay exact
  Jet flat2 = expand_jet("z1*zbar1 + 1/2*z1*zbar2 + 1/2*z2*zbar1 + z2*zbar2", 2, 8, {});
  CHECK(flat2.exact());
  CHECK(to_string(flat2) ==
        "z1*zbar1 + 1/2*z1*zbar2 + 1/2*z2*zbar1 + z2*zbar2");

  // powers, including negative
  Jet pw = expand_jet("(1 + z1)^3", 1, 8, {});
  CHECK(to_string(pw) == "1 + 3*z1 + 3*z1^2 + z1^3");
  Jet nw = expand_jet("(1 + z1)^-1", 1, 3, {});
  CHECK(to_string(nw) == "1 - z1 + z1^2 - z1^3");
}

TEST_CASE("derivative of log matches inversion route") {
  // d/dz1 log(1 + z1 zbar1) = zbar1 / (1 + z1 zbar1), two independent routes
  Jet lhs = partial(expand_jet("log(1 + z1*zbar1)", 1, 8, {}), 0);
  Jet base = expand_jet("1 + z1*zbar1", 1, 8, {});
  Jet rhs = Jet::variable(1, 1) * invert(base.truncated(7));
  JetCompare c = compare_trusted(lhs, rhs);
  CHECK(c.equal);
  CHECK(c.order >= 7);
}

TEST_CASE("base point shifts recenter the expansion") {
  // f(z) = z^2 at base 1/2: (1/2 + z)^2 = 1/4 + z + z^2
  Jet f = expand_jet("z1^2", 1, 6, {GaussRat(rat_of(1, 2)), GaussRat()});
  CHECK(to_string(f) == "1/4 + z1 + z1^2");
  // log at a base point must still see argument 1 there
  CHECK_THROWS_AS(
      expand_jet("log(1 + z1*zbar1)", 1, 6,
                 {GaussRat(rat_of(1, 2)), GaussRat(rat_of(1, 2))}),
      error);
  // rescaled argument is fine: log((4/5)*(1 + z1*zbar1)) at z=zbar=1/2
  Jet g = expand_jet("log(4/5 + 4/5*z1*zbar1)", 1, 6,
                     {GaussRat(rat_of(1, 2)), GaussRat(rat_of(1, 2))});
  Jet gflat = expand_jet("log(1 + z1*zbar1)", 1, 6, {});
  // second mixed derivative is base-invariant only in value, not as a jet;
  // just pin the constant-at-base metric value g_{11} = d2/dzdzbar log(...)
  Jet m = partial(partial(g, 0), 1);
  // at u0 = 1/4: g11 = 1/(1+u)^2 = 16/25
  CHECK(to_string(m.value_at_origin()) == "16/25");
  CHECK(to_string(partial(partial(gflat, 0), 1).value_at_origin()) == "1");
}

TEST_CASE("parser reports positions and classes") {
  CHECK_THROWS_AS(parse_potential("z3", 2), error);
  CHECK_THROWS_AS(parse_potential("1 +", 1), error);
  CHECK_THROWS_AS(parse_potential("q1", 1), error);
  CHECK_THROWS_AS(parse_potential("log(z1", 1), error);
  CHECK_THROWS_AS(parse_potential("1/0", 1), error);
  try {
    parse_potential("z1 + @", 1);
    FAIL("expected parse error");
  } catch (const error& e) {
    CHECK(e.code() == errc::syntax);
    CHECK(std::string(e.what()).find("position 5") != std::string::npos);
  }
  try {
    expand_jet("log(2 + z1)", 1, 4, {});
    FAIL("expected domain error");
  } catch (const error& e) {
    CHECK(e.code() == errc::domain);
  }
}

TEST_CASE("nu series ring with caps") {
  Jet one = Jet::constant(1, GaussRat(1));
  Jet z = Jet::variable(1, 0);
  NuSeries f = NuSeries::of_jet(one, -1);  // nu^{-1}
  f.add_term(1, z);                        // nu^{-1} + nu z
  NuSeries g = NuSeries::of_jet(z, 0, 2);  // z mod nu^3
  NuSeries p = f * g;
  CHECK(p.cap() == 1);  // min(exact + 0, 2 + (-1))
  CHECK(to_string(p.coeff(-1)) == "z1");
  CHECK(to_string(p.coeff(1)) == "z1^2");
  CHECK(p.val() == -1);

  NuSeries s = nu_shift(g, 2);
  CHECK(s.cap() == 4);
  CHECK(to_string(s.coeff(2)) == "z1");

  SeriesCompare c = compare_trusted(p, p);
  CHECK(c.equal);
  NuSeries q = p;
  q.add_term(1, one);
  SeriesCompare d = compare_trusted(p, q);
  CHECK(!d.equal);
  CHECK(d.witness_nu == 1);
  CHECK(to_string(d.rhs - d.lhs) == "1");
}

TEST_CASE("series rendering is line oriented") {
  Jet one = Jet::constant(1, GaussRat(1));
  Jet zz = Jet::variable(1, 0) * Jet::variable(1, 1);
  NuSeries s = NuSeries::of_jet(zz, 0);
  s.add_term(1, one);
  CHECK(to_string(s) == "nu^0: z1*zbar1\nnu^1: 1");
}
