#include <catch2/catch_amalgamated.hpp>

#include "wickstar/expr.hpp"
#include "wickstar/fedosov.hpp"
#include "wickstar/sov.hpp"

using namespace wickstar;

namespace {

Kaehler fubini_study(int J) {
  return build_kaehler(expand_jet("log(1 + z1*zbar1)", 1, J, {}));
}

bool same(const NuSeries& a, const NuSeries& b) {
  return compare_trusted(a, b).equal;
}

}  // namespace

TEST_CASE("holomorphic left factors multiply pointwise") {
  Kaehler K = build_flat(1);
  OracleEngine E(K, trivial_potential(expand_jet("z1*zbar1", 1, 8, {})), 4);
  NuSeries s = E.star(expand_jet("z1^2", 1, 8, {}),
                      expand_jet("z1*zbar1 + zbar1", 1, 8, {}));
  CHECK(to_string(s) == "nu^0: z1^2*zbar1 + z1^3*zbar1");
  CHECK(s.cap() == 4);
}

TEST_CASE("an antiholomorphic left factor differentiates") {
  Kaehler K = build_flat(1);
  OracleEngine E(K, trivial_potential(expand_jet("z1*zbar1", 1, 8, {})), 4);

  NuSeries s = E.star(Jet::variable(1, 1), Jet::variable(1, 0));
  CHECK(to_string(s) == "nu^0: z1*zbar1\nnu^1: 1");

  NuSeries t = E.star(expand_jet("zbar1", 1, 8, {}),
                      expand_jet("z1^2*zbar1", 1, 8, {}));
  CHECK(to_string(t) == "nu^0: z1^2*zbar1^2\nnu^1: 2*z1*zbar1");
}

TEST_CASE("two antiholomorphic variables in two dimensions") {
  Kaehler K = build_flat(2);
  OracleEngine E(K,
                 trivial_potential(expand_jet("z1*zbar1 + z2*zbar2", 2, 8, {})),
                 4);
  NuSeries s = E.star(expand_jet("zbar1*zbar2", 2, 8, {}),
                      expand_jet("z1*z2", 2, 8, {}));
  CHECK(to_string(s) == "nu^0: z1*z2*zbar1*zbar2\n"
                        "nu^1: z1*zbar1 + z2*zbar2\n"
                        "nu^2: 1");
}

TEST_CASE("the oracle agrees with the flat-section route") {
  Kaehler K = fubini_study(10);
  FedosovEngine F(K, 8);
  OracleEngine O(K, trivial_potential(K.phi), 3);

  Jet fs[] = {expand_jet("zbar1", 1, 10, {}),
              expand_jet("z1*zbar1", 1, 10, {}),
              expand_jet("zbar1^2 + z1", 1, 10, {})};
  Jet gs[] = {expand_jet("z1", 1, 10, {}),
              expand_jet("z1*zbar1", 1, 10, {}),
              expand_jet("z1^2*zbar1", 1, 10, {})};
  for (const Jet& f : fs)
    for (const Jet& g : gs) {
      NuSeries a = F.star(f, g);
      NuSeries b = O.star(f, g);
      INFO(to_string(a) << "\n--\n" << to_string(b));
      CHECK(same(a, b));
      CHECK(std::min(a.cap(), b.cap()) >= 3);
    }
}

TEST_CASE("right multiplication law through the oracle") {
  Kaehler K = fubini_study(10);
  OracleEngine E(K, trivial_potential(K.phi), 4);
  Jet h = partial(K.phi, 1);

  Jet f = expand_jet("z1*zbar1^2", 1, 10, {});
  NuSeries s = E.star(NuSeries::of_jet(f), NuSeries::of_jet(h));
  CHECK(s.cap() >= 4);
  CHECK(compare_trusted(s.coeff(0), f * h).equal);
  CHECK(compare_trusted(s.coeff(1), partial(f, 1)).equal);
  for (int q = 2; q <= s.cap(); ++q)
    CHECK(compare_trusted(s.coeff(q), Jet(1)).equal);
}

TEST_CASE("oracle input validation") {
  Kaehler K = build_flat(1);
  CHECK_THROWS_AS(
      build_left_mult(NuSeries::of_jet(Jet::variable(1, 0)),
                      trivial_potential(expand_jet("z1*zbar1 + z2*zbar2", 2, 8,
                                                   {})),
                      K, 2),
      error);
}
