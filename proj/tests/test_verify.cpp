#include <catch2/catch_amalgamated.hpp>

#include "wickstar/expr.hpp"
#include "wickstar/verify.hpp"

using namespace wickstar;

namespace {

Kaehler fubini_study(int J) {
  return build_kaehler(expand_jet("log(1 + z1*zbar1)", 1, J, {}));
}

std::string failing_ids(const std::vector<CheckReport>& reps) {
  std::string out;
  for (const CheckReport& r : reps)
    if (r.status != CheckStatus::pass)
      out += r.id + "=" + to_string(r.status) + " [" + r.witness + "] ";
  return out;
}

}  // namespace

TEST_CASE("the whole suite passes on a flat setup") {
  VerifyParams p;
  p.samples = 4;
  VerifySuite S(build_flat(1), p);
  std::vector<CheckReport> reps = S.run_suite("all");
  REQUIRE(reps.size() == VerifySuite::catalog().size());
  INFO(failing_ids(reps));
  CHECK(all_passed(reps));
}

TEST_CASE("the whole suite passes on the Fubini-Study setup") {
  VerifyParams p;
  p.samples = 3;
  VerifySuite S(fubini_study(10), p);
  std::vector<CheckReport> reps = S.run_suite("all");
  INFO(failing_ids(reps));
  CHECK(all_passed(reps));
}

TEST_CASE("a too-small jet order downgrades star checks to budget") {
  VerifyParams p;
  p.samples = 2;
  VerifySuite S(fubini_study(6), p);
  CheckReport t = S.run("theorem");
  CHECK(t.status == CheckStatus::budget);
  CHECK(t.witness.find("jet order") != std::string::npos);
  CheckReport o = S.run("oracle-equiv");
  CHECK(o.status == CheckStatus::budget);
  CheckReport l4 = S.run("lemma4");
  CHECK(l4.status == CheckStatus::pass);
}

TEST_CASE("reports are byte-identical across runs with the same seed") {
  VerifyParams p;
  p.samples = 3;
  VerifySuite a(build_flat(1), p);
  VerifySuite b(build_flat(1), p);
  std::vector<CheckReport> ra = a.run_suite("all");
  std::vector<CheckReport> rb = b.run_suite("all");
  CHECK(render_lines(ra) == render_lines(rb));
  CHECK(render_table(ra) == render_table(rb));

  VerifyParams q = p;
  q.seed = 2;
  VerifySuite c(build_flat(1), q);
  CHECK(render_lines(c.run_suite("unit")) != render_lines(a.run_suite("unit")));
}

TEST_CASE("the selector picks whole families by prefix") {
  VerifyParams p;
  p.samples = 2;
  VerifySuite S(build_flat(1), p);
  std::vector<CheckReport> fam = S.run_suite("lemma6");
  REQUIRE(fam.size() == 3);
  CHECK(fam[0].id == "lemma6i");
  CHECK(fam[1].id == "lemma6ii");
  CHECK(fam[2].id == "lemma6iii");
  CHECK_THROWS_AS(S.run_suite("nope"), error);
}

TEST_CASE("report lines carry id, status, and parameters") {
  VerifyParams p;
  p.samples = 2;
  VerifySuite S(build_flat(1), p);
  std::vector<CheckReport> reps = S.run_suite("unit");
  REQUIRE(reps.size() == 1);
  std::string line = render_lines(reps);
  CHECK(line == "unit\tpass\tn=1 N=3 T=8 J=exact seed=1\n");
  CHECK(reps[0].statement.find("unit") != std::string::npos);

  std::vector<CheckReport> fake = reps;
  fake[0].status = CheckStatus::fail;
  fake[0].witness = "w";
  CHECK(!all_passed(fake));
  CHECK(render_lines(fake) == "unit\tFAIL\tn=1 N=3 T=8 J=exact seed=1\tw\n");
}
