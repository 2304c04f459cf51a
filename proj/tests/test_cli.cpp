#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "wickstar/cli.hpp"

using namespace wickstar;

namespace {

struct CliResult {
  int code = 0;
  std::string out, err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_tmp(const std::string& name, const std::string& text) {
  std::string path = "/tmp/wickstar_" + name;
  std::ofstream f(path);
  f << text;
  return path;
}

std::string flat_spec() {
  return write_tmp("flat.spec",
                   "# flat line\n"
                   "dimension = 1\n"
                   "potential = z1*zbar1\n"
                   "basepoint = 0 0\n"
                   "nu_order = 3\n"
                   "jet_order = 10\n"
                   "deg_bound = 8\n");
}

std::string fs_spec() {
  return write_tmp("fs.spec",
                   "dimension = 1\n"
                   "potential = log(1 + z1*zbar1)\n"
                   "nu_order = 3\n");
}

}  // namespace

TEST_CASE("star command reproduces the flat contraction") {
  std::string spec = flat_spec();
  CliResult r = run({"star", "--spec", spec, "--f", "zbar1", "--g", "z1"});
  CHECK(r.code == 0);
  CHECK(r.out == "nu^0: z1*zbar1\nnu^1: 1\n");
  CHECK(r.err.empty());

  CliResult r0 = run({"star", "--spec", spec, "--f", "zbar1", "--g", "z1",
                      "--order", "0"});
  CHECK(r0.code == 0);
  CHECK(r0.out == "nu^0: z1*zbar1\n");

  CliResult rd = run({"star", "--spec", spec, "--f", "zbar1", "--g", "z1",
                      "--decimal", "2"});
  CHECK(rd.code == 0);
  CHECK(rd.out ==
        "# approximation: 2 decimal digits\nnu^0: z1*zbar1\nnu^1: 1.00\n");
}

TEST_CASE("r-term prints the requested filtration slot") {
  CliResult flat = run({"r-term", "--spec", flat_spec(), "--deg", "3"});
  CHECK(flat.code == 0);
  CHECK(flat.out == "0\n");

  std::string spec = fs_spec();
  CliResult fs = run({"r-term", "--spec", spec, "--deg", "3"});
  CHECK(fs.code == 0);

  ManifoldSpec ms = load_manifold_spec(spec);
  Kaehler K = build_manifold(ms);
  WickEl expect(K.n);
  WickEl di = delta_inv(K.curv);
  for (const auto& [k, j] : di.terms())
    if (k.deg() == 3 && !j.is_zero()) expect += WickEl::term(K.n, k, j);
  CHECK(!expect.is_zero());
  CHECK(fs.out == to_string(expect) + "\n");

  CliResult bad = run({"r-term", "--spec", spec, "--deg", "2"});
  CHECK(bad.code == 2);
}

TEST_CASE("cr-table prints bidifferential coefficients") {
  std::string spec = flat_spec();
  CliResult r0 = run({"cr-table", "--spec", spec, "--order", "0"});
  CHECK(r0.code == 0);
  CHECK(r0.out == "(1 ; 1): 1\n");

  CliResult r2 = run({"cr-table", "--spec", spec, "--order", "2"});
  CHECK(r2.code == 0);
  CHECK(r2.out == "(zbar1^2 ; z1^2): 1/2\n");

  CliResult rd =
      run({"cr-table", "--spec", spec, "--order", "2", "--decimal", "3"});
  CHECK(rd.code == 0);
  CHECK(rd.out ==
        "# approximation: 3 decimal digits\n(zbar1^2 ; z1^2): 0.500\n");
}

TEST_CASE("verify command reports and is deterministic") {
  std::string spec = flat_spec();
  CliResult a = run({"verify", "--spec", spec, "--suite", "unit", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out.find("unit") != std::string::npos);
  CHECK(a.out.find("pass") != std::string::npos);
  CliResult b = run({"verify", "--spec", spec, "--suite", "unit", "--seed", "7"});
  CHECK(a.out == b.out);

  CliResult bad = run({"verify", "--spec", spec, "--suite", "nope"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("no check matches") != std::string::npos);
}

TEST_CASE("exit codes follow the error taxonomy") {
  std::string spec = flat_spec();

  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"star", "--spec", spec, "--f", "z1"}).code == 2);
  CHECK(run({"star", "--f", "z1", "--g", "z1"}).code == 2);
  CHECK(run({"star", "--spec", spec, "--f", "z1", "--g", "z1",
             "--wat", "1"}).code == 2);
  CHECK(run({"star", "--spec", spec, "--f", "z1", "--g", "z1",
             "--order"}).code == 2);
  CHECK(run({"star", "--spec", spec, "--f", "z1", "--g", "z1", "--order", "2",
             "--order", "3"}).code == 2);

  CHECK(run({"star", "--spec", "/tmp/wickstar_missing.spec", "--f", "z1",
             "--g", "z1"}).code == 3);
  std::string dup = write_tmp("dup.spec",
                              "dimension = 1\ndimension = 1\n"
                              "potential = z1*zbar1\n");
  CHECK(run({"r-term", "--spec", dup, "--deg", "3"}).code == 3);
  std::string nopot = write_tmp("nopot.spec", "dimension = 1\n");
  CHECK(run({"r-term", "--spec", nopot, "--deg", "3"}).code == 3);
  std::string badbase = write_tmp("badbase.spec",
                                  "dimension = 1\npotential = z1*zbar1\n"
                                  "basepoint = 0 0 0\n");
  CHECK(run({"r-term", "--spec", badbase, "--deg", "3"}).code == 3);

  CliResult syn = run({"star", "--spec", spec, "--f", "z1 +", "--g", "z1"});
  CHECK(syn.code == 4);

  std::string dom = write_tmp("dom.spec",
                              "dimension = 1\n"
                              "potential = log(2 + z1*zbar1)\n");
  CHECK(run({"star", "--spec", dom, "--f", "z1", "--g", "z1"}).code == 5);

  CliResult bud = run({"star", "--spec", fs_spec(), "--f", "z1*zbar1", "--g",
                       "z1", "--order", "4", "--jet", "6"});
  CHECK(bud.code == 6);
  CHECK(bud.err.find("warning:") != std::string::npos);
}

TEST_CASE("spec overrides warn but still run when trust allows") {
  std::string spec = flat_spec();
  CliResult r = run({"star", "--spec", spec, "--f", "zbar1", "--g", "z1",
                     "--jet", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "nu^0: z1*zbar1\nnu^1: 1\n");
  CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("basepoint literals accept Gaussian rationals") {
  std::string spec = write_tmp("base.spec",
                               "dimension = 1\n"
                               "potential = z1*zbar1\n"
                               "basepoint = 1/2+1/2*i 1/2-1/2*i\n"
                               "nu_order = 2\n");
  CliResult r = run({"r-term", "--spec", spec, "--deg", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\n");
}

TEST_CASE("decimal rendering rounds half away from zero") {
  using detail::dec_string;
  CHECK(dec_string(Rat(-1) / 3, 3) == "-0.333");
  CHECK(dec_string(Rat(1) / 2, 1) == "0.5");
  CHECK(dec_string(Rat(2) / 3, 2) == "0.67");
  CHECK(dec_string(Rat(3) / 2, 0) == "2");
  CHECK(dec_string(Rat(-3) / 2, 0) == "-2");
  CHECK(dec_string(Rat(0), 2) == "0.00");
  CHECK(dec_string(GaussRat(Rat(1) / 2, Rat(-1) / 3), 2) == "0.50-0.33*i");
}
