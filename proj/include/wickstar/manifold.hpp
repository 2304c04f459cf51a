#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/expr.hpp"
#include "wickstar/geometry.hpp"

namespace wickstar {

// One coordinate chart: potential expression expanded to jet_order around
// the base point, star products certified through nu^nu_order, sections
// truncated at Deg <= deg_bound.
struct ManifoldSpec {
  int n = 0;
  std::string potential;
  std::vector<GaussRat> base;  // 2n entries, z then zbar
  int nu_order = 3;
  int jet_order = 0;  // 0: defaulted to 2*nu_order+4
  int deg_bound = 0;  // 0: defaulted to 2*nu_order+2
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline Rat rat_lit(const std::string& s, std::size_t& p) {
  bool neg = false;
  if (p < s.size() && (s[p] == '+' || s[p] == '-')) neg = (s[p++] == '-');
  std::size_t d0 = p;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
  require(p > d0, errc::spec_file, "bad rational literal '" + s + "'");
  mpz_class num(s.substr(d0, p - d0));
  mpz_class den(1);
  if (p < s.size() && s[p] == '/') {
    ++p;
    std::size_t e0 = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    require(p > e0, errc::spec_file, "bad rational literal '" + s + "'");
    den = mpz_class(s.substr(e0, p - e0));
    require(den != 0, errc::spec_file, "zero denominator in '" + s + "'");
  }
  Rat q(num, den);
  q.canonicalize();
  return neg ? Rat(-q) : q;
}

// forms: R, Ri, R*i, i, -i, R+Si, R-S*i, R+i, R-i
inline GaussRat gauss_lit(const std::string& tok) {
  if (tok == "i" || tok == "+i") return GaussRat(Rat(0), Rat(1));
  if (tok == "-i") return GaussRat(Rat(0), Rat(-1));
  std::size_t p = 0;
  Rat re = rat_lit(tok, p);
  if (p == tok.size()) return GaussRat(re);
  std::string rest = tok.substr(p);
  if (rest == "i" || rest == "*i") return GaussRat(Rat(0), re);
  if (rest == "+i") return GaussRat(re, Rat(1));
  if (rest == "-i") return GaussRat(re, Rat(-1));
  require(tok[p] == '+' || tok[p] == '-', errc::spec_file,
          "bad coordinate literal '" + tok + "'");
  Rat im = rat_lit(tok, p);
  rest = tok.substr(p);
  require(rest == "i" || rest == "*i", errc::spec_file,
          "bad coordinate literal '" + tok + "'");
  return GaussRat(re, im);
}

inline int int_value(const std::string& key, const std::string& value) {
  std::size_t p = 0;
  bool neg = false;
  if (p < value.size() && (value[p] == '+' || value[p] == '-'))
    neg = (value[p++] == '-');
  long v = 0;
  std::size_t d0 = p;
  while (p < value.size() &&
         std::isdigit(static_cast<unsigned char>(value[p]))) {
    v = v * 10 + (value[p] - '0');
    require(v <= 1000000, errc::spec_file, key + " is out of range");
    ++p;
  }
  require(p > d0 && p == value.size(), errc::spec_file,
          key + " needs an integer, got '" + value + "'");
  return int(neg ? -v : v);
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : value) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

inline ManifoldSpec parse_manifold_spec(const std::string& text) {
  ManifoldSpec ms;
  bool saw_n = false, saw_pot = false, saw_base = false;
  bool saw_nu = false, saw_jet = false, saw_deg = false;
  std::string base_value;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    line = detail::trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    require(eq != std::string::npos, errc::spec_file,
            "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    require(!value.empty(), errc::spec_file,
            "line " + std::to_string(lineno) + ": empty value for " + key);
    auto once = [&](bool& seen) {
      require(!seen, errc::spec_file,
              "line " + std::to_string(lineno) + ": duplicate key " + key);
      seen = true;
    };
    if (key == "dimension") {
      once(saw_n);
      ms.n = detail::int_value(key, value);
    } else if (key == "potential") {
      once(saw_pot);
      ms.potential = value;
    } else if (key == "basepoint") {
      once(saw_base);
      base_value = value;
    } else if (key == "nu_order") {
      once(saw_nu);
      ms.nu_order = detail::int_value(key, value);
    } else if (key == "jet_order") {
      once(saw_jet);
      ms.jet_order = detail::int_value(key, value);
    } else if (key == "deg_bound") {
      once(saw_deg);
      ms.deg_bound = detail::int_value(key, value);
    } else {
      fail(errc::spec_file,
           "line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  require(saw_n, errc::spec_file, "missing key: dimension");
  require(saw_pot, errc::spec_file, "missing key: potential");
  require(ms.n >= 1 && 2 * ms.n <= Mono::max_vars, errc::spec_file,
          "dimension must be between 1 and " +
              std::to_string(Mono::max_vars / 2));
  require(ms.nu_order >= 0, errc::spec_file, "nu_order must be >= 0");
  if (saw_base) {
    for (const std::string& tok : detail::split_list(base_value))
      ms.base.push_back(detail::gauss_lit(tok));
    require(int(ms.base.size()) == 2 * ms.n, errc::spec_file,
            "basepoint needs " + std::to_string(2 * ms.n) +
                " coordinates, got " + std::to_string(ms.base.size()));
  } else {
    ms.base.assign(2 * ms.n, GaussRat(0));
  }
  if (!saw_jet) ms.jet_order = 2 * ms.nu_order + 4;
  if (!saw_deg) ms.deg_bound = 2 * ms.nu_order + 2;
  require(ms.jet_order >= 1, errc::spec_file, "jet_order must be >= 1");
  require(ms.deg_bound >= 2, errc::spec_file, "deg_bound must be >= 2");
  return ms;
}

inline ManifoldSpec load_manifold_spec(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), errc::spec_file, "cannot read spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_manifold_spec(buf.str());
}

// truncation-budget advisories; overriding them is allowed but loud
inline std::vector<std::string> spec_warnings(const ManifoldSpec& ms) {
  std::vector<std::string> out;
  if (ms.jet_order < 2 * ms.nu_order + 4)
    out.push_back("jet_order " + std::to_string(ms.jet_order) +
                  " is below 2*nu_order+4 = " +
                  std::to_string(2 * ms.nu_order + 4) +
                  "; star output may not be trusted to nu^" +
                  std::to_string(ms.nu_order));
  if (ms.deg_bound < 2 * ms.nu_order + 2)
    out.push_back("deg_bound " + std::to_string(ms.deg_bound) +
                  " is below 2*nu_order+2 = " +
                  std::to_string(2 * ms.nu_order + 2) +
                  "; star output may not be trusted to nu^" +
                  std::to_string(ms.nu_order));
  return out;
}

inline Kaehler build_manifold(const ManifoldSpec& ms) {
  Jet phi = expand_jet(ms.potential, ms.n, ms.jet_order, ms.base);
  return build_kaehler(phi);
}

}  // namespace wickstar
