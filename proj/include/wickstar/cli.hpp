#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/expr.hpp"
#include "wickstar/fedosov.hpp"
#include "wickstar/manifold.hpp"
#include "wickstar/verify.hpp"

namespace wickstar {

namespace detail {

// ---- decimal rendering -------------------------------------------------
// Rounded views of exact values, half away from zero; always preceded by
// an approximation header so exact and rounded output cannot be confused.

inline std::string dec_string(const Rat& q, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class t = 2 * num * scale + (sgn(q) < 0 ? -den : den);
  mpz_class v = t / (2 * den);
  std::string sign = v < 0 ? "-" : "";
  if (v < 0) v = -v;
  std::string body = mpz_class(v / scale).get_str();
  if (digits > 0) {
    std::string frac = mpz_class(v % scale).get_str();
    body += "." + std::string(std::size_t(digits) - frac.size(), '0') + frac;
  }
  return sign + body;
}

inline std::string dec_string(const GaussRat& v, int digits) {
  if (v.is_zero()) return dec_string(Rat(0), digits);
  std::string out;
  if (sgn(v.re) != 0) out += dec_string(v.re, digits);
  if (sgn(v.im) != 0) {
    Rat a = abs(v.im);
    std::string part = dec_string(a, digits) + "*i";
    if (out.empty())
      out += (sgn(v.im) < 0 ? "-" : "") + part;
    else
      out += (sgn(v.im) < 0 ? "-" : "+") + part;
  }
  return out;
}

inline std::string dec_string(const Jet& a, int digits) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : a.terms()) {
    GaussRat v = c;
    std::string sign;
    if (out.empty()) {
      if (v.is_real() && sgn(v.re) < 0) {
        sign = "-";
        v = -v;
      }
    } else {
      if (v.is_real() && sgn(v.re) < 0) {
        sign = " - ";
        v = -v;
      } else {
        sign = " + ";
      }
    }
    std::string cs = dec_string(v, digits);
    std::string body;
    if (m.is_one()) {
      body = cs;
    } else if (v.is_one()) {
      body = mono_string(a.dim(), m);
    } else {
      bool wrap = cs.find_first_of("+-", 1) != std::string::npos;
      body = (wrap ? "(" + cs + ")" : cs) + "*" + mono_string(a.dim(), m);
    }
    out += sign + body;
  }
  return out;
}

inline std::string dec_string(const NuSeries& a, int digits) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [r, j] : a.terms()) {
    if (!out.empty()) out += "\n";
    out += "nu^" + std::to_string(r) + ": " + dec_string(j, digits);
  }
  return out;
}

inline std::string dec_string(const WickEl& a, int digits) {
  if (a.is_zero()) return "0";
  std::vector<const std::pair<const WKey, Jet>*> terms;
  for (const auto& t : a.terms()) terms.push_back(&t);
  std::sort(terms.begin(), terms.end(), [](const auto* x, const auto* y) {
    const WKey& p = x->first;
    const WKey& q = y->first;
    if (p.deg() != q.deg()) return p.deg() < q.deg();
    return p < q;
  });
  std::string out;
  for (const auto* t : terms) {
    const WKey& k = t->first;
    std::string piece;
    std::string js = dec_string(t->second, digits);
    if (js != "1") {
      bool wrap =
          js[0] == '-' || js.find_first_of("+-", 1) != std::string::npos;
      piece = wrap ? "(" + js + ")" : js;
    }
    if (k.r != 0) {
      if (!piece.empty()) piece += "*";
      piece += "nu^" + std::to_string(k.r);
    }
    std::string fs = fibre_string(k);
    if (!fs.empty()) {
      if (!piece.empty()) piece += "*";
      piece += fs;
    }
    std::string ms = form_string(k.fh, k.fa);
    if (!ms.empty()) {
      if (!piece.empty()) piece += "*";
      piece += ms;
    }
    if (piece.empty()) piece = "1";
    if (!out.empty()) out += " + ";
    out += piece;
  }
  return out;
}

// ---- argument handling -------------------------------------------------

struct CliArgs {
  std::string cmd;
  std::map<std::string, std::string> flags;
};

inline std::string usage_text() {
  return "usage: wickstar <command> --spec FILE [flags]\n"
         "commands:\n"
         "  star      --spec FILE --f EXPR --g EXPR [--order N] [--jet J]"
         " [--deg T] [--decimal D]\n"
         "  verify    --spec FILE [--suite PREFIX] [--order N] [--jet J]"
         " [--deg T] [--seed S]\n"
         "  r-term    --spec FILE --deg Q [--jet J] [--decimal D]\n"
         "  cr-table  --spec FILE [--order R] [--jet J] [--deg T]"
         " [--decimal D]";
}

inline CliArgs parse_cli(const std::vector<std::string>& args) {
  require(!args.empty(), errc::usage, usage_text());
  CliArgs c;
  c.cmd = args[0];
  for (std::size_t i = 1; i < args.size(); i += 2) {
    const std::string& a = args[i];
    require(a.size() > 2 && a.rfind("--", 0) == 0, errc::usage,
            "expected --flag VALUE pairs, got '" + a + "'");
    std::string name = a.substr(2);
    require(i + 1 < args.size(), errc::usage,
            "flag --" + name + " is missing its value");
    require(c.flags.count(name) == 0, errc::usage,
            "flag --" + name + " given twice");
    c.flags[name] = args[i + 1];
  }
  return c;
}

inline void check_flags(const CliArgs& c, const std::set<std::string>& ok) {
  for (const auto& [k, v] : c.flags)
    require(ok.count(k) != 0, errc::usage,
            "flag --" + k + " does not apply to '" + c.cmd + "'");
}

inline int int_flag(const CliArgs& c, const std::string& name) {
  const std::string& s = c.flags.at(name);
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  bool ok = i < s.size() && s.size() <= 9;
  long v = 0;
  for (; ok && i < s.size(); ++i) {
    ok = s[i] >= '0' && s[i] <= '9';
    v = v * 10 + (s[i] - '0');
  }
  require(ok, errc::usage, "flag --" + name + " needs an integer, got '" + s + "'");
  return s[0] == '-' ? int(-v) : int(v);
}

inline std::uint64_t seed_flag(const CliArgs& c) {
  const std::string& s = c.flags.at("seed");
  bool ok = !s.empty() && s.size() <= 19;
  std::uint64_t v = 0;
  for (std::size_t i = 0; ok && i < s.size(); ++i) {
    ok = s[i] >= '0' && s[i] <= '9';
    v = v * 10 + std::uint64_t(s[i] - '0');
  }
  require(ok, errc::usage, "flag --seed needs a nonnegative integer, got '" + s + "'");
  return v;
}

// -1: exact output requested; otherwise the digit count for rounded output
inline int decimal_digits(const CliArgs& c) {
  if (c.flags.count("decimal") == 0) return -1;
  int d = int_flag(c, "decimal");
  require(d >= 1 && d <= 40, errc::usage, "--decimal must be between 1 and 40");
  return d;
}

// Load the spec file and apply overrides; overrides that leave the
// truncation orders below the safe defaults are warned about, not refused.
inline ManifoldSpec cli_spec(const CliArgs& c, bool deg_is_bound,
                             std::ostream& err) {
  require(c.flags.count("spec") != 0, errc::usage,
          "--spec FILE is required\n" + usage_text());
  ManifoldSpec ms = load_manifold_spec(c.flags.at("spec"));
  if (c.flags.count("order")) {
    ms.nu_order = int_flag(c, "order");
    require(ms.nu_order >= 0, errc::usage, "--order must be >= 0");
  }
  if (c.flags.count("jet")) {
    ms.jet_order = int_flag(c, "jet");
    require(ms.jet_order >= 1, errc::usage, "--jet must be >= 1");
  }
  if (deg_is_bound && c.flags.count("deg")) {
    ms.deg_bound = int_flag(c, "deg");
    require(ms.deg_bound >= 2, errc::usage, "--deg must be >= 2");
  }
  for (const std::string& w : spec_warnings(ms)) err << "warning: " << w << "\n";
  return ms;
}

inline int cmd_star(const CliArgs& c, std::ostream& out, std::ostream& err) {
  check_flags(c, {"spec", "f", "g", "order", "jet", "deg", "decimal"});
  require(c.flags.count("f") != 0 && c.flags.count("g") != 0, errc::usage,
          "star needs --f EXPR and --g EXPR");
  int digits = decimal_digits(c);
  ManifoldSpec ms = cli_spec(c, true, err);
  Kaehler K = build_manifold(ms);
  Jet f = expand_jet(c.flags.at("f"), ms.n, ms.jet_order, ms.base);
  Jet g = expand_jet(c.flags.at("g"), ms.n, ms.jet_order, ms.base);
  FedosovEngine E(std::move(K), ms.deg_bound);
  NuSeries s = E.star(f, g);
  require(s.cap() >= ms.nu_order, errc::budget,
          "star product trusted only to nu^" + std::to_string(s.cap()) +
              "; raise jet_order/deg_bound or lower nu_order");
  s = s.truncated(ms.nu_order);
  if (digits >= 0)
    out << "# approximation: " << digits << " decimal digits\n"
        << dec_string(s, digits) << "\n";
  else
    out << to_string(s) << "\n";
  return 0;
}

inline int cmd_verify(const CliArgs& c, std::ostream& out, std::ostream& err) {
  check_flags(c, {"spec", "suite", "order", "jet", "deg", "seed"});
  ManifoldSpec ms = cli_spec(c, true, err);
  VerifyParams p;
  p.nu_order = ms.nu_order;
  p.deg_cap = ms.deg_bound;
  if (c.flags.count("seed")) p.seed = seed_flag(c);
  VerifySuite suite(build_manifold(ms), p);
  std::string sel = c.flags.count("suite") ? c.flags.at("suite") : "all";
  std::vector<CheckReport> reps = suite.run_suite(sel);
  out << render_table(reps) << "\n" << render_lines(reps);
  bool any_fail = false, any_budget = false;
  for (const CheckReport& r : reps) {
    if (r.status == CheckStatus::fail) any_fail = true;
    if (r.status == CheckStatus::budget) any_budget = true;
  }
  if (any_fail) return 1;
  return any_budget ? int(errc::budget) : 0;
}

inline int cmd_rterm(const CliArgs& c, std::ostream& out, std::ostream& err) {
  check_flags(c, {"spec", "deg", "jet", "decimal"});
  require(c.flags.count("deg") != 0, errc::usage,
          "r-term needs --deg Q, the filtration slot to print");
  int q = int_flag(c, "deg");
  require(q >= 3, errc::usage,
          "--deg must be >= 3; the connection correction starts there");
  int digits = decimal_digits(c);
  ManifoldSpec ms = cli_spec(c, false, err);
  Kaehler K = build_manifold(ms);
  FedosovEngine E(std::move(K), std::max(ms.deg_bound, q));
  WickEl piece(ms.n);
  for (const auto& [k, j] : E.r().terms())
    if (k.deg() == q && !j.is_zero()) piece += WickEl::term(ms.n, k, j);
  if (digits >= 0)
    out << "# approximation: " << digits << " decimal digits\n"
        << dec_string(piece, digits) << "\n";
  else
    out << to_string(piece) << "\n";
  return 0;
}

inline int cmd_crtable(const CliArgs& c, std::ostream& out, std::ostream& err) {
  check_flags(c, {"spec", "order", "jet", "deg", "decimal"});
  int digits = decimal_digits(c);
  ManifoldSpec ms = cli_spec(c, true, err);
  int rr = ms.nu_order;
  Kaehler K = build_manifold(ms);
  FedosovEngine E(std::move(K), ms.deg_bound);
  CrTable t = build_cr_table(
      [&](const Jet& f, const Jet& g) { return E.star(f, g); }, ms.n, rr,
      std::max(2, rr));
  std::string body;
  for (const auto& [key, cjet] : t.c) {
    if (key.r != rr || cjet.is_zero()) continue;
    body += "(" + mono_string(ms.n, key.a) + " ; " +
            mono_string(ms.n, key.b) + "): " +
            (digits >= 0 ? dec_string(cjet, digits) : to_string(cjet)) + "\n";
  }
  if (body.empty()) body = "0\n";
  if (digits >= 0) out << "# approximation: " << digits << " decimal digits\n";
  out << body;
  return 0;
}

}  // namespace detail

// Full command-line entry point; returns the process exit code and never
// throws.  Results go to `out`, warnings and errors to `err`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  try {
    detail::CliArgs c = detail::parse_cli(args);
    if (c.cmd == "star") return detail::cmd_star(c, out, err);
    if (c.cmd == "verify") return detail::cmd_verify(c, out, err);
    if (c.cmd == "r-term") return detail::cmd_rterm(c, out, err);
    if (c.cmd == "cr-table") return detail::cmd_crtable(c, out, err);
    fail(errc::usage, "unknown command '" + c.cmd + "'\n" + detail::usage_text());
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return int(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return int(errc::internal);
  }
}

}  // namespace wickstar
