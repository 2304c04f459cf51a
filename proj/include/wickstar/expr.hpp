#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wickstar/error.hpp"
#include "wickstar/jet.hpp"

namespace wickstar {

// AST for potential expressions.
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' integer)?
//   atom   := rational | 'z'index | 'zbar'index | 'log' '(' expr ')' | '(' expr ')'
// The optional leading sign on expr is a convenience superset of the
// published grammar (needed for potentials like -log(1 - z1*zbar1)).
struct ExprNode {
  enum class Kind { num, var, add, sub, mul, pow, log };
  Kind kind = Kind::num;
  Rat value;               // num
  int var = -1;            // var: index in [0, 2n)
  long expo = 0;           // pow
  std::vector<ExprNode> kids;
};

class ExprParser {
public:
  ExprParser(std::string_view text, int n) : s_(text), n_(n) {}

  ExprNode parse() {
    ExprNode e = expr();
    skip();
    if (pos_ != s_.size()) bad("unexpected trailing input");
    return e;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int n_;

  [[noreturn]] void bad(const std::string& what) const {
    fail(errc::syntax,
         "parse error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprNode expr() {
    ExprNode acc;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    acc = term();
    if (neg) {
      ExprNode z;
      z.kind = ExprNode::Kind::num;
      z.value = 0;
      ExprNode s;
      s.kind = ExprNode::Kind::sub;
      s.kids = {std::move(z), std::move(acc)};
      acc = std::move(s);
    }
    for (;;) {
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      ExprNode rhs = term();
      ExprNode node;
      node.kind = (c == '+') ? ExprNode::Kind::add : ExprNode::Kind::sub;
      node.kids = {std::move(acc), std::move(rhs)};
      acc = std::move(node);
    }
    return acc;
  }

  ExprNode term() {
    ExprNode acc = factor();
    while (peek() == '*') {
      ++pos_;
      ExprNode rhs = factor();
      ExprNode node;
      node.kind = ExprNode::Kind::mul;
      node.kids = {std::move(acc), std::move(rhs)};
      acc = std::move(node);
    }
    return acc;
  }

  ExprNode factor() {
    ExprNode base = atom();
    if (peek() == '^') {
      ++pos_;
      ExprNode node;
      node.kind = ExprNode::Kind::pow;
      node.expo = integer();
      node.kids = {std::move(base)};
      return node;
    }
    return base;
  }

  long integer() {
    skip();
    bool neg = accept('-');
    if (!std::isdigit(static_cast<unsigned char>(peek()))) bad("expected integer");
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1000000) bad("integer too large");
      ++pos_;
    }
    return neg ? -v : v;
  }

  ExprNode atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExprNode e = expr();
      if (!accept(')')) bad("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      long num = integer();
      ExprNode node;
      node.kind = ExprNode::Kind::num;
      if (accept('/')) {
        long den = integer();
        if (den <= 0) bad("denominator must be positive");
        node.value = rat_of(num, den);
      } else {
        node.value = Rat(num);
      }
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      std::string word;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_])))
        word += s_[pos_++];
      if (word == "log") {
        if (!accept('(')) bad("expected '(' after log");
        ExprNode node;
        node.kind = ExprNode::Kind::log;
        node.kids = {expr()};
        if (!accept(')')) bad("expected ')'");
        return node;
      }
      if (word == "z" || word == "zbar") {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) bad("expected variable index");
        long idx = integer();
        if (idx < 1 || idx > n_) {
          pos_ = start;
          bad("variable index out of range for dimension " + std::to_string(n_));
        }
        ExprNode node;
        node.kind = ExprNode::Kind::var;
        node.var = (word == "z") ? int(idx - 1) : int(n_ + idx - 1);
        return node;
      }
      pos_ = start;
      bad("unknown name '" + word + "'");
    }
    bad("expected atom");
  }
};

inline ExprNode parse_potential(const std::string& text, int n) {
  return ExprParser(text, n).parse();
}

namespace detail {

// log(1+v) = sum_{m>=1} (-1)^{m+1} v^m / m, truncated at order J
inline Jet log_series(const Jet& arg, int J) {
  GaussRat c0 = arg.value_at_origin();
  require(c0.is_one(), errc::domain,
          "log argument must equal 1 at the base point");
  Jet v = arg.truncated(J) - Jet::constant(arg.dim(), GaussRat(1), J);
  Jet acc(arg.dim(), J);
  Jet p = v;
  int m = 1;
  while (!p.is_zero()) {
    GaussRat c = GaussRat(rat_of(m % 2 ? 1 : -1, m));
    acc += c * p;
    p = (p * v).truncated(J);
    ++m;
  }
  return acc;
}

inline Jet expand_node(const ExprNode& e, int n, int J,
                       const std::vector<Jet>& subst) {
  using K = ExprNode::Kind;
  switch (e.kind) {
    case K::num:
      return Jet::constant(n, GaussRat(e.value));
    case K::var:
      return subst[e.var];
    case K::add:
      return expand_node(e.kids[0], n, J, subst) +
             expand_node(e.kids[1], n, J, subst);
    case K::sub:
      return expand_node(e.kids[0], n, J, subst) -
             expand_node(e.kids[1], n, J, subst);
    case K::mul:
      return expand_node(e.kids[0], n, J, subst) *
             expand_node(e.kids[1], n, J, subst);
    case K::pow: {
      Jet base = expand_node(e.kids[0], n, J, subst);
      if (e.expo < 0) base = base.truncated(J);
      return ipow(base, e.expo);
    }
    case K::log:
      return log_series(expand_node(e.kids[0], n, J, subst), J);
  }
  fail(errc::internal, "unreachable expression kind");
}

}  // namespace detail

// Expand around the base point by substituting var -> base + var, so the
// resulting jet is centered at 0.  Polynomial subtrees stay exact; log and
// negative powers introduce truncation at order J.
inline Jet expand_jet(const ExprNode& e, int n, int J,
                      const std::vector<GaussRat>& base) {
  require(J >= 0, errc::usage, "jet order must be nonnegative");
  require(base.empty() || int(base.size()) == 2 * n, errc::usage,
          "base point needs 2n entries");
  std::vector<Jet> subst;
  for (int v = 0; v < 2 * n; ++v) {
    Jet j = Jet::variable(n, v);
    if (!base.empty()) j += Jet::constant(n, base[v]);
    subst.push_back(std::move(j));
  }
  return detail::expand_node(e, n, J, subst);
}

inline Jet expand_jet(const std::string& text, int n, int J,
                      const std::vector<GaussRat>& base = {}) {
  return expand_jet(parse_potential(text, n), n, J, base);
}

}  // namespace wickstar
