#pragma once

#include <algorithm>
#include <map>
#include <string>

#include "wickstar/error.hpp"
#include "wickstar/jet.hpp"

namespace wickstar {

// Formal Laurent series in nu with jet coefficients: finitely many negative
// exponents, trusted through nu^cap.  kExactCap marks series with no unseen
// tail (polynomials in nu).
class NuSeries {
public:
  static constexpr int kExactCap = 1 << 20;

  NuSeries() = default;
  explicit NuSeries(int n, int cap = kExactCap) : n_(n), cap_(cap) {}

  static NuSeries of_jet(Jet j, int at = 0, int cap = kExactCap) {
    NuSeries s(j.dim(), cap);
    s.add_term(at, std::move(j));
    return s;
  }

  int dim() const { return n_; }
  int cap() const { return cap_; }
  bool exact() const { return cap_ >= kExactCap; }
  bool is_zero() const { return c_.empty(); }
  const std::map<int, Jet>& terms() const { return c_; }

  int val() const { return c_.empty() ? kExactCap : c_.begin()->first; }

  int val_bound() const {
    int v = val();
    if (!exact()) v = std::min(v, cap_ + 1);
    return v;
  }

  Jet coeff(int r) const {
    auto it = c_.find(r);
    return it == c_.end() ? Jet(n_) : it->second;
  }

  void add_term(int r, const Jet& j) {
    if (r > cap_) return;
    require(j.dim() == n_, errc::usage, "jet dimension mismatch");
    if (j.is_zero() && j.exact()) return;
    auto it = c_.find(r);
    if (it == c_.end()) {
      if (!j.is_zero() || !j.exact()) c_.emplace(r, j);
    } else {
      it->second += j;
      if (it->second.is_zero() && it->second.exact()) c_.erase(it);
    }
  }

  void set_cap(int cap) {
    cap_ = cap;
    std::erase_if(c_, [&](const auto& t) { return t.first > cap_; });
  }

  NuSeries truncated(int cap) const {
    NuSeries s = *this;
    s.set_cap(std::min(cap, cap_));
    return s;
  }

  NuSeries truncated_jets(int order) const {
    NuSeries s(n_, cap_);
    for (const auto& [r, j] : c_) s.add_term(r, j.truncated(order));
    return s;
  }

  NuSeries& operator+=(const NuSeries& o) {
    require(n_ == o.n_, errc::usage, "series dimension mismatch");
    set_cap(std::min(cap_, o.cap_));
    for (const auto& [r, j] : o.c_) add_term(r, j);
    return *this;
  }
  NuSeries& operator-=(const NuSeries& o) {
    require(n_ == o.n_, errc::usage, "series dimension mismatch");
    set_cap(std::min(cap_, o.cap_));
    for (const auto& [r, j] : o.c_) add_term(r, -j);
    return *this;
  }

private:
  int n_ = 0;
  int cap_ = kExactCap;
  std::map<int, Jet> c_;
};

inline NuSeries operator+(NuSeries a, const NuSeries& b) { return a += b; }
inline NuSeries operator-(NuSeries a, const NuSeries& b) { return a -= b; }

inline NuSeries operator-(const NuSeries& a) {
  NuSeries r(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms()) r.add_term(k, -j);
  return r;
}

inline NuSeries operator*(const GaussRat& s, const NuSeries& a) {
  NuSeries r(a.dim(), a.cap());
  for (const auto& [k, j] : a.terms()) r.add_term(k, s * j);
  return r;
}

inline NuSeries nu_shift(const NuSeries& a, int k) {
  int cap = a.exact() ? NuSeries::kExactCap : a.cap() + k;
  NuSeries r(a.dim(), cap);
  for (const auto& [e, j] : a.terms()) r.add_term(e + k, j);
  return r;
}

inline NuSeries operator*(const NuSeries& a, const NuSeries& b) {
  require(a.dim() == b.dim(), errc::usage, "series dimension mismatch");
  long cap = std::min(long(a.cap()) + b.val_bound(), long(b.cap()) + a.val_bound());
  cap = std::min(cap, long(NuSeries::kExactCap));
  NuSeries r(a.dim(), int(cap));
  for (const auto& [ra, ja] : a.terms())
    for (const auto& [rb, jb] : b.terms()) {
      if (long(ra) + rb > cap) continue;
      r.add_term(ra + rb, ja * jb);
    }
  return r;
}

struct SeriesCompare {
  bool equal = true;
  int nu_upto = NuSeries::kExactCap;   // nu-range the comparison covers
  int jet_floor = Jet::kExactOrder;    // weakest jet order met inside it
  int witness_nu = 0;
  Mono witness;
  GaussRat lhs, rhs;
};

inline SeriesCompare compare_trusted(const NuSeries& a, const NuSeries& b) {
  require(a.dim() == b.dim(), errc::usage, "series dimension mismatch");
  SeriesCompare out;
  out.nu_upto = std::min(a.cap(), b.cap());
  int lo = std::min(a.val(), b.val());
  for (int r = lo; r <= out.nu_upto; ++r) {
    if (r > std::max(a.terms().empty() ? lo : a.terms().rbegin()->first,
                     b.terms().empty() ? lo : b.terms().rbegin()->first))
      break;
    JetCompare jc = compare_trusted(a.coeff(r), b.coeff(r));
    out.jet_floor = std::min(out.jet_floor, jc.order);
    if (!jc.equal && out.equal) {
      out.equal = false;
      out.witness_nu = r;
      out.witness = jc.witness;
      out.lhs = jc.lhs;
      out.rhs = jc.rhs;
    }
  }
  return out;
}

// one line per nu power: "nu^r: <jet>", negative powers as nu^-r
inline std::string to_string(const NuSeries& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [r, j] : a.terms()) {
    if (!out.empty()) out += "\n";
    out += "nu^" + std::to_string(r) + ": " + to_string(j);
  }
  return out;
}

}  // namespace wickstar
