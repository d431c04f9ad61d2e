#ifndef FTL_HOMFORM_HPP
#define FTL_HOMFORM_HPP

// Homogeneous forms in three variables, sparse exponent-keyed storage.
// Includes the fixed forms used throughout: the Fermat cubic x^3+y^3+z^3,
// the coordinate-triangle product xyz, the degree-9 product
// (x^3-y^3)(y^3-z^3)(x^3-z^3), and a degree-24 binary form Q together with
// its three irreducible factors.

#include <array>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/tower.hpp"
#include "ftl/unipoly.hpp"

namespace ftl {

class HomForm {
 public:
  using Key = std::array<int, 3>;  // exponents of x, y, z

  HomForm(const Tower& t, int degree) : tower_(&t), degree_(degree) {
    if (degree < 0) throw RejectedInput("HomForm: negative degree");
  }

  static HomForm from_terms(const Tower& t, int degree,
                            const std::vector<std::pair<Key, FieldElement>>& terms) {
    HomForm f(t, degree);
    for (const auto& [k, c] : terms) f.add_term(k, c);
    return f;
  }

  const Tower& tower() const { return *tower_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Key, FieldElement>& terms() const { return terms_; }

  void add_term(const Key& k, const FieldElement& c) {
    if (k[0] < 0 || k[1] < 0 || k[2] < 0 || k[0] + k[1] + k[2] != degree_)
      throw RejectedInput("HomForm: exponent triple does not match degree");
    if (&c.tower() != tower_) throw RejectedInput("HomForm: coefficient tower mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend HomForm operator+(const HomForm& a, const HomForm& b) {
    a.require_compatible(b);
    HomForm r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }

  friend HomForm operator-(const HomForm& a, const HomForm& b) {
    a.require_compatible(b);
    HomForm r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
  }

  HomForm operator-() const {
    HomForm r(*tower_, degree_);
    for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
    return r;
  }

  friend HomForm operator*(const HomForm& a, const HomForm& b) {
    if (a.tower_ != b.tower_) throw RejectedInput("HomForm: tower mismatch");
    HomForm r(*a.tower_, a.degree_ + b.degree_);
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add_term({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
    return r;
  }

  HomForm scaled(const FieldElement& s) const {
    HomForm r(*tower_, degree_);
    if (s.is_zero()) return r;
    for (const auto& [k, c] : terms_) {
      FieldElement v = c * s;
      if (!v.is_zero()) r.terms_.emplace(k, std::move(v));
    }
    return r;
  }

  friend bool operator==(const HomForm& a, const HomForm& b) {
    return a.tower_ == b.tower_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const HomForm& a, const HomForm& b) { return !(a == b); }

  FieldElement eval(const FieldElement& x, const FieldElement& y, const FieldElement& z) const {
    require_point_tower(x, y, z);
    // Power tables keep the cost linear in the number of terms.
    auto powers = [this](const FieldElement& v) {
      std::vector<FieldElement> p;
      p.reserve(static_cast<std::size_t>(degree_) + 1);
      p.push_back(FieldElement::one(*tower_));
      for (int i = 1; i <= degree_; ++i) p.push_back(p.back() * v);
      return p;
    };
    const auto px = powers(x), py = powers(y), pz = powers(z);
    FieldElement acc = FieldElement::zero(*tower_);
    for (const auto& [k, c] : terms_)
      acc += c * px[static_cast<std::size_t>(k[0])] * py[static_cast<std::size_t>(k[1])] *
             pz[static_cast<std::size_t>(k[2])];
    return acc;
  }

  // Formal partial derivative with respect to variable v (0=x, 1=y, 2=z).
  HomForm partial(int v) const {
    if (v < 0 || v > 2) throw RejectedInput("HomForm::partial: variable out of range");
    if (degree_ == 0) return HomForm(*tower_, 0);
    HomForm r(*tower_, degree_ - 1);
    for (const auto& [k, c] : terms_) {
      if (k[v] == 0) continue;
      Key nk = k;
      nk[v] -= 1;
      r.add_term(nk, c * fe_q(*tower_, k[v]));
    }
    return r;
  }

  // Substitute coordinate polynomials x(t), y(t), z(t): the restriction of the
  // form along a parametrized curve.
  UniPoly restrict_to(const UniPoly& x, const UniPoly& y, const UniPoly& z) const {
    if (&x.tower() != tower_ || &y.tower() != tower_ || &z.tower() != tower_)
      throw RejectedInput("HomForm::restrict_to: tower mismatch");
    auto powers = [this](const UniPoly& p) {
      std::vector<UniPoly> out;
      out.reserve(static_cast<std::size_t>(degree_) + 1);
      out.push_back(UniPoly::constant(FieldElement::one(*tower_)));
      for (int i = 1; i <= degree_; ++i) out.push_back(out.back() * p);
      return out;
    };
    const auto px = powers(x), py = powers(y), pz = powers(z);
    UniPoly acc(*tower_);
    for (const auto& [k, c] : terms_) {
      UniPoly term = px[static_cast<std::size_t>(k[0])] * py[static_cast<std::size_t>(k[1])] *
                     pz[static_cast<std::size_t>(k[2])];
      acc = acc + term.scaled(c);
    }
    return acc;
  }

 private:
  void require_compatible(const HomForm& o) const {
    if (tower_ != o.tower_) throw RejectedInput("HomForm: tower mismatch");
    if (degree_ != o.degree_) throw RejectedInput("HomForm: degree mismatch");
  }
  void require_point_tower(const FieldElement& x, const FieldElement& y,
                           const FieldElement& z) const {
    if (&x.tower() != tower_ || &y.tower() != tower_ || &z.tower() != tower_)
      throw RejectedInput("HomForm::eval: tower mismatch");
  }

  const Tower* tower_;
  int degree_;
  std::map<Key, FieldElement> terms_;
};

// x^3 + y^3 + z^3
inline HomForm fermat_cubic(const Tower& t) {
  const FieldElement one = FieldElement::one(t);
  return HomForm::from_terms(t, 3, {{{3, 0, 0}, one}, {{0, 3, 0}, one}, {{0, 0, 3}, one}});
}

// xyz — the Hessian of the Fermat cubic up to a constant factor.
inline HomForm coordinate_triangle(const Tower& t) {
  return HomForm::from_terms(t, 3, {{{1, 1, 1}, FieldElement::one(t)}});
}

// (x^3 - y^3)(y^3 - z^3)(x^3 - z^3): vanishes exactly at the points of
// contact order >= 6 lying on the curve (and nowhere else on it).
inline HomForm sextactic_form(const Tower& t) {
  const FieldElement one = FieldElement::one(t);
  const HomForm a = HomForm::from_terms(t, 3, {{{3, 0, 0}, one}, {{0, 3, 0}, -one}});
  const HomForm b = HomForm::from_terms(t, 3, {{{0, 3, 0}, one}, {{0, 0, 3}, -one}});
  const HomForm c = HomForm::from_terms(t, 3, {{{3, 0, 0}, one}, {{0, 0, 3}, -one}});
  return a * b * c;
}

// Degree-24 binary form in variables (va, vb); the third variable is absent.
// Q(u,v) = u^24 + 4u^21 v^3 - 17u^18 v^6 - 65u^15 v^9 - 89u^12 v^12
//          - 65u^9 v^15 - 17u^6 v^18 + 4u^3 v^21 + v^24
inline HomForm pair_form_q(const Tower& t, int va, int vb) {
  if (va == vb || va < 0 || va > 2 || vb < 0 || vb > 2)
    throw RejectedInput("pair_form_q: bad variable pair");
  static const long coeffs[9] = {1, 4, -17, -65, -89, -65, -17, 4, 1};
  HomForm q(t, 24);
  for (int i = 0; i < 9; ++i) {
    HomForm::Key k{0, 0, 0};
    k[static_cast<std::size_t>(va)] = 24 - 3 * i;
    k[static_cast<std::size_t>(vb)] = 3 * i;
    q.add_term(k, fe_q(t, coeffs[i]));
  }
  return q;
}

// The three factors of pair_form_q over the rationals:
//   u^9 - 3u^6 v^3 - 6u^3 v^6 - v^9,  u^6 + u^3 v^3 + v^6,  u^9 + 6u^6 v^3 + 3u^3 v^6 - v^9
inline std::array<HomForm, 3> pair_form_q_factors(const Tower& t, int va, int vb) {
  if (va == vb || va < 0 || va > 2 || vb < 0 || vb > 2)
    throw RejectedInput("pair_form_q_factors: bad variable pair");
  auto build = [&](int degree, std::initializer_list<std::pair<int, long>> monos) {
    HomForm f(t, degree);
    for (const auto& [i, c] : monos) {
      HomForm::Key k{0, 0, 0};
      k[static_cast<std::size_t>(va)] = degree - 3 * i;
      k[static_cast<std::size_t>(vb)] = 3 * i;
      f.add_term(k, fe_q(t, c));
    }
    return f;
  };
  return {build(9, {{0, 1}, {1, -3}, {2, -6}, {3, -1}}),
          build(6, {{0, 1}, {1, 1}, {2, 1}}),
          build(9, {{0, 1}, {1, 6}, {2, 3}, {3, -1}})};
}

}  // namespace ftl

#endif
