#ifndef FTL_UNIPOLY_HPP
#define FTL_UNIPOLY_HPP

// Dense univariate polynomials over a tower field.  Degrees stay small
// (<= 40 across the library), so dense coefficient vectors are the right
// storage.  The zero polynomial is the empty vector.

#include <cstddef>
#include <utility>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/tower.hpp"

namespace ftl {

class UniPoly {
 public:
  explicit UniPoly(const Tower& t) : tower_(&t) {}

  UniPoly(const Tower& t, std::vector<FieldElement> coeffs) : tower_(&t), c_(std::move(coeffs)) {
    for (const auto& x : c_) {
      if (&x.tower() != tower_) throw RejectedInput("UniPoly: coefficient tower mismatch");
    }
    trim();
  }

  static UniPoly constant(FieldElement v) {
    const Tower& t = v.tower();
    return UniPoly(t, {std::move(v)});
  }

  // x - r
  static UniPoly linear_root(const FieldElement& r) {
    return UniPoly(r.tower(), {-r, FieldElement::one(r.tower())});
  }

  const Tower& tower() const { return *tower_; }
  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is -1 by convention.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<FieldElement>& coeffs() const { return c_; }

  const FieldElement& operator[](std::size_t i) const { return c_[i]; }

  FieldElement coeff_or_zero(std::size_t i) const {
    return i < c_.size() ? c_[i] : FieldElement::zero(*tower_);
  }

  const FieldElement& leading() const {
    if (is_zero()) throw ContractViolation("UniPoly: leading coefficient of zero");
    return c_.back();
  }

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
    a.require_same(b);
    std::vector<FieldElement> c;
    const std::size_t n = std::max(a.c_.size(), b.c_.size());
    c.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.push_back(a.coeff_or_zero(i) + b.coeff_or_zero(i));
    return UniPoly(*a.tower_, std::move(c));
  }

  friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
    a.require_same(b);
    std::vector<FieldElement> c;
    const std::size_t n = std::max(a.c_.size(), b.c_.size());
    c.reserve(n);
    for (std::size_t i = 0; i < n; ++i) c.push_back(a.coeff_or_zero(i) - b.coeff_or_zero(i));
    return UniPoly(*a.tower_, std::move(c));
  }

  UniPoly operator-() const {
    std::vector<FieldElement> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(-x);
    return UniPoly(*tower_, std::move(c));
  }

  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    a.require_same(b);
    if (a.is_zero() || b.is_zero()) return UniPoly(*a.tower_);
    std::vector<FieldElement> c(a.c_.size() + b.c_.size() - 1, FieldElement::zero(*a.tower_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j].is_zero()) continue;
        c[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return UniPoly(*a.tower_, std::move(c));
  }

  UniPoly scaled(const FieldElement& s) const {
    std::vector<FieldElement> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(x * s);
    return UniPoly(*tower_, std::move(c));
  }

  // Multiply by x^k.
  UniPoly shifted(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<FieldElement> c(c_.size() + k, FieldElement::zero(*tower_));
    for (std::size_t i = 0; i < c_.size(); ++i) c[i + k] = c_[i];
    return UniPoly(*tower_, std::move(c));
  }

  UniPoly pow(unsigned n) const {
    UniPoly acc = UniPoly::constant(FieldElement::one(*tower_));
    UniPoly base = *this;
    while (n) {
      if (n & 1U) acc = acc * base;
      base = base * base;
      n >>= 1U;
    }
    return acc;
  }

  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    a.require_same(b);
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

  FieldElement eval(const FieldElement& t) const {
    FieldElement acc = FieldElement::zero(*tower_);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
    return acc;
  }

  // Synthetic division by (x - r): *this = (x - r) * quotient + remainder,
  // with remainder = eval(r).
  std::pair<UniPoly, FieldElement> divide_linear(const FieldElement& r) const {
    if (is_zero()) return {UniPoly(*tower_), FieldElement::zero(*tower_)};
    std::vector<FieldElement> q(c_.size() - 1, FieldElement::zero(*tower_));
    FieldElement carry = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = c_[i] + r * carry;
    }
    return {UniPoly(*tower_, std::move(q)), carry};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void require_same(const UniPoly& o) const {
    if (tower_ != o.tower_) throw RejectedInput("UniPoly: tower mismatch");
  }

  const Tower* tower_;
  std::vector<FieldElement> c_;
};

// Largest k with (x - r)^k dividing p, by repeated exact synthetic division.
inline int root_multiplicity(const UniPoly& p, const FieldElement& r) {
  if (p.is_zero()) throw ContractViolation("root_multiplicity: zero polynomial");
  int k = 0;
  UniPoly q = p;
  while (!q.is_zero()) {
    auto [quot, rem] = q.divide_linear(r);
    if (!rem.is_zero()) break;
    q = std::move(quot);
    ++k;
  }
  return k;
}

// q with p = (x - r)^k q, exactly.  Requires root multiplicity >= k.
inline UniPoly deflate(const UniPoly& p, const FieldElement& r, int k) {
  UniPoly q = p;
  for (int i = 0; i < k; ++i) {
    auto [quot, rem] = q.divide_linear(r);
    if (!rem.is_zero())
      throw ContractViolation("deflate: multiplicity shortfall at step " + std::to_string(i));
    q = std::move(quot);
  }
  return q;
}

}  // namespace ftl

#endif
