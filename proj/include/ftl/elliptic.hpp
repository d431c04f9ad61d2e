#ifndef FTL_ELLIPTIC_HPP
#define FTL_ELLIPTIC_HPP

// Short Weierstrass model y^2 = x^3 + Ax + B over a tower field: the
// chord-tangent group law, division polynomials, torsion enumeration, and
// the birational correspondence with the plane cubic x^3 + y^3 + z^3 = 0
// (which has A = 0, B = -432).

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/projective.hpp"
#include "ftl/tower.hpp"
#include "ftl/unipoly.hpp"

namespace ftl {

class WeierstrassCurve {
 public:
  WeierstrassCurve(FieldElement A, FieldElement B) : A_(std::move(A)), B_(std::move(B)) {
    if (&A_.tower() != &B_.tower()) throw RejectedInput("WeierstrassCurve: mixed towers");
    const Tower& t = A_.tower();
    // discriminant -16(4A^3 + 27B^2)
    FieldElement disc = fe_q(t, -16) * (fe_q(t, 4) * A_.pow(3) + fe_q(t, 27) * B_ * B_);
    if (disc.is_zero()) throw RejectedInput("WeierstrassCurve: singular (zero discriminant)");
  }

  // y^2 = x^3 - 432, the model of the plane cubic x^3 + y^3 + z^3 = 0.
  static WeierstrassCurve fermat_model(const Tower& t) {
    return WeierstrassCurve(FieldElement::zero(t), fe_q(t, -432));
  }

  const Tower& tower() const { return A_.tower(); }
  const FieldElement& A() const { return A_; }
  const FieldElement& B() const { return B_; }

  FieldElement rhs(const FieldElement& x) const { return x.pow(3) + A_ * x + B_; }
  bool contains(const FieldElement& x, const FieldElement& y) const {
    return y * y == rhs(x);
  }

  std::string key() const {
    return tower().id() + "|" + A_.to_string() + "|" + B_.to_string();
  }

 private:
  FieldElement A_, B_;
};

class ECPoint {
 public:
  static ECPoint infinity(const Tower& t) { return ECPoint(&t); }
  static ECPoint affine(FieldElement x, FieldElement y) {
    if (&x.tower() != &y.tower()) throw RejectedInput("ECPoint: mixed towers");
    return ECPoint(std::move(x), std::move(y));
  }

  bool is_infinity() const { return !xy_.has_value(); }
  const Tower& tower() const { return *tower_; }
  const FieldElement& x() const {
    if (is_infinity()) throw ContractViolation("ECPoint: coordinate of the point at infinity");
    return xy_->first;
  }
  const FieldElement& y() const {
    if (is_infinity()) throw ContractViolation("ECPoint: coordinate of the point at infinity");
    return xy_->second;
  }

  int cmp(const ECPoint& o) const {
    if (tower_ != o.tower_) throw RejectedInput("ECPoint: comparing across towers");
    if (is_infinity() || o.is_infinity())
      return static_cast<int>(o.is_infinity()) - static_cast<int>(is_infinity());
    if (int c = xy_->first.cmp(o.xy_->first); c != 0) return c;
    return xy_->second.cmp(o.xy_->second);
  }
  friend bool operator==(const ECPoint& a, const ECPoint& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const ECPoint& a, const ECPoint& b) { return a.cmp(b) != 0; }
  friend bool operator<(const ECPoint& a, const ECPoint& b) { return a.cmp(b) < 0; }

  std::string to_string() const {
    if (is_infinity()) return "Inf";
    return "(" + xy_->first.to_string() + ", " + xy_->second.to_string() + ")";
  }

 private:
  explicit ECPoint(const Tower* t) : tower_(t) {}
  ECPoint(FieldElement x, FieldElement y) : tower_(&x.tower()), xy_(std::in_place, std::move(x), std::move(y)) {}

  const Tower* tower_;
  std::optional<std::pair<FieldElement, FieldElement>> xy_;
};

inline ECPoint ec_neg(const ECPoint& P) {
  if (P.is_infinity()) return P;
  return ECPoint::affine(P.x(), -P.y());
}

inline ECPoint ec_add(const WeierstrassCurve& E, const ECPoint& P, const ECPoint& Q) {
  const Tower& t = E.tower();
  if (&P.tower() != &t || &Q.tower() != &t) throw RejectedInput("ec_add: tower mismatch");
  if (P.is_infinity()) return Q;
  if (Q.is_infinity()) return P;
  if (!E.contains(P.x(), P.y()) || !E.contains(Q.x(), Q.y()))
    throw ContractViolation("ec_add: point not on curve");

  FieldElement lambda = FieldElement::zero(t);
  if (P.x() == Q.x()) {
    if (P.y() == -Q.y()) return ECPoint::infinity(t);  // includes the order-2 case y = 0
    // P = Q with y != 0: tangent slope
    lambda = (fe_q(t, 3) * P.x() * P.x() + E.A()) * (fe_q(t, 2) * P.y()).inverse();
  } else {
    lambda = (Q.y() - P.y()) * (Q.x() - P.x()).inverse();
  }
  FieldElement xr = lambda * lambda - P.x() - Q.x();
  FieldElement yr = lambda * (P.x() - xr) - P.y();
  return ECPoint::affine(std::move(xr), std::move(yr));
}

inline ECPoint ec_scalar_mul(const WeierstrassCurve& E, long n, const ECPoint& P) {
  if (n < 0) return ec_scalar_mul(E, -n, ec_neg(P));
  ECPoint acc = ECPoint::infinity(E.tower());
  ECPoint base = P;
  while (n) {
    if (n & 1L) acc = ec_add(E, acc, base);
    if (n >>= 1L) base = ec_add(E, base, base);
  }
  return acc;
}

// Plane cubic -> Weierstrass model:  x~ = -12 z / (x+y),  y~ = 36 (x-y) / (x+y).
// The flex [1:-1:0] is the unique point with x + y = 0 and maps to the
// group identity.
inline ECPoint to_weierstrass(const ProjPoint& P) {
  const Tower& t = P.tower();
  if (!hom_eval(fermat_cubic(t), P).is_zero())
    throw ContractViolation("to_weierstrass: point not on the cubic");
  const FieldElement s = P.x() + P.y();
  if (s.is_zero()) return ECPoint::infinity(t);
  const FieldElement sinv = s.inverse();
  FieldElement xt = fe_q(t, -12) * P.z() * sinv;
  FieldElement yt = fe_q(t, 36) * (P.x() - P.y()) * sinv;
  if (!WeierstrassCurve::fermat_model(t).contains(xt, yt))
    throw InternalError("to_weierstrass: image escaped the model curve");
  return ECPoint::affine(std::move(xt), std::move(yt));
}

// Inverse map: infinity -> [1:-1:0], else [36 + y~ : 36 - y~ : -6 x~].
inline ProjPoint from_weierstrass(const ECPoint& Q) {
  const Tower& t = Q.tower();
  if (Q.is_infinity()) return ProjPoint(fe_q(t, 1), fe_q(t, -1), FieldElement::zero(t));
  const FieldElement c36 = fe_q(t, 36);
  return ProjPoint(c36 + Q.y(), c36 - Q.y(), fe_q(t, -6) * Q.x());
}

// Division polynomial psi_n reduced to one variable in x.  Odd n: psi_n is
// already a polynomial in x once y^2 = x^3 + Ax + B is substituted.  Even n:
// psi_n carries a single factor of y; the reduced form stores psi_n / (2y).
struct DivisionPoly {
  int n;
  UniPoly reduced;
  bool has_y_factor;  // true exactly when n is even
};

namespace detail {

// Exact quotient p / d; the division must leave no remainder.
inline UniPoly upoly_divexact(UniPoly p, const UniPoly& d) {
  if (d.is_zero()) throw DivisionByZero("upoly_divexact: zero divisor");
  const Tower& t = p.tower();
  if (p.is_zero()) return p;
  const FieldElement dlead_inv = d.leading().inverse();
  std::vector<FieldElement> q(
      static_cast<std::size_t>(p.degree() - d.degree() + 1), FieldElement::zero(t));
  while (!p.is_zero() && p.degree() >= d.degree()) {
    const std::size_t k = static_cast<std::size_t>(p.degree() - d.degree());
    FieldElement c = p.leading() * dlead_inv;
    q[k] = c;
    p = p - d.shifted(k).scaled(c);
  }
  if (!p.is_zero()) throw InternalError("upoly_divexact: nonzero remainder");
  return UniPoly(t, std::move(q));
}

// psi chain in the ring K[x][y] / (y^2 - x^3 - Ax - B), elements p0 + y p1.
struct YLin {
  UniPoly p0, p1;
};

inline YLin ylin_mul(const YLin& a, const YLin& b, const UniPoly& rhs) {
  return {a.p0 * b.p0 + (a.p1 * b.p1) * rhs, a.p0 * b.p1 + a.p1 * b.p0};
}

inline YLin ylin_sub(const YLin& a, const YLin& b) { return {a.p0 - b.p0, a.p1 - b.p1}; }

inline std::vector<YLin> psi_chain(const WeierstrassCurve& E, int up_to) {
  const Tower& t = E.tower();
  const FieldElement A = E.A(), B = E.B();
  const UniPoly rhs(t, {B, A, FieldElement::zero(t), FieldElement::one(t)});  // x^3 + Ax + B
  const UniPoly zero(t);
  auto cpoly = [&](std::initializer_list<FieldElement> cs) {
    return UniPoly(t, std::vector<FieldElement>(cs));
  };
  const FieldElement z = FieldElement::zero(t);

  std::vector<YLin> psi;
  psi.push_back({zero, zero});                       // psi_0 = 0
  psi.push_back({cpoly({fe_q(t, 1)}), zero});        // psi_1 = 1
  psi.push_back({zero, cpoly({fe_q(t, 2)})});        // psi_2 = 2y
  // psi_3 = 3x^4 + 6Ax^2 + 12Bx - A^2
  psi.push_back({cpoly({-(A * A), fe_q(t, 12) * B, fe_q(t, 6) * A, z, fe_q(t, 3)}), zero});
  // psi_4 = 4y (x^6 + 5Ax^4 + 20Bx^3 - 5A^2x^2 - 4ABx - 8B^2 - A^3)
  psi.push_back({zero, cpoly({fe_q(t, -8) * B * B - A.pow(3), fe_q(t, -4) * A * B,
                              fe_q(t, -5) * A * A, fe_q(t, 20) * B, fe_q(t, 5) * A, z,
                              fe_q(t, 1)})
                           .scaled(fe_q(t, 4))});

  auto sq = [&](const YLin& a) { return ylin_mul(a, a, rhs); };
  auto cube = [&](const YLin& a) { return ylin_mul(sq(a), a, rhs); };

  for (int m = 5; m <= up_to; ++m) {
    if (m % 2 == 1) {
      const int k = (m - 1) / 2;  // k >= 2
      psi.push_back(ylin_sub(ylin_mul(psi[k + 2], cube(psi[k]), rhs),
                             ylin_mul(psi[k - 1], cube(psi[k + 1]), rhs)));
    } else {
      const int k = m / 2;  // k >= 3
      YLin tform = ylin_sub(ylin_mul(psi[k + 2], sq(psi[k - 1]), rhs),
                            ylin_mul(psi[k - 2], sq(psi[k + 1]), rhs));
      YLin u = ylin_mul(psi[k], tform, rhs);
      // divide by 2y:  u0 + y u1 = 2y (m0 + y m1)  =>  m1 = u0 / (2 rhs), m0 = u1 / 2
      const FieldElement half = FieldElement(t, Rational(1, 2));
      psi.push_back({u.p1.scaled(half), upoly_divexact(u.p0, rhs).scaled(half)});
    }
  }
  return psi;
}

}  // namespace detail

inline DivisionPoly division_poly(const WeierstrassCurve& E, int n) {
  if (n < 0 || n > 12) throw RejectedInput("division_poly: index out of supported range");

  static std::mutex cache_mutex;
  static std::map<std::string, std::vector<detail::YLin>> cache;
  const std::string key = E.key();
  std::vector<detail::YLin>* chain = nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, detail::psi_chain(E, 12)).first;
    chain = &it->second;
  }

  const detail::YLin& yl = (*chain)[static_cast<std::size_t>(n)];
  const bool even = (n % 2 == 0);
  UniPoly reduced = even ? yl.p1.scaled(FieldElement(E.tower(), Rational(1, 2))) : yl.p0;
  if (!(even ? yl.p0 : yl.p1).is_zero())
    throw InternalError("division_poly: unexpected parity structure");
  // theoretical degrees: odd n -> (n^2-1)/2;  even n (as psi_n / 2y) -> n^2/2 - 2
  if (n > 0) {
    const int expect = even ? (n * n) / 2 - 2 : (n * n - 1) / 2;
    if (reduced.degree() != expect)
      throw InternalError("division_poly: degree mismatch for n = " + std::to_string(n));
  }
  return DivisionPoly{n, std::move(reduced), even};
}

// Map a polynomial with rational (scalar) coefficients into another tower.
inline UniPoly lift_poly(const UniPoly& p, const Tower& target) {
  std::vector<FieldElement> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) {
    for (std::size_t i = 1; i < x.coeffs().size(); ++i)
      if (!x.coeffs()[i].is_zero())
        throw RejectedInput("lift_poly: coefficient is not a rational scalar");
    c.push_back(FieldElement(target, x.coeffs()[0]));
  }
  return UniPoly(target, std::move(c));
}

// { i G1 + j G2 : 0 <= i, j < n }, deduplicated and sorted.  Exactly n^2
// distinct points certifies that G1, G2 generate the full n-torsion.
inline std::vector<ECPoint> torsion_subgroup(const WeierstrassCurve& E, const ECPoint& G1,
                                             const ECPoint& G2, long n) {
  if (n < 1) throw RejectedInput("torsion_subgroup: n must be positive");
  if (!ec_scalar_mul(E, n, G1).is_infinity() || !ec_scalar_mul(E, n, G2).is_infinity())
    throw ContractViolation("torsion_subgroup: generator order does not divide n");

  std::set<ECPoint> points;
  ECPoint row = ECPoint::infinity(E.tower());
  for (long i = 0; i < n; ++i) {
    ECPoint cur = row;
    for (long j = 0; j < n; ++j) {
      points.insert(cur);
      cur = ec_add(E, cur, G2);
    }
    row = ec_add(E, row, G1);
  }
  if (static_cast<long>(points.size()) != n * n)
    throw IndependenceFailure("torsion_subgroup: generators are dependent",
                              points.size());
  return std::vector<ECPoint>(points.begin(), points.end());
}

}  // namespace ftl

#endif
