#ifndef FTL_PROJECTIVE_HPP
#define FTL_PROJECTIVE_HPP

// Points, lines and conics in the projective plane over a tower field,
// plus exact contact-order computations along lines and conics through
// rational parametrizations.  Everything is canonicalized so that point
// sets deduplicate by plain equality: the first nonzero coordinate of a
// point / line / conic coefficient tuple is scaled to 1.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ftl/errors.hpp"
#include "ftl/homform.hpp"
#include "ftl/linalg.hpp"
#include "ftl/tower.hpp"
#include "ftl/unipoly.hpp"

namespace ftl {

namespace detail {

// Scale a coordinate tuple so its first nonzero entry is 1.
template <std::size_t N>
inline void canonicalize_tuple(std::array<FieldElement, N>& v, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_zero()) {
      const FieldElement inv = v[i].inverse();
      v[i] = FieldElement::one(v[i].tower());
      for (std::size_t j = i + 1; j < N; ++j) v[j] = v[j] * inv;
      return;
    }
  }
  throw RejectedInput(std::string(what) + ": all coordinates zero");
}

template <std::size_t N>
inline void require_one_tower(const std::array<FieldElement, N>& v, const char* what) {
  for (std::size_t i = 1; i < N; ++i)
    if (&v[i].tower() != &v[0].tower())
      throw RejectedInput(std::string(what) + ": mixed towers");
}

template <std::size_t N>
inline int cmp_tuple(const std::array<FieldElement, N>& a, const std::array<FieldElement, N>& b) {
  for (std::size_t i = 0; i < N; ++i)
    if (int c = a[i].cmp(b[i]); c != 0) return c;
  return 0;
}

}  // namespace detail

class ProjPoint {
 public:
  ProjPoint(FieldElement x, FieldElement y, FieldElement z)
      : c_{std::move(x), std::move(y), std::move(z)} {
    detail::require_one_tower(c_, "ProjPoint");
    detail::canonicalize_tuple(c_, "ProjPoint");
  }

  const Tower& tower() const { return c_[0].tower(); }
  const FieldElement& x() const { return c_[0]; }
  const FieldElement& y() const { return c_[1]; }
  const FieldElement& z() const { return c_[2]; }
  const FieldElement& coord(std::size_t i) const { return c_.at(i); }
  const std::array<FieldElement, 3>& coords() const { return c_; }

  int cmp(const ProjPoint& o) const {
    if (&tower() != &o.tower()) throw RejectedInput("ProjPoint: comparing across towers");
    return detail::cmp_tuple(c_, o.c_);
  }
  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return a.cmp(b) != 0; }
  friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.cmp(b) < 0; }

  std::string to_string() const {
    return "[" + c_[0].to_string() + " : " + c_[1].to_string() + " : " + c_[2].to_string() + "]";
  }

 private:
  std::array<FieldElement, 3> c_;
};

inline FieldElement hom_eval(const HomForm& f, const ProjPoint& P) {
  return f.eval(P.x(), P.y(), P.z());
}

class Line {
 public:
  Line(FieldElement u, FieldElement v, FieldElement w) : c_{std::move(u), std::move(v), std::move(w)} {
    detail::require_one_tower(c_, "Line");
    detail::canonicalize_tuple(c_, "Line");
  }

  // The unique line through two distinct points (coefficientwise cross product).
  static Line through(const ProjPoint& P, const ProjPoint& Q) {
    if (&P.tower() != &Q.tower()) throw RejectedInput("Line::through: mixed towers");
    if (P == Q) throw RejectedInput("Line::through: points coincide");
    return Line(P.y() * Q.z() - P.z() * Q.y(), P.z() * Q.x() - P.x() * Q.z(),
                P.x() * Q.y() - P.y() * Q.x());
  }

  const Tower& tower() const { return c_[0].tower(); }
  const FieldElement& u() const { return c_[0]; }
  const FieldElement& v() const { return c_[1]; }
  const FieldElement& w() const { return c_[2]; }
  const std::array<FieldElement, 3>& coeffs() const { return c_; }

  FieldElement eval(const ProjPoint& P) const {
    if (&P.tower() != &tower()) throw RejectedInput("Line::eval: tower mismatch");
    return c_[0] * P.x() + c_[1] * P.y() + c_[2] * P.z();
  }
  bool contains(const ProjPoint& P) const { return eval(P).is_zero(); }

  // Two independent points spanning the line.
  std::pair<ProjPoint, ProjPoint> span() const {
    Matrix<FieldElement> m(1, 3, FieldElement::zero(tower()));
    for (std::size_t i = 0; i < 3; ++i) m.at(0, i) = c_[i];
    auto basis = nullspace(m);
    if (basis.size() != 2) throw InternalError("Line::span: kernel dimension != 2");
    return {ProjPoint(basis[0][0], basis[0][1], basis[0][2]),
            ProjPoint(basis[1][0], basis[1][1], basis[1][2])};
  }

  HomForm as_form() const {
    HomForm f(tower(), 1);
    f.add_term({1, 0, 0}, c_[0]);
    f.add_term({0, 1, 0}, c_[1]);
    f.add_term({0, 0, 1}, c_[2]);
    return f;
  }

  int cmp(const Line& o) const {
    if (&tower() != &o.tower()) throw RejectedInput("Line: comparing across towers");
    return detail::cmp_tuple(c_, o.c_);
  }
  friend bool operator==(const Line& a, const Line& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Line& a, const Line& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Line& a, const Line& b) { return a.cmp(b) < 0; }

  std::string to_string() const {
    return "{" + c_[0].to_string() + ", " + c_[1].to_string() + ", " + c_[2].to_string() + "}";
  }

 private:
  std::array<FieldElement, 3> c_;
};

// ax^2 + by^2 + cz^2 + dxy + exz + fyz, coefficients in that order.
class Conic {
 public:
  Conic(std::array<FieldElement, 6> coeffs) : c_(std::move(coeffs)) {
    detail::require_one_tower(c_, "Conic");
    detail::canonicalize_tuple(c_, "Conic");
  }

  const Tower& tower() const { return c_[0].tower(); }
  const std::array<FieldElement, 6>& coeffs() const { return c_; }

  FieldElement eval_raw(const FieldElement& x, const FieldElement& y, const FieldElement& z) const {
    return c_[0] * x * x + c_[1] * y * y + c_[2] * z * z + c_[3] * x * y + c_[4] * x * z +
           c_[5] * y * z;
  }
  FieldElement eval(const ProjPoint& P) const {
    if (&P.tower() != &tower()) throw RejectedInput("Conic::eval: tower mismatch");
    return eval_raw(P.x(), P.y(), P.z());
  }
  bool contains(const ProjPoint& P) const { return eval(P).is_zero(); }

  // Gradient (2ax+dy+ez, 2by+dx+fz, 2cz+ex+fy); the polar pairing
  // grad(U).V is symmetric in U and V.
  std::array<FieldElement, 3> gradient(const FieldElement& x, const FieldElement& y,
                                       const FieldElement& z) const {
    const FieldElement two = fe_q(tower(), 2);
    return {two * c_[0] * x + c_[3] * y + c_[4] * z, two * c_[1] * y + c_[3] * x + c_[5] * z,
            two * c_[2] * z + c_[4] * x + c_[5] * y};
  }

  // Determinant of [[2a, d, e], [d, 2b, f], [e, f, 2c]]; nonzero exactly
  // when the conic is smooth (absolutely irreducible).
  FieldElement matrix_det() const {
    const FieldElement two = fe_q(tower(), 2);
    const FieldElement &a = c_[0], &b = c_[1], &c = c_[2], &d = c_[3], &e = c_[4], &f = c_[5];
    return two * a * (two * b * two * c - f * f) - d * (d * two * c - f * e) +
           e * (d * f - two * b * e);
  }
  bool is_irreducible() const { return !matrix_det().is_zero(); }

  HomForm as_form() const {
    HomForm g(tower(), 2);
    g.add_term({2, 0, 0}, c_[0]);
    g.add_term({0, 2, 0}, c_[1]);
    g.add_term({0, 0, 2}, c_[2]);
    g.add_term({1, 1, 0}, c_[3]);
    g.add_term({1, 0, 1}, c_[4]);
    g.add_term({0, 1, 1}, c_[5]);
    return g;
  }

  int cmp(const Conic& o) const {
    if (&tower() != &o.tower()) throw RejectedInput("Conic: comparing across towers");
    return detail::cmp_tuple(c_, o.c_);
  }
  friend bool operator==(const Conic& a, const Conic& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Conic& a, const Conic& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Conic& a, const Conic& b) { return a.cmp(b) < 0; }

 private:
  std::array<FieldElement, 6> c_;
};

// Tangent line to x^3 + y^3 + z^3 = 0 at a point of the curve: coordinates
// squared, which is 1/3 of the gradient.
inline Line tangent_line(const ProjPoint& P) {
  if (!hom_eval(fermat_cubic(P.tower()), P).is_zero())
    throw ContractViolation("tangent_line: point not on the cubic");
  return Line(P.x() * P.x(), P.y() * P.y(), P.z() * P.z());
}

// Rational parametrization of a smooth conic from a point P on it.  Sweeping
// the pencil of lines through P, the parameter-t line hits the conic in one
// further point
//     X(t) = C(W_t) P - (grad C(P) . W_t) W_t,     W_t = U + t V,
// where U, V are coordinate directions chosen so that grad C(P).V != 0 (so
// P's own parameter t_P is finite) and P does not lie on the line UV.  The
// chart misses exactly one point of the conic, the second intersection of
// line PV, stored as at_infinity.
struct ConicParam {
  std::array<UniPoly, 3> coords;  // degree <= 2 in t
  FieldElement t_P;
  ProjPoint at_infinity;

  ProjPoint at(const FieldElement& t) const {
    FieldElement x = coords[0].eval(t), y = coords[1].eval(t), z = coords[2].eval(t);
    if (x.is_zero() && y.is_zero() && z.is_zero())
      throw InternalError("ConicParam::at: parametrization vanished");
    return ProjPoint(std::move(x), std::move(y), std::move(z));
  }

  UniPoly restrict_form(const HomForm& f) const {
    return f.restrict_to(coords[0], coords[1], coords[2]);
  }
};

inline ConicParam conic_parametrize(const Conic& C, const ProjPoint& P) {
  const Tower& t = C.tower();
  if (&P.tower() != &t) throw RejectedInput("conic_parametrize: tower mismatch");
  if (!C.is_irreducible()) throw RejectedInput("conic_parametrize: conic is not irreducible");
  if (!C.contains(P)) throw ContractViolation("conic_parametrize: point not on conic");

  const auto grad = C.gradient(P.x(), P.y(), P.z());
  // Sweep direction V = e_k with grad.e_k != 0; try x, then y, then z.
  std::size_t k = 3;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!grad[i].is_zero()) {
      k = i;
      break;
    }
  }
  if (k == 3) throw InternalError("conic_parametrize: gradient vanished at a smooth point");
  // U = e_m with the remaining coordinate l satisfying P_l != 0, so that the
  // line UV does not pass through P.
  std::size_t m = 3;
  for (std::size_t cand = 0; cand < 3; ++cand) {
    if (cand == k) continue;
    const std::size_t l = 3 - k - cand;
    if (!P.coord(l).is_zero()) {
      m = cand;
      break;
    }
  }
  if (m == 3) throw InternalError("conic_parametrize: no valid chart direction");

  auto unit = [&](std::size_t i) {
    std::array<FieldElement, 3> e{FieldElement::zero(t), FieldElement::zero(t),
                                  FieldElement::zero(t)};
    e[i] = FieldElement::one(t);
    return e;
  };
  const auto U = unit(m), V = unit(k);

  auto dot = [&](const std::array<FieldElement, 3>& a, const std::array<FieldElement, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  };

  // C(W_t) = C(U) + t * grad C(U).V + t^2 * C(V)  (polar expansion)
  const FieldElement cU = C.eval_raw(U[0], U[1], U[2]);
  const FieldElement cV = C.eval_raw(V[0], V[1], V[2]);
  const FieldElement cUV = dot(C.gradient(U[0], U[1], U[2]), V);
  UniPoly cW(t, {cU, cUV, cV});

  // grad C(P).W_t = gU + t gV
  const FieldElement gU = dot(grad, U);
  const FieldElement gV = dot(grad, V);
  UniPoly gW(t, {gU, gV});

  std::array<UniPoly, 3> coords{UniPoly(t), UniPoly(t), UniPoly(t)};
  for (std::size_t i = 0; i < 3; ++i) {
    UniPoly w(t, {U[i], V[i]});  // i-th coordinate of W_t
    coords[i] = cW.scaled(P.coord(i)) - gW * w;
  }

  FieldElement t_P = -(gU * gV.inverse());

  // Second intersection of line PV: C(V) P - (grad C(P).V) V.
  ProjPoint at_infinity(cV * P.x() - gV * V[0], cV * P.y() - gV * V[1], cV * P.z() - gV * V[2]);

  ConicParam param{std::move(coords), std::move(t_P), std::move(at_infinity)};
  if (param.at(param.t_P) != P)
    throw InternalError("conic_parametrize: distinguished parameter check failed");
  return param;
}

// Order of vanishing of f at P along the conic, i.e. the local intersection
// multiplicity I_P(f, C) (the parametrization is an isomorphism onto the
// smooth conic near P).
inline int intersection_multiplicity_on_conic(const HomForm& f, const Conic& C,
                                              const ProjPoint& P) {
  const ConicParam param = conic_parametrize(C, P);
  const UniPoly r = param.restrict_form(f);
  if (r.is_zero())
    throw ContractViolation(
        "intersection_multiplicity_on_conic: form vanishes identically on the conic");
  return root_multiplicity(r, param.t_P);
}

// Residual intersection of a line with the Fermat cubic after removing a
// contact of order m at P.  Parametrizes L as P + t B with F(B) != 0, so the
// restriction has degree exactly 3 and no intersection escapes the chart.
// Returns nothing when the deflated factor is constant (total contact at P,
// the flex tangent with m = 3).
inline std::optional<ProjPoint> line_residual_point(const Line& L, const ProjPoint& P, int m) {
  const Tower& t = L.tower();
  if (&P.tower() != &t) throw RejectedInput("line_residual_point: tower mismatch");
  // m = 1 would leave a quadratic with two residual points; the callers that
  // need the full fiber use the line restriction directly.
  if (m < 2 || m > 3) throw RejectedInput("line_residual_point: contact order out of range");
  const HomForm F = fermat_cubic(t);
  if (!L.contains(P)) throw ContractViolation("line_residual_point: point not on line");
  if (!hom_eval(F, P).is_zero())
    throw ContractViolation("line_residual_point: point not on the cubic");

  const auto [A0, A1] = L.span();
  // Among any five distinct points of L, at most three lie on the cubic.
  std::optional<ProjPoint> B;
  auto consider = [&](ProjPoint cand) {
    if (!B && !hom_eval(F, cand).is_zero()) B = std::move(cand);
  };
  consider(A0);
  consider(A1);
  for (long j = 1; j <= 3 && !B; ++j)
    consider(ProjPoint(A0.x() + fe_q(t, j) * A1.x(), A0.y() + fe_q(t, j) * A1.y(),
                       A0.z() + fe_q(t, j) * A1.z()));
  if (!B) throw InternalError("line_residual_point: no off-curve direction found");

  std::array<UniPoly, 3> coords{UniPoly(t), UniPoly(t), UniPoly(t)};
  for (std::size_t i = 0; i < 3; ++i)
    coords[i] = UniPoly(t, {P.coord(i), B->coord(i)});
  UniPoly g = F.restrict_to(coords[0], coords[1], coords[2]);
  if (g.degree() != 3) throw InternalError("line_residual_point: restriction degree != 3");

  const FieldElement zero = FieldElement::zero(t);
  if (root_multiplicity(g, zero) < m)
    throw ContractViolation("line_residual_point: contact order below requested multiplicity");
  UniPoly h = deflate(g, zero, m);
  if (h.degree() == 0) return std::nullopt;  // total contact
  if (h.degree() != 3 - m) throw InternalError("line_residual_point: unexpected deflation degree");
  const FieldElement t1 = -(h[0] * h[1].inverse());
  return ProjPoint(P.x() + t1 * B->x(), P.y() + t1 * B->y(), P.z() + t1 * B->z());
}

namespace detail {

// Tail of the conic-pair residual computation, shared with callers that build
// the restriction r = C2 on a parametrization of C1 through a faster route.
inline ProjPoint residual_from_conic_restriction(const ConicParam& param, const UniPoly& r) {
  if (r.is_zero()) throw InternalError("conic residual: irreducible conics share a component");

  const int mult = root_multiplicity(r, param.t_P);
  if (mult < 3) throw ContractViolation("conic residual: contact at base point below 3");
  if (mult >= 4) throw ContractViolation("conic residual: total contact, no residual point");

  // Intersections at the missed chart point show up as a degree drop from 4.
  UniPoly h = deflate(r, param.t_P, 3);
  if (h.degree() == 0) return param.at_infinity;
  if (h.degree() != 1) throw InternalError("conic residual: unexpected deflation degree");
  const FieldElement t1 = -(h[0] * h[1].inverse());
  return param.at(t1);
}

}  // namespace detail

// Residual intersection point of two smooth conics meeting with multiplicity
// >= 3 at P.  By Bezout there is exactly one further intersection (over the
// algebraic closure); it may sit at the missed chart point of the
// parametrization, which is handled through the degree drop.
inline ProjPoint conic_residual_point(const Conic& C1, const Conic& C2, const ProjPoint& P) {
  if (&C1.tower() != &C2.tower() || &P.tower() != &C1.tower())
    throw RejectedInput("conic_residual_point: tower mismatch");
  if (C1 == C2) throw RejectedInput("conic_residual_point: conics coincide");
  if (!C1.is_irreducible() || !C2.is_irreducible())
    throw RejectedInput("conic_residual_point: conic is not irreducible");
  if (!C1.contains(P) || !C2.contains(P))
    throw ContractViolation("conic_residual_point: point not on both conics");

  const ConicParam param = conic_parametrize(C1, P);
  return detail::residual_from_conic_restriction(param, param.restrict_form(C2.as_form()));
}

}  // namespace ftl

#endif
