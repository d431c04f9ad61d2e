#ifndef FTL_CATALOGS_HPP
#define FTL_CATALOGS_HPP

// The three point catalogs on the cubic x^3 + y^3 + z^3 = 0:
//   - 9 flexes               (over Q(eps, mu); coordinates need only eps)
//   - 27 sextactic points    (over Q(eps, mu)):   E[6] minus E[3]
//   - 72 points of type 9    (over Q(alpha, beta)): E[9] minus E[3]
// plus the verification of the degree-24 form Q that cuts out the type-9
// points together with the cubic.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ftl/elliptic.hpp"
#include "ftl/errors.hpp"
#include "ftl/homform.hpp"
#include "ftl/projective.hpp"
#include "ftl/report.hpp"
#include "ftl/tower.hpp"

namespace ftl {

enum class CatalogKind { flex, sextactic, type9 };

inline std::string catalog_kind_name(CatalogKind k) {
  switch (k) {
    case CatalogKind::flex: return "flex";
    case CatalogKind::sextactic: return "sextactic";
    case CatalogKind::type9: return "type9";
  }
  throw InternalError("catalog_kind_name: bad kind");
}

inline CatalogKind catalog_kind_from_name(const std::string& s) {
  if (s == "flex") return CatalogKind::flex;
  if (s == "sextactic") return CatalogKind::sextactic;
  if (s == "type9") return CatalogKind::type9;
  throw RejectedInput("unknown catalog kind: " + s);
}

struct PointCatalog {
  CatalogKind kind;
  const Tower* field;
  std::vector<ProjPoint> points;  // sorted by canonical coordinates
  std::vector<std::string> generators;
  std::vector<std::string> checks;

  bool contains(const ProjPoint& p) const {
    return std::binary_search(points.begin(), points.end(), p);
  }
};

// The nine flexes: intersections of the cubic with xyz = 0.  The coordinate
// pattern is [1 : -u : 0] and its cyclic shifts, u ranging over the cube
// roots of unity.
inline std::vector<ProjPoint> flex_points(const Tower& t) {
  const FieldElement zero = FieldElement::zero(t), one = FieldElement::one(t);
  const FieldElement eps = fe_eps_in(t);
  std::vector<ProjPoint> pts;
  for (const FieldElement& u : {one, eps, eps * eps}) {
    pts.emplace_back(one, -u, zero);
    pts.emplace_back(one, zero, -u);
    pts.emplace_back(zero, one, -u);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

// The twelve seed points of type 9 with first coordinate 1 or 3, over
// Q(alpha, beta).  Everything else of type 9 is a coordinate permutation of
// these.  (The tenth seed's z-coordinate is alpha^2 (beta-1)(beta^3+beta^2+1);
// a mangled exponent in the source list, restored here and revalidated by the
// membership tests.)
inline std::vector<ProjPoint> type9_seed_points() {
  const Tower& t = tower_alpha_beta();
  const FieldElement one = FieldElement::one(t), three = fe_q(t, 3);
  const FieldElement a = fe_alpha(1), a2 = fe_alpha(2), b = fe_beta(1);
  auto B = [&](std::initializer_list<long> cs) {  // polynomial in beta
    FieldElement acc = FieldElement::zero(t);
    int k = 0;
    for (long c : cs) acc += fe_q(t, c) * b.pow(k++);
    return acc;
  };
  std::vector<ProjPoint> seeds;
  seeds.emplace_back(one, b, b.pow(2));                                        // T1
  seeds.emplace_back(one, b.pow(2), b.pow(4));                                 // T2
  seeds.emplace_back(one, b, b.pow(5));                                        // T3
  seeds.emplace_back(three, a * b * B({1, -1, 0, 2, 1}),                       // T4
                     -(a2 * B({1, 1, 1}) * B({1, -1, 0, 1})));
  seeds.emplace_back(three, -(a * b * B({2, 1, 0, 1, 2})),                     // T5
                     a2 * (b + one) * (b - one).pow(2));
  seeds.emplace_back(three, a * b * B({-2, -1, 0, -1, 1}),                     // T6
                     -(a2 * b.pow(2) * B({1, 1, 1})));
  seeds.emplace_back(three, a * b * (b - one) * B({2, 0, 0, 1}),               // T7
                     -(a2 * b * B({1, 1, 1}) * B({1, -1, 1})));
  seeds.emplace_back(three, a2 * (b - one) * (b + one) * B({1, 1, 0, 1}),      // T8
                     a * b * B({-2, -1, 0, -1, 1}));
  seeds.emplace_back(three, a * b * (b - one).pow(2) * B({1, 1, 1}),           // T9
                     -(a2 * b * B({1, 1, 1}) * B({1, -1, 1})));
  seeds.emplace_back(three, a * b * (b - one).pow(2) * B({1, 1, 1}),           // T10
                     a2 * (b - one) * B({1, 0, 1, 1}));
  seeds.emplace_back(three, a * b * B({1, 2, 0, 2, 1}),                        // T11
                     -(a2 * b.pow(2) * B({1, 1, 1})));
  seeds.emplace_back(three, -(a2 * B({1, 1, 1}) * B({1, -1, 0, 1})),           // T12
                     -(a * b * B({2, 1, 0, 1, 2})));
  return seeds;
}

namespace detail {

inline void require_catalog(bool ok, const std::string& what) {
  if (!ok) throw CensusError("catalog construction: " + what);
}

// All nonzero 3-torsion has x in {0, 12, 12 eps, 12 eps^2}; generators with
// x = 12 and x = 12 eps are independent.
inline std::vector<ECPoint> three_torsion(const WeierstrassCurve& E) {
  const Tower& t = E.tower();
  const FieldElement eps = fe_eps_in(t);
  ECPoint g1 = ECPoint::affine(fe_q(t, 12), fe_q(t, 36));
  ECPoint g2 = ECPoint::affine(fe_q(t, 12) * eps, fe_q(t, 36));
  return torsion_subgroup(E, g1, g2, 3);
}

}  // namespace detail

inline const PointCatalog& flex_catalog() {
  static const PointCatalog cat = [] {
    const Tower& t = tower_eps_mu();
    PointCatalog c{CatalogKind::flex, &t, flex_points(t), {"coordinate-triangle fixture"}, {}};
    const HomForm F = fermat_cubic(t), H = coordinate_triangle(t);
    detail::require_catalog(c.points.size() == 9, "flex count != 9");
    c.checks.push_back("count=9");
    for (const ProjPoint& p : c.points) {
      detail::require_catalog(hom_eval(F, p).is_zero(), "flex off the cubic");
      detail::require_catalog(hom_eval(H, p).is_zero(), "flex off the coordinate triangle");
    }
    c.checks.push_back("on_cubic");
    c.checks.push_back("hessian_vanishes");
    return c;
  }();
  return cat;
}

// E[6] \ E[3]: the 27 points where the tangent line meets the cubic with
// contact 2 and some conic achieves contact 6.
inline const PointCatalog& sextactic_catalog() {
  static const PointCatalog cat = [] {
    const Tower& t = tower_eps_mu();
    const WeierstrassCurve E = WeierstrassCurve::fermat_model(t);
    const FieldElement zero = FieldElement::zero(t);
    const FieldElement mu6 = fe_q(t, 6) * fe_mu();
    const FieldElement eps = fe_eps_in(t);

    // E[2]: y = 0 over the three cube roots of 432
    std::vector<ECPoint> two_torsion{ECPoint::infinity(t)};
    for (const FieldElement& u : {FieldElement::one(t), eps, eps * eps}) {
      ECPoint p = ECPoint::affine(mu6 * u, zero);
      detail::require_catalog(E.contains(p.x(), p.y()), "2-torsion point off curve");
      two_torsion.push_back(p);
    }

    const std::vector<ECPoint> three_torsion = detail::three_torsion(E);
    detail::require_catalog(three_torsion.size() == 9, "3-torsion count != 9");

    std::set<ECPoint> six_torsion;
    for (const ECPoint& t2 : two_torsion)
      for (const ECPoint& t3 : three_torsion) six_torsion.insert(ec_add(E, t2, t3));
    detail::require_catalog(six_torsion.size() == 36, "6-torsion count != 36");

    PointCatalog c{CatalogKind::sextactic, &t, {}, {"E[2] x E[3] sums"}, {}};
    const HomForm F = fermat_cubic(t), H2 = sextactic_form(t);
    for (const ECPoint& p : six_torsion) {
      if (!ec_scalar_mul(E, 3, p).is_infinity()) {  // drop E[3]
        ProjPoint plane = from_weierstrass(p);
        detail::require_catalog(hom_eval(F, plane).is_zero(), "sextactic point off the cubic");
        detail::require_catalog(hom_eval(H2, plane).is_zero(),
                                "second hessian does not vanish at a sextactic point");
        detail::require_catalog(
            !plane.x().is_zero() && !plane.y().is_zero() && !plane.z().is_zero(),
            "sextactic point with a zero coordinate");
        c.points.push_back(std::move(plane));
      }
    }
    detail::require_catalog(c.points.size() == 27, "sextactic count != 27");
    std::sort(c.points.begin(), c.points.end());
    c.checks = {"count=27", "on_cubic", "second_hessian_vanishes", "no_zero_coordinate"};
    return c;
  }();
  return cat;
}

// E[9] \ E[3], enumerated from two independent order-9 seeds.
inline const PointCatalog& type9_catalog() {
  static const PointCatalog cat = [] {
    const Tower& t = tower_alpha_beta();
    const WeierstrassCurve E = WeierstrassCurve::fermat_model(t);
    const std::vector<ProjPoint> seeds = type9_seed_points();

    std::vector<ECPoint> nine_torsion;
    std::vector<std::string> generators;
    const ECPoint g1 = to_weierstrass(seeds[0]);
    for (std::size_t j : {3u, 4u, 5u, 6u, 7u, 8u, 9u, 10u, 11u}) {
      try {
        nine_torsion = torsion_subgroup(E, g1, to_weierstrass(seeds[j]), 9);
        generators = {"seed 1", "seed " + std::to_string(j + 1)};
        break;
      } catch (const IndependenceFailure&) {
        continue;  // try the next listed seed
      }
    }
    detail::require_catalog(nine_torsion.size() == 81, "9-torsion enumeration incomplete");

    PointCatalog c{CatalogKind::type9, &t, {}, generators, {}};
    const HomForm F = fermat_cubic(t), H = coordinate_triangle(t);
    for (const ECPoint& p : nine_torsion) {
      if (!ec_scalar_mul(E, 3, p).is_infinity()) {  // drop E[3]
        ProjPoint plane = from_weierstrass(p);
        detail::require_catalog(hom_eval(F, plane).is_zero(), "type-9 point off the cubic");
        detail::require_catalog(!hom_eval(H, plane).is_zero(),
                                "type-9 point on the coordinate triangle");
        c.points.push_back(std::move(plane));
      }
    }
    detail::require_catalog(c.points.size() == 72, "type-9 count != 72");
    std::sort(c.points.begin(), c.points.end());
    c.checks = {"count=72", "on_cubic", "hessian_nonvanishing", "order=9"};
    return c;
  }();
  return cat;
}

inline const PointCatalog& catalog_by_kind(CatalogKind k) {
  switch (k) {
    case CatalogKind::flex: return flex_catalog();
    case CatalogKind::sextactic: return sextactic_catalog();
    case CatalogKind::type9: return type9_catalog();
  }
  throw InternalError("catalog_by_kind: bad kind");
}

// Verification of the degree-24 form Q against the 72-point catalog:
//  (1) Q vanishes at all 72 points in each of the three coordinate pairs;
//  (2) Q equals the product of its three displayed factors;
//  (3) the x/y ratios of the 72 points give exactly 24 values, three points
//      each, and prod (x - r y) over the ratios reproduces Q — its split
//      into linear factors over Q(alpha, beta);
//  (4) the 24 * 3 = 72 bookkeeping closes.
// Throws a named VerificationFailure on the first failing check.
inline CheckReport verify_Q(const PointCatalog& type9) {
  if (type9.kind != CatalogKind::type9 || type9.points.size() != 72)
    throw RejectedInput("verify_Q: expected the 72-point catalog");
  const Tower& t = *type9.field;
  CheckReport report;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    report.push_back({name, ok, detail});
    if (!ok) throw VerificationFailure(name, detail);
  };

  bool all_vanish = true;
  for (auto [va, vb] : {std::pair<int, int>{0, 1}, {0, 2}, {1, 2}}) {
    const HomForm q = pair_form_q(t, va, vb);
    for (const ProjPoint& p : type9.points)
      if (!hom_eval(q, p).is_zero()) all_vanish = false;
  }
  record("q_vanishes_on_type9", all_vanish, "Q(x,y), Q(x,z), Q(y,z) at all 72 points");

  auto f = pair_form_q_factors(t, 0, 1);
  record("q_factor_product", f[0] * f[1] * f[2] == pair_form_q(t, 0, 1),
         "product of the three displayed factors");

  std::map<FieldElement, int> ratio_count;
  for (const ProjPoint& p : type9.points)
    ratio_count[p.x() * p.y().inverse()] += 1;
  bool ratios_ok = ratio_count.size() == 24;
  for (const auto& [r, n] : ratio_count)
    if (n != 3) ratios_ok = false;
  record("xy_ratios_24x3", ratios_ok, "24 distinct x/y ratios, each from exactly 3 points");

  HomForm prod = HomForm::from_terms(t, 0, {{{0, 0, 0}, FieldElement::one(t)}});
  for (const auto& [r, n] : ratio_count) {
    HomForm lin(t, 1);
    lin.add_term({1, 0, 0}, FieldElement::one(t));
    lin.add_term({0, 1, 0}, -r);
    prod = prod * lin;
  }
  record("q_splits_into_ratio_factors", prod == pair_form_q(t, 0, 1),
         "prod(x - r y) over the 24 ratios equals Q(x,y)");

  record("ratio_bookkeeping_3x24", static_cast<long>(ratio_count.size()) * 3 ==
                                       static_cast<long>(type9.points.size()),
         "3 * 24 = 72");
  return report;
}

}  // namespace ftl

#endif
