#ifndef FTL_ARRANGEMENTS_HPP
#define FTL_ARRANGEMENTS_HPP

// Line and conic arrangements attached to the sextactic and type-9 catalogs:
// tangent-line residuals, the pairs admitting a doubly-osculating conic, the
// conic catalogs themselves, and the census of pairwise conic intersections
// off the cubic.
//
// Everything here is exact.  The only shortcut is a one-sided mod-p screen in
// the census incidence count: a nonzero residue proves non-incidence, and
// every claimed incidence is confirmed with exact arithmetic.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ftl/catalogs.hpp"
#include "ftl/elliptic.hpp"
#include "ftl/errors.hpp"
#include "ftl/homform.hpp"
#include "ftl/linalg.hpp"
#include "ftl/modp.hpp"
#include "ftl/parallel.hpp"
#include "ftl/projective.hpp"
#include "ftl/tower.hpp"
#include "ftl/unipoly.hpp"

namespace ftl {

// ---------------------------------------------------------------------------
// Torsion coordinates.  Both catalogs sit inside a group E[n] = (Z/n)^2
// (n = 6 for sextactic, n = 9 for type 9); once each plane point carries its
// coordinates with respect to a fixed basis, group-law questions (is a sum
// 3-torsion, where does -2P land) become modular arithmetic on labels.  The
// labels are produced by exact group-law enumeration, so nothing is lost.

struct GroupContext {
  CatalogKind kind;
  const Tower* tower;
  WeierstrassCurve curve;
  int order;  // n: the catalog lives in E[n] \ E[3]
  std::map<ProjPoint, std::pair<int, int>> label;     // plane image of i*G1 + j*G2
  std::map<std::pair<int, int>, ProjPoint> point_at;  // inverse map

  std::pair<int, int> label_of(const ProjPoint& P) const {
    auto it = label.find(P);
    if (it == label.end()) throw RejectedInput("GroupContext: point is not in the torsion group");
    return it->second;
  }

  // P1 + P2 lies in E[3]  <=>  3(P1 + P2) = O  <=>  3(i1+i2) = 3(j1+j2) = 0 mod n.
  bool sum_in_three_torsion(const ProjPoint& P1, const ProjPoint& P2) const {
    const auto [i1, j1] = label_of(P1);
    const auto [i2, j2] = label_of(P2);
    return (3 * (i1 + i2)) % order == 0 && (3 * (j1 + j2)) % order == 0;
  }

  ProjPoint minus_two(const ProjPoint& P) const {
    const auto [i, j] = label_of(P);
    const int mi = ((-2 * i) % order + order) % order;
    const int mj = ((-2 * j) % order + order) % order;
    return point_at.at({mi, mj});
  }
};

namespace detail {

// Enumerates {i*G1 + j*G2 : 0 <= i, j < n} with labels; fails (returns false)
// when the generators span fewer than n^2 points.
inline bool enumerate_labels(GroupContext& ctx, const ECPoint& G1, const ECPoint& G2) {
  ctx.label.clear();
  ctx.point_at.clear();
  std::set<ECPoint> seen;
  ECPoint row = ECPoint::infinity(*ctx.tower);
  for (int i = 0; i < ctx.order; ++i) {
    ECPoint cur = row;
    for (int j = 0; j < ctx.order; ++j) {
      if (!seen.insert(cur).second) return false;
      ProjPoint plane = from_weierstrass(cur);
      ctx.label.emplace(plane, std::make_pair(i, j));
      ctx.point_at.emplace(std::make_pair(i, j), std::move(plane));
      cur = ec_add(ctx.curve, cur, G2);
    }
    row = ec_add(ctx.curve, row, G1);
  }
  return true;
}

}  // namespace detail

inline const GroupContext& group_context(CatalogKind kind) {
  if (kind == CatalogKind::flex)
    throw RejectedInput("group_context: the flex catalog has no attached arrangement group");
  auto build = [](CatalogKind k) {
    const PointCatalog& cat = catalog_by_kind(k);
    const Tower& t = *cat.field;
    GroupContext ctx{k, &t, WeierstrassCurve::fermat_model(t),
                     k == CatalogKind::sextactic ? 6 : 9, {}, {}};
    if (k == CatalogKind::sextactic) {
      // Basis of E[6] = E[2] + E[3]: each generator is a point of order 2
      // plus a point of order 3, picked independently in both halves.
      const FieldElement mu6 = fe_q(t, 6) * fe_mu();
      const FieldElement eps = fe_eps_in(t);
      const ECPoint G1 = ec_add(ctx.curve, ECPoint::affine(mu6, FieldElement::zero(t)),
                                ECPoint::affine(fe_q(t, 12), fe_q(t, 36)));
      const ECPoint G2 = ec_add(ctx.curve, ECPoint::affine(mu6 * eps, FieldElement::zero(t)),
                                ECPoint::affine(fe_q(t, 12) * eps, fe_q(t, 36)));
      if (!detail::enumerate_labels(ctx, G1, G2))
        throw InternalError("group_context: E[6] basis failed to span");
    } else {
      // Same generator scan as the type-9 catalog: first seed plus the first
      // later seed independent from it.
      const std::vector<ProjPoint> seeds = type9_seed_points();
      const ECPoint g1 = to_weierstrass(seeds[0]);
      bool ok = false;
      for (std::size_t j = 3; j < seeds.size() && !ok; ++j) {
        ok = detail::enumerate_labels(ctx, g1, to_weierstrass(seeds[j]));
      }
      if (!ok) throw InternalError("group_context: no independent 9-torsion seed pair");
    }
    // Every catalog point must carry a label.
    for (const ProjPoint& p : cat.points) ctx.label_of(p);
    return ctx;
  };
  if (kind == CatalogKind::sextactic) {
    static const GroupContext ctx = build(CatalogKind::sextactic);
    return ctx;
  }
  static const GroupContext ctx = build(CatalogKind::type9);
  return ctx;
}

// ---------------------------------------------------------------------------
// Tangent lines and their residual points.

struct TangentEntry {
  ProjPoint base;
  Line tangent;
  ProjPoint residual;
  std::string classification;  // "flex" or "type9"
};

struct TangentReport {
  CatalogKind kind;
  std::vector<TangentEntry> entries;             // catalog order
  std::vector<std::array<ProjPoint, 3>> orbits;  // type9 only: orbits of T -> residual(T)
};

// For each catalog point: the tangent line meets the cubic once more (contact
// at the point is exactly 2 away from flexes), and the residual is classified.
// Sextactic residuals are flexes, three tangents per flex; type-9 residuals
// are again type-9 points and T -> residual(T) is a fixed-point-free
// involution-free map of order 3 (it is P -> -2P in the group), so the 72
// points split into 24 orbits of size 3.
inline TangentReport tangent_analysis(CatalogKind kind) {
  if (kind == CatalogKind::flex)
    throw RejectedInput("tangent_analysis: flex tangents have no residual point");
  const PointCatalog& cat = catalog_by_kind(kind);
  const bool sext = kind == CatalogKind::sextactic;
  const PointCatalog& target = sext ? flex_catalog() : type9_catalog();
  const char* cls = sext ? "flex" : "type9";
  const char* check = sext ? "tangent_residual_is_flex" : "tangent_residual_is_type9";

  TangentReport rep{kind, {}, {}};
  for (const ProjPoint& P : cat.points) {
    Line L = tangent_line(P);
    std::optional<ProjPoint> R = line_residual_point(L, P, 2);
    if (!R) throw InternalError("tangent_analysis: catalog point with flex-like contact");
    if (!target.contains(*R))
      throw VerificationFailure(check, "residual " + R->to_string() + " not in expected catalog");
    rep.entries.push_back({P, std::move(L), std::move(*R), cls});
  }

  if (sext) {
    std::map<ProjPoint, int> per_flex;
    for (const TangentEntry& e : rep.entries) ++per_flex[e.residual];
    if (per_flex.size() != 9) throw VerificationFailure("three_tangents_per_flex", "flex count");
    for (const auto& [flex, n] : per_flex) {
      if (n != 3)
        throw VerificationFailure("three_tangents_per_flex",
                                  flex.to_string() + " has " + std::to_string(n) + " tangents");
    }
    return rep;
  }

  std::map<ProjPoint, ProjPoint> step;
  for (const TangentEntry& e : rep.entries) step.emplace(e.base, e.residual);
  std::set<ProjPoint> seen;
  for (const TangentEntry& e : rep.entries) {
    if (seen.count(e.base)) continue;
    const ProjPoint& a = e.base;
    const ProjPoint& b = step.at(a);
    const ProjPoint& c = step.at(b);
    if (a == b || a == c || b == c || step.at(c) != a)
      throw VerificationFailure("residual_orbits_are_3_cycles", "orbit through " + a.to_string());
    std::array<ProjPoint, 3> orbit{a, b, c};
    std::sort(orbit.begin(), orbit.end());
    rep.orbits.push_back(std::move(orbit));
    seen.insert(a);
    seen.insert(b);
    seen.insert(c);
  }
  std::sort(rep.orbits.begin(), rep.orbits.end(),
            [](const auto& x, const auto& y) { return x[0] < y[0]; });
  if (rep.orbits.size() != 24)
    throw VerificationFailure("residual_orbits_are_3_cycles",
                              std::to_string(rep.orbits.size()) + " orbits");
  return rep;
}

// ---------------------------------------------------------------------------
// Admissible pairs: P1 + P2 in E[3] under the group law.  These are exactly
// the pairs through which a common osculating conic exists; the conic catalog
// below re-derives the same set by linear algebra and cross-checks.

inline std::vector<std::pair<ProjPoint, ProjPoint>> admissible_pairs(CatalogKind kind) {
  const PointCatalog& cat = catalog_by_kind(kind);  // rejects unknown kinds
  const GroupContext& ctx = group_context(kind);    // rejects flex
  std::vector<std::pair<ProjPoint, ProjPoint>> out;
  for (std::size_t i = 0; i < cat.points.size(); ++i) {
    for (std::size_t j = i + 1; j < cat.points.size(); ++j) {
      if (ctx.sum_in_three_torsion(cat.points[i], cat.points[j]))
        out.emplace_back(cat.points[i], cat.points[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The doubly-osculating conic of an admissible pair.

struct OsculatingConic {
  Conic conic;
  ProjPoint base1, base2;  // base1 < base2
  CatalogKind kind;
};

namespace detail {

// Linear form in the six conic coefficients (a, b, c, d, e, f).
using LinForm = std::array<FieldElement, 6>;

inline LinForm lf_sub(const LinForm& a, const LinForm& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3], a[4] - b[4], a[5] - b[5]};
}
inline LinForm lf_scale(const LinForm& a, const FieldElement& s) {
  return {a[0] * s, a[1] * s, a[2] * s, a[3] * s, a[4] * s, a[5] * s};
}

// Values of the six conic monomials x^2, y^2, z^2, xy, xz, yz on a triple.
inline LinForm quad_values(const std::array<FieldElement, 3>& X) {
  return {X[0] * X[0], X[1] * X[1], X[2] * X[2], X[0] * X[1], X[0] * X[2], X[1] * X[2]};
}

// Polar pairing: monomial-wise m(X+Y) - m(X) - m(Y), bilinear in (X, Y).
inline LinForm quad_polar(const std::array<FieldElement, 3>& X,
                          const std::array<FieldElement, 3>& Y) {
  const std::array<FieldElement, 3> S{X[0] + Y[0], X[1] + Y[1], X[2] + Y[2]};
  return lf_sub(lf_sub(quad_values(S), quad_values(X)), quad_values(Y));
}

// The three linear conditions on a conic C for contact order >= 3 with the
// cubic at P.  Derivation: in the affine chart P + u*e_i + v*e_j (P_k != 0
// dehomogenized away, P_j != 0 so the v-coefficient of the cubic's expansion
// is a unit), the cubic restricts to
//     fu*u + fv*v + fuu*u^2 + fvv*v^2 + u^3 + v^3,
//     fu = 3 P_i^2,  fv = 3 P_j^2,  fuu = 3 P_i,  fvv = 3 P_j,
// and C restricts to c0 + cu*u + cv*v + cuu*u^2 + cuv*uv + cvv*v^2 with every
// coefficient linear in C.  Subtracting multiples of (1, v, u) times the
// cubic's expansion eliminates v, v^2 and uv in turn; vanishing of the
// constant, u and u^2 coefficients of the result is then exactly contact
// order >= 3 along the branch of the cubic at P.
inline std::array<LinForm, 3> osculation_rows(const ProjPoint& P) {
  const Tower& t = P.tower();
  if (!hom_eval(fermat_cubic(t), P).is_zero())
    throw ContractViolation("osculation conditions: point not on the cubic");

  const std::array<FieldElement, 3> Pc{P.x(), P.y(), P.z()};
  std::size_t k = 3;
  for (std::size_t c = 0; c < 3; ++c) {
    if (!Pc[c].is_zero()) {
      k = c;
      break;
    }
  }
  std::size_t i = (k + 1) % 3, j = (k + 2) % 3;
  if (i > j) std::swap(i, j);
  if (Pc[j].is_zero()) std::swap(i, j);
  if (Pc[j].is_zero())
    throw ContractViolation("osculation conditions: flex point (two zero coordinates impossible, "
                            "one makes the point a flex)");

  const FieldElement zero = FieldElement::zero(t), one = FieldElement::one(t);
  std::array<FieldElement, 3> Ei{zero, zero, zero}, Ej{zero, zero, zero};
  Ei[i] = one;
  Ej[j] = one;

  const LinForm c0 = quad_values(Pc);
  const LinForm cu = quad_polar(Pc, Ei);
  const LinForm cv = quad_polar(Pc, Ej);
  const LinForm cuu = quad_values(Ei);
  const LinForm cvv = quad_values(Ej);
  const LinForm cuv = quad_polar(Ei, Ej);

  const FieldElement three = fe_q(t, 3);
  const FieldElement fu = three * Pc[i] * Pc[i];
  const FieldElement fv = three * Pc[j] * Pc[j];
  const FieldElement fuu = three * Pc[i];
  const FieldElement fvv = three * Pc[j];
  const FieldElement fvinv = fv.inverse();

  // C1 = C - (cv/fv) * cubic: kills the v term.
  const LinForm s1 = lf_scale(cv, fvinv);
  const LinForm c1_u = lf_sub(cu, lf_scale(s1, fu));
  const LinForm c1_uu = lf_sub(cuu, lf_scale(s1, fuu));
  const LinForm c1_vv = lf_sub(cvv, lf_scale(s1, fvv));
  // C2 = C1 - (c1_vv/fv) * v * cubic: kills v^2, feeds the uv coefficient.
  const LinForm c2_uv = lf_sub(cuv, lf_scale(lf_scale(c1_vv, fvinv), fu));
  // C3 = C2 - (c2_uv/fv) * u * cubic: kills uv, feeds the u^2 coefficient.
  const LinForm c3_uu = lf_sub(c1_uu, lf_scale(lf_scale(c2_uv, fvinv), fu));

  return {c0, c1_u, c3_uu};
}

// Basis (3 vectors) of the conics with contact >= 3 at P.
inline std::vector<std::vector<FieldElement>> osculation_space(const ProjPoint& P) {
  const std::array<LinForm, 3> rows = osculation_rows(P);
  Matrix<FieldElement> m(3, 6, FieldElement::zero(P.tower()));
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 6; ++c) m.at(r, c) = rows[r][c];
  std::vector<std::vector<FieldElement>> basis = nullspace(m);
  if (basis.size() != 3)
    throw InternalError("osculation space: expected dimension 3, got " +
                        std::to_string(basis.size()));
  return basis;
}

// Intersects the osculation space of P1 (given by a basis) with the
// osculation conditions of P2.  The combined 6x6 condition system's kernel is
// computed in two stages: the second point's three rows are applied to the
// first point's basis, giving a 3x3 system whose kernel has the same
// dimension.  A nonzero determinant settles emptiness without divisions.
inline std::optional<OsculatingConic> conic_between(
    const std::vector<std::vector<FieldElement>>& basis1, const std::array<LinForm, 3>& rows2,
    const ProjPoint& P1, const ProjPoint& P2) {
  const Tower& t = P1.tower();
  Matrix<FieldElement> m(3, 3, FieldElement::zero(t));
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t b = 0; b < 3; ++b) {
      FieldElement dot = FieldElement::zero(t);
      for (std::size_t c = 0; c < 6; ++c) dot += rows2[r][c] * basis1[b][c];
      m.at(r, b) = std::move(dot);
    }
  }
  const FieldElement det =
      m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
      m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
      m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
  if (!det.is_zero()) return std::nullopt;

  const std::vector<std::vector<FieldElement>> ker = nullspace(m);
  if (ker.size() != 1)
    throw InternalError("conic_between: unexpected degeneracy, kernel dimension " +
                        std::to_string(ker.size()));

  std::array<FieldElement, 6> v{FieldElement::zero(t), FieldElement::zero(t),
                                FieldElement::zero(t), FieldElement::zero(t),
                                FieldElement::zero(t), FieldElement::zero(t)};
  for (std::size_t b = 0; b < 3; ++b) {
    if (ker[0][b].is_zero()) continue;
    for (std::size_t c = 0; c < 6; ++c) v[c] += ker[0][b] * basis1[b][c];
  }
  Conic conic(std::move(v));

  if (!conic.is_irreducible())
    throw VerificationFailure("conic_irreducible", "pair " + P1.to_string() + ", " +
                                                       P2.to_string());
  const HomForm F = fermat_cubic(t);
  if (intersection_multiplicity_on_conic(F, conic, P1) != 3 ||
      intersection_multiplicity_on_conic(F, conic, P2) != 3)
    throw VerificationFailure("conic_contact_3",
                              "pair " + P1.to_string() + ", " + P2.to_string());

  const CatalogKind kind =
      t.id() == "Q_eps_mu" ? CatalogKind::sextactic : CatalogKind::type9;
  const bool swap = P2 < P1;
  return OsculatingConic{std::move(conic), swap ? P2 : P1, swap ? P1 : P2, kind};
}

}  // namespace detail

// The conic meeting the cubic with multiplicity 3 at both P1 and P2, if one
// exists.  Preconditions: distinct points of the cubic, neither a flex.  The
// six linear osculation conditions (three per point) either have a trivial
// nullspace (no such conic) or a one-dimensional one; the resulting conic is
// verified irreducible with contact exactly 3 at both points.
inline std::optional<OsculatingConic> find_conic(const ProjPoint& P1, const ProjPoint& P2) {
  const Tower& t = P1.tower();
  if (&P2.tower() != &t) throw RejectedInput("find_conic: tower mismatch");
  if (t.id() != "Q_eps_mu" && t.id() != "Q_alpha_beta")
    throw RejectedInput("find_conic: unsupported coefficient field " + t.id());
  if (P1 == P2) throw ContractViolation("find_conic: points coincide");
  const HomForm F = fermat_cubic(t);
  if (!hom_eval(F, P1).is_zero() || !hom_eval(F, P2).is_zero())
    throw ContractViolation("find_conic: point not on the cubic");
  const HomForm xyz = coordinate_triangle(t);
  if (hom_eval(xyz, P1).is_zero() || hom_eval(xyz, P2).is_zero())
    throw ContractViolation("find_conic: flexes are excluded");

  return detail::conic_between(detail::osculation_space(P1), detail::osculation_rows(P2), P1, P2);
}

// ---------------------------------------------------------------------------
// Conic catalogs: every osculating conic of a point catalog, deduplicated and
// canonically ordered.

struct ConicCatalog {
  CatalogKind kind;
  std::vector<OsculatingConic> conics;                    // sorted by conic coefficients
  std::map<ProjPoint, std::vector<std::size_t>> through;  // base point -> conic indices
};

namespace detail {

// Uncached worker behind conic_catalog().  Exposed so thread-count
// independence can be exercised on a fresh computation.
inline ConicCatalog build_conic_catalog(CatalogKind k) {
  const PointCatalog& cat = catalog_by_kind(k);
  if (k == CatalogKind::flex)
    throw RejectedInput("conic_catalog: flexes carry no osculating conics");
  const std::size_t n = cat.points.size();
  const std::size_t expected = k == CatalogKind::sextactic ? 108 : 324;
  const std::size_t per_point = k == CatalogKind::sextactic ? 8 : 9;

  // Per-point condition rows and solution bases, then every unordered pair.
  std::vector<std::array<detail::LinForm, 3>> rows;
  std::vector<std::vector<std::vector<FieldElement>>> bases;
  rows.reserve(n);
  bases.reserve(n);
  for (const ProjPoint& P : cat.points) {
    rows.push_back(detail::osculation_rows(P));
    bases.push_back(detail::osculation_space(P));
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::vector<std::optional<OsculatingConic>> found(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    found[idx] = detail::conic_between(bases[i], rows[j], cat.points[i], cat.points[j]);
  });

  ConicCatalog out{k, {}, {}};
  std::set<std::pair<ProjPoint, ProjPoint>> found_pairs;
  for (auto& f : found) {
    if (!f) continue;
    found_pairs.emplace(f->base1, f->base2);
    out.conics.push_back(std::move(*f));
  }

  // The linear-algebra route must reproduce the group-law route exactly.
  const auto admissible = admissible_pairs(k);
  if (found_pairs.size() != admissible.size() || out.conics.size() != admissible.size())
    throw CensusError("conic_catalog: conic count " + std::to_string(out.conics.size()) +
                      " disagrees with admissible pair count " +
                      std::to_string(admissible.size()));
  for (const auto& p : admissible) {
    if (!found_pairs.count(p))
      throw CensusError("conic_catalog: admissible pair without a conic: " +
                        p.first.to_string() + ", " + p.second.to_string());
  }
  if (out.conics.size() != expected)
    throw CensusError("conic_catalog: expected " + std::to_string(expected) + " conics, found " +
                      std::to_string(out.conics.size()));

  std::sort(out.conics.begin(), out.conics.end(),
            [](const OsculatingConic& a, const OsculatingConic& b) { return a.conic < b.conic; });
  for (std::size_t idx = 0; idx + 1 < out.conics.size(); ++idx) {
    if (out.conics[idx].conic == out.conics[idx + 1].conic)
      throw CensusError("conic_catalog: two base pairs share a conic");
  }
  for (std::size_t idx = 0; idx < out.conics.size(); ++idx) {
    out.through[out.conics[idx].base1].push_back(idx);
    out.through[out.conics[idx].base2].push_back(idx);
  }
  if (out.through.size() != n)
    throw CensusError("conic_catalog: some catalog point carries no conic");
  for (const auto& [p, idxs] : out.through) {
    if (idxs.size() != per_point)
      throw CensusError("conic_catalog: " + p.to_string() + " carries " +
                        std::to_string(idxs.size()) + " conics, expected " +
                        std::to_string(per_point));
  }
  return out;
}

}  // namespace detail

inline const ConicCatalog& conic_catalog(CatalogKind kind) {
  if (kind == CatalogKind::sextactic) {
    static const ConicCatalog cat = detail::build_conic_catalog(CatalogKind::sextactic);
    return cat;
  }
  if (kind != CatalogKind::type9) throw RejectedInput("conic_catalog: flexes carry no conics");
  static const ConicCatalog cat = detail::build_conic_catalog(CatalogKind::type9);
  return cat;
}

// ---------------------------------------------------------------------------
// Pairwise intersections of the conics through one base point.

struct PerPointReport {
  ProjPoint base;
  // Distinct residual intersection points with the number of the base point's
  // own conics passing through each, sorted by point.
  std::vector<std::pair<ProjPoint, int>> points;
  std::map<int, int> strata;  // local count -> number of points
};

namespace detail {

// A parametrization of one conic through P together with the restrictions of
// the six conic monomials, so restricting any other conic costs six scaled
// adds instead of a full form restriction.
struct ParamRestrict {
  ConicParam param;
  std::array<UniPoly, 6> mono;  // x^2, y^2, z^2, xy, xz, yz on the parametrization
};

inline ParamRestrict make_param_restrict(const Conic& C, const ProjPoint& P) {
  ConicParam param = conic_parametrize(C, P);
  const UniPoly &x = param.coords[0], &y = param.coords[1], &z = param.coords[2];
  std::array<UniPoly, 6> mono{x * x, y * y, z * z, x * y, x * z, y * z};
  return {std::move(param), std::move(mono)};
}

inline UniPoly restrict_conic(const ParamRestrict& pr, const Conic& C) {
  UniPoly r(pr.param.coords[0].tower());
  const auto& c = C.coeffs();
  for (std::size_t m = 0; m < 6; ++m) {
    if (!c[m].is_zero()) r = r + pr.mono[m].scaled(c[m]);
  }
  return r;
}

}  // namespace detail

inline PerPointReport per_point_intersections(CatalogKind kind, const ProjPoint& P) {
  const ConicCatalog& cat = conic_catalog(kind);
  const auto it = cat.through.find(P);
  if (it == cat.through.end())
    throw RejectedInput("per_point_intersections: not a base point of the conic catalog");
  const std::vector<std::size_t>& idxs = it->second;

  std::vector<detail::ParamRestrict> params;
  params.reserve(idxs.size());
  for (std::size_t idx : idxs) params.push_back(detail::make_param_restrict(cat.conics[idx].conic, P));

  std::set<ProjPoint> residuals;
  for (std::size_t a = 0; a < idxs.size(); ++a) {
    for (std::size_t b = a + 1; b < idxs.size(); ++b) {
      residuals.insert(detail::residual_from_conic_restriction(
          params[a].param, detail::restrict_conic(params[a], cat.conics[idxs[b]].conic)));
    }
  }

  PerPointReport rep{P, {}, {}};
  const HomForm F = fermat_cubic(P.tower());
  long pair_total = 0;
  for (const ProjPoint& R : residuals) {
    if (hom_eval(F, R).is_zero())
      throw VerificationFailure("residual_off_cubic", R.to_string() + " lies on the cubic");
    int count = 0;
    for (std::size_t idx : idxs) {
      if (cat.conics[idx].conic.contains(R)) ++count;
    }
    if (count < 2)
      throw InternalError("per_point_intersections: residual on fewer than two conics");
    rep.points.emplace_back(R, count);
    rep.strata[count] += 1;
    pair_total += static_cast<long>(count) * (count - 1) / 2;
  }
  // Every unordered pair of conics meets in exactly one residual point, so
  // the per-point pair counts must add up to C(#conics, 2).
  const long deg = static_cast<long>(idxs.size());
  if (pair_total != deg * (deg - 1) / 2)
    throw CensusError("per_point_intersections: pair bookkeeping off at " + P.to_string());
  return rep;
}

// ---------------------------------------------------------------------------
// Global census of conic intersection points.

struct CensusEntry {
  ProjPoint point;
  int count;                        // conics of the whole catalog through the point
  std::vector<std::size_t> conics;  // their indices, ascending
};

struct ShadowCensus {
  CatalogKind kind;
  std::vector<CensusEntry> points;  // sorted by point
  std::map<int, int> strata;        // count -> number of points
  // The top stratum (nine conics) sits on the coordinate lines; points with
  // x = 0, y = 0, z = 0 respectively.
  std::array<int, 3> ninefold_line_split;
};

inline const ShadowCensus& shadow_census(CatalogKind kind) {
  auto build = [](CatalogKind k) {
    const PointCatalog& cat = catalog_by_kind(k);
    const ConicCatalog& conics = conic_catalog(k);
    const Tower& t = *cat.field;

    std::set<ProjPoint> all;
    for (const ProjPoint& P : cat.points) {
      const PerPointReport rep = per_point_intersections(k, P);
      for (const auto& [R, cnt] : rep.points) all.insert(R);
    }
    std::vector<ProjPoint> pts(all.begin(), all.end());

    // Incidence over the whole conic catalog.  The mod-p screen rejects the
    // overwhelming majority of (point, conic) pairs; each survivor is
    // confirmed by exact evaluation, so the counts are exact facts.
    const ZeroScreen screen(t);
    struct FoldedConic {
      std::array<std::vector<std::uint64_t>, 6> w;
      bool ok = false;
    };
    std::vector<FoldedConic> folded(conics.conics.size());
    for (std::size_t c = 0; c < conics.conics.size(); ++c) {
      folded[c].ok = true;
      for (std::size_t m = 0; m < 6 && folded[c].ok; ++m) {
        auto f = screen.fold(screen.reduce(conics.conics[c].conic.coeffs()[m]));
        if (f)
          folded[c].w[m] = std::move(*f);
        else
          folded[c].ok = false;
      }
    }

    std::vector<std::optional<CensusEntry>> entries(pts.size());
    parallel_for(pts.size(), [&](std::size_t pi) {
      const ProjPoint& R = pts[pi];
      const ZeroScreen::Red rx = screen.reduce(R.x()), ry = screen.reduce(R.y()),
                            rz = screen.reduce(R.z());
      const bool red_ok = rx.ok && ry.ok && rz.ok;
      std::array<ZeroScreen::Red, 6> mono;
      if (red_ok) {
        mono = {screen.mul(rx, rx), screen.mul(ry, ry), screen.mul(rz, rz),
                screen.mul(rx, ry), screen.mul(rx, rz), screen.mul(ry, rz)};
      }
      CensusEntry e{R, 0, {}};
      for (std::size_t c = 0; c < conics.conics.size(); ++c) {
        bool maybe = true;
        if (red_ok && folded[c].ok) {
          std::uint64_t s = 0;
          for (std::size_t m = 0; m < 6; ++m) {
            s = (s + screen.folded_value(folded[c].w[m], mono[m])) % screen.prime();
          }
          maybe = s == 0;
        }
        if (maybe && conics.conics[c].conic.contains(R)) {
          ++e.count;
          e.conics.push_back(c);
        }
      }
      entries[pi] = std::move(e);
    });

    ShadowCensus out{k, {}, {}, {0, 0, 0}};
    out.points.reserve(entries.size());
    for (auto& e : entries) out.points.push_back(std::move(*e));
    const HomForm F = fermat_cubic(t);
    for (const CensusEntry& e : out.points) {
      if (e.count < 2) throw CensusError("shadow_census: point on fewer than two conics");
      out.strata[e.count] += 1;
      if (hom_eval(F, e.point).is_zero())
        throw VerificationFailure("census_off_cubic", e.point.to_string() + " lies on the cubic");
      if (e.count == 9) {
        int zeros = 0;
        std::size_t zc = 3;
        for (std::size_t c = 0; c < 3; ++c) {
          if (e.point.coord(c).is_zero()) {
            ++zeros;
            zc = c;
          }
        }
        if (zeros != 1)
          throw CensusError("shadow_census: nine-fold point not on exactly one coordinate line");
        out.ninefold_line_split[zc] += 1;
      }
    }

    const std::map<int, int> expected_strata =
        k == CatalogKind::sextactic ? std::map<int, int>{{2, 486}, {6, 36}, {9, 18}}
                                    : std::map<int, int>{{2, 1944}, {9, 72}};
    const std::size_t expected_total = k == CatalogKind::sextactic ? 540 : 2016;
    const int expected_per_line = k == CatalogKind::sextactic ? 6 : 24;
    if (out.points.size() != expected_total)
      throw CensusError("shadow_census: " + std::to_string(out.points.size()) +
                        " points, expected " + std::to_string(expected_total));
    if (out.strata != expected_strata) {
      std::string got;
      for (const auto& [cnt, npts] : out.strata)
        got += " " + std::to_string(cnt) + ":" + std::to_string(npts);
      throw CensusError("shadow_census: unexpected strata" + got);
    }
    for (int per_line : out.ninefold_line_split) {
      if (per_line != expected_per_line)
        throw CensusError("shadow_census: nine-fold points unevenly split over coordinate lines");
    }
    return out;
  };
  if (kind == CatalogKind::sextactic) {
    static const ShadowCensus census = build(CatalogKind::sextactic);
    return census;
  }
  if (kind != CatalogKind::type9) throw RejectedInput("shadow_census: flex kind has no census");
  static const ShadowCensus census = build(CatalogKind::type9);
  return census;
}

// ---------------------------------------------------------------------------
// Published sample coordinates for the census strata (the full orbits arise
// by coordinate permutations; these pin exact representatives).

// First eight of the 36 six-fold points of the sextactic census.
inline std::vector<ProjPoint> known_sixfold_points() {
  const Tower& t = tower_eps_mu();
  const FieldElement one = FieldElement::one(t), zero = FieldElement::zero(t);
  const FieldElement eps = fe_eps_in(t);
  const FieldElement mu2 = fe_mu(2);
  std::vector<ProjPoint> out;
  for (const FieldElement& y : {one, eps}) {
    out.emplace_back(one, y, zero);
    for (const FieldElement& u : {one, eps, eps * eps}) out.emplace_back(one, y, -(u * mu2));
  }
  return out;
}

// First three of the 18 nine-fold points of the sextactic census.
inline std::vector<ProjPoint> known_ninefold_points() {
  const Tower& t = tower_eps_mu();
  const FieldElement one = FieldElement::one(t), zero = FieldElement::zero(t);
  const FieldElement eps = fe_eps_in(t);
  const FieldElement mu = fe_mu();
  std::vector<ProjPoint> out;
  for (const FieldElement& u : {one, eps, eps * eps}) out.emplace_back(zero, one, -(u * mu));
  return out;
}

// First twelve of the 72 nine-fold points of the type-9 census.  The fifth
// point's published scalar (alpha where the catalog demands alpha^2) is
// restored the same way as the type-9 seed list: membership against the
// computed census is the deciding check.
inline std::vector<ProjPoint> known_type9_ninefold_points() {
  const Tower& t = tower_alpha_beta();
  const FieldElement one = FieldElement::one(t), zero = FieldElement::zero(t);
  const FieldElement three = fe_q(t, 3);
  const FieldElement a = fe_alpha(1), a2 = fe_alpha(2), b = fe_beta(1);
  auto B = [&](std::initializer_list<long> cs) {  // polynomial in beta
    FieldElement acc = FieldElement::zero(t);
    int k = 0;
    for (long c : cs) acc += fe_q(t, c) * b.pow(k++);
    return acc;
  };
  std::vector<ProjPoint> out;
  out.emplace_back(zero, one, b);
  out.emplace_back(zero, one, b.pow(2));
  out.emplace_back(zero, one, b.pow(4));
  out.emplace_back(zero, three, a * b * (b - one) * B({2, 0, 0, 1}));       // beta(beta-1)(beta^3+2)
  out.emplace_back(zero, three, -(a2 * B({1, 1, 1}) * B({1, -1, 0, 1})));   // see note above
  out.emplace_back(zero, three, a * b * B({1, -1, 0, 2, 1}));
  out.emplace_back(zero, three, a * b * (b - one).pow(2) * B({1, 1, 1}));
  out.emplace_back(zero, three, a * b * B({1, 2, 0, 2, 1}));
  out.emplace_back(zero, three, -(a * b * B({2, 1, 0, 1, 2})));
  out.emplace_back(zero, three, -(a2 * b.pow(2) * B({1, 1, 1})));
  out.emplace_back(zero, three, a * b * B({-2, -1, 0, -1, 1}));
  out.emplace_back(zero, three, -(a2 * b * B({1, 1, 1}) * B({1, -1, 1})));
  return out;
}

}  // namespace ftl

#endif
