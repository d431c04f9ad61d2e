#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <map>
#include <random>
#include <set>

#include "ftl/arrangements.hpp"
#include "ftl/catalogs.hpp"
#include "ftl/elliptic.hpp"
#include "ftl/modp.hpp"
#include "ftl/parallel.hpp"
#include "ftl/projective.hpp"
#include "ftl/tower.hpp"

using namespace ftl;

namespace {

ProjPoint permute(const ProjPoint& p, const std::array<int, 3>& sigma) {
  return ProjPoint(p.coord(static_cast<std::size_t>(sigma[0])),
                   p.coord(static_cast<std::size_t>(sigma[1])),
                   p.coord(static_cast<std::size_t>(sigma[2])));
}

const std::array<std::array<int, 3>, 6> kPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

// Plane image of -2P for a plane point of the cubic, through the explicit
// group law only (no label shortcuts): independent oracle for tangent
// residuals.
ProjPoint minus_two_via_group_law(const ProjPoint& P) {
  const WeierstrassCurve E = WeierstrassCurve::fermat_model(P.tower());
  return from_weierstrass(ec_scalar_mul(E, -2, to_weierstrass(P)));
}

// Whether 3(P+Q) = O, again via the explicit group law.
bool sum_is_three_torsion_via_group_law(const ProjPoint& P, const ProjPoint& Q) {
  const WeierstrassCurve E = WeierstrassCurve::fermat_model(P.tower());
  const ECPoint s = ec_add(E, to_weierstrass(P), to_weierstrass(Q));
  return ec_scalar_mul(E, 3, s).is_infinity();
}

// The restriction of the cubic to a doubly-osculating conic must consist of
// exactly two roots of multiplicity 3 (one may sit at the missed chart
// point, visible as a degree drop from 6).
void check_two_triple_contacts(const OsculatingConic& oc) {
  const ConicParam param = conic_parametrize(oc.conic, oc.base1);
  const UniPoly r = param.restrict_form(fermat_cubic(oc.conic.tower()));
  REQUIRE(!r.is_zero());
  REQUIRE(root_multiplicity(r, param.t_P) == 3);
  const UniPoly h = deflate(r, param.t_P, 3);
  if (h.degree() == 0) {
    REQUIRE(r.degree() == 3);  // other triple contact at the missed chart point
    REQUIRE(param.at_infinity == oc.base2);
  } else {
    REQUIRE(r.degree() == 6);
    REQUIRE(h.degree() == 3);
    // h must be a perfect cube c (t - t2)^3 with t2 the second base point.
    const FieldElement t2 = -(h[2] * (fe_q(h.tower(), 3) * h[3]).inverse());
    REQUIRE(root_multiplicity(h, t2) == 3);
    REQUIRE(param.at(t2) == oc.base2);
  }
}

}  // namespace

TEST_CASE("torsion labels agree with the group law") {
  for (CatalogKind kind : {CatalogKind::sextactic, CatalogKind::type9}) {
    const GroupContext& ctx = group_context(kind);
    const PointCatalog& cat = catalog_by_kind(kind);
    const int n = kind == CatalogKind::sextactic ? 6 : 9;
    REQUIRE(ctx.order == n);
    REQUIRE(ctx.label.size() == static_cast<std::size_t>(n) * n);
    REQUIRE(ctx.point_at.size() == ctx.label.size());

    // identity carries label (0, 0) and is the flex [1:-1:0]
    const Tower& t = *cat.field;
    const ProjPoint O(FieldElement::one(t), -FieldElement::one(t), FieldElement::zero(t));
    REQUIRE(ctx.label_of(O) == std::pair<int, int>(0, 0));

    // sampled pairs: label arithmetic vs explicit group law
    std::mt19937 rng(2024u + static_cast<unsigned>(n));
    std::uniform_int_distribution<std::size_t> pick(0, cat.points.size() - 1);
    const std::size_t samples = kind == CatalogKind::sextactic ? 60 : 25;
    for (std::size_t s = 0; s < samples; ++s) {
      const ProjPoint& a = cat.points[pick(rng)];
      const ProjPoint& b = cat.points[pick(rng)];
      REQUIRE(ctx.sum_in_three_torsion(a, b) == sum_is_three_torsion_via_group_law(a, b));
    }

    // all flexes are 3-torsion, so they are labeled too
    const ProjPoint flex(FieldElement::one(t), FieldElement::zero(t), -FieldElement::one(t));
    const auto [fi, fj] = ctx.label_of(flex);
    CHECK((3 * fi) % n == 0);
    CHECK((3 * fj) % n == 0);
    // a point outside E[n] has no label
    CHECK_THROWS_AS(ctx.label_of(ProjPoint(FieldElement::one(t), fe_q(t, 2), fe_q(t, 3))),
                    RejectedInput);
  }
  CHECK_THROWS_AS(group_context(CatalogKind::flex), RejectedInput);
}

TEST_CASE("tangent residuals at sextactic points are flexes, three per flex") {
  const TangentReport rep = tangent_analysis(CatalogKind::sextactic);
  REQUIRE(rep.kind == CatalogKind::sextactic);
  REQUIRE(rep.entries.size() == 27);
  REQUIRE(rep.orbits.empty());

  const PointCatalog& flexes = flex_catalog();
  std::map<ProjPoint, int> per_flex;
  for (const TangentEntry& e : rep.entries) {
    CHECK(e.classification == "flex");
    CHECK(flexes.contains(e.residual));
    CHECK(e.tangent.contains(e.base));
    CHECK(e.tangent.contains(e.residual));
    // independent oracle: the residual of the tangent is -2P in the group
    CHECK(e.residual == minus_two_via_group_law(e.base));
    ++per_flex[e.residual];
  }
  REQUIRE(per_flex.size() == 9);
  for (const auto& [flex, n] : per_flex) CHECK(n == 3);
}

TEST_CASE("tangent residuals at type-9 points form 24 three-cycles") {
  const TangentReport rep = tangent_analysis(CatalogKind::type9);
  REQUIRE(rep.entries.size() == 72);
  REQUIRE(rep.orbits.size() == 24);

  const PointCatalog& cat = type9_catalog();
  std::map<ProjPoint, ProjPoint> nu;
  for (const TangentEntry& e : rep.entries) {
    CHECK(e.classification == "type9");
    CHECK(cat.contains(e.residual));
    CHECK(e.residual != e.base);
    CHECK(e.residual == minus_two_via_group_law(e.base));
    nu.emplace(e.base, e.residual);
  }

  // nu^3 = id, no fixed points, orbits partition the catalog
  std::set<ProjPoint> covered;
  for (const auto& orbit : rep.orbits) {
    for (const ProjPoint& p : orbit) {
      CHECK(cat.contains(p));
      covered.insert(p);
    }
    const std::set<ProjPoint> os(orbit.begin(), orbit.end());
    REQUIRE(os.size() == 3);
    for (const ProjPoint& p : orbit) {
      CHECK(os.count(nu.at(p)) == 1);
      CHECK(nu.at(nu.at(nu.at(p))) == p);
    }
  }
  REQUIRE(covered.size() == 72);

  CHECK_THROWS_AS(tangent_analysis(CatalogKind::flex), RejectedInput);
}

TEST_CASE("admissible pairs: 108 at 8 per sextactic point, 324 at 9 per type-9 point") {
  const auto sext = admissible_pairs(CatalogKind::sextactic);
  REQUIRE(sext.size() == 108);
  const auto nine = admissible_pairs(CatalogKind::type9);
  REQUIRE(nine.size() == 324);

  for (const auto& [pairs, expected_deg, kind] :
       {std::tuple{&sext, 8, CatalogKind::sextactic}, std::tuple{&nine, 9, CatalogKind::type9}}) {
    std::map<ProjPoint, int> deg;
    for (const auto& [a, b] : *pairs) {
      CHECK(a < b);
      ++deg[a];
      ++deg[b];
    }
    const PointCatalog& cat = catalog_by_kind(kind);
    REQUIRE(deg.size() == cat.points.size());
    for (const auto& [p, d] : deg) CHECK(d == expected_deg);
  }

  // full group-law confirmation on the sextactic side (cheap field)
  for (const auto& [a, b] : sext) CHECK(sum_is_three_torsion_via_group_law(a, b));

  // the would-be ninth partner of a sextactic point is the point itself:
  // 2P is 3-torsion exactly for the sextactic catalog, never for type 9
  const GroupContext& c6 = group_context(CatalogKind::sextactic);
  for (const ProjPoint& p : catalog_by_kind(CatalogKind::sextactic).points)
    CHECK(c6.sum_in_three_torsion(p, p));
  const GroupContext& c9 = group_context(CatalogKind::type9);
  for (const ProjPoint& p : catalog_by_kind(CatalogKind::type9).points)
    CHECK(!c9.sum_in_three_torsion(p, p));
}

TEST_CASE("find_conic produces the doubly-osculating conic exactly for admissible pairs") {
  const PointCatalog& cat = catalog_by_kind(CatalogKind::sextactic);
  const auto adm = admissible_pairs(CatalogKind::sextactic);

  SECTION("an admissible pair yields a verified conic") {
    const auto& [p1, p2] = adm.front();
    const auto oc = find_conic(p1, p2);
    REQUIRE(oc.has_value());
    CHECK(oc->base1 == p1);
    CHECK(oc->base2 == p2);
    CHECK(oc->kind == CatalogKind::sextactic);
    CHECK(oc->conic.contains(p1));
    CHECK(oc->conic.contains(p2));
    CHECK(oc->conic.is_irreducible());
    check_two_triple_contacts(*oc);
    // symmetric in the arguments
    const auto rev = find_conic(p2, p1);
    REQUIRE(rev.has_value());
    CHECK(rev->conic == oc->conic);
  }

  SECTION("a non-admissible pair yields nothing") {
    const GroupContext& ctx = group_context(CatalogKind::sextactic);
    bool tried = false;
    for (std::size_t j = 1; j < cat.points.size() && !tried; ++j) {
      if (!ctx.sum_in_three_torsion(cat.points[0], cat.points[j])) {
        CHECK(!find_conic(cat.points[0], cat.points[j]).has_value());
        tried = true;
      }
    }
    REQUIRE(tried);
  }

  SECTION("domain errors") {
    const Tower& t = *cat.field;
    const ProjPoint flex(FieldElement::one(t), -FieldElement::one(t), FieldElement::zero(t));
    CHECK_THROWS_AS(find_conic(cat.points[0], cat.points[0]), ContractViolation);
    CHECK_THROWS_AS(find_conic(cat.points[0], flex), ContractViolation);
    const ProjPoint off(FieldElement::one(t), FieldElement::one(t), FieldElement::one(t));
    CHECK_THROWS_AS(find_conic(cat.points[0], off), ContractViolation);
    CHECK_THROWS_AS(find_conic(cat.points[0], catalog_by_kind(CatalogKind::type9).points[0]),
                    RejectedInput);
  }
}

TEST_CASE("conic catalogs: 108 and 324 distinct conics, 8 and 9 per base point") {
  for (const auto& [kind, total, per_point] :
       {std::tuple{CatalogKind::sextactic, 108u, 8u}, std::tuple{CatalogKind::type9, 324u, 9u}}) {
    const ConicCatalog& cc = conic_catalog(kind);
    REQUIRE(cc.kind == kind);
    REQUIRE(cc.conics.size() == total);

    // strictly sorted by conic: distinct and canonically ordered
    for (std::size_t i = 0; i + 1 < cc.conics.size(); ++i)
      CHECK(cc.conics[i].conic < cc.conics[i + 1].conic);

    // the base-pair set is exactly the admissible set
    const auto adm = admissible_pairs(kind);
    std::set<std::pair<ProjPoint, ProjPoint>> admset(adm.begin(), adm.end());
    for (const OsculatingConic& oc : cc.conics) {
      CHECK(oc.base1 < oc.base2);
      CHECK(admset.erase({oc.base1, oc.base2}) == 1);
      CHECK(oc.conic.contains(oc.base1));
      CHECK(oc.conic.contains(oc.base2));
      CHECK(oc.kind == kind);
    }
    CHECK(admset.empty());

    const PointCatalog& cat = catalog_by_kind(kind);
    REQUIRE(cc.through.size() == cat.points.size());
    for (const auto& [p, idxs] : cc.through) {
      CHECK(idxs.size() == per_point);
      for (std::size_t idx : idxs) {
        REQUIRE(idx < cc.conics.size());
        CHECK((cc.conics[idx].base1 == p || cc.conics[idx].base2 == p));
      }
    }
  }
  CHECK_THROWS_AS(conic_catalog(CatalogKind::flex), RejectedInput);
}

TEST_CASE("every sextactic conic meets the cubic in exactly two triple contacts") {
  const ConicCatalog& cc = conic_catalog(CatalogKind::sextactic);
  for (const OsculatingConic& oc : cc.conics) check_two_triple_contacts(oc);
}

TEST_CASE("sampled type-9 conics meet the cubic in exactly two triple contacts") {
  const ConicCatalog& cc = conic_catalog(CatalogKind::type9);
  for (std::size_t i = 0; i < cc.conics.size(); i += 27) check_two_triple_contacts(cc.conics[i]);
}

TEST_CASE("per-point intersections: 24 residuals (22 double, 2 triple) at each sextactic point") {
  const PointCatalog& cat = catalog_by_kind(CatalogKind::sextactic);
  const ConicCatalog& cc = conic_catalog(CatalogKind::sextactic);
  const HomForm F = fermat_cubic(*cat.field);
  for (const ProjPoint& P : cat.points) {
    const PerPointReport rep = per_point_intersections(CatalogKind::sextactic, P);
    REQUIRE(rep.base == P);
    REQUIRE(rep.points.size() == 24);
    REQUIRE(rep.strata == std::map<int, int>{{2, 22}, {3, 2}});
    for (const auto& [R, cnt] : rep.points) {
      CHECK(!hom_eval(F, R).is_zero());
      // the local count is genuine: re-count against this point's conics
      int manual = 0;
      for (std::size_t idx : cc.through.at(P))
        if (cc.conics[idx].conic.contains(R)) ++manual;
      CHECK(manual == cnt);
    }
  }
}

TEST_CASE("per-point intersections: 30 residuals (27 double, 3 triple) at type-9 points") {
  const PointCatalog& cat = catalog_by_kind(CatalogKind::type9);
  for (std::size_t i : {0u, 35u, 71u}) {
    const PerPointReport rep = per_point_intersections(CatalogKind::type9, cat.points[i]);
    REQUIRE(rep.points.size() == 30);
    REQUIRE(rep.strata == std::map<int, int>{{2, 27}, {3, 3}});
  }

  const Tower& t = *cat.field;
  CHECK_THROWS_AS(per_point_intersections(
                      CatalogKind::type9,
                      ProjPoint(FieldElement::one(t), -FieldElement::one(t), FieldElement::zero(t))),
                  RejectedInput);
}

TEST_CASE("sextactic census: 540 points off the cubic in strata 486/36/18") {
  const ShadowCensus& sc = shadow_census(CatalogKind::sextactic);
  REQUIRE(sc.kind == CatalogKind::sextactic);
  REQUIRE(sc.points.size() == 540);
  REQUIRE(sc.strata == std::map<int, int>{{2, 486}, {6, 36}, {9, 18}});
  REQUIRE(sc.ninefold_line_split == std::array<int, 3>{6, 6, 6});

  const Tower& t = tower_eps_mu();
  const HomForm F = fermat_cubic(t);
  std::map<ProjPoint, const CensusEntry*> by_point;
  for (const CensusEntry& e : sc.points) {
    CHECK(!hom_eval(F, e.point).is_zero());
    CHECK(e.count == static_cast<int>(e.conics.size()));
    by_point.emplace(e.point, &e);
  }
  REQUIRE(by_point.size() == 540);

  // 36 + 18 = 54 points with more than two conics
  int heavy = 0;
  for (const CensusEntry& e : sc.points)
    if (e.count > 2) ++heavy;
  CHECK(heavy == 54);

  // published representatives: eight six-fold and three nine-fold points
  for (const ProjPoint& p : known_sixfold_points()) {
    REQUIRE(by_point.count(p) == 1);
    CHECK(by_point.at(p)->count == 6);
  }
  for (const ProjPoint& p : known_ninefold_points()) {
    REQUIRE(by_point.count(p) == 1);
    CHECK(by_point.at(p)->count == 9);
  }

  // the census is closed under coordinate permutations, stratum-wise
  for (const CensusEntry& e : sc.points) {
    for (const auto& sigma : kPerms) {
      const ProjPoint q = permute(e.point, sigma);
      REQUIRE(by_point.count(q) == 1);
      CHECK(by_point.at(q)->count == e.count);
    }
  }

  // spot-check the incidence lists against exact substitution
  const ConicCatalog& cc = conic_catalog(CatalogKind::sextactic);
  for (std::size_t i = 0; i < sc.points.size(); i += 45) {
    const CensusEntry& e = sc.points[i];
    std::vector<std::size_t> manual;
    for (std::size_t c = 0; c < cc.conics.size(); ++c)
      if (cc.conics[c].conic.contains(e.point)) manual.push_back(c);
    CHECK(manual == e.conics);
  }
}

TEST_CASE("type-9 census: 2016 points off the cubic in strata 1944/72") {
  const ShadowCensus& sc = shadow_census(CatalogKind::type9);
  REQUIRE(sc.points.size() == 2016);
  REQUIRE(sc.strata == std::map<int, int>{{2, 1944}, {9, 72}});
  REQUIRE(sc.ninefold_line_split == std::array<int, 3>{24, 24, 24});

  std::map<ProjPoint, int> count;
  for (const CensusEntry& e : sc.points) count.emplace(e.point, e.count);

  // the twelve published nine-fold representatives (x = 0 line)
  for (const ProjPoint& p : known_type9_ninefold_points()) {
    REQUIRE(count.count(p) == 1);
    CHECK(count.at(p) == 9);
    CHECK(p.x().is_zero());
  }

  // permutation closure
  for (const CensusEntry& e : sc.points) {
    for (const auto& sigma : kPerms) {
      REQUIRE(count.count(permute(e.point, sigma)) == 1);
      CHECK(count.at(permute(e.point, sigma)) == e.count);
    }
  }

  CHECK_THROWS_AS(shadow_census(CatalogKind::flex), RejectedInput);
}

TEST_CASE("mod-p screen: residues certify nonzero and respect products") {
  const Tower& t = tower_alpha_beta();
  const ZeroScreen screen(t);
  REQUIRE(screen.prime() > (1ull << 61));

  std::mt19937 rng(777);
  auto random_element = [&] {
    std::vector<Rational> cs;
    std::uniform_int_distribution<long> d(-9, 9);
    for (std::size_t i = 0; i < t.dim(); ++i)
      cs.emplace_back(d(rng), 1 + static_cast<unsigned long>(std::abs(d(rng))));
    return FieldElement::from_coeffs(t, cs);
  };

  for (int trial = 0; trial < 20; ++trial) {
    const FieldElement a = random_element(), b = random_element();
    const auto ra = screen.reduce(a), rb = screen.reduce(b), rab = screen.reduce(a * b);
    REQUIRE(ra.ok);
    REQUIRE(rb.ok);
    REQUIRE(rab.ok);
    // reduction is a ring map: reduce(a*b) == mul(reduce(a), reduce(b))
    CHECK(screen.mul(ra, rb).v == rab.v);
    // folding computes the same functional: lambda(a*b) both ways
    const auto fa = screen.fold(ra);
    REQUIRE(fa.has_value());
    CHECK(screen.folded_value(*fa, rb) == screen.lambda_of(rab));
  }

  // exact zeros always reduce to zero residue (the screen can never assert
  // a true zero is nonzero)
  const FieldElement z = FieldElement::zero(t);
  CHECK(screen.lambda_of(screen.reduce(z)) == 0);
  const FieldElement x = random_element();
  CHECK(screen.lambda_of(screen.reduce(x - x)) == 0);
}

TEST_CASE("parallel_for is deterministic across thread counts") {
  const unsigned before = worker_threads();
  std::vector<long> a(1000), b(1000);
  set_worker_threads(1);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = static_cast<long>(i * i % 97); });
  set_worker_threads(4);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = static_cast<long>(i * i % 97); });
  set_worker_threads(before);
  CHECK(a == b);
}
