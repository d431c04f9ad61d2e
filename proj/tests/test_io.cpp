#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "ftl/arrangements.hpp"
#include "ftl/catalogs.hpp"
#include "ftl/serialize.hpp"
#include "ftl/verify.hpp"

using namespace ftl;

TEST_CASE("field elements survive the JSON round trip") {
  const Tower& t = tower_alpha_beta();
  // an element with large mixed coefficients, to rule out any truncation
  FieldElement x = fe_alpha() + fe_beta().scaled(Rational(-7, 3));
  x = x.pow(9) + x.inverse();
  const Json j = to_json(x);
  REQUIRE(j.at("tower") == "Q_alpha_beta");
  REQUIRE(j.at("coeffs").size() == t.dim());
  for (const auto& c : j.at("coeffs")) {
    REQUIRE(c.is_array());
    REQUIRE(c.size() == 2);
    REQUIRE(c[0].is_string());
    REQUIRE(c[1].is_string());
  }
  CHECK(fe_from_json(j) == x);
  // serialize(parse(s)) is the identity on emitted bytes
  const std::string s = render_json(j);
  CHECK(render_json(Json::parse(s)) == s);
}

TEST_CASE("field element parsing rejects malformed input") {
  CHECK_THROWS_AS(fe_from_json(Json::parse(R"({"tower":"Q"})")), RejectedInput);
  CHECK_THROWS_AS(fe_from_json(Json::parse(R"({"tower":"Q","coeffs":[["1","2"],["0","1"]]})")),
                  RejectedInput);  // too many coefficients for Q
  CHECK_THROWS_AS(fe_from_json(Json::parse(R"({"tower":"nope","coeffs":[["1","1"]]})")),
                  RejectedInput);
  CHECK_THROWS_AS(fe_from_json(Json::parse(R"({"tower":"Q","coeffs":[["1","0"]]})")),
                  DivisionByZero);  // zero denominator
}

TEST_CASE("points, conics, and curve points round trip") {
  const PointCatalog& sx = catalog_by_kind(CatalogKind::sextactic);
  for (std::size_t i = 0; i < sx.points.size(); i += 5) {
    const ProjPoint& p = sx.points[i];
    CHECK(point_from_json(to_json(p)) == p);
  }
  const ConicCatalog& cc = conic_catalog(CatalogKind::sextactic);
  for (std::size_t i = 0; i < cc.conics.size(); i += 17) {
    const Conic& c = cc.conics[i].conic;
    CHECK(conic_from_json(to_json(c)) == c);
  }
  const Tower& t = *sx.field;
  const ECPoint inf = ECPoint::infinity(t);
  CHECK(ecpoint_from_json(to_json(inf), t) == inf);
  const ECPoint w = to_weierstrass(sx.points[0]);
  CHECK(ecpoint_from_json(to_json(w), t) == w);
  CHECK(to_json(inf).contains("inf"));
  CHECK_FALSE(to_json(w).contains("inf"));
}

TEST_CASE("homogeneous forms round trip") {
  const Tower& t = tower_Q();
  const HomForm F = fermat_cubic(t);
  const Json j = to_json(F);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 3);  // x^3, y^3, z^3
  const HomForm back = homform_from_json(j, t, 3);
  CHECK(back.terms() == F.terms());
}

TEST_CASE("catalog documents round trip through their canonical bytes") {
  for (CatalogKind kind : {CatalogKind::flex, CatalogKind::sextactic, CatalogKind::type9}) {
    const PointCatalog& cat = catalog_by_kind(kind);
    const std::string s = render_json(to_json(cat));
    const PointCatalog back = catalog_from_json(Json::parse(s));
    CHECK(back.kind == cat.kind);
    CHECK(back.field == cat.field);
    CHECK(back.points == cat.points);
    CHECK(back.generators == cat.generators);
    CHECK(back.checks == cat.checks);
    CHECK(render_json(to_json(back)) == s);
  }
}

TEST_CASE("catalog parsing rejects structural damage") {
  const std::string good = render_json(to_json(catalog_by_kind(CatalogKind::flex)));
  Json j = Json::parse(good);
  SECTION("missing provenance") {
    j.erase("provenance");
    CHECK_THROWS_AS(catalog_from_json(j), RejectedInput);
  }
  SECTION("unknown kind") {
    j["kind"] = "sometimes";
    CHECK_THROWS_AS(catalog_from_json(j), RejectedInput);
  }
  SECTION("point from a different field") {
    j["points"][0] = to_json(catalog_by_kind(CatalogKind::type9).points[0]);
    CHECK_THROWS_AS(catalog_from_json(j), RejectedInput);
  }
}

TEST_CASE("report serializations carry the headline numbers") {
  const TangentReport rep = tangent_analysis(CatalogKind::type9);
  const Json j = to_json(rep);
  CHECK(j.at("kind") == "type9");
  CHECK(j.at("entries").size() == 72);
  CHECK(j.at("orbits").size() == 24);

  const TangentReport sx = tangent_analysis(CatalogKind::sextactic);
  CHECK_FALSE(to_json(sx).contains("orbits"));
  CHECK(to_json(sx).at("entries").size() == 27);

  const Json cj = to_json(conic_catalog(CatalogKind::sextactic));
  CHECK(cj.at("conics").size() == 108);
  for (const auto& e : cj.at("conics")) REQUIRE(e.at("conic").size() == 6);

  const Json sj = to_json(shadow_census(CatalogKind::sextactic));
  CHECK(sj.at("total") == 540);
  CHECK(sj.at("strata").at("2") == 486);
  CHECK(sj.at("strata").at("6") == 36);
  CHECK(sj.at("strata").at("9") == 18);
  CHECK(sj.at("points").size() == 540);
}

TEST_CASE("CSV output is rectangular and matches its header") {
  auto column_counts = [](const std::string& csv) {
    std::vector<std::size_t> counts;
    std::size_t start = 0;
    while (start < csv.size()) {
      std::size_t end = csv.find('\n', start);
      if (end == std::string::npos) end = csv.size();
      const std::string line = csv.substr(start, end - start);
      if (!line.empty()) counts.push_back(std::count(line.begin(), line.end(), ',') + 1);
      start = end + 1;
    }
    return counts;
  };
  for (const std::string& csv :
       {render_csv(catalog_by_kind(CatalogKind::sextactic)),
        render_csv(tangent_analysis(CatalogKind::sextactic)),
        render_csv(conic_catalog(CatalogKind::sextactic)),
        render_csv(shadow_census(CatalogKind::sextactic))}) {
    const auto counts = column_counts(csv);
    REQUIRE(counts.size() > 1);
    for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] == counts[0]);
  }
  // field-element cells are ';'-joined so they never collide with the separator
  const std::string cell = fe_to_csv(fe_eps() + fe_mu().scaled(Rational(1, 2)));
  CHECK(cell.find(',') == std::string::npos);
  CHECK(cell.find(';') != std::string::npos);
}

TEST_CASE("serialized bytes are independent of worker thread count") {
  set_worker_threads(1);
  const std::string one = render_json(to_json(detail::build_conic_catalog(CatalogKind::sextactic)));
  set_worker_threads(3);
  const std::string three =
      render_json(to_json(detail::build_conic_catalog(CatalogKind::sextactic)));
  set_worker_threads(1);
  REQUIRE_FALSE(one.empty());
  CHECK(one == three);
}

TEST_CASE("verification report serializes with every check named once") {
  std::vector<VerifyCheck> fake;
  fake.push_back({"alpha_check", "anchor one", true, "expected x; computed x"});
  fake.push_back({"beta_check", "anchor two", false, "expected y; computed z"});
  const Json j = to_json(fake);
  CHECK(j.at("total") == 2);
  CHECK(j.at("failed") == 1);
  CHECK(j.at("checks")[0].at("name") == "alpha_check");
  CHECK(j.at("checks")[1].at("passed") == false);
  const std::string text = render_text(fake);
  CHECK(text.find("PASS  alpha_check") != std::string::npos);
  CHECK(text.find("FAIL  beta_check") != std::string::npos);
  CHECK(text.find("1 check(s) FAILED") != std::string::npos);
}
