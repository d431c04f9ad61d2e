#pragma once

// JSON / CSV / text renderings of the library's value types, plus the JSON
// parsers needed to reload them.  The JSON layer is the canonical format:
// serialize(parse(s)) == s for every document this library emits, and the
// emitted bytes depend only on the mathematical content (field order is
// fixed, indentation is fixed, no timestamps or environment data).
//
// Rationals are written as decimal strings ["num", "den"] so arbitrary
// magnitudes survive the trip; nothing is ever truncated to a double.

#include <array>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftl/arrangements.hpp"
#include "ftl/catalogs.hpp"
#include "ftl/elliptic.hpp"
#include "ftl/errors.hpp"
#include "ftl/homform.hpp"
#include "ftl/projective.hpp"
#include "ftl/tower.hpp"

namespace ftl {

using Json = nlohmann::ordered_json;

enum class OutputFormat { json, csv, text };

inline OutputFormat output_format_from_name(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw RejectedInput("unknown output format: " + s);
}

// ---------------------------------------------------------------------------
// Field elements

inline Json to_json(const FieldElement& x) {
  Json coeffs = Json::array();
  for (const Rational& c : x.coeffs())
    coeffs.push_back(Json::array({c.num_string(), c.den_string()}));
  return Json{{"tower", x.tower().id()}, {"coeffs", std::move(coeffs)}};
}

inline FieldElement fe_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("tower") || !j.contains("coeffs"))
    throw RejectedInput("field element: expected {tower, coeffs}");
  const Tower& t = tower_by_id(j.at("tower").get<std::string>());
  const Json& cs = j.at("coeffs");
  if (!cs.is_array() || cs.size() != t.dim())
    throw RejectedInput("field element: coefficient count does not match tower degree");
  std::vector<Rational> coeffs;
  coeffs.reserve(cs.size());
  for (const Json& c : cs) {
    if (!c.is_array() || c.size() != 2)
      throw RejectedInput("field element: coefficient must be [num, den]");
    coeffs.push_back(Rational::from_strings(c[0].get<std::string>(), c[1].get<std::string>()));
  }
  return FieldElement::from_coeffs(t, std::move(coeffs));
}

// CSV cell: coefficients joined by ';', each rational as num or num/den.
// ';' never collides with the CSV comma separator.
inline std::string fe_to_csv(const FieldElement& x) {
  std::string out;
  for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
    if (i) out += ';';
    out += x.coeff(i).to_string();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Points, conics, curves

inline Json to_json(const ProjPoint& p) {
  Json coords = Json::array();
  for (const FieldElement& c : p.coords()) coords.push_back(to_json(c));
  return Json{{"coords", std::move(coords)}};
}

inline ProjPoint point_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("coords") || !j.at("coords").is_array() ||
      j.at("coords").size() != 3)
    throw RejectedInput("point: expected {coords: [x, y, z]}");
  const Json& cs = j.at("coords");
  return ProjPoint(fe_from_json(cs[0]), fe_from_json(cs[1]), fe_from_json(cs[2]));
}

// Conics travel as the 6-entry coefficient list (a, b, c, d, e, f) of
// a x^2 + b y^2 + c z^2 + d xy + e xz + f yz.
inline Json to_json(const Conic& c) {
  Json out = Json::array();
  for (const FieldElement& k : c.coeffs()) out.push_back(to_json(k));
  return out;
}

inline Conic conic_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 6) throw RejectedInput("conic: expected 6 coefficients");
  std::array<FieldElement, 6> c = {fe_from_json(j[0]), fe_from_json(j[1]), fe_from_json(j[2]),
                                   fe_from_json(j[3]), fe_from_json(j[4]), fe_from_json(j[5])};
  return Conic(std::move(c));
}

inline Json to_json(const ECPoint& p) {
  if (p.is_infinity()) return Json{{"inf", true}};
  return Json{{"x", to_json(p.x())}, {"y", to_json(p.y())}};
}

// The point at infinity carries no coordinates, so the caller names the field.
inline ECPoint ecpoint_from_json(const Json& j, const Tower& t) {
  if (j.is_object() && j.contains("inf")) {
    if (j.at("inf").get<bool>() != true) throw RejectedInput("curve point: inf must be true");
    return ECPoint::infinity(t);
  }
  if (!j.is_object() || !j.contains("x") || !j.contains("y"))
    throw RejectedInput("curve point: expected {inf} or {x, y}");
  FieldElement x = fe_from_json(j.at("x")), y = fe_from_json(j.at("y"));
  if (&x.tower() != &t || &y.tower() != &t)
    throw RejectedInput("curve point: coordinates from the wrong field");
  return ECPoint::affine(std::move(x), std::move(y));
}

inline Json to_json(const HomForm& f) {
  Json out = Json::array();
  for (const auto& [k, c] : f.terms())
    out.push_back(Json{{"exps", Json::array({k[0], k[1], k[2]})}, {"coeff", to_json(c)}});
  return out;
}

inline HomForm homform_from_json(const Json& j, const Tower& t, int degree) {
  if (!j.is_array()) throw RejectedInput("form: expected a term list");
  HomForm f(t, degree);
  for (const Json& term : j) {
    if (!term.is_object() || !term.contains("exps") || !term.contains("coeff"))
      throw RejectedInput("form: each term needs {exps, coeff}");
    const Json& e = term.at("exps");
    if (!e.is_array() || e.size() != 3) throw RejectedInput("form: exps must be [i, j, k]");
    f.add_term({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()}, fe_from_json(term.at("coeff")));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Catalog documents

inline Json to_json(const PointCatalog& cat) {
  Json points = Json::array();
  for (const ProjPoint& p : cat.points) points.push_back(to_json(p));
  Json prov{{"generators", cat.generators}, {"checks", cat.checks}};
  return Json{{"kind", catalog_kind_name(cat.kind)},
              {"field", cat.field->id()},
              {"points", std::move(points)},
              {"provenance", std::move(prov)}};
}

inline PointCatalog catalog_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("field") || !j.contains("points") ||
      !j.contains("provenance"))
    throw RejectedInput("catalog: expected {kind, field, points, provenance}");
  PointCatalog cat;
  cat.kind = catalog_kind_from_name(j.at("kind").get<std::string>());
  cat.field = &tower_by_id(j.at("field").get<std::string>());
  for (const Json& p : j.at("points")) {
    ProjPoint q = point_from_json(p);
    if (&q.coords()[0].tower() != cat.field)
      throw RejectedInput("catalog: point field does not match catalog field");
    cat.points.push_back(std::move(q));
  }
  const Json& prov = j.at("provenance");
  cat.generators = prov.at("generators").get<std::vector<std::string>>();
  cat.checks = prov.at("checks").get<std::vector<std::string>>();
  return cat;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const TangentReport& rep) {
  Json entries = Json::array();
  for (const TangentEntry& e : rep.entries) {
    entries.push_back(Json{{"base", to_json(e.base)},
                           {"tangent", Json::array({to_json(e.tangent.coeffs()[0]),
                                                    to_json(e.tangent.coeffs()[1]),
                                                    to_json(e.tangent.coeffs()[2])})},
                           {"residual", to_json(e.residual)},
                           {"classification", e.classification}});
  }
  Json out{{"kind", catalog_kind_name(rep.kind)}, {"entries", std::move(entries)}};
  if (!rep.orbits.empty()) {
    Json orbits = Json::array();
    for (const auto& orb : rep.orbits)
      orbits.push_back(Json::array({to_json(orb[0]), to_json(orb[1]), to_json(orb[2])}));
    out["orbits"] = std::move(orbits);
  }
  return out;
}

inline Json to_json(const ConicCatalog& cc) {
  Json conics = Json::array();
  for (const OsculatingConic& oc : cc.conics) {
    conics.push_back(Json{{"conic", to_json(oc.conic)},
                          {"base1", to_json(oc.base1)},
                          {"base2", to_json(oc.base2)}});
  }
  return Json{{"kind", catalog_kind_name(cc.kind)}, {"conics", std::move(conics)}};
}

inline Json to_json(const ShadowCensus& census) {
  Json strata = Json::object();
  for (const auto& [mult, count] : census.strata) strata[std::to_string(mult)] = count;
  const int total = static_cast<int>(census.points.size());
  Json points = Json::array();
  for (const CensusEntry& e : census.points) {
    Json idx = Json::array();
    for (std::size_t i : e.conics) idx.push_back(i);
    points.push_back(Json{{"point", to_json(e.point)}, {"count", e.count}, {"conics", std::move(idx)}});
  }
  return Json{{"kind", catalog_kind_name(census.kind)},
              {"total", total},
              {"strata", std::move(strata)},
              {"points", std::move(points)}};
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

inline std::string point_csv(const ProjPoint& p) {
  return fe_to_csv(p.coords()[0]) + "," + fe_to_csv(p.coords()[1]) + "," + fe_to_csv(p.coords()[2]);
}

inline std::string point_text(const ProjPoint& p) {
  std::string out = "[";
  for (int i = 0; i < 3; ++i) {
    if (i) out += " : ";
    out += p.coords()[static_cast<std::size_t>(i)].to_string();
  }
  return out + "]";
}

}  // namespace detail

inline std::string render_csv(const PointCatalog& cat) {
  std::string out = "index,x,y,z\n";
  for (std::size_t i = 0; i < cat.points.size(); ++i)
    out += std::to_string(i) + "," + detail::point_csv(cat.points[i]) + "\n";
  return out;
}

inline std::string render_text(const PointCatalog& cat) {
  std::ostringstream os;
  os << catalog_kind_name(cat.kind) << " catalog over " << cat.field->id() << ": "
     << cat.points.size() << " points\n";
  for (std::size_t i = 0; i < cat.points.size(); ++i)
    os << "  " << i << ": " << detail::point_text(cat.points[i]) << "\n";
  return os.str();
}

inline std::string render_csv(const TangentReport& rep) {
  std::string out = "index,base_x,base_y,base_z,residual_x,residual_y,residual_z,classification\n";
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const TangentEntry& e = rep.entries[i];
    out += std::to_string(i) + "," + detail::point_csv(e.base) + "," +
           detail::point_csv(e.residual) + "," + e.classification + "\n";
  }
  return out;
}

inline std::string render_text(const TangentReport& rep) {
  std::ostringstream os;
  os << catalog_kind_name(rep.kind) << " tangent lines: " << rep.entries.size() << " entries";
  if (!rep.orbits.empty()) os << ", " << rep.orbits.size() << " residual orbits of size 3";
  os << "\n";
  for (const TangentEntry& e : rep.entries)
    os << "  " << detail::point_text(e.base) << "  ->  " << detail::point_text(e.residual) << "  ("
       << e.classification << ")\n";
  return os.str();
}

inline std::string render_csv(const ConicCatalog& cc) {
  std::string out =
      "index,a,b,c,d,e,f,base1_x,base1_y,base1_z,base2_x,base2_y,base2_z\n";
  for (std::size_t i = 0; i < cc.conics.size(); ++i) {
    const OsculatingConic& oc = cc.conics[i];
    out += std::to_string(i);
    for (const FieldElement& k : oc.conic.coeffs()) out += "," + fe_to_csv(k);
    out += "," + detail::point_csv(oc.base1) + "," + detail::point_csv(oc.base2) + "\n";
  }
  return out;
}

inline std::string render_text(const ConicCatalog& cc) {
  std::ostringstream os;
  os << catalog_kind_name(cc.kind) << " contact conics: " << cc.conics.size() << "\n";
  for (std::size_t i = 0; i < cc.conics.size(); ++i) {
    const OsculatingConic& oc = cc.conics[i];
    os << "  " << i << ": " << detail::point_text(oc.base1) << " + " << detail::point_text(oc.base2)
       << "\n";
  }
  return os.str();
}

inline std::string render_csv(const ShadowCensus& census) {
  std::string out = "index,x,y,z,count\n";
  for (std::size_t i = 0; i < census.points.size(); ++i) {
    const CensusEntry& e = census.points[i];
    out += std::to_string(i) + "," + detail::point_csv(e.point) + "," + std::to_string(e.count) +
           "\n";
  }
  return out;
}

inline std::string render_text(const ShadowCensus& census) {
  std::ostringstream os;
  os << catalog_kind_name(census.kind) << " census: " << census.points.size()
     << " points off the curve\n";
  os << "  strata:";
  for (const auto& [mult, count] : census.strata) os << " " << mult << "x" << count;
  os << "\n  ninefold split:";
  for (int n : census.ninefold_line_split) os << " " << n;
  os << "\n";
  return os.str();
}

}  // namespace ftl
