// Command-line front end.
//
//   ftl catalog  {flex|sextactic|type9}   write/refresh the point catalog
//   ftl tangents {sextactic|type9}        tangent lines and their residuals
//   ftl conics   {sextactic|type9}        the six-contact conic catalog
//   ftl census   {sextactic|type9}        the global residual-point census
//   ftl verify --all                      every headline fact, recomputed
//
// Common flags: --out DIR (default $FTL_OUT, else "."), --format json|csv|text,
// --threads N, --no-cache.  Exit codes: 0 ok, 1 a verification failed, 2 bad
// usage, 3 I/O trouble.  Output bytes depend only on the mathematical content,
// never on thread count or timing.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftl/arrangements.hpp"
#include "ftl/catalogs.hpp"
#include "ftl/errors.hpp"
#include "ftl/parallel.hpp"
#include "ftl/serialize.hpp"
#include "ftl/verify.hpp"

namespace {

namespace fs = std::filesystem;

struct RunConfig {
  fs::path out_dir;
  ftl::OutputFormat format = ftl::OutputFormat::json;
  unsigned threads = 1;
  bool use_cache = true;
};

// FNV-1a, the sidecar fingerprint for cached catalog files.
std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::ios_base::failure("cannot read " + p.string());
  return ss.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + p.string() + " for writing");
  out << bytes;
  out.flush();
  if (!out.good()) throw std::ios_base::failure("cannot write " + p.string());
}

fs::path catalog_path(const RunConfig& cfg, ftl::CatalogKind kind) {
  return cfg.out_dir / ("catalog_" + ftl::catalog_kind_name(kind) + ".json");
}

fs::path checksum_path(const fs::path& payload) {
  fs::path p = payload;
  p += ".fnv1a";
  return p;
}

// A cached catalog file is trusted only after it passes revalidation:
// checksum, parse, declared kind, expected size, and on-curve membership of a
// sample of its points.  Any miss is reported; the caller decides whether to
// rebuild or to fail loudly.
std::optional<std::string> cache_problem(const fs::path& file, ftl::CatalogKind kind) {
  if (!fs::exists(file)) return "missing";
  if (!fs::exists(checksum_path(file))) return "missing checksum sidecar";
  std::string payload, sum;
  try {
    payload = read_file(file);
    sum = read_file(checksum_path(file));
  } catch (const std::exception& e) {
    return std::string("unreadable: ") + e.what();
  }
  std::ostringstream want;
  want << std::hex << fnv1a(payload) << "\n";
  if (sum != want.str()) return "checksum mismatch";
  ftl::PointCatalog parsed;
  try {
    parsed = ftl::catalog_from_json(ftl::Json::parse(payload));
  } catch (const std::exception& e) {
    return std::string("unparsable: ") + e.what();
  }
  if (parsed.kind != kind) return "wrong catalog kind";
  const ftl::PointCatalog& fresh = ftl::catalog_by_kind(kind);
  if (parsed.points.size() != fresh.points.size()) return "wrong point count";
  const ftl::HomForm F = ftl::fermat_cubic(*parsed.field);
  const std::size_t step = parsed.points.size() > 12 ? parsed.points.size() / 12 : 1;
  for (std::size_t i = 0; i < parsed.points.size(); i += step) {
    if (!ftl::hom_eval(F, parsed.points[i]).is_zero()) return "point off the curve";
  }
  return std::nullopt;
}

int cmd_catalog(const RunConfig& cfg, ftl::CatalogKind kind) {
  const ftl::PointCatalog& cat = ftl::catalog_by_kind(kind);
  const fs::path file = catalog_path(cfg, kind);
  fs::create_directories(cfg.out_dir);

  if (cfg.use_cache && fs::exists(file)) {
    if (auto problem = cache_problem(file, kind)) {
      std::cerr << "cached catalog " << file.string() << " failed revalidation: " << *problem
                << "\n";
      return 3;
    }
    std::cout << "catalog " << ftl::catalog_kind_name(kind) << ": " << cat.points.size()
              << " points, cache valid at " << file.string() << "\n";
    return 0;
  }

  const std::string payload = ftl::render_json(ftl::to_json(cat));
  std::ostringstream sum;
  sum << std::hex << fnv1a(payload) << "\n";
  write_file(file, payload);
  write_file(checksum_path(file), sum.str());

  if (cfg.format == ftl::OutputFormat::csv) {
    fs::path alt = cfg.out_dir / ("catalog_" + ftl::catalog_kind_name(kind) + ".csv");
    write_file(alt, ftl::render_csv(cat));
  } else if (cfg.format == ftl::OutputFormat::text) {
    std::cout << ftl::render_text(cat);
  }
  std::cout << "catalog " << ftl::catalog_kind_name(kind) << ": " << cat.points.size()
            << " points written to " << file.string() << "\n";
  return 0;
}

int cmd_tangents(const RunConfig& cfg, ftl::CatalogKind kind) {
  const ftl::TangentReport rep = ftl::tangent_analysis(kind);
  fs::create_directories(cfg.out_dir);
  const std::string stem = "tangents_" + ftl::catalog_kind_name(kind);
  switch (cfg.format) {
    case ftl::OutputFormat::json:
      write_file(cfg.out_dir / (stem + ".json"), ftl::render_json(ftl::to_json(rep)));
      break;
    case ftl::OutputFormat::csv:
      write_file(cfg.out_dir / (stem + ".csv"), ftl::render_csv(rep));
      break;
    case ftl::OutputFormat::text:
      std::cout << ftl::render_text(rep);
      return 0;
  }
  std::cout << stem << ": " << rep.entries.size() << " entries";
  if (!rep.orbits.empty()) std::cout << ", " << rep.orbits.size() << " orbits";
  std::cout << "\n";
  return 0;
}

int cmd_conics(const RunConfig& cfg, ftl::CatalogKind kind) {
  const ftl::ConicCatalog& cc = ftl::conic_catalog(kind);
  fs::create_directories(cfg.out_dir);
  const std::string stem = "conics_" + ftl::catalog_kind_name(kind);
  switch (cfg.format) {
    case ftl::OutputFormat::json:
      write_file(cfg.out_dir / (stem + ".json"), ftl::render_json(ftl::to_json(cc)));
      break;
    case ftl::OutputFormat::csv:
      write_file(cfg.out_dir / (stem + ".csv"), ftl::render_csv(cc));
      break;
    case ftl::OutputFormat::text:
      std::cout << ftl::render_text(cc);
      return 0;
  }
  std::cout << stem << ": " << cc.conics.size() << " conics\n";
  return 0;
}

int cmd_census(const RunConfig& cfg, ftl::CatalogKind kind) {
  const ftl::ShadowCensus& census = ftl::shadow_census(kind);
  fs::create_directories(cfg.out_dir);
  const std::string stem = "census_" + ftl::catalog_kind_name(kind);
  switch (cfg.format) {
    case ftl::OutputFormat::json:
      write_file(cfg.out_dir / (stem + ".json"), ftl::render_json(ftl::to_json(census)));
      break;
    case ftl::OutputFormat::csv:
      write_file(cfg.out_dir / (stem + ".csv"), ftl::render_csv(census));
      break;
    case ftl::OutputFormat::text:
      std::cout << ftl::render_text(census);
      return 0;
  }
  std::cout << stem << ": " << census.points.size() << " points\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  std::vector<ftl::VerifyCheck> checks = ftl::verify_all();

  // When cached catalog files are present, their integrity joins the report:
  // a tampered file must be caught, a clean one must revalidate.
  for (ftl::CatalogKind kind :
       {ftl::CatalogKind::flex, ftl::CatalogKind::sextactic, ftl::CatalogKind::type9}) {
    const fs::path file = catalog_path(cfg, kind);
    if (!cfg.use_cache || !fs::exists(file)) continue;
    ftl::VerifyCheck c;
    c.name = "cache_integrity_" + ftl::catalog_kind_name(kind);
    c.anchor = "cached catalog file revalidates against a fresh computation";
    auto problem = cache_problem(file, kind);
    c.passed = !problem.has_value();
    c.witness = problem ? "expected a valid cache; found: " + *problem
                        : "expected a valid cache; revalidated " + file.string();
    checks.push_back(std::move(c));
  }

  if (cfg.format == ftl::OutputFormat::json) {
    std::cout << ftl::render_json(ftl::to_json(checks));
  } else {
    std::cout << ftl::render_text(checks);
  }
  for (const ftl::VerifyCheck& c : checks)
    if (!c.passed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic for the special points of the Fermat cubic and"
               " their tangent/conic arrangements"};
  app.require_subcommand(1);

  std::string out_dir = [] {
    const char* env = std::getenv("FTL_OUT");
    return std::string(env && *env ? env : ".");
  }();
  std::string format = "json";
  unsigned threads = 1;
  bool no_cache = false;
  app.add_option("--out", out_dir, "output directory (default: $FTL_OUT or .)");
  app.add_option("--format", format, "json, csv, or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--no-cache", no_cache, "ignore and overwrite cached files");

  app.fallthrough();  // let --out etc. appear after the subcommand name

  std::string catalog_kind, tangents_kind, conics_kind, census_kind;
  CLI::App* sc_catalog = app.add_subcommand("catalog", "write a point catalog");
  sc_catalog->add_option("kind", catalog_kind, "flex, sextactic, or type9")
      ->required()
      ->check(CLI::IsMember({"flex", "sextactic", "type9"}));
  CLI::App* sc_tangents = app.add_subcommand("tangents", "tangent lines and residuals");
  sc_tangents->add_option("kind", tangents_kind, "sextactic or type9")
      ->required()
      ->check(CLI::IsMember({"sextactic", "type9"}));
  CLI::App* sc_conics = app.add_subcommand("conics", "six-contact conic catalog");
  sc_conics->add_option("kind", conics_kind, "sextactic or type9")
      ->required()
      ->check(CLI::IsMember({"sextactic", "type9"}));
  CLI::App* sc_census = app.add_subcommand("census", "global residual-point census");
  sc_census->add_option("kind", census_kind, "sextactic or type9")
      ->required()
      ->check(CLI::IsMember({"sextactic", "type9"}));
  CLI::App* sc_verify = app.add_subcommand("verify", "recompute and check every headline fact");
  bool verify_all_flag = false;
  sc_verify->add_flag("--all", verify_all_flag, "run the full check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0; every parse failure is a usage error
  }

  RunConfig cfg;
  cfg.out_dir = out_dir;
  cfg.format = ftl::output_format_from_name(format);
  cfg.threads = threads;
  cfg.use_cache = !no_cache;
  ftl::set_worker_threads(threads);

  try {
    if (sc_catalog->parsed())
      return cmd_catalog(cfg, ftl::catalog_kind_from_name(catalog_kind));
    if (sc_tangents->parsed())
      return cmd_tangents(cfg, ftl::catalog_kind_from_name(tangents_kind));
    if (sc_conics->parsed()) return cmd_conics(cfg, ftl::catalog_kind_from_name(conics_kind));
    if (sc_census->parsed()) return cmd_census(cfg, ftl::catalog_kind_from_name(census_kind));
    if (sc_verify->parsed()) {
      if (!verify_all_flag) {
        std::cerr << "verify requires --all\n";
        return 2;
      }
      return cmd_verify(cfg);
    }
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const ftl::RejectedInput& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return 2;
  } catch (const ftl::Error& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
