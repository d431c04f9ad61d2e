// End-to-end tests of the command-line driver, run as a child process.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "ftl/serialize.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = FTL_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("ftl_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("catalog command writes a parsable, correctly sized file") {
  TempDir dir;
  REQUIRE(run("catalog type9 --out " + dir.str()) == 0);
  const fs::path file = dir.path / "catalog_type9.json";
  REQUIRE(fs::exists(file));
  REQUIRE(fs::exists(dir.path / "catalog_type9.json.fnv1a"));
  const ftl::PointCatalog cat = ftl::catalog_from_json(ftl::Json::parse(slurp(file)));
  CHECK(cat.kind == ftl::CatalogKind::type9);
  CHECK(cat.points.size() == 72);
  CHECK(cat.field->id() == "Q_alpha_beta");
}

TEST_CASE("catalog reruns are idempotent and byte-stable") {
  TempDir dir;
  REQUIRE(run("catalog sextactic --out " + dir.str()) == 0);
  const fs::path file = dir.path / "catalog_sextactic.json";
  const std::string first = slurp(file);
  // warm rerun revalidates, leaves bytes alone
  REQUIRE(run("catalog sextactic --out " + dir.str()) == 0);
  CHECK(slurp(file) == first);
  // forced rebuild reproduces the same bytes
  REQUIRE(run("catalog sextactic --out " + dir.str() + " --no-cache") == 0);
  CHECK(slurp(file) == first);
}

TEST_CASE("corrupted cache files are refused, not silently accepted") {
  TempDir dir;
  REQUIRE(run("catalog flex --out " + dir.str()) == 0);
  const fs::path file = dir.path / "catalog_flex.json";

  SECTION("payload tampering breaks the checksum") {
    std::ofstream(file, std::ios::app) << " ";
    CHECK(run("catalog flex --out " + dir.str()) == 3);
  }
  SECTION("checksum-consistent tampering is caught by revalidation") {
    // swap in a different catalog body with a matching sidecar
    std::string other;
    {
      TempDir dir2;
      REQUIRE(run("catalog sextactic --out " + dir2.str()) == 0);
      other = slurp(dir2.path / "catalog_sextactic.json");
      fs::copy_file(dir2.path / "catalog_sextactic.json.fnv1a",
                    dir.path / "catalog_flex.json.fnv1a",
                    fs::copy_options::overwrite_existing);
    }
    std::ofstream(file, std::ios::trunc | std::ios::binary) << other;
    CHECK(run("catalog flex --out " + dir.str()) == 3);
  }
  SECTION("missing sidecar") {
    fs::remove(dir.path / "catalog_flex.json.fnv1a");
    CHECK(run("catalog flex --out " + dir.str()) == 3);
  }
  SECTION("--no-cache overwrites the damage") {
    std::ofstream(file, std::ios::app) << "junk";
    CHECK(run("catalog flex --out " + dir.str() + " --no-cache") == 0);
    CHECK(run("catalog flex --out " + dir.str()) == 0);
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("catalog") == 2);
  CHECK(run("catalog nonsense") == 2);
  CHECK(run("tangents flex") == 2);          // flexes have no tangent report
  CHECK(run("census sextactic --format yaml") == 2);
  CHECK(run("verify") == 2);                 // requires --all
  CHECK(run("--help") == 0);                 // help is not an error
}

TEST_CASE("tangents and conics emit the expected documents") {
  TempDir dir;
  REQUIRE(run("tangents sextactic --out " + dir.str()) == 0);
  const ftl::Json tj = ftl::Json::parse(slurp(dir.path / "tangents_sextactic.json"));
  CHECK(tj.at("entries").size() == 27);
  for (const auto& e : tj.at("entries")) CHECK(e.at("classification") == "flex");

  REQUIRE(run("conics sextactic --out " + dir.str() + " --format csv") == 0);
  const std::string csv = slurp(dir.path / "conics_sextactic.csv");
  CHECK(csv.rfind("index,a,b,c,d,e,f,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 109);  // header + 108 rows
}

TEST_CASE("census output is byte-identical across thread counts") {
  TempDir one, four;
  REQUIRE(run("census sextactic --out " + one.str() + " --threads 1") == 0);
  REQUIRE(run("census sextactic --out " + four.str() + " --threads 4") == 0);
  const std::string a = slurp(one.path / "census_sextactic.json");
  const std::string b = slurp(four.path / "census_sextactic.json");
  REQUIRE_FALSE(a.empty());
  CHECK(a == b);
  const ftl::Json j = ftl::Json::parse(a);
  CHECK(j.at("total") == 540);
}

TEST_CASE("FTL_OUT provides the default output directory") {
  TempDir dir;
  const std::string cmd = "FTL_OUT=\"" + dir.str() + "\" \"" + kCli +
                          "\" catalog flex > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(dir.path / "catalog_flex.json"));
}
