#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "factorlab/construct.hpp"
#include "factorlab/genfile.hpp"
#include "factorlab/tables.hpp"
#include "mutations.hpp"

using namespace factorlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("factorlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args, const std::string& env = "") {
  const char* cli = std::getenv("FACTORLAB_CLI");
  REQUIRE_MESSAGE(cli, "FACTORLAB_CLI must name the factorlab binary");
  fs::path err = scratch() / "stderr.txt";
  std::string cmd = env + " '" + std::string(cli) + "' " + args + " 2>'" + err.string() + "'";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = ::pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.err = slurp(err);
  return r;
}

void write_gens(const fs::path& path, const std::vector<GroupElem>& gens, const FieldPtr& F, int n) {
  write_genfile(path.string(), GenFile{F, n, gens});
}

}  // namespace

TEST_CASE("list and show") {
  Run a = run("list --table 2");
  CHECK(a.code == 0);
  CHECK(a.out.find("2.2.1") != std::string::npos);
  CHECK(a.out.find("1.1.1") == std::string::npos);
  Run j = run("list --table 8 --row 1 --format json");
  CHECK(j.code == 0);
  auto arr = nlohmann::json::parse(j.out);
  REQUIRE(arr.size() >= 1);
  CHECK(arr[0]["id"] == "8.1.1");
  CHECK(arr[0]["tier_b"] == true);
  Run s = run("show --table 2 --row 2");
  CHECK(s.code == 0);
  CHECK(s.out.find("LemUnitary09") != std::string::npos);
  CHECK(s.out.find("sp_in_su_norm1") != std::string::npos);
  CHECK(run("show").code == 2);
}

TEST_CASE("verify one case") {
  Run a = run("verify --table 2 --row 2 --bind m=2 --bind q=2");
  CHECK(a.code == 0);
  CHECK(a.out.rfind("PASS  2.2.1 m=2 q=2", 0) == 0);
  CHECK(a.out.find("pass=1 fail=0") != std::string::npos);
  Run b = run("verify --table 2 --row 2 --bind m=2 --bind q=2 --tier b --format json");
  CHECK(b.code == 0);
  auto j = nlohmann::json::parse(b.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["status"] == "PASS");
  CHECK(j[0]["computed"]["orbitSize"] == "120");
  CHECK(j[0]["computed"]["Int"] == "6");
  CHECK_FALSE(j[0].contains("elapsed_ms"));
  CHECK(b.err.find("pass=1") != std::string::npos);
  Run t = run("verify --table 2 --row 2 --bind m=2 --bind q=2 --format json --timing");
  CHECK(nlohmann::json::parse(t.out)[0].contains("elapsed_ms"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("verify --bind m=2").code == 2);
  CHECK(run("verify --table 2 --bind zz=1").code == 2);
  CHECK(run("verify --table 2 --bind m").code == 2);
  CHECK(run("verify --table 2 --bind m=x").code == 2);
  CHECK(run("sweep --tier c").code == 2);
  CHECK(run("sweep --max-order banana").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("check-triple a.json b.json").code == 2);
}

TEST_CASE("sweeps write JSON and are reproducible") {
  fs::path o1 = scratch() / "s1.json", o2 = scratch() / "s2.json", o3 = scratch() / "s3.json";
  Run a = run("sweep --table 2 --tier b --seed 5 --format json --out '" + o1.string() + "'");
  Run b = run("sweep --table 2 --tier b --seed 5 --jobs 2 --format json --out '" + o2.string() + "'");
  Run c = run("sweep --table 2 --tier b --seed 6 --format json --out '" + o3.string() + "'");
  CHECK(a.code == 0);
  CHECK(a.out.empty());
  CHECK(a.err.find("fail=0") != std::string::npos);
  CHECK(slurp(o1) == slurp(o2));
  auto x = nlohmann::json::parse(slurp(o1)), y = nlohmann::json::parse(slurp(o3));
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i].erase("seed");
    y[i].erase("seed");
  }
  CHECK(x == y);
  Run t = run("sweep --table 1 --max-order 1e12");
  CHECK(t.code == 0);
  CHECK(t.out.find("tables=1") != std::string::npos);
}

TEST_CASE("a failing case exits with 1") {
  auto m = shape_mutations()[0];
  fs::path db = scratch() / "mutated.json";
  std::ofstream(db) << mutated_source(load_db().source, m).dump(1);
  Run r = run("verify --table 1 --row 1 --sub 1 --bind a=2 --bind b=2 --bind q=2", "FACTORLAB_DB='" + db.string() + "'");
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL(identity)") != std::string::npos);
  fs::path broken = scratch() / "broken.json";
  std::ofstream(broken) << "{";
  CHECK(run("list", "FACTORLAB_DB='" + broken.string() + "'").code == 2);
}

TEST_CASE("export-db round-trips") {
  Run r = run("export-db");
  CHECK(r.code == 0);
  CHECK(nlohmann::ordered_json::parse(r.out) == load_db().source);
}

TEST_CASE("check-triple") {
  auto F = field_of_order(3);
  Subgroup gl = gens_classical("GL", 2, 3), sl = gens_classical("SL", 2, 3);
  GroupElem u = GroupElem::identity(F, 2), d = GroupElem::identity(F, 2);
  u.mat.at(0, 1) = 1;
  d.mat.at(0, 0) = 2;
  fs::path g = scratch() / "g.json", h = scratch() / "h.json", k = scratch() / "k.json";
  write_gens(g, gl.gens, F, 2);
  write_gens(h, sl.gens, F, 2);
  write_gens(k, {u, d}, F, 2);
  Run yes = run("check-triple '" + g.string() + "' '" + h.string() + "' '" + k.string() + "'");
  CHECK(yes.code == 0);
  CHECK(yes.out.rfind("FACTORIZES", 0) == 0);
  Run no = run("check-triple --format json '" + g.string() + "' '" + k.string() + "' '" + k.string() + "'");
  CHECK(no.code == 1);
  auto j = nlohmann::json::parse(no.out);
  CHECK(j["factorizes"] == false);
  CHECK(j["Int"] == "6");
  Run missing = run("check-triple '" + g.string() + "' '" + h.string() + "' /nonexistent.json");
  CHECK(missing.code == 2);
  fs::path f5 = scratch() / "f5.json";
  write_gens(f5, gens_classical("SL", 2, 5).gens, field_of_order(5), 2);
  CHECK(run("check-triple '" + g.string() + "' '" + f5.string() + "' '" + k.string() + "'").code == 2);
}

TEST_CASE("bundled example generator files") {
  fs::path ex = fs::path(FACTORLAB_SOURCE_DIR) / "docs" / "examples";
  REQUIRE(fs::exists(ex / "sl4_2.json"));
  Run r = run("check-triple '" + (ex / "sl4_2.json").string() + "' '" + (ex / "sigmal2_4.json").string() + "' '" +
              (ex / "antiflag_stabilizer.json").string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("Int=1 ") != std::string::npos);
}
