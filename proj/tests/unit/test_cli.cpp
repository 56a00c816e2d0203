#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wkm/cli.hpp"
#include "wkm/io.hpp"
#include "wkm/sensor.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = wkm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(WKM_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "wkm_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("cluster on the four-point line") {
  const auto r = run({"cluster", "--input", data("line4.csv"), "--k", "2", "--epsilon", "0.5", "--seed", "0"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["cost"].get<double>() <= 1.5 + 1e-12);
  CHECK(j.contains("wall_seconds"));
  CHECK(j["result"]["solver"] == "ptas");
}

TEST_CASE("cluster defaults reproduce the documented example") {
  const auto r = run({"cluster"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["result"]["cost"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cluster solvers and formats") {
  for (const char* solver : {"oracle", "kmeanspp-lloyd"}) {
    const auto r = run({"cluster", "--solver", solver, "--omit-timing"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["cost"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!j.contains("wall_seconds"));
  }
  const auto csv = run({"cluster", "--solver", "oracle", "--format", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream in(csv.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x1,weight,cluster");
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);) rows.push_back(line.substr(line.rfind(',') + 1));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == rows[1]);
  CHECK(rows[2] == rows[3]);
  CHECK(rows[0] != rows[2]);
}

TEST_CASE("cluster writes to --output") {
  const auto path = scratch("cluster.json");
  fs::remove(path);
  REQUIRE(run({"cluster", "--output", path.string(), "--omit-timing"}).code == 0);
  CHECK(nlohmann::json::parse(slurp(path))["result"]["cost"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run({"cluster", "--input", "/nonexistent.csv"}).code == 2);
  CHECK(run({"cluster", "--k", "0"}).code == 2);
  CHECK(run({"cluster", "--epsilon", "1.5"}).code == 2);
  CHECK(run({"cluster", "--format", "xml"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"bench", "--repeat", "0"}).code == 2);
  CHECK(run({"bench", "--solvers", "magic"}).code == 2);
  CHECK(run({"verify", "--only", "nonsense"}).code == 2);
  CHECK(run({"sensor", "--region", "/nonexistent.json"}).code == 2);

  const auto bad = scratch("bad.csv");
  std::ofstream(bad) << "x1,weight\n1,1\n2,-1\n";
  const auto r = run({"cluster", "--input", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);

  const auto concave = scratch("concave.json");
  std::ofstream(concave) << R"({"polygon": [[0,0],[2,0],[1,0.5],[2,2],[0,2]], "density": {"type": "uniform"}})";
  const auto c = run({"sensor", "--region", concave.string()});
  CHECK(c.code == 2);
  CHECK(c.err.find("region must be convex") != std::string::npos);
}

TEST_CASE("an infeasible exhaustive search exits with code 3") {
  const auto big = scratch("big.csv");
  {
    std::ofstream f(big);
    f << "x1,x2,weight\n";
    for (int i = 0; i < 30; ++i) f << i << ',' << (i * 7) % 11 << ",1\n";
  }
  const auto r = run({"cluster", "--input", big.string(), "--k", "3", "--epsilon", "0.1", "--exhaustive"});
  CHECK(r.code == 3);
  CHECK(r.err.find("hint:") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"cluster", "--help"}).code == 0);
}

TEST_CASE("sensor on the unit square") {
  const auto r = run({"sensor", "--k", "1", "--omit-timing"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out)["placement"];
  const auto c = j["centers"][0];
  CHECK(std::hypot(c[0].get<double>() - 0.5, c[1].get<double>() - 0.5) <= 0.02);
  CHECK(j["coverage_cost"].get<double>() <= 1.5 / 6 + 1e-6);
  CHECK(j["coverage_cost"].get<double>() ==
        doctest::Approx(j["weighted_cost"].get<double>() + j["inertia"].get<double>()).epsilon(1e-6));
}

TEST_CASE("sensor export round trip reproduces the weighted cost") {
  const auto report = scratch("hex.json");
  const auto points = scratch("hex.json.points.csv");
  fs::remove(points);
  const auto r = run({"sensor", "--region", data("gaussian_hexagon.json"), "--k", "3", "--output", report.string()});
  REQUIRE(r.code == 0);
  REQUIRE(fs::exists(points));
  const auto j = nlohmann::json::parse(slurp(report))["placement"];
  wkm::CenterSet centers(2);
  for (const auto& c : j["centers"]) centers.add(std::vector<double>{c[0].get<double>(), c[1].get<double>()});
  const double cost = wkm::weighted_cost(wkm::load_points_csv(points), centers);
  CHECK(cost == doctest::Approx(j["weighted_cost"].get<double>()).epsilon(1e-12));

  const auto csv = run({"sensor", "--region", data("gaussian_hexagon.json"), "--format", "csv"});
  REQUIRE(csv.code == 0);
  std::istringstream in(csv.out);
  CHECK(wkm::read_points_csv(in).size() == j["cells"].get<std::size_t>());
}

TEST_CASE("a grid as coarse as the region triggers a warning") {
  const auto r = run({"sensor", "--grid-eps", "1", "--omit-timing"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
}

TEST_CASE("verify passes and honours its options") {
  const auto r = run({"verify"});
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);

  const auto strict = run({"verify", "--only", "parallel-axis", "--parallel-axis-tol", "1e-20"});
  CHECK(strict.code == 1);
  CHECK(strict.out.find("FAIL  parallel-axis") != std::string::npos);

  const auto j = run({"verify", "--only", "first-draw,decomposition", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["passed"] == true);
  for (const auto& c : doc["checks"]) CHECK((c["group"] == "first-draw" || c["group"] == "decomposition"));
}

TEST_CASE("bench emits the long-format matrix") {
  const auto r = run({"bench", "--repeat", "2", "--solvers", "kmeanspp-lloyd,oracle"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "instance,solver,seed,cost,oracle_cost,ratio,wall_seconds");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find(",oracle,") != std::string::npos) {
      const auto parts = [&] {
        std::vector<std::string> v;
        std::stringstream s(line);
        for (std::string f; std::getline(s, f, ',');) v.push_back(f);
        return v;
      }();
      CHECK(parts[5] == "1");
    }
  }
  CHECK(rows > 0);
  CHECK(rows % 4 == 0);

  const auto custom = run({"bench", "--input", data("line4.csv"), "--k", "2", "--repeat", "3", "--solvers", "ptas"});
  REQUIRE(custom.code == 0);
  CHECK(custom.out.find("line4,ptas,2,") != std::string::npos);
}

TEST_CASE("equal seeds give byte-identical output for any thread count") {
  const auto a = run({"cluster", "--seed", "7", "--omit-timing", "--threads", "1"});
  const auto b = run({"cluster", "--seed", "7", "--omit-timing", "--threads", "8"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto s1 = run({"sensor", "--region", data("gaussian_hexagon.json"), "--k", "2", "--omit-timing", "--threads", "1"});
  const auto s8 = run({"sensor", "--region", data("gaussian_hexagon.json"), "--k", "2", "--omit-timing", "--threads", "8"});
  REQUIRE(s1.code == 0);
  CHECK(s1.out == s8.out);
}
