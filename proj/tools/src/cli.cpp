#include "wkm/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wkm/baselines.hpp"
#include "wkm/error.hpp"
#include "wkm/instances.hpp"
#include "wkm/io.hpp"
#include "wkm/oracle.hpp"
#include "wkm/ptas.hpp"
#include "wkm/random.hpp"
#include "wkm/sensor.hpp"
#include "wkm/verify.hpp"

#ifndef WKM_DATA_DIR
#define WKM_DATA_DIR "data"
#endif

namespace wkm::cli {

namespace {

// The command line runs the PTAS at desk scale unless --c1/--c2 say otherwise.
// With the library constants (800, 100) a random M-subset of the N draws almost
// never lies inside one cluster, so a budgeted tuple search degenerates to the
// global centroid.
constexpr double kDeskC1 = 8.0;
constexpr double kDeskC2 = 4.0;

struct Config {
  std::string input;
  std::string region;
  std::string output;
  std::string format;
  std::string export_points;
  long long k = 2;
  double epsilon = 0.5;
  std::optional<double> grid_eps;
  std::string solver = "ptas";
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> tuple_budget;
  bool exhaustive = false;
  bool adjust_epsilon = false;
  bool share_samples = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool omit_timing = false;
  std::vector<std::string> only;
  double parallel_axis_tol = 1e-9;
  long long repeat = 20;
  std::vector<std::string> solvers{"ptas", "kmeanspp", "kmeanspp-lloyd"};
};

class Stopwatch {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

unsigned thread_count(const Config& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::size_t checked_k(const Config& cfg) {
  if (cfg.k <= 0) throw InputError("k must be positive");
  return static_cast<std::size_t>(cfg.k);
}

PtasOverrides overrides(const Config& cfg) {
  PtasOverrides o;
  o.c1 = cfg.c1.value_or(kDeskC1);
  o.c2 = cfg.c2.value_or(kDeskC2);
  o.trials = cfg.trials;
  o.tuple_budget = cfg.tuple_budget;
  o.exhaustive = cfg.exhaustive;
  o.adjust_epsilon = cfg.adjust_epsilon;
  o.share_samples = cfg.share_samples;
  o.threads = thread_count(cfg);
  return o;
}

void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

std::string with_timing(nlohmann::json doc, const Config& cfg, double seconds) {
  if (!cfg.omit_timing) doc["wall_seconds"] = seconds;
  return doc.dump(2) + "\n";
}

void add_ptas_flags(CLI::App& cmd, Config& cfg) {
  cmd.add_option("--c1", cfg.c1, "sample-size constant: N = ceil(c1 k / eps^2) [8]")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--c2", cfg.c2, "subset-size constant: M = ceil(c2 / eps) [4]")->check(CLI::PositiveNumber);
  cmd.add_option("--trials", cfg.trials, "independent trials [2^k]")->check(CLI::PositiveNumber);
  auto* budget = cmd.add_option("--tuple-budget", cfg.tuple_budget, "random candidate tuples per trial [2000]")
                     ->check(CLI::PositiveNumber);
  cmd.add_flag("--exhaustive", cfg.exhaustive, "enumerate every candidate tuple")->excludes(budget);
  cmd.add_flag("--adjust-epsilon", cfg.adjust_epsilon, "run at eps / ((1 + eps/2) k)");
  cmd.add_flag("--share-samples", cfg.share_samples, "reuse samples across tuples with a common prefix");
  cmd.add_option("--threads", cfg.threads, "worker threads; results do not depend on it [all cores]");
}

ClusteringResult cluster_with(const std::string& solver, const WeightedPointSet& points, std::size_t k,
                              const Config& cfg, std::uint64_t seed, const PtasOverrides& ptas) {
  if (solver == "ptas") return solve(points, k, cfg.epsilon, ptas, seed);
  if (solver == "oracle") {
    const ExactResult exact = brute_force_opt(points, k);
    RunMeta meta;
    meta.solver = "oracle";
    meta.seed = seed;
    meta.params = {{"k", std::to_string(k)}};
    meta.iterations = exact.partitions_evaluated;
    return evaluate(points, exact.centers, std::move(meta));
  }
  RandomSource rng(seed);
  const CenterSet init = kmeanspp_seed(points, k, rng);
  if (solver == "kmeanspp") {
    RunMeta meta;
    meta.solver = "kmeanspp";
    meta.seed = seed;
    meta.params = {{"k", std::to_string(k)}};
    return evaluate(points, init, std::move(meta));
  }
  ClusteringResult result = lloyd_descend(points, init);
  result.meta.solver = "kmeanspp-lloyd";
  result.meta.seed = seed;
  result.meta.params.insert(result.meta.params.begin(), {"k", std::to_string(k)});
  return result;
}

int cmd_cluster(const Config& cfg, std::ostream& out, std::ostream& err) {
  const WeightedPointSet points = load_points_csv(cfg.input);
  const std::size_t k = checked_k(cfg);
  const Stopwatch clock;
  ClusteringResult result;
  try {
    result = cluster_with(cfg.solver, points, k, cfg, cfg.seed, overrides(cfg));
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << "\n";
    if (cfg.solver == "ptas") err << "hint: drop --exhaustive or lower it with --tuple-budget N\n";
    return kExitFeasibility;
  }
  const double seconds = clock.seconds();

  if (cfg.format == "csv") {
    std::ostringstream csv;
    for (std::size_t j = 0; j < points.dim(); ++j) csv << 'x' << (j + 1) << ',';
    csv << "weight,cluster\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (double x : points.point(i)) csv << format_number(x) << ',';
      csv << format_number(points.weight(i)) << ',' << result.assignment[i] << '\n';
    }
    emit(cfg.output, out, csv.str());
  } else {
    emit(cfg.output, out, with_timing({{"result", result_to_json(result)}}, cfg, seconds));
  }
  return kExitOk;
}

int cmd_sensor(const Config& cfg, std::ostream& out, std::ostream& err) {
  const RegionFile file = load_region(cfg.region);
  PlacementOptions options;
  options.k = checked_k(cfg);
  options.epsilon = cfg.epsilon;
  options.grid_eps = cfg.grid_eps.value_or(file.grid_eps.value_or(options.grid_eps));
  options.solver = cfg.solver == "ptas" ? SensorSolver::ptas : SensorSolver::kmeanspp_lloyd;
  options.seed = cfg.seed;
  options.ptas = overrides(cfg);

  const Stopwatch clock;
  const Placement placement = place_sensors(file.region, options);
  const double seconds = clock.seconds();
  for (const auto& w : placement.warnings) err << "warning: " << w << "\n";

  if (cfg.format == "csv") {
    std::ostringstream csv;
    write_points_csv(csv, placement.discretization.as_point_set());
    emit(cfg.output, out, csv.str());
    return kExitOk;
  }
  emit(cfg.output, out, with_timing({{"placement", placement_to_json(placement)}}, cfg, seconds));
  std::string export_path = cfg.export_points;
  if (export_path.empty() && !cfg.output.empty() && cfg.output != "-") export_path = cfg.output + ".points.csv";
  if (!export_path.empty()) save_points_csv(export_path, placement.discretization.as_point_set());
  return kExitOk;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  VerifyOptions options;
  options.seed = cfg.seed;
  options.parallel_axis_tol = cfg.parallel_axis_tol;
  options.only = cfg.only;
  const auto checks = run_verification(options);
  bool all = true;
  for (const auto& c : checks) all = all && c.passed;

  if (cfg.format == "json") {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks) {
      list.push_back({{"group", c.group},
                      {"name", c.name},
                      {"statistic", c.statistic},
                      {"comparison", c.comparison},
                      {"threshold", c.threshold},
                      {"passed", c.passed}});
    }
    emit(cfg.output, out, nlohmann::json{{"seed", cfg.seed}, {"passed", all}, {"checks", list}}.dump(2) + "\n");
  } else if (cfg.format == "csv") {
    std::ostringstream csv;
    csv << "group,name,statistic,comparison,threshold,passed\n";
    for (const auto& c : checks) {
      csv << c.group << ",\"" << c.name << "\"," << format_number(c.statistic) << ',' << c.comparison << ','
          << format_number(c.threshold) << ',' << (c.passed ? "true" : "false") << '\n';
    }
    emit(cfg.output, out, csv.str());
  } else {
    std::ostringstream text;
    for (const auto& c : checks) {
      text << (c.passed ? "PASS  " : "FAIL  ") << c.group << ": " << c.name << "  " << format_number(c.statistic)
           << ' ' << c.comparison << ' ' << format_number(c.threshold) << '\n';
    }
    text << (all ? "all checks passed" : "some checks FAILED") << '\n';
    emit(cfg.output, out, text.str());
  }
  if (!all) err << "verification failed\n";
  return all ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const Config& cfg, std::ostream& out, std::ostream&) {
  if (cfg.repeat <= 0) throw InputError("repeat must be positive");
  for (const auto& s : cfg.solvers) {
    if (s != "ptas" && s != "kmeanspp" && s != "kmeanspp-lloyd" && s != "oracle") {
      throw InputError("unknown bench solver '" + s + "'");
    }
  }
  std::vector<instances::OracleInstance> set;
  if (cfg.input.empty()) {
    set = instances::oracle_set();
  } else {
    set.push_back({std::filesystem::path(cfg.input).stem().string(), load_points_csv(cfg.input), checked_k(cfg), 0.0});
  }

  const PtasOverrides ptas = overrides(cfg);

  std::ostringstream csv;
  csv << "instance,solver,seed,cost,oracle_cost,ratio,wall_seconds\n";
  for (const auto& inst : set) {
    std::optional<double> opt;
    if (inst.points.size() <= kMaxOraclePoints) opt = brute_force_opt(inst.points, inst.k).cost;
    for (const auto& solver : cfg.solvers) {
      for (long long r = 0; r < cfg.repeat; ++r) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
        const Stopwatch clock;
        const double cost = cluster_with(solver, inst.points, inst.k, cfg, seed, ptas).cost;
        const double seconds = clock.seconds();
        csv << inst.name << ',' << solver << ',' << seed << ',' << format_number(cost) << ',';
        if (opt) {
          csv << format_number(*opt) << ',' << (*opt > 0.0 ? format_number(cost / *opt) : std::string(cost > 0 ? "inf" : "1"));
        } else {
          csv << ',';
        }
        csv << ',' << format_number(seconds) << '\n';
      }
    }
  }
  emit(cfg.output, out, csv.str());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // Each subcommand owns its config so per-command defaults do not collide.
  Config ccfg;
  Config scfg;
  Config vcfg;
  Config bcfg;
  CLI::App app{"Weighted k-means clustering, sensor placement and verification tools", "wkm"};
  app.require_subcommand(1);
  const std::string data_dir = WKM_DATA_DIR;

  auto* cluster = app.add_subcommand("cluster", "cluster a weighted point set read from CSV");
  cluster->add_option("--input", ccfg.input, "CSV with header x1,...,xd,weight")
      ->default_val(data_dir + "/line4.csv");
  cluster->add_option("--k", ccfg.k, "number of centers")->default_val(2);
  cluster->add_option("--epsilon", ccfg.epsilon, "approximation accuracy in (0, 1)")->default_val(0.5);
  cluster->add_option("--solver", ccfg.solver, "ptas | kmeanspp-lloyd | oracle")
      ->check(CLI::IsMember({"ptas", "kmeanspp-lloyd", "oracle"}))
      ->default_val("ptas");
  add_ptas_flags(*cluster, ccfg);
  cluster->add_option("--seed", ccfg.seed, "master seed")->default_val(0);
  cluster->add_option("--output", ccfg.output, "result file [stdout]");
  cluster->add_option("--format", ccfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->default_val("json");
  cluster->add_flag("--omit-timing", ccfg.omit_timing, "leave wall_seconds out of the JSON result");

  auto* sensor = app.add_subcommand("sensor", "place sensors on a convex region");
  sensor->add_option("--region", scfg.region, "region JSON file")->default_val(data_dir + "/unit_square.json");
  sensor->add_option("--k", scfg.k, "number of sensors")->default_val(1);
  sensor->add_option("--epsilon", scfg.epsilon, "approximation accuracy in (0, 1)")->default_val(0.5);
  sensor->add_option("--grid-eps", scfg.grid_eps, "grid cell side [region file, else 0.05]")
      ->check(CLI::PositiveNumber);
  sensor->add_option("--solver", scfg.solver, "ptas | kmeanspp-lloyd")
      ->check(CLI::IsMember({"ptas", "kmeanspp-lloyd"}))
      ->default_val("ptas");
  add_ptas_flags(*sensor, scfg);
  sensor->add_option("--seed", scfg.seed, "master seed")->default_val(0);
  sensor->add_option("--output", scfg.output, "placement report [stdout]");
  sensor->add_option("--export-points", scfg.export_points, "discretized point CSV [<output>.points.csv]");
  sensor->add_option("--format", scfg.format, "json report | csv of the discretized points")
      ->check(CLI::IsMember({"json", "csv"}))
      ->default_val("json");
  sensor->add_flag("--omit-timing", scfg.omit_timing, "leave wall_seconds out of the report");

  auto* verify = app.add_subcommand("verify", "run the invariant and distribution checks");
  verify->add_option("--seed", vcfg.seed, "master seed")->default_val(0);
  verify->add_option("--only", vcfg.only, "run only these check groups")->delimiter(',');
  verify->add_option("--parallel-axis-tol", vcfg.parallel_axis_tol, "tolerance of the parallel-axis check")
      ->default_val(1e-9);
  verify->add_option("--output", vcfg.output, "report file [stdout]");
  verify->add_option("--format", vcfg.format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->default_val("text");

  auto* bench = app.add_subcommand("bench", "solver-versus-oracle benchmark matrix as long-format CSV");
  bench->add_option("--input", bcfg.input, "benchmark this CSV instead of the built-in instances");
  bench->add_option("--k", bcfg.k, "centers for --input")->default_val(2);
  bench->add_option("--epsilon", bcfg.epsilon, "PTAS accuracy")->default_val(0.5);
  bench->add_option("--solvers", bcfg.solvers, "ptas, kmeanspp, kmeanspp-lloyd, oracle")->delimiter(',');
  add_ptas_flags(*bench, bcfg);
  bench->add_option("--repeat", bcfg.repeat, "seeds per (instance, solver)")->default_val(20);
  bench->add_option("--seed", bcfg.seed, "first seed; run r uses seed + r")->default_val(0);
  bench->add_option("--output", bcfg.output, "CSV file [stdout]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (cluster->parsed()) return cmd_cluster(ccfg, out, err);
    if (sensor->parsed()) return cmd_sensor(scfg, out, err);
    if (verify->parsed()) return cmd_verify(vcfg, out, err);
    return cmd_bench(bcfg, out, err);
  } catch (const FeasibilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFeasibility;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace wkm::cli
