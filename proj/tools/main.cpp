// Command-line front end: run a configured simulation, verify the property
// suites, or execute one of the named verification benchmarks.

#include <CLI11.hpp>

#include <cstdio>

#include "frpfrac/benchmarks.hpp"
#include "frpfrac/simulation.hpp"
#include "frpfrac/verification.hpp"

using namespace frpfrac;

namespace {

int cmd_run(const std::string& config_path, double dt_override, int max_steps, int threads,
            const std::string& outdir_override, std::uint64_t /*seed*/) {
  std::vector<std::string> defaulted;
  SimulationConfig cfg = load_config(config_path, &defaulted);
  if (!defaulted.empty()) {
    std::printf("defaults applied for:");
    for (const auto& k : defaulted) std::printf(" %s", k.c_str());
    std::printf("\n");
  }
  if (dt_override > 0.0) cfg.dt = dt_override;
  if (threads > 0) cfg.threads = threads;
  Scenario sc = build_scenario(cfg, defaulted);
  const std::string outdir = outdir_override.empty() ? cfg.directory : outdir_override;
  std::printf("scenario %s: %dx%dx%d elements, dt=%g s, t_end=%g s, output -> %s\n", sc.name.c_str(),
              cfg.elements[0], cfg.elements[1], cfg.elements[2], sc.dt, sc.t_end, outdir.c_str());

  MultifieldSolver solver(sc.patch, sc.physics, sc.layout, sc.options);
  RunResult rr = run_simulation(sc, solver, outdir, cfg.cadence, max_steps);
  std::printf("completed %d steps to t=%g s (u=%g mm)\n", rr.steps, solver.time(),
              sc.rate * solver.time());
  for (const auto& [name, tu] : rr.events)
    std::printf("event %s at t=%g s, u=%g mm\n", name.c_str(), tu.first, tu.second);
  return 0;
}

int cmd_verify(std::uint64_t seed, int threads) {
  auto results = verification::run_property_suite(seed, threads);
  for (auto&& b : {benchmarks::gtn_kernel(seed), benchmarks::return_map_consistency(seed)})
    results.push_back({b.name, b.pass, b.detail});
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.pass ? "pass" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 4;
}

int cmd_bench(const std::string& which, int threads, std::uint64_t seed) {
  std::vector<BenchResult> results;
  auto want = [&](const char* name) { return which == "all" || which == name; };
  if (want("in_plane_bending")) results.push_back(benchmarks::in_plane_bending(threads));
  if (want("four_point_bending")) results.push_back(benchmarks::four_point_bending(threads));
  if (want("gtn_kernel")) results.push_back(benchmarks::gtn_kernel(seed));
  if (want("return_map")) results.push_back(benchmarks::return_map_consistency(seed));
  if (want("failure_sequence_0")) results.push_back(benchmarks::failure_sequence(0.0, threads));
  if (want("failure_sequence_90")) results.push_back(benchmarks::failure_sequence(90.0, threads));
  if (want("thermal_trend")) results.push_back(benchmarks::thermal_trend(threads));
  if (results.empty()) {
    std::fprintf(stderr, "unknown benchmark '%s'\n", which.c_str());
    return 2;
  }
  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %s: %s\n", r.pass ? "pass" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strain-gradient composite fracture simulator"};
  app.require_subcommand(1);

  std::string config_path, bench_name, outdir;
  double dt_override = 0.0;
  int max_steps = 1 << 30;
  int threads = 0;
  std::uint64_t seed = 20240901ull;

  auto* run = app.add_subcommand("run", "run a simulation from a config file");
  run->add_option("config", config_path, "path to the config file")->required();
  run->add_option("--dt", dt_override, "override the target time-step size [s]");
  run->add_option("--steps", max_steps, "cap the number of accepted steps");
  run->add_option("--threads", threads, "assembly threads");
  run->add_option("--output-dir", outdir, "override the output directory");
  run->add_option("--seed", seed, "seed for randomized components");

  auto* verify = app.add_subcommand("verify", "run the property and oracle suites");
  verify->add_option("--seed", seed, "seed for the randomized properties");
  verify->add_option("--threads", threads, "assembly threads");

  auto* bench = app.add_subcommand("bench", "run a named verification benchmark");
  bench->add_option("name", bench_name, "benchmark: in_plane_bending, four_point_bending, gtn_kernel, "
                                        "return_map, failure_sequence_0, failure_sequence_90, "
                                        "thermal_trend, all")
      ->required();
  bench->add_option("--threads", threads, "assembly threads");
  bench->add_option("--seed", seed, "seed for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, dt_override, max_steps, threads, outdir, seed);
    if (verify->parsed()) return cmd_verify(seed, threads > 0 ? threads : 1);
    if (bench->parsed()) return cmd_bench(bench_name, threads > 0 ? threads : 1, seed);
  } catch (const ConfigError& ex) {
    std::fprintf(stderr, "config error: %s\n", ex.what());
    return 2;
  } catch (const StepFailed& ex) {
    std::fprintf(stderr, "solver failure: %s\n", ex.what());
    return 3;
  } catch (const SimulationError& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 3;
  }
  return 0;
}
