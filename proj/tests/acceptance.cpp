// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "frpfrac/benchmarks.hpp"
#include "frpfrac/verification.hpp"

using namespace frpfrac;

namespace {

struct Criterion {
  std::string label;
  bool pass;
  std::string detail;
  double seconds;
};

template <class F>
Criterion timed(const std::string& label, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchResult r = f();
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {label + ": " + r.name, r.pass, r.detail, sec};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  auto want = [&](int k) { return wanted.empty() || std::count(wanted.begin(), wanted.end(), k) > 0; };
  const std::uint64_t seed = 987654321ull;
  const int threads = 1;

  std::vector<Criterion> results;
  if (want(1)) results.push_back(timed("criterion 1", [&] { return benchmarks::in_plane_bending(threads); }));
  if (want(2))
    results.push_back(timed("criterion 2", [&] { return benchmarks::four_point_bending(threads); }));
  if (want(3)) results.push_back(timed("criterion 3", [&] { return benchmarks::gtn_kernel(seed); }));
  if (want(4))
    results.push_back(timed("criterion 4", [&] { return benchmarks::return_map_consistency(seed); }));
  if (want(5)) {
    results.push_back(
        timed("criterion 5a", [&] { return benchmarks::failure_sequence(0.0, threads); }));
    results.push_back(
        timed("criterion 5b", [&] { return benchmarks::failure_sequence(90.0, threads); }));
  }
  if (want(6)) results.push_back(timed("criterion 6", [&] { return benchmarks::thermal_trend(threads); }));
  if (want(7)) {
    const auto t0 = std::chrono::steady_clock::now();
    auto props = verification::run_property_suite(seed, threads);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool all = true;
    std::string detail;
    for (const auto& p : props) {
      all = all && p.pass;
      if (!p.pass) detail += (detail.empty() ? "" : "; ") + p.name + " failed (" + p.detail + ")";
      std::printf("  [%s] %s: %s\n", p.pass ? "pass" : "FAIL", p.name.c_str(), p.detail.c_str());
    }
    results.push_back({"criterion 7: property suites", all, all ? "all properties held" : detail, sec});
  }

  bool all = true;
  for (const auto& r : results) {
    std::printf("[%s] %s (%.1f s): %s\n", r.pass ? "PASS" : "FAIL", r.label.c_str(), r.seconds,
                r.detail.c_str());
    all = all && r.pass;
  }
  std::printf(all ? "acceptance: all criteria passed\n" : "acceptance: FAILURES present\n");
  return all ? 0 : 4;
}
