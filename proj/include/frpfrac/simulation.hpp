#pragma once

#include <functional>
#include <memory>

#include "frpfrac/output.hpp"
#include "frpfrac/scenario.hpp"

namespace frpfrac {

struct RunResult {
  int steps = 0;
  bool stopped_early = false;
  std::vector<TraceRow> trace;
  std::map<std::string, std::pair<double, double>> events;  // name -> (t, u)
};

/// Time-marching driver: fixed target step size with internal cutting, trace
/// and event emission, optional field snapshots and an early-stop predicate.
inline RunResult run_simulation(const Scenario& sc, MultifieldSolver& solver,
                                const std::string& output_dir = "", int cadence = 5, int max_steps = 1 << 30,
                                const std::function<bool(const StaggeredStep&)>& stop = {}) {
  RunResult res;
  std::unique_ptr<RunWriter> writer;
  if (!output_dir.empty()) writer = std::make_unique<RunWriter>(output_dir, solver);

  TraceRow row{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, solver.temperature().minCoeff(),
               solver.temperature().maxCoeff()};
  res.trace.push_back(row);
  if (writer) {
    writer->write_row(row);
    writer->emit_fields(solver, 0);
  }

  const double eps = 1e-10 * sc.t_end;
  while (solver.time() < sc.t_end - eps && res.steps < max_steps) {
    const double dt = std::min(sc.dt, sc.t_end - solver.time());
    StaggeredStep rec = solver.step(dt);
    ++res.steps;
    row = {rec.t,
           sc.rate * rec.t,
           rec.reaction[sc.reaction_comp],
           rec.max_s,
           rec.max_sL,
           rec.max_sM,
           rec.max_alpha,
           rec.theta_min,
           rec.theta_max};
    res.trace.push_back(row);
    if (writer) {
      writer->write_row(row);
      writer->check_events(row);
      if (cadence > 0 && res.steps % cadence == 0) writer->emit_fields(solver, res.steps);
    }
    // event bookkeeping also without a writer
    auto fire = [&](const std::string& name, bool cond) {
      if (cond && !res.events.count(name)) res.events[name] = {row.t, row.u};
    };
    const double fib = std::max(row.max_sL, row.max_sM);
    fire("fiber_crack_initiation", fib >= 0.1);
    fire("fiber_rupture", fib >= 0.95);
    fire("matrix_crack_initiation", row.max_s >= 0.1);
    fire("matrix_rupture", row.max_s >= 0.95);
    if (stop && stop(rec)) {
      res.stopped_early = true;
      break;
    }
  }
  if (writer) {
    writer->emit_fields(solver, res.steps);
    res.events = writer->events();
  }
  return res;
}

}  // namespace frpfrac
