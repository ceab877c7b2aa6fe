#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "coflow/instance.hpp"
#include "coflow/lp.hpp"
#include "coflow/scheduler.hpp"
#include "coflow/simplex.hpp"
#include "coflow/simulator.hpp"

namespace coflow {

enum class Pipeline { divisible, indivisible, single_core, job_weighted, job_makespan };

inline const char* to_string(Pipeline p) {
  switch (p) {
    case Pipeline::divisible: return "divisible";
    case Pipeline::indivisible: return "indivisible";
    case Pipeline::single_core: return "single_core";
    case Pipeline::job_weighted: return "job_weighted";
    case Pipeline::job_makespan: return "job_makespan";
  }
  return "?";
}

inline std::optional<Pipeline> pipeline_from_string(const std::string& s) {
  if (s == "divisible") return Pipeline::divisible;
  if (s == "indivisible") return Pipeline::indivisible;
  if (s == "single_core") return Pipeline::single_core;
  if (s == "job_weighted") return Pipeline::job_weighted;
  if (s == "job_makespan") return Pipeline::job_makespan;
  return std::nullopt;
}

struct PipelineOptions {
  CuttingPlaneOptions lp;
  SimulateOptions sim;
};

struct RunResult {
  LpProblem problem;
  LpSolution lp;
  Assignment assignment;
  PriorityList priority;
  Schedule schedule;
  ScheduleReport report;

  /// Objective value the pipeline optimizes, from the simulated schedule.
  double cost(Pipeline pl) const {
    switch (pl) {
      case Pipeline::job_weighted: return report.weighted_job_cost;
      case Pipeline::job_makespan: return static_cast<double>(report.makespan);
      default: return report.weighted_coflow_cost;
    }
  }
};

inline void check_pipeline_mode(const Instance& inst, Pipeline pl) {
  auto expect = [&](Mode m) {
    if (inst.mode != m)
      throw std::invalid_argument(std::string("pipeline '") + to_string(pl) +
                                  "' requires mode '" + to_string(m) + "', instance is '" +
                                  to_string(inst.mode) + "'");
  };
  switch (pl) {
    case Pipeline::divisible: expect(Mode::divisible); break;
    case Pipeline::indivisible: expect(Mode::indivisible); break;
    case Pipeline::single_core: expect(Mode::single_core); break;
    case Pipeline::job_weighted:
      if (inst.jobs.empty())
        throw std::invalid_argument("pipeline 'job_weighted' requires job grouping");
      break;
    case Pipeline::job_makespan: break;
  }
}

/// LP -> cutting plane -> core assignment / priority order -> simulation.
inline RunResult run_pipeline(const Instance& inst, Pipeline pl,
                              const PipelineOptions& opts = {}) {
  check_pipeline_mode(inst, pl);
  RunResult r;
  r.problem = build_lp(inst);
  if (pl == Pipeline::job_weighted)
    add_job_layer(r.problem, inst, JobObjective::weighted_jobs);
  else if (pl == Pipeline::job_makespan)
    add_job_layer(r.problem, inst, JobObjective::makespan);

  SimplexBackend backend;
  r.lp = solve_with_cutting_plane(r.problem, backend, opts.lp);

  std::tie(r.assignment, r.priority) = dispatch_assignment(inst, r.problem, r.lp);
  std::tie(r.schedule, r.report) = simulate(inst, r.assignment, r.priority, opts.sim);
  return r;
}

/// Multi-stage wrapper: mode-appropriate LP with the job layer on top, then
/// the matching assignment/ordering phase. Simulation is left to the caller.
inline std::tuple<Assignment, PriorityList, LpSolution> schedule_multistage(
    const Instance& inst, JobObjective objective, const PipelineOptions& opts = {}) {
  LpProblem p = build_lp(inst);
  add_job_layer(p, inst, objective);
  SimplexBackend backend;
  LpSolution lp = solve_with_cutting_plane(p, backend, opts.lp);
  auto [assignment, priority] = dispatch_assignment(inst, p, lp);
  return {std::move(assignment), std::move(priority), std::move(lp)};
}

}  // namespace coflow
