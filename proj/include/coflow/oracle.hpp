#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "coflow/instance.hpp"
#include "coflow/lp.hpp"
#include "coflow/pipeline.hpp"
#include "coflow/simulator.hpp"

namespace coflow {

struct SubsetViolation {
  std::vector<int> members;  // entity ids of the most violated subset
  double violation = 0.0;    // rhs - lhs; <= 0 means the port is feasible
};

/// Reference separation: enumerate every nonempty subset of a port's
/// members and return the most violated one. Exponential; capped at 20.
inline SubsetViolation brute_force_separation(const LpSolution& candidate,
                                              const LpProblem& p, PortSide side,
                                              int port) {
  const auto& members =
      (side == PortSide::input ? p.input_members : p.output_members).at(port);
  const int n = static_cast<int>(members.size());
  if (n > 20) throw std::invalid_argument("brute_force_separation: too many members");

  SubsetViolation best;
  best.violation = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::int64_t sum_d = 0, sum_d2 = 0;
    double lhs = 0.0;
    for (int b = 0; b < n; ++b) {
      if (!(mask & (1u << b))) continue;
      const auto& m = members[b];
      sum_d += m.demand;
      sum_d2 += m.demand * m.demand;
      lhs += static_cast<double>(m.demand) * candidate.value(m.var);
    }
    double viol = detail::cut_rhs(sum_d, sum_d2, p.cores) - lhs;
    if (viol > best.violation) {
      best.violation = viol;
      best.members.clear();
      for (int b = 0; b < n; ++b)
        if (mask & (1u << b)) best.members.push_back(members[b].entity);
    }
  }
  if (n == 0) best.violation = 0.0;
  return best;
}

/// Exhaustive reference for tiny single-core instances: simulate every
/// precedence-respecting coflow permutation and keep the cheapest.
struct PermutationResult {
  double cost = 0.0;
  std::vector<int> permutation;  // coflow indices
};

inline PermutationResult best_permutation_schedule(const Instance& inst) {
  if (inst.mode != Mode::single_core)
    throw std::invalid_argument("best_permutation_schedule: single_core mode required");
  const int n = static_cast<int>(inst.coflows.size());
  if (n > 8) throw std::invalid_argument("best_permutation_schedule: more than 8 coflows");

  const auto flows = flow_table(inst);
  const auto preds = predecessor_indices(inst);

  Assignment a;
  a.flow_core.assign(flows.size(), 0);
  a.load_in.assign(1, std::vector<std::int64_t>(inst.num_ports, 0));
  a.load_out.assign(1, std::vector<std::int64_t>(inst.num_ports, 0));

  PermutationResult best;
  best.cost = std::numeric_limits<double>::infinity();

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[perm[i]] = i;
    bool valid = true;
    for (int k = 0; k < n && valid; ++k)
      for (int p : preds[k])
        if (pos[p] > pos[k]) {
          valid = false;
          break;
        }
    if (!valid) continue;

    PriorityList pl;
    pl.coflows = perm;
    for (int k : perm) {
      std::vector<int> own;
      for (int g = 0; g < static_cast<int>(flows.size()); ++g)
        if (flows[g].coflow == k) own.push_back(g);
      std::sort(own.begin(), own.end(), [&](int x, int y) {
        return std::pair(flows[x].src, flows[x].dst) <
               std::pair(flows[y].src, flows[y].dst);
      });
      pl.flows.insert(pl.flows.end(), own.begin(), own.end());
    }
    auto [sched, rep] = simulate(inst, a, pl);
    if (rep.weighted_coflow_cost < best.cost) {
      best.cost = rep.weighted_coflow_cost;
      best.permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (n == 0) best.cost = 0.0;
  return best;
}

/// Guaranteed worst-case factor (before the mu term) for a mode and release
/// regime.
inline double guarantee_constant(Mode mode, int cores, bool zero_release) {
  switch (mode) {
    case Mode::divisible:
      return (zero_release ? 5.0 : 6.0) - 2.0 / cores;
    case Mode::indivisible:
      return 4.0 * cores + (zero_release ? 0.0 : 1.0);
    case Mode::single_core:
      return zero_release ? 4.0 : 5.0;
  }
  return 0.0;
}

struct RatioCheckResult {
  std::string instance_id;
  Pipeline pipeline = Pipeline::single_core;
  Mode mode = Mode::single_core;
  int cores = 0;
  int ports = 0;
  int num_coflows = 0;
  int mu = 0;
  double lp_objective = 0.0;
  double algorithm_cost = 0.0;
  double ratio = 0.0;           // cost / lp_objective
  double constant = 0.0;        // guarantee constant for (mode, release regime)
  double bound = 0.0;           // constant * mu
  bool pass = false;
};

/// End-to-end certification of one instance: run the pipeline and compare
/// the simulated cost against constant * mu * LP objective. Job pipelines
/// inherit the underlying mode's constant.
inline RatioCheckResult ratio_check(const Instance& inst, Pipeline pl,
                                    const std::string& instance_id = "",
                                    const PipelineOptions& opts = {},
                                    const RunResult* precomputed = nullptr) {
  RatioCheckResult r;
  r.instance_id = instance_id;
  r.pipeline = pl;
  r.mode = inst.mode;
  r.cores = inst.num_cores;
  r.ports = inst.num_ports;
  r.num_coflows = static_cast<int>(inst.coflows.size());
  r.mu = longest_path_mu(inst);
  r.constant = guarantee_constant(inst.mode, inst.num_cores, all_released_at_zero(inst));
  r.bound = r.constant * r.mu;

  RunResult local;
  const RunResult* run = precomputed;
  if (!run) {
    local = run_pipeline(inst, pl, opts);
    run = &local;
  }
  r.lp_objective = run->lp.objective;
  r.algorithm_cost = run->cost(pl);
  r.ratio = r.lp_objective > 0 ? r.algorithm_cost / r.lp_objective : 0.0;
  if (r.lp_objective <= 0.0)
    r.pass = r.algorithm_cost <= 1e-9;  // only the empty / zero-weight cases
  else
    r.pass = r.algorithm_cost <= r.bound * r.lp_objective * (1.0 + 1e-9) + 1e-9;
  return r;
}

/// Per-coflow interval-length check against the LP values (precedence arcs
/// removed from readiness gating, priority order retained). Returns the
/// worst observed C-hat / C-bar ratio; the caller compares against the
/// per-mode constant.
inline double worst_interval_ratio(const Instance& inst, const RunResult& run) {
  SimulateOptions opts;
  opts.precedence_gating = false;
  auto [sched, rep] = simulate(inst, run.assignment, run.priority, opts);
  double worst = 0.0;
  for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
    double cbar = run.lp.value(run.problem.coflow_var[k]);
    if (cbar <= 0) continue;  // only flowless zero-release coflows
    worst = std::max(worst, static_cast<double>(rep.coflows[k].interval) / cbar);
  }
  return worst;
}

}  // namespace coflow
