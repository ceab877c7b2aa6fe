#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "coflow/instance.hpp"
#include "coflow/simplex.hpp"

namespace coflow {

enum class PortSide { input, output };

inline const char* to_string(PortSide s) {
  return s == PortSide::input ? "input" : "output";
}

enum class JobObjective { weighted_jobs, makespan };

/// One entity competing for a port: a flow (divisible mode) or a coflow
/// (indivisible / single-core), with the demand it places on the port.
struct PortMember {
  int var = -1;               // LP variable holding its completion time
  std::int64_t demand = 0;    // d_ijk or L_{ik} / L_{jk}
  std::int64_t coflow_id = 0; // tie-break
  int src = -1;               // tie-break (flows only)
  int dst = -1;
  int entity = -1;            // global flow index or coflow index, for cut identity
};

struct PrefixCut {
  PortSide side = PortSide::input;
  int port = 0;
  std::vector<int> members;  // entity ids in separation order
  double rhs = 0.0;
  double violation = 0.0;    // rhs - lhs at the candidate point
  std::vector<std::pair<int, double>> terms;
};

struct LpProblem {
  Mode mode = Mode::single_core;
  const Instance* inst = nullptr;
  int cores = 1;  // divisor in the 1/(2m) cut right-hand side

  std::vector<std::string> var_names;
  std::vector<double> objective;
  std::vector<DenseLp::Row> base_rows;
  std::vector<DenseLp::Row> cut_rows;
  std::set<std::vector<int>> cut_keys;  // (side, port, sorted entities) flattened

  std::vector<int> coflow_var;  // coflow index -> var
  std::vector<int> flow_var;    // global flow index -> var (divisible only)
  std::vector<int> job_var;     // job index -> var (job layer only)
  int cmax_var = -1;

  std::vector<std::vector<PortMember>> input_members;   // per input port
  std::vector<std::vector<PortMember>> output_members;  // per output port

  int num_vars() const { return static_cast<int>(var_names.size()); }

  int add_var(std::string name, double obj_coef = 0.0) {
    var_names.push_back(std::move(name));
    objective.push_back(obj_coef);
    return num_vars() - 1;
  }

  std::vector<int> cut_key(PortSide side, int port, const std::vector<int>& members) const {
    std::vector<int> key{side == PortSide::input ? 0 : 1, port};
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    key.insert(key.end(), sorted.begin(), sorted.end());
    return key;
  }

  /// Adds the cut row if this member set is new on this port. Returns
  /// whether it was added.
  bool add_cut(const PrefixCut& cut) {
    auto key = cut_key(cut.side, cut.port, cut.members);
    if (!cut_keys.insert(std::move(key)).second) return false;
    cut_rows.push_back({cut.terms, cut.rhs});
    return true;
  }
};

struct LpSolution {
  std::vector<double> values;
  double objective = 0.0;
  int cuts_added = 0;
  int iterations = 0;
  bool complete = true;

  double value(int var) const { return var >= 0 ? values.at(var) : 0.0; }
};

namespace detail {

inline double cut_rhs(std::int64_t sum_d, std::int64_t sum_d2, int cores) {
  // Exact integer arithmetic up to the single final division.
  return static_cast<double>(sum_d * sum_d + sum_d2) / (2.0 * cores);
}

inline PrefixCut make_prefix_cut(PortSide side, int port,
                                 const std::vector<PortMember>& prefix, int cores) {
  PrefixCut cut;
  cut.side = side;
  cut.port = port;
  std::int64_t sum_d = 0, sum_d2 = 0;
  for (const auto& m : prefix) {
    cut.members.push_back(m.entity);
    cut.terms.emplace_back(m.var, static_cast<double>(m.demand));
    sum_d += m.demand;
    sum_d2 += m.demand * m.demand;
  }
  cut.rhs = cut_rhs(sum_d, sum_d2, cores);
  return cut;
}

// Singleton cuts plus the full-set cut per port, before round 1.
inline void seed_port_cuts(LpProblem& p) {
  for (auto side : {PortSide::input, PortSide::output}) {
    const auto& ports = side == PortSide::input ? p.input_members : p.output_members;
    for (int port = 0; port < static_cast<int>(ports.size()); ++port) {
      const auto& members = ports[port];
      if (members.empty()) continue;
      for (const auto& m : members)
        p.add_cut(make_prefix_cut(side, port, {m}, p.cores));
      if (members.size() > 1) p.add_cut(make_prefix_cut(side, port, members, p.cores));
    }
  }
}

}  // namespace detail

/// LP for divisible coflows: per-flow completion variables bounded below by
/// release/precedence plus load, coflow variables bounded by their flows,
/// and per-port prefix cuts over flows.
inline LpProblem build_divisible_lp(const Instance& inst) {
  if (inst.mode != Mode::divisible)
    throw std::invalid_argument("build_divisible_lp: instance mode is not divisible");
  LpProblem p;
  p.mode = Mode::divisible;
  p.inst = &inst;
  p.cores = inst.num_cores;

  const auto flows = flow_table(inst);
  const auto preds = predecessor_indices(inst);

  p.coflow_var.resize(inst.coflows.size());
  for (std::size_t k = 0; k < inst.coflows.size(); ++k)
    p.coflow_var[k] = p.add_var("C[" + std::to_string(inst.coflows[k].id) + "]",
                                inst.coflows[k].weight);
  p.flow_var.resize(flows.size());
  for (std::size_t g = 0; g < flows.size(); ++g) {
    const auto& f = flows[g];
    p.flow_var[g] = p.add_var("Cf[" + std::to_string(f.coflow_id) + "][" +
                              std::to_string(f.src) + "][" + std::to_string(f.dst) + "]");
  }

  p.input_members.resize(inst.num_ports);
  p.output_members.resize(inst.num_ports);
  for (std::size_t g = 0; g < flows.size(); ++g) {
    const auto& f = flows[g];
    const auto r = inst.coflows[f.coflow].release;
    // C_k >= C_f
    p.base_rows.push_back({{{p.coflow_var[f.coflow], 1.0}, {p.flow_var[g], -1.0}}, 0.0});
    // C_f >= r_k + d_f
    p.base_rows.push_back({{{p.flow_var[g], 1.0}}, static_cast<double>(r + f.size)});
    // C_f >= C_{k'} + d_f for k' < k
    for (int kp : preds[f.coflow])
      p.base_rows.push_back(
          {{{p.flow_var[g], 1.0}, {p.coflow_var[kp], -1.0}}, static_cast<double>(f.size)});

    PortMember m{p.flow_var[g], f.size, f.coflow_id, f.src, f.dst, static_cast<int>(g)};
    p.input_members[f.src].push_back(m);
    p.output_members[f.dst].push_back(m);
  }
  // A flowless coflow is still pinned by its release and predecessors.
  for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
    p.base_rows.push_back(
        {{{p.coflow_var[k], 1.0}}, static_cast<double>(inst.coflows[k].release)});
    for (int kp : preds[k])
      p.base_rows.push_back({{{p.coflow_var[k], 1.0}, {p.coflow_var[kp], -1.0}}, 0.0});
  }

  detail::seed_port_cuts(p);
  return p;
}

namespace detail {

inline LpProblem build_coflow_level_lp(const Instance& inst, Mode expected) {
  LpProblem p;
  p.mode = expected;
  p.inst = &inst;
  p.cores = expected == Mode::single_core ? 1 : inst.num_cores;

  const auto loads = port_loads(inst);
  const auto preds = predecessor_indices(inst);

  p.coflow_var.resize(inst.coflows.size());
  for (std::size_t k = 0; k < inst.coflows.size(); ++k)
    p.coflow_var[k] = p.add_var("C[" + std::to_string(inst.coflows[k].id) + "]",
                                inst.coflows[k].weight);

  p.input_members.resize(inst.num_ports);
  p.output_members.resize(inst.num_ports);
  for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
    const auto& c = inst.coflows[k];
    std::int64_t max_load = 0;
    for (int i = 0; i < inst.num_ports; ++i) {
      if (auto L = loads.input_load[k][i]; L > 0) {
        max_load = std::max(max_load, L);
        p.input_members[i].push_back(
            {p.coflow_var[k], L, c.id, -1, -1, static_cast<int>(k)});
      }
      if (auto L = loads.output_load[k][i]; L > 0) {
        max_load = std::max(max_load, L);
        p.output_members[i].push_back(
            {p.coflow_var[k], L, c.id, -1, -1, static_cast<int>(k)});
      }
    }
    // C_k >= r_k + L for the dominating port load (implies all ports).
    p.base_rows.push_back(
        {{{p.coflow_var[k], 1.0}}, static_cast<double>(c.release + max_load)});
    for (int kp : preds[k])
      p.base_rows.push_back(
          {{{p.coflow_var[k], 1.0}, {p.coflow_var[kp], -1.0}}, static_cast<double>(max_load)});
  }

  seed_port_cuts(p);
  return p;
}

}  // namespace detail

inline LpProblem build_indivisible_lp(const Instance& inst) {
  if (inst.mode != Mode::indivisible)
    throw std::invalid_argument("build_indivisible_lp: instance mode is not indivisible");
  return detail::build_coflow_level_lp(inst, Mode::indivisible);
}

/// Identical structure to the indivisible LP with the cut divisor fixed to 1.
inline LpProblem build_single_core_lp(const Instance& inst) {
  if (inst.mode != Mode::single_core)
    throw std::invalid_argument("build_single_core_lp: instance mode is not single_core");
  return detail::build_coflow_level_lp(inst, Mode::single_core);
}

inline LpProblem build_lp(const Instance& inst) {
  switch (inst.mode) {
    case Mode::divisible: return build_divisible_lp(inst);
    case Mode::indivisible: return build_indivisible_lp(inst);
    case Mode::single_core: return build_single_core_lp(inst);
  }
  throw std::logic_error("unreachable");
}

/// Job layer on top of any of the three LPs: either per-job completion
/// variables with a weighted-jobs objective, or a single makespan variable.
inline void add_job_layer(LpProblem& p, const Instance& inst, JobObjective objective) {
  if (objective == JobObjective::weighted_jobs) {
    if (inst.jobs.empty())
      throw std::invalid_argument("add_job_layer: weighted_jobs requires job grouping");
    std::fill(p.objective.begin(), p.objective.end(), 0.0);
    auto idx = coflow_index_map(inst);
    p.job_var.resize(inst.jobs.size());
    for (std::size_t t = 0; t < inst.jobs.size(); ++t) {
      const auto& job = inst.jobs[t];
      p.job_var[t] = p.add_var("Cj[" + std::to_string(job.id) + "]", job.weight);
      for (auto cid : job.coflows)
        p.base_rows.push_back(
            {{{p.job_var[t], 1.0}, {p.coflow_var[idx.at(cid)], -1.0}}, 0.0});
    }
  } else {
    std::fill(p.objective.begin(), p.objective.end(), 0.0);
    p.cmax_var = p.add_var("Cmax", 1.0);
    for (int cv : p.coflow_var)
      p.base_rows.push_back({{{p.cmax_var, 1.0}, {cv, -1.0}}, 0.0});
  }
}

/// Sorts each port's members by candidate completion time (ties: coflow id,
/// then (src,dst)) and evaluates every prefix set. Returns all prefixes
/// violated by more than `tolerance`.
inline std::vector<PrefixCut> separate_prefix_violations(const LpSolution& candidate,
                                                         const LpProblem& p,
                                                         double tolerance) {
  std::vector<PrefixCut> cuts;
  for (auto side : {PortSide::input, PortSide::output}) {
    const auto& ports = side == PortSide::input ? p.input_members : p.output_members;
    for (int port = 0; port < static_cast<int>(ports.size()); ++port) {
      auto members = ports[port];
      std::sort(members.begin(), members.end(),
                [&](const PortMember& a, const PortMember& b) {
                  return std::tuple(candidate.value(a.var), a.coflow_id, a.src, a.dst) <
                         std::tuple(candidate.value(b.var), b.coflow_id, b.src, b.dst);
                });
      std::int64_t sum_d = 0, sum_d2 = 0;
      double lhs = 0.0;
      std::vector<PortMember> prefix;
      for (const auto& m : members) {
        prefix.push_back(m);
        sum_d += m.demand;
        sum_d2 += m.demand * m.demand;
        lhs += static_cast<double>(m.demand) * candidate.value(m.var);
        double rhs = detail::cut_rhs(sum_d, sum_d2, p.cores);
        if (rhs - lhs > tolerance) {
          auto cut = detail::make_prefix_cut(side, port, prefix, p.cores);
          cut.violation = rhs - lhs;
          cuts.push_back(std::move(cut));
        }
      }
    }
  }
  return cuts;
}

struct CuttingPlaneOptions {
  double tolerance = 1e-9;
  int max_rounds = 200;
};

/// Re-solves the LP, adding every violated prefix cut, until the separation
/// oracle is silent. The problem keeps its accumulated cuts.
inline LpSolution solve_with_cutting_plane(LpProblem& p, LpBackend& backend,
                                           const CuttingPlaneOptions& opts = {}) {
  LpSolution sol;
  if (p.num_vars() == 0) return sol;

  for (int round = 0; round < opts.max_rounds; ++round) {
    DenseLp lp;
    lp.num_vars = p.num_vars();
    lp.objective = p.objective;
    lp.rows = p.base_rows;
    lp.rows.insert(lp.rows.end(), p.cut_rows.begin(), p.cut_rows.end());

    auto vertex = backend.solve(lp);
    sol.values = vertex.x;
    sol.objective = vertex.objective;
    sol.iterations = round + 1;

    auto cuts = separate_prefix_violations(sol, p, opts.tolerance);
    int added = 0;
    for (const auto& cut : cuts)
      if (p.add_cut(cut)) ++added;
    sol.cuts_added += added;
    if (added == 0) {
      sol.complete = cuts.empty();
      return sol;
    }
  }
  sol.complete = false;
  return sol;
}

}  // namespace coflow
