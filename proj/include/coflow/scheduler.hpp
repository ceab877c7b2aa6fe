#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "coflow/instance.hpp"
#include "coflow/lp.hpp"

namespace coflow {

/// Flow -> core map (all modes; indivisible fills it from the coflow map)
/// plus the port loads accumulated during placement.
struct Assignment {
  std::vector<int> flow_core;               // per global flow index
  std::vector<int> coflow_core;             // per coflow index; empty unless indivisible
  std::vector<std::vector<std::int64_t>> load_in;   // [core][port]
  std::vector<std::vector<std::int64_t>> load_out;  // [core][port]
};

/// Scan order for the simulator. `flows` is always a permutation of the
/// global flow indices; `coflows` carries the coflow-level order when the
/// list was built at coflow granularity.
struct PriorityList {
  std::vector<int> flows;
  std::vector<int> coflows;
};

namespace detail {

// Ascending C-bar, then coflow id, then (src, dst).
inline std::vector<int> sorted_flow_order(const Instance& inst, const LpProblem& p,
                                          const LpSolution& lp) {
  const auto flows = flow_table(inst);
  std::vector<int> order(flows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& fa = flows[a];
    const auto& fb = flows[b];
    double ca = p.flow_var.empty() ? lp.value(p.coflow_var[fa.coflow])
                                   : lp.value(p.flow_var[a]);
    double cb = p.flow_var.empty() ? lp.value(p.coflow_var[fb.coflow])
                                   : lp.value(p.flow_var[b]);
    return std::tuple(ca, fa.coflow_id, fa.src, fa.dst) <
           std::tuple(cb, fb.coflow_id, fb.src, fb.dst);
  });
  return order;
}

inline std::vector<int> sorted_coflow_order(const Instance& inst, const LpProblem& p,
                                            const LpSolution& lp) {
  std::vector<int> order(inst.coflows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tuple(lp.value(p.coflow_var[a]), inst.coflows[a].id) <
           std::tuple(lp.value(p.coflow_var[b]), inst.coflows[b].id);
  });
  return order;
}

}  // namespace detail

/// Flow-driven placement: flows in non-decreasing C-bar order, each to the
/// core where its two port loads sum smallest (ties: lowest core index).
inline std::pair<Assignment, PriorityList> assign_cores_flow_driven(const Instance& inst,
                                                                    const LpProblem& p,
                                                                    const LpSolution& lp) {
  if (inst.mode != Mode::divisible)
    throw std::invalid_argument("assign_cores_flow_driven: divisible mode required");
  const auto flows = flow_table(inst);
  const int m = inst.num_cores;

  Assignment a;
  a.flow_core.assign(flows.size(), 0);
  a.load_in.assign(m, std::vector<std::int64_t>(inst.num_ports, 0));
  a.load_out.assign(m, std::vector<std::int64_t>(inst.num_ports, 0));

  PriorityList pl;
  pl.flows = detail::sorted_flow_order(inst, p, lp);

  for (int g : pl.flows) {
    const auto& f = flows[g];
    int best = 0;
    std::int64_t best_load = a.load_in[0][f.src] + a.load_out[0][f.dst];
    for (int h = 1; h < m; ++h) {
      std::int64_t load = a.load_in[h][f.src] + a.load_out[h][f.dst];
      if (load < best_load) {
        best = h;
        best_load = load;
      }
    }
    a.flow_core[g] = best;
    a.load_in[best][f.src] += f.size;
    a.load_out[best][f.dst] += f.size;
  }
  return {std::move(a), std::move(pl)};
}

/// Coflow-driven placement: coflows in non-decreasing C-bar order, each to
/// the core minimizing max_i(load_I + L_ik) + max_j(load_O + L_jk) over the
/// ports the coflow actually uses.
inline std::pair<Assignment, PriorityList> assign_cores_coflow_driven(const Instance& inst,
                                                                      const LpProblem& p,
                                                                      const LpSolution& lp) {
  if (inst.mode != Mode::indivisible)
    throw std::invalid_argument("assign_cores_coflow_driven: indivisible mode required");
  const auto flows = flow_table(inst);
  const auto loads = port_loads(inst);
  const int m = inst.num_cores;

  Assignment a;
  a.flow_core.assign(flows.size(), 0);
  a.coflow_core.assign(inst.coflows.size(), 0);
  a.load_in.assign(m, std::vector<std::int64_t>(inst.num_ports, 0));
  a.load_out.assign(m, std::vector<std::int64_t>(inst.num_ports, 0));

  PriorityList pl;
  pl.coflows = detail::sorted_coflow_order(inst, p, lp);

  for (int k : pl.coflows) {
    int best = 0;
    std::int64_t best_val = 0;
    for (int h = 0; h < m; ++h) {
      std::int64_t worst_in = 0, worst_out = 0;
      for (int i = 0; i < inst.num_ports; ++i) {
        if (auto L = loads.input_load[k][i]; L > 0)
          worst_in = std::max(worst_in, a.load_in[h][i] + L);
        if (auto L = loads.output_load[k][i]; L > 0)
          worst_out = std::max(worst_out, a.load_out[h][i] + L);
      }
      std::int64_t val = worst_in + worst_out;
      if (h == 0 || val < best_val) {
        best = h;
        best_val = val;
      }
    }
    a.coflow_core[k] = best;
    for (int i = 0; i < inst.num_ports; ++i) {
      a.load_in[best][i] += loads.input_load[k][i];
      a.load_out[best][i] += loads.output_load[k][i];
    }
  }

  // Flow order induced by coflow order; (src, dst) within a coflow.
  for (int k : pl.coflows) {
    std::vector<int> own;
    for (int g = 0; g < static_cast<int>(flows.size()); ++g)
      if (flows[g].coflow == k) own.push_back(g);
    std::sort(own.begin(), own.end(), [&](int x, int y) {
      return std::pair(flows[x].src, flows[x].dst) < std::pair(flows[y].src, flows[y].dst);
    });
    for (int g : own) {
      a.flow_core[g] = a.coflow_core[k];
      pl.flows.push_back(g);
    }
  }
  return {std::move(a), std::move(pl)};
}

/// Single core: only an order is needed. Flows sorted by the owning
/// coflow's C-bar, then coflow id, then (src, dst).
inline std::pair<Assignment, PriorityList> order_single_core(const Instance& inst,
                                                             const LpProblem& p,
                                                             const LpSolution& lp) {
  if (inst.mode != Mode::single_core)
    throw std::invalid_argument("order_single_core: single_core mode required");
  const auto flows = flow_table(inst);

  Assignment a;
  a.flow_core.assign(flows.size(), 0);
  a.load_in.assign(1, std::vector<std::int64_t>(inst.num_ports, 0));
  a.load_out.assign(1, std::vector<std::int64_t>(inst.num_ports, 0));
  for (const auto& f : flows) {
    a.load_in[0][f.src] += f.size;
    a.load_out[0][f.dst] += f.size;
  }

  PriorityList pl;
  pl.coflows = detail::sorted_coflow_order(inst, p, lp);
  pl.flows = detail::sorted_flow_order(inst, p, lp);
  return {std::move(a), std::move(pl)};
}

inline std::pair<Assignment, PriorityList> dispatch_assignment(const Instance& inst,
                                                               const LpProblem& p,
                                                               const LpSolution& lp) {
  switch (inst.mode) {
    case Mode::divisible: return assign_cores_flow_driven(inst, p, lp);
    case Mode::indivisible: return assign_cores_coflow_driven(inst, p, lp);
    case Mode::single_core: return order_single_core(inst, p, lp);
  }
  throw std::logic_error("unreachable");
}

}  // namespace coflow
