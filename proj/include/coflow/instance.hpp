#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coflow {

enum class Mode { divisible, indivisible, single_core };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::divisible: return "divisible";
    case Mode::indivisible: return "indivisible";
    case Mode::single_core: return "single_core";
  }
  return "?";
}

inline std::optional<Mode> mode_from_string(const std::string& s) {
  if (s == "divisible") return Mode::divisible;
  if (s == "indivisible") return Mode::indivisible;
  if (s == "single_core") return Mode::single_core;
  return std::nullopt;
}

/// One flow of a coflow: `size` data units from input port `src` to output
/// port `dst`. Ports are 0-indexed.
struct FlowSpec {
  int src = 0;
  int dst = 0;
  std::int64_t size = 0;

  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct CoflowSpec {
  std::int64_t id = 0;
  double weight = 0.0;
  std::int64_t release = 0;
  std::vector<FlowSpec> flows;
  std::vector<std::int64_t> predecessors;

  friend bool operator==(const CoflowSpec&, const CoflowSpec&) = default;
};

struct JobSpec {
  std::int64_t id = 0;
  double weight = 0.0;
  std::vector<std::int64_t> coflows;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct Instance {
  int num_ports = 0;
  int num_cores = 1;
  Mode mode = Mode::single_core;
  std::vector<CoflowSpec> coflows;
  std::vector<JobSpec> jobs;

  friend bool operator==(const Instance&, const Instance&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Map coflow id -> index into Instance::coflows. Duplicate ids keep the
/// first occurrence; validate() flags duplicates separately.
inline std::map<std::int64_t, int> coflow_index_map(const Instance& inst) {
  std::map<std::int64_t, int> m;
  for (int k = 0; k < static_cast<int>(inst.coflows.size()); ++k)
    m.emplace(inst.coflows[k].id, k);
  return m;
}

/// Predecessor lists as indices. Ids without a matching coflow are dropped
/// here; validate() reports them.
inline std::vector<std::vector<int>> predecessor_indices(const Instance& inst) {
  auto idx = coflow_index_map(inst);
  std::vector<std::vector<int>> preds(inst.coflows.size());
  for (std::size_t k = 0; k < inst.coflows.size(); ++k)
    for (auto pid : inst.coflows[k].predecessors) {
      auto it = idx.find(pid);
      if (it != idx.end() && it->second != static_cast<int>(k))
        preds[k].push_back(it->second);
    }
  return preds;
}

/// Kahn topological order over coflow indices; nullopt on a cycle.
inline std::optional<std::vector<int>> topological_order(const Instance& inst) {
  const int n = static_cast<int>(inst.coflows.size());
  auto preds = predecessor_indices(inst);
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> succs(n);
  for (int k = 0; k < n; ++k)
    for (int p : preds[k]) {
      ++indeg[k];
      succs[p].push_back(k);
    }
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> queue;
  for (int k = 0; k < n; ++k)
    if (indeg[k] == 0) queue.push_back(k);
  while (!queue.empty()) {
    int k = queue.back();
    queue.pop_back();
    order.push_back(k);
    for (int s : succs[k])
      if (--indeg[s] == 0) queue.push_back(s);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

inline ValidationReport validate(const Instance& inst) {
  ValidationReport rep;
  auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

  if (inst.num_ports < 0) fail("num_ports negative");
  if (inst.num_cores < 1) fail("num_cores must be >= 1");
  if (inst.mode == Mode::single_core && inst.num_cores != 1)
    fail("single_core mode requires num_cores = 1");

  std::map<std::int64_t, int> seen_ids;
  for (const auto& c : inst.coflows) {
    auto [it, fresh] = seen_ids.emplace(c.id, 1);
    if (!fresh) fail("duplicate coflow id " + std::to_string(c.id));
  }

  auto idx = coflow_index_map(inst);
  for (const auto& c : inst.coflows) {
    const std::string tag = "coflow " + std::to_string(c.id) + ": ";
    if (c.weight < 0) fail(tag + "negative weight");
    if (c.release < 0) fail(tag + "negative release");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& f : c.flows) {
      if (f.src < 0 || f.src >= inst.num_ports)
        fail(tag + "port out of range (src " + std::to_string(f.src) + ")");
      if (f.dst < 0 || f.dst >= inst.num_ports)
        fail(tag + "port out of range (dst " + std::to_string(f.dst) + ")");
      if (f.size < 1) fail(tag + "nonpositive flow size");
      pairs.emplace_back(f.src, f.dst);
    }
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
      fail(tag + "duplicate (src,dst) pair");
    for (auto pid : c.predecessors) {
      if (pid == c.id) fail(tag + "self-predecessor");
      else if (!idx.count(pid))
        fail(tag + "dangling predecessor " + std::to_string(pid));
    }
  }

  if (!topological_order(inst)) fail("cycle in precedence DAG");

  std::map<std::int64_t, int> owner;  // coflow id -> job count
  std::map<std::int64_t, int> job_ids;
  for (const auto& j : inst.jobs) {
    const std::string tag = "job " + std::to_string(j.id) + ": ";
    auto [it, fresh] = job_ids.emplace(j.id, 1);
    if (!fresh) fail("duplicate job id " + std::to_string(j.id));
    if (j.weight < 0) fail(tag + "negative weight");
    for (auto cid : j.coflows) {
      if (!idx.count(cid)) fail(tag + "unknown coflow " + std::to_string(cid));
      if (++owner[cid] > 1)
        fail("coflow " + std::to_string(cid) + " assigned to more than one job");
    }
  }
  return rep;
}

/// mu: maximum number of coflows (vertices) on any directed path of the
/// DAG. 0 for an empty instance, 1 when there are no arcs.
inline int longest_path_mu(const Instance& inst) {
  auto order = topological_order(inst);
  if (!order) return 0;  // callers validate first
  auto preds = predecessor_indices(inst);
  std::vector<int> depth(inst.coflows.size(), 1);
  for (int k : *order) {
    for (int p : preds[k]) depth[k] = std::max(depth[k], depth[p] + 1);
  }
  int mu = 0;
  for (int d : depth) mu = std::max(mu, d);
  return mu;
}

/// Per-port totals: input_load[k][i] = sum_j d_ijk, output_load[k][j] = sum_i d_ijk.
struct PortLoads {
  std::vector<std::vector<std::int64_t>> input_load;
  std::vector<std::vector<std::int64_t>> output_load;
};

inline PortLoads port_loads(const Instance& inst) {
  PortLoads pl;
  const auto n = inst.coflows.size();
  pl.input_load.assign(n, std::vector<std::int64_t>(inst.num_ports, 0));
  pl.output_load.assign(n, std::vector<std::int64_t>(inst.num_ports, 0));
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& f : inst.coflows[k].flows) {
      pl.input_load[k][f.src] += f.size;
      pl.output_load[k][f.dst] += f.size;
    }
  return pl;
}

inline bool all_released_at_zero(const Instance& inst) {
  return std::all_of(inst.coflows.begin(), inst.coflows.end(),
                     [](const CoflowSpec& c) { return c.release == 0; });
}

/// Flat view of every flow in the instance, with back references to the
/// owning coflow. Order: coflows as listed, flows as listed within each.
struct FlowEntry {
  int coflow = 0;  // index into Instance::coflows
  int flow = 0;    // index into CoflowSpec::flows
  int src = 0;
  int dst = 0;
  std::int64_t size = 0;
  std::int64_t coflow_id = 0;
};

inline std::vector<FlowEntry> flow_table(const Instance& inst) {
  std::vector<FlowEntry> t;
  for (int k = 0; k < static_cast<int>(inst.coflows.size()); ++k) {
    const auto& c = inst.coflows[k];
    for (int f = 0; f < static_cast<int>(c.flows.size()); ++f) {
      const auto& fl = c.flows[f];
      t.push_back({k, f, fl.src, fl.dst, fl.size, c.id});
    }
  }
  return t;
}

}  // namespace coflow
