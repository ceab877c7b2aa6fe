#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coflow/instance.hpp"
#include "coflow/scheduler.hpp"

namespace coflow {

using Time = std::int64_t;

struct Interval {
  Time start = 0;
  Time end = 0;  // half-open [start, end)
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Exact executable record: per flow, its core and transmission intervals
/// at rate 1.
struct Schedule {
  struct FlowSchedule {
    int core = 0;
    std::vector<Interval> intervals;
  };
  std::vector<FlowSchedule> flows;  // indexed like flow_table(instance)
};

struct ScheduleReport {
  struct CoflowResult {
    std::int64_t id = 0;
    Time completion = 0;   // C-tilde
    Time ready = 0;        // max(release, predecessors' completions)
    Time interval = 0;     // C-hat = completion - ready
  };
  struct JobResult {
    std::int64_t id = 0;
    Time completion = 0;
  };
  std::vector<CoflowResult> coflows;  // indexed by coflow index
  std::vector<JobResult> jobs;        // indexed by job index
  Time makespan = 0;
  double weighted_coflow_cost = 0.0;
  double weighted_job_cost = 0.0;
};

struct SimulateOptions {
  bool preempt = true;           // re-scan grants from scratch at every event
  bool precedence_gating = true; // false: predecessors only shape priority, not readiness
};

/// List scheduling on m independent cores: at every event each core grants
/// its idle input/output port pairs to eligible flows in priority order and
/// transmits at rate 1 until the next release or completion. All event
/// times are integers.
inline std::pair<Schedule, ScheduleReport> simulate(const Instance& inst,
                                                    const Assignment& assignment,
                                                    const PriorityList& priority,
                                                    const SimulateOptions& opts = {}) {
  const auto flows = flow_table(inst);
  const auto preds = predecessor_indices(inst);
  const int n_flows = static_cast<int>(flows.size());
  const int n_coflows = static_cast<int>(inst.coflows.size());
  const Time NEVER = std::numeric_limits<Time>::max();

  if (static_cast<int>(assignment.flow_core.size()) != n_flows ||
      static_cast<int>(priority.flows.size()) != n_flows)
    throw std::invalid_argument("simulate: assignment/priority do not cover all flows");

  std::vector<Time> remaining(n_flows);
  std::vector<int> pending_flows(n_coflows, 0);
  for (int g = 0; g < n_flows; ++g) {
    remaining[g] = flows[g].size;
    ++pending_flows[flows[g].coflow];
  }

  std::vector<Time> coflow_done(n_coflows, NEVER);
  Schedule sched;
  sched.flows.resize(n_flows);
  for (int g = 0; g < n_flows; ++g) sched.flows[g].core = assignment.flow_core[g];

  auto ready_at = [&](int k, Time t) {
    if (!opts.precedence_gating) return true;
    for (int p : preds[k])
      if (coflow_done[p] == NEVER || coflow_done[p] > t) return false;
    return true;
  };

  std::vector<int> granted;               // flows transmitting now
  std::vector<char> was_granted(n_flows, 0);
  int done_coflows = 0;

  Time t = 0;
  // First event: the earliest release (or 0 if nothing to do).
  {
    Time first = NEVER;
    for (const auto& c : inst.coflows) first = std::min(first, c.release);
    t = (first == NEVER) ? 0 : first;
  }

  long guard = 0;
  while (done_coflows < n_coflows) {
    if (++guard > 4L * (n_flows + n_coflows + 2) * (n_flows + n_coflows + 2) + 64)
      throw std::logic_error("simulate: no progress (policy gap)");

    // Coflow completions cascade at a fixed time (zero-flow chains).
    for (bool changed = true; changed;) {
      changed = false;
      for (int k = 0; k < n_coflows; ++k) {
        if (coflow_done[k] != NEVER || pending_flows[k] > 0) continue;
        if (t < inst.coflows[k].release || !ready_at(k, t)) continue;
        coflow_done[k] = t;
        ++done_coflows;
        changed = true;
      }
    }
    if (done_coflows == n_coflows) break;

    // Grant links: per core, greedy in priority order.
    std::vector<int> prev_granted = std::move(granted);
    granted.clear();
    std::vector<std::vector<char>> in_busy(inst.num_cores,
                                           std::vector<char>(inst.num_ports, 0));
    std::vector<std::vector<char>> out_busy(inst.num_cores,
                                            std::vector<char>(inst.num_ports, 0));
    auto eligible = [&](int g) {
      const auto& f = flows[g];
      return remaining[g] > 0 && t >= inst.coflows[f.coflow].release &&
             ready_at(f.coflow, t);
    };
    auto try_grant = [&](int g) {
      const auto& f = flows[g];
      int h = assignment.flow_core[g];
      if (in_busy[h][f.src] || out_busy[h][f.dst]) return;
      in_busy[h][f.src] = 1;
      out_busy[h][f.dst] = 1;
      granted.push_back(g);
    };
    if (!opts.preempt) {
      // Running flows keep their links; only idle links are handed out.
      for (int g : prev_granted)
        if (remaining[g] > 0) try_grant(g);
    }
    for (int g : priority.flows)
      if (eligible(g) && (opts.preempt || remaining[g] > 0)) try_grant(g);

    // Next event: earliest grant completion or future release.
    Time next = NEVER;
    for (int g : granted) next = std::min(next, t + remaining[g]);
    for (int k = 0; k < n_coflows; ++k)
      if (coflow_done[k] == NEVER && inst.coflows[k].release > t)
        next = std::min(next, inst.coflows[k].release);
    if (next == NEVER)
      throw std::logic_error("simulate: stalled with incomplete flows");

    for (int g : granted) {
      auto& iv = sched.flows[g].intervals;
      if (!iv.empty() && iv.back().end == t)
        iv.back().end = next;
      else
        iv.push_back({t, next});
      remaining[g] -= next - t;
      if (remaining[g] == 0) --pending_flows[flows[g].coflow];
    }
    t = next;
  }

  // Report.
  ScheduleReport rep;
  rep.coflows.resize(n_coflows);
  for (int k = 0; k < n_coflows; ++k) {
    Time ready = inst.coflows[k].release;
    for (int p : preds[k]) ready = std::max(ready, coflow_done[p]);
    auto& r = rep.coflows[k];
    r.id = inst.coflows[k].id;
    r.completion = coflow_done[k];
    r.ready = opts.precedence_gating ? ready : inst.coflows[k].release;
    r.interval = r.completion - r.ready;
    rep.makespan = std::max(rep.makespan, r.completion);
    rep.weighted_coflow_cost +=
        inst.coflows[k].weight * static_cast<double>(r.completion);
  }
  auto idx = coflow_index_map(inst);
  rep.jobs.resize(inst.jobs.size());
  for (std::size_t tj = 0; tj < inst.jobs.size(); ++tj) {
    const auto& job = inst.jobs[tj];
    Time done = 0;
    for (auto cid : job.coflows)
      done = std::max(done, rep.coflows[idx.at(cid)].completion);
    rep.jobs[tj] = {job.id, done};
    rep.weighted_job_cost += job.weight * static_cast<double>(done);
  }
  return {std::move(sched), std::move(rep)};
}

struct FeasibilityReport {
  bool ok = true;
  std::string violation;        // empty when ok
  Time witness_time = 0;

  static FeasibilityReport pass() { return {}; }
  static FeasibilityReport fail(std::string what, Time when) {
    return {false, std::move(what), when};
  }
};

/// Checks port exclusivity per core, release times, precedence, and exact
/// transmitted volume against the instance. Reports the first violation.
inline FeasibilityReport verify_schedule(const Instance& inst, const Schedule& sched) {
  const auto flows = flow_table(inst);
  const auto preds = predecessor_indices(inst);
  if (sched.flows.size() != flows.size())
    return FeasibilityReport::fail("schedule does not cover all flows", 0);

  // Volume, interval sanity, release.
  for (std::size_t g = 0; g < flows.size(); ++g) {
    const auto& f = flows[g];
    const auto& fs = sched.flows[g];
    if (fs.core < 0 || fs.core >= inst.num_cores)
      return FeasibilityReport::fail("core out of range", 0);
    Time total = 0, prev_end = std::numeric_limits<Time>::min();
    for (const auto& iv : fs.intervals) {
      if (iv.end <= iv.start)
        return FeasibilityReport::fail("empty or inverted interval", iv.start);
      if (iv.start < prev_end)
        return FeasibilityReport::fail("overlapping intervals within one flow", iv.start);
      prev_end = iv.end;
      total += iv.end - iv.start;
      if (iv.start < inst.coflows[f.coflow].release)
        return FeasibilityReport::fail("flow transmits before its coflow's release",
                                       iv.start);
    }
    if (total != f.size)
      return FeasibilityReport::fail("transmitted volume differs from flow size",
                                     prev_end == std::numeric_limits<Time>::min() ? 0
                                                                                  : prev_end);
  }

  // Precedence: every flow of k starts at or after every predecessor flow ends.
  std::vector<Time> coflow_end(inst.coflows.size(), 0);
  std::vector<Time> coflow_start(inst.coflows.size(), std::numeric_limits<Time>::max());
  for (std::size_t g = 0; g < flows.size(); ++g)
    for (const auto& iv : sched.flows[g].intervals) {
      coflow_end[flows[g].coflow] = std::max(coflow_end[flows[g].coflow], iv.end);
      coflow_start[flows[g].coflow] = std::min(coflow_start[flows[g].coflow], iv.start);
    }
  for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
    if (coflow_start[k] == std::numeric_limits<Time>::max()) continue;  // no flows
    for (int p : preds[k])
      if (coflow_start[k] < coflow_end[p])
        return FeasibilityReport::fail("flow starts before a predecessor coflow completes",
                                       coflow_start[k]);
  }

  // Port exclusivity via a sweep per (core, side, port).
  // events: (time, +1 on start, -1 on end)
  std::map<std::tuple<int, int, int>, std::vector<std::pair<Time, int>>> usage;
  for (std::size_t g = 0; g < flows.size(); ++g) {
    const auto& f = flows[g];
    const auto& fs = sched.flows[g];
    for (const auto& iv : fs.intervals) {
      usage[{fs.core, 0, f.src}].push_back({iv.start, 1});
      usage[{fs.core, 0, f.src}].push_back({iv.end, -1});
      usage[{fs.core, 1, f.dst}].push_back({iv.start, 1});
      usage[{fs.core, 1, f.dst}].push_back({iv.end, -1});
    }
  }
  for (auto& [key, events] : usage) {
    std::sort(events.begin(), events.end(),
              [](auto a, auto b) {  // ends before starts at equal times
                return std::pair(a.first, a.second) < std::pair(b.first, b.second);
              });
    int active = 0;
    for (auto [time, delta] : events) {
      active += delta;
      if (active > 1) {
        const char* side = std::get<1>(key) == 0 ? "input" : "output";
        return FeasibilityReport::fail(std::string("two flows active on one ") + side +
                                           " port",
                                       time);
      }
    }
  }
  return FeasibilityReport::pass();
}

struct CostSummary {
  double weighted_coflow_cost = 0.0;
  double weighted_job_cost = 0.0;
  Time makespan = 0;
};

inline CostSummary report_costs(const ScheduleReport& rep) {
  return {rep.weighted_coflow_cost, rep.weighted_job_cost, rep.makespan};
}

}  // namespace coflow
