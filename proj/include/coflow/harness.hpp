#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "coflow/generator.hpp"
#include "coflow/instance_io.hpp"
#include "coflow/oracle.hpp"
#include "coflow/pipeline.hpp"

namespace coflow {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

inline nlohmann::ordered_json lp_solution_to_json(const LpProblem& p, const LpSolution& s) {
  nlohmann::ordered_json j;
  j["variables"] = nlohmann::ordered_json::object();
  for (int v = 0; v < p.num_vars(); ++v) j["variables"][p.var_names[v]] = s.values[v];
  j["objective"] = s.objective;
  j["cuts_added"] = s.cuts_added;
  j["iterations"] = s.iterations;
  j["complete"] = s.complete;
  return j;
}

inline nlohmann::ordered_json ratio_to_json(const RatioCheckResult& r) {
  nlohmann::ordered_json j;
  j["instance_id"] = r.instance_id;
  j["pipeline"] = to_string(r.pipeline);
  j["mode"] = to_string(r.mode);
  j["mu"] = r.mu;
  j["lp_objective"] = r.lp_objective;
  j["algorithm_cost"] = r.algorithm_cost;
  j["ratio"] = r.ratio;
  j["constant"] = r.constant;
  j["bound"] = r.bound;
  j["pass"] = r.pass;
  return j;
}

/// The single document `run` emits: LP solution, assignment, priority,
/// schedule, report, ratio check.
inline nlohmann::ordered_json run_report_to_json(const Instance& inst, Pipeline pl,
                                                 const RunResult& run,
                                                 const RatioCheckResult& ratio) {
  using json = nlohmann::ordered_json;
  const auto flows = flow_table(inst);

  json j;
  j["pipeline"] = to_string(pl);
  j["lp_solution"] = lp_solution_to_json(run.problem, run.lp);

  json assign;
  assign["flows"] = json::array();
  for (std::size_t g = 0; g < flows.size(); ++g)
    assign["flows"].push_back({{"k", flows[g].coflow_id},
                               {"i", flows[g].src},
                               {"j", flows[g].dst},
                               {"core", run.assignment.flow_core[g]}});
  if (!run.assignment.coflow_core.empty()) {
    assign["coflows"] = json::array();
    for (std::size_t k = 0; k < inst.coflows.size(); ++k)
      assign["coflows"].push_back(
          {{"k", inst.coflows[k].id}, {"core", run.assignment.coflow_core[k]}});
  }
  assign["load_in"] = run.assignment.load_in;
  assign["load_out"] = run.assignment.load_out;
  j["assignment"] = std::move(assign);

  json prio = json::array();
  for (int g : run.priority.flows)
    prio.push_back({{"k", flows[g].coflow_id}, {"i", flows[g].src}, {"j", flows[g].dst}});
  j["priority"] = std::move(prio);

  json sched = json::array();
  for (std::size_t g = 0; g < flows.size(); ++g) {
    json iv = json::array();
    for (const auto& s : run.schedule.flows[g].intervals)
      iv.push_back({s.start, s.end});
    sched.push_back({{"k", flows[g].coflow_id},
                     {"i", flows[g].src},
                     {"j", flows[g].dst},
                     {"core", run.schedule.flows[g].core},
                     {"intervals", std::move(iv)}});
  }
  j["schedule"] = std::move(sched);

  json rep;
  rep["coflows"] = json::array();
  for (const auto& c : run.report.coflows)
    rep["coflows"].push_back({{"id", c.id},
                              {"completion", c.completion},
                              {"ready", c.ready},
                              {"interval", c.interval}});
  if (!run.report.jobs.empty()) {
    rep["jobs"] = json::array();
    for (const auto& t : run.report.jobs)
      rep["jobs"].push_back({{"id", t.id}, {"completion", t.completion}});
  }
  rep["makespan"] = run.report.makespan;
  rep["weighted_coflow_cost"] = run.report.weighted_coflow_cost;
  rep["weighted_job_cost"] = run.report.weighted_job_cost;
  j["report"] = std::move(rep);

  j["ratio_check"] = ratio_to_json(ratio);
  return j;
}

/// Schedule extraction for `verify`: reads the schedule section of a run
/// report back into a Schedule aligned with flow_table(inst).
inline Schedule schedule_from_report(const Instance& inst, const nlohmann::json& doc) {
  const auto flows = flow_table(inst);
  if (!doc.contains("schedule"))
    throw ParseError("report document has no 'schedule' section");
  Schedule s;
  s.flows.resize(flows.size());
  std::vector<char> seen(flows.size(), 0);
  for (const auto& e : doc.at("schedule")) {
    std::int64_t k = e.at("k").get<std::int64_t>();
    int i = e.at("i").get<int>();
    int jj = e.at("j").get<int>();
    int g = -1;
    for (std::size_t x = 0; x < flows.size(); ++x)
      if (!seen[x] && flows[x].coflow_id == k && flows[x].src == i && flows[x].dst == jj) {
        g = static_cast<int>(x);
        break;
      }
    if (g < 0) throw ParseError("schedule entry does not match any instance flow");
    seen[g] = 1;
    s.flows[g].core = e.at("core").get<int>();
    for (const auto& iv : e.at("intervals"))
      s.flows[g].intervals.push_back({iv.at(0).get<Time>(), iv.at(1).get<Time>()});
  }
  for (char c : seen)
    if (!c) throw ParseError("schedule misses a flow of the instance");
  return s;
}

inline const char* kCsvHeader =
    "instance_id,mode,m,N,K,mu,lp_obj,alg_cost,ratio,bound,pass";

inline std::string csv_row(const RatioCheckResult& r) {
  std::string row = r.instance_id;
  row += ",";
  row += to_string(r.pipeline);
  row += "," + std::to_string(r.cores);
  row += "," + std::to_string(r.ports);
  row += "," + std::to_string(r.num_coflows);
  row += "," + std::to_string(r.mu);
  row += "," + detail::fmt_double(r.lp_objective);
  row += "," + detail::fmt_double(r.algorithm_cost);
  row += "," + detail::fmt_double(r.ratio);
  row += "," + detail::fmt_double(r.bound);
  row += r.pass ? ",1" : ",0";
  return row;
}

/// One bench cell: a base generator config expanded over consecutive seeds,
/// crossed with a pipeline list.
struct BenchCell {
  GeneratorConfig config;
  int seeds = 1;
  std::vector<Pipeline> pipelines;
};

struct BenchOutcome {
  std::string csv;       // full CSV with header
  std::string summary;   // worst observed ratio per cell
  int failures = 0;      // rows that failed or errored
};

inline BenchOutcome run_bench(const std::vector<BenchCell>& cells,
                              const PipelineOptions& opts = {}) {
  BenchOutcome out;
  out.csv = std::string(kCsvHeader) + "\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    for (Pipeline pl : cell.pipelines) {
      double worst = 0.0;
      for (int s = 0; s < cell.seeds; ++s) {
        GeneratorConfig cfg = cell.config;
        cfg.seed = cell.config.seed + static_cast<std::uint64_t>(s);
        std::string id = "cell" + std::to_string(c) + "-seed" + std::to_string(cfg.seed);
        try {
          Instance inst = generate(cfg);
          auto r = ratio_check(inst, pl, id, opts);
          worst = std::max(worst, r.ratio);
          if (!r.pass) ++out.failures;
          out.csv += csv_row(r) + "\n";
        } catch (const std::exception& e) {
          ++out.failures;
          out.csv += id + "," + to_string(pl) + ",0,0,0,0,0,0,0,0,0\n";
          out.summary += id + " error: " + std::string(e.what()) + "\n";
        }
      }
      out.summary += "cell" + std::to_string(c) + " " + to_string(pl) +
                     " worst_ratio=" + detail::fmt_double(worst) + "\n";
    }
  }
  return out;
}

/// Bench config document: {"cells":[{"config":{...},"seeds":n,"pipelines":[...]}]}.
inline std::vector<BenchCell> read_bench_cells(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bench config: ") + e.what());
  }
  std::vector<BenchCell> cells;
  if (!j.contains("cells")) return cells;
  for (const auto& cj : j.at("cells")) {
    BenchCell cell;
    if (cj.contains("seeds")) cell.seeds = cj.at("seeds").get<int>();
    for (const auto& p : cj.at("pipelines")) {
      auto pl = pipeline_from_string(p.get<std::string>());
      if (!pl) throw ParseError("unknown pipeline '" + p.get<std::string>() + "'");
      cell.pipelines.push_back(*pl);
    }
    const auto& g = cj.at("config");
    auto& cfg = cell.config;
    if (g.contains("seed")) cfg.seed = g.at("seed").get<std::uint64_t>();
    if (g.contains("num_ports")) cfg.num_ports = g.at("num_ports").get<int>();
    if (g.contains("num_cores")) cfg.num_cores = g.at("num_cores").get<int>();
    if (g.contains("num_coflows")) cfg.num_coflows = g.at("num_coflows").get<int>();
    if (g.contains("mode")) {
      auto m = mode_from_string(g.at("mode").get<std::string>());
      if (!m) throw ParseError("unknown mode in bench config");
      cfg.mode = *m;
    }
    if (g.contains("density")) cfg.density = g.at("density").get<double>();
    if (g.contains("size_lo")) cfg.size_lo = g.at("size_lo").get<std::int64_t>();
    if (g.contains("size_hi")) cfg.size_hi = g.at("size_hi").get<std::int64_t>();
    if (g.contains("release_max")) cfg.release_max = g.at("release_max").get<std::int64_t>();
    if (g.contains("weight_lo")) cfg.weight_lo = g.at("weight_lo").get<std::int64_t>();
    if (g.contains("weight_hi")) cfg.weight_hi = g.at("weight_hi").get<std::int64_t>();
    if (g.contains("prec")) {
      auto s = g.at("prec").get<std::string>();
      if (s == "none") cfg.prec = PrecShape::none;
      else if (s == "chain") cfg.prec = PrecShape::chain;
      else if (s == "random_dag") cfg.prec = PrecShape::random_dag;
      else throw ParseError("unknown precedence shape '" + s + "'");
    }
    if (g.contains("prec_p")) cfg.prec_p = g.at("prec_p").get<double>();
    if (g.contains("num_jobs")) cfg.num_jobs = g.at("num_jobs").get<int>();
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace coflow
