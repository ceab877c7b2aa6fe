// Acceptance suite: end-to-end certification of the guaranteed bounds on a
// seeded corpus. Prints one line per criterion; exits nonzero on failure.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "coflow/harness.hpp"
#include "coflow/oracle.hpp"

using namespace coflow;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %d (%s): %s%s%s\n", criterion, name.c_str(),
              pass ? "PASS" : "FAIL", detail.empty() ? "" : " — ", detail.c_str());
  if (!pass) ++g_failures;
}

GeneratorConfig corpus_config(Mode mode, unsigned seed, bool zero_release) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.mode = mode;
  cfg.num_ports = 2 + seed % 5;                       // N <= 6
  cfg.num_coflows = 1 + seed % 8;                     // |K| <= 8
  cfg.num_cores = mode == Mode::single_core ? 1 : 1 + seed % 3;  // m in {1,2,3}
  cfg.density = 0.2 + 0.1 * (seed % 6);
  cfg.size_lo = 1;
  cfg.size_hi = 10;
  cfg.release_max = zero_release ? 0 : 1 + seed % 20;
  cfg.prec = static_cast<PrecShape>(seed % 3);        // mixed shapes
  cfg.prec_p = 0.35;
  return cfg;
}

Pipeline mode_pipeline(Mode mode) {
  switch (mode) {
    case Mode::divisible: return Pipeline::divisible;
    case Mode::indivisible: return Pipeline::indivisible;
    case Mode::single_core: return Pipeline::single_core;
  }
  return Pipeline::single_core;
}

struct CorpusStats {
  int instances = 0;
  int ratio_failures = 0;
  int feasibility_failures = 0;
  int interval_failures = 0;
  double worst_ratio = 0.0;
};

// Shared corpus runner for criteria 1-3 plus the feasibility (7) and
// interval-length (8) checks on the same schedules.
CorpusStats run_mode_corpus(Mode mode, int per_regime) {
  CorpusStats stats;
  for (int zero = 0; zero < 2; ++zero) {
    for (int s = 0; s < per_regime; ++s) {
      auto cfg = corpus_config(mode, static_cast<unsigned>(s), zero == 1);
      auto inst = generate(cfg);
      auto run = run_pipeline(inst, mode_pipeline(mode));
      auto r = ratio_check(inst, mode_pipeline(mode), "", {}, &run);
      if (!r.pass) ++stats.ratio_failures;
      stats.worst_ratio = std::max(stats.worst_ratio, r.ratio);
      if (!verify_schedule(inst, run.schedule).ok) ++stats.feasibility_failures;
      double limit = guarantee_constant(mode, inst.num_cores, all_released_at_zero(inst));
      if (worst_interval_ratio(inst, run) > limit + 1e-9) ++stats.interval_failures;
      ++stats.instances;
    }
  }
  return stats;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

int main() {
  // Criteria 1-3 (+ inputs to 7 and 8): per-mode ratio suites.
  struct {
    Mode mode;
    int criterion;
    const char* name;
  } suites[] = {
      {Mode::divisible, 1, "ratio suite, divisible"},
      {Mode::indivisible, 2, "ratio suite, indivisible"},
      {Mode::single_core, 3, "ratio suite, single-core"},
  };
  int feasibility_failures = 0;
  int interval_failures = 0;
  int total_schedules = 0;
  for (const auto& suite : suites) {
    auto stats = run_mode_corpus(suite.mode, 110);  // 220 instances per mode
    report(suite.criterion, suite.name, stats.ratio_failures == 0,
           std::to_string(stats.instances) + " instances, worst ratio " +
               fmt(stats.worst_ratio));
    feasibility_failures += stats.feasibility_failures;
    interval_failures += stats.interval_failures;
    total_schedules += stats.instances;
  }

  // Criterion 4: multi-stage suites, 2-4 jobs, both objectives.
  {
    int fails = 0, count = 0;
    double worst = 0.0;
    for (unsigned s = 0; s < 120; ++s) {
      Mode mode = static_cast<Mode>(s % 3);
      auto cfg = corpus_config(mode, s, s % 2 == 0);
      cfg.num_coflows = 2 + s % 7;
      cfg.num_jobs = 2 + s % 3;  // 2-4 jobs
      auto inst = generate(cfg);
      for (Pipeline pl : {Pipeline::job_weighted, Pipeline::job_makespan}) {
        auto run = run_pipeline(inst, pl);
        auto r = ratio_check(inst, pl, "", {}, &run);
        if (!r.pass) ++fails;
        worst = std::max(worst, r.ratio);
        if (!verify_schedule(inst, run.schedule).ok) ++feasibility_failures;
        ++total_schedules;
      }
      ++count;
    }
    report(4, "multi-stage suite", fails == 0,
           std::to_string(count) + " instances x 2 objectives, worst ratio " + fmt(worst));
  }

  // Criterion 5: prefix separation vs subset brute force on fuzzed candidates.
  {
    std::mt19937_64 rng(9001);
    int candidates = 0, mismatches = 0;
    for (unsigned seed = 0; candidates < 500; ++seed) {
      GeneratorConfig cfg;
      cfg.seed = seed;
      cfg.num_ports = 2 + seed % 2;
      cfg.num_coflows = 2 + seed % 5;
      cfg.mode = seed % 2 ? Mode::single_core : Mode::indivisible;
      cfg.num_cores = seed % 2 ? 1 : 2;
      cfg.density = 0.5;
      auto inst = generate(cfg);
      auto p = build_lp(inst);
      std::int64_t total = 1;
      for (const auto& c : inst.coflows)
        for (const auto& f : c.flows) total += f.size;
      for (int trial = 0; trial < 5; ++trial, ++candidates) {
        LpSolution cand;
        for (int v = 0; v < p.num_vars(); ++v)
          cand.values.push_back(static_cast<double>(rng() % (2 * total + 1)));
        auto cuts = separate_prefix_violations(cand, p, 1e-9);
        for (auto side : {PortSide::input, PortSide::output}) {
          const auto& ports = side == PortSide::input ? p.input_members : p.output_members;
          for (int port = 0; port < static_cast<int>(ports.size()); ++port) {
            if (ports[port].empty() || ports[port].size() > 8) continue;
            auto brute = brute_force_separation(cand, p, side, port);
            double prefix_max = 0.0;
            for (const auto& c : cuts)
              if (c.side == side && c.port == port)
                prefix_max = std::max(prefix_max, c.violation);
            bool brute_violated = brute.violation > 1e-9;
            bool prefix_violated = prefix_max > 0.0;
            if (brute_violated != prefix_violated ||
                (brute_violated && std::abs(prefix_max - brute.violation) > 1e-9))
              ++mismatches;
          }
        }
      }
    }
    report(5, "separation correctness", mismatches == 0,
           std::to_string(candidates) + " candidates, " + std::to_string(mismatches) +
               " mismatches");
  }

  // Criterion 6: LP lower bound vs exhaustive permutation search.
  {
    int fails = 0, count = 0;
    for (unsigned s = 0; s < 100; ++s) {
      GeneratorConfig cfg;
      cfg.seed = s;
      cfg.num_ports = 2 + s % 4;
      cfg.num_coflows = 1 + s % 5;  // |K| <= 5
      cfg.density = 0.3 + 0.1 * (s % 5);
      auto inst = generate(cfg);
      auto p = build_single_core_lp(inst);
      SimplexBackend backend;
      auto sol = solve_with_cutting_plane(p, backend);
      if (sol.objective > best_permutation_schedule(inst).cost + 1e-6) ++fails;
      ++count;
    }
    // The hand-solved 2-coflow instance: LP objective 4, best permutation 4.
    Instance hand;
    hand.num_ports = 2;
    hand.num_cores = 1;
    hand.mode = Mode::single_core;
    hand.coflows = {{0, 1.0, 0, {{0, 0, 1}}, {}}, {1, 1.0, 0, {{0, 1, 2}}, {}}};
    auto hp = build_single_core_lp(hand);
    SimplexBackend backend;
    auto hs = solve_with_cutting_plane(hp, backend);
    double perm = best_permutation_schedule(hand).cost;
    bool hand_ok = std::abs(hs.objective - 4.0) < 1e-6 && std::abs(perm - 4.0) < 1e-9;
    report(6, "lower-bound validity", fails == 0 && hand_ok,
           std::to_string(count) + " instances; hand instance LP=" + fmt(hs.objective) +
               " perm=" + fmt(perm));
  }

  // Criterion 7: every schedule produced by criteria 1-4 verified feasible.
  report(7, "feasibility", feasibility_failures == 0,
         std::to_string(total_schedules) + " schedules, " +
             std::to_string(feasibility_failures) + " infeasible");

  // Criterion 8: per-coflow interval lengths against the per-mode guarantee constants.
  report(8, "interval-length bounds", interval_failures == 0,
         std::to_string(interval_failures) + " violations over criteria 1-3 corpora");

  // Criterion 9: determinism — identical seeds give byte-identical CSV.
  {
    std::vector<BenchCell> cells;
    for (int mode = 0; mode < 3; ++mode) {
      BenchCell cell;
      cell.config = corpus_config(static_cast<Mode>(mode), 1, false);
      cell.config.seed = 100;
      cell.seeds = 10;
      cell.pipelines = {mode_pipeline(static_cast<Mode>(mode))};
      cells.push_back(cell);
    }
    auto a = run_bench(cells);
    auto b = run_bench(cells);
    report(9, "determinism", a.csv == b.csv && !a.csv.empty(),
           std::to_string(cells.size()) + " cells x 10 seeds re-run");
  }

  if (g_failures == 0) std::printf("acceptance: all criteria passed\n");
  return g_failures == 0 ? 0 : 1;
}
