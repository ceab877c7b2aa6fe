// Command-line front end: instance generation, end-to-end runs, schedule
// verification, and batch benchmarking.
//
// Exit codes: 0 success, 1 usage/parse error, 2 validation error,
// 3 ratio or feasibility failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coflow/harness.hpp"
#include "coflow/instance_io.hpp"
#include "coflow/oracle.hpp"
#include "coflow/pipeline.hpp"
#include "coflow/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

coflow::Instance load_validated(const std::string& path) {
  auto inst = coflow::read_instance(slurp(path));
  auto rep = coflow::validate(inst);
  if (!rep.ok()) {
    for (const auto& v : rep.violations) std::cerr << "validation: " << v << "\n";
    throw std::system_error(std::make_error_code(std::errc::invalid_argument),
                            "instance failed validation");
  }
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace coflow;
  CLI::App app{"LP-guided list scheduling for coflows on parallel switching fabrics"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a seeded random instance");
  GeneratorConfig cfg;
  std::string gen_mode = "single_core", gen_prec = "none", gen_out;
  gen->add_option("--seed", cfg.seed);
  gen->add_option("--ports", cfg.num_ports);
  gen->add_option("--cores", cfg.num_cores);
  gen->add_option("--coflows", cfg.num_coflows);
  gen->add_option("--mode", gen_mode)->check(CLI::IsMember({"divisible", "indivisible", "single_core"}));
  gen->add_option("--density", cfg.density);
  gen->add_option("--size-min", cfg.size_lo);
  gen->add_option("--size-max", cfg.size_hi);
  gen->add_option("--release-max", cfg.release_max);
  gen->add_option("--weight-min", cfg.weight_lo);
  gen->add_option("--weight-max", cfg.weight_hi);
  gen->add_option("--prec", gen_prec)->check(CLI::IsMember({"none", "chain", "random_dag"}));
  gen->add_option("--prec-p", cfg.prec_p);
  gen->add_option("--jobs", cfg.num_jobs);
  gen->add_option("--out", gen_out);

  // --- run ---
  auto* run = app.add_subcommand("run", "solve, schedule, simulate and certify one instance");
  std::string run_instance, run_pipeline_name = "single_core", run_out;
  double run_tolerance = 1e-9;
  int run_max_rounds = 200;
  bool run_preempt = true;
  run->add_option("instance", run_instance)->required();
  run->add_option("--pipeline", run_pipeline_name)
      ->check(CLI::IsMember({"divisible", "indivisible", "single_core", "job_weighted",
                             "job_makespan"}));
  run->add_option("--tolerance", run_tolerance);
  run->add_option("--max-rounds", run_max_rounds);
  run->add_flag("--preempt,!--no-preempt", run_preempt,
                "re-scan grants at every event (default on)");
  run->add_option("--out", run_out);

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "check a run report's schedule for feasibility");
  std::string verify_instance, verify_report;
  verify->add_option("instance", verify_instance)->required();
  verify->add_option("report", verify_report)->required();

  // --- bench ---
  auto* bench = app.add_subcommand("bench", "run a (config x pipeline) grid and emit CSV");
  std::string bench_configs, bench_out;
  double bench_tolerance = 1e-9;
  int bench_max_rounds = 200;
  bench->add_option("--configs", bench_configs)->required();
  bench->add_option("--tolerance", bench_tolerance);
  bench->add_option("--max-rounds", bench_max_rounds);
  bench->add_option("--out", bench_out, "output directory for summary.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      auto mode = mode_from_string(gen_mode);
      cfg.mode = *mode;
      if (gen_prec == "chain") cfg.prec = PrecShape::chain;
      else if (gen_prec == "random_dag") cfg.prec = PrecShape::random_dag;
      auto inst = generate(cfg);
      emit(gen_out, write_instance(inst));
      return kExitOk;
    }

    if (*run) {
      Instance inst;
      try {
        inst = load_validated(run_instance);
      } catch (const ParseError& e) {
        std::cerr << "stage parse: " << e.what() << "\n";
        return kExitUsage;
      } catch (const std::system_error&) {
        return kExitValidation;
      }
      auto pl = pipeline_from_string(run_pipeline_name);
      PipelineOptions opts;
      opts.lp.tolerance = run_tolerance;
      opts.lp.max_rounds = run_max_rounds;
      opts.sim.preempt = run_preempt;

      RunResult result;
      try {
        result = run_pipeline(inst, *pl, opts);
      } catch (const std::invalid_argument& e) {
        std::cerr << "stage lp-build: " << e.what() << "\n";
        return kExitValidation;
      }
      auto ratio = ratio_check(inst, *pl, run_instance, opts, &result);
      auto feas = verify_schedule(inst, result.schedule);
      emit(run_out, run_report_to_json(inst, *pl, result, ratio).dump(2) + "\n");
      if (!feas.ok) {
        std::cerr << "stage verify: " << feas.violation << " at t=" << feas.witness_time
                  << "\n";
        return kExitCheckFailed;
      }
      if (!ratio.pass) {
        std::cerr << "stage ratio-check: cost " << ratio.algorithm_cost
                  << " exceeds bound " << ratio.bound << " x LP " << ratio.lp_objective
                  << "\n";
        return kExitCheckFailed;
      }
      return kExitOk;
    }

    if (*verify) {
      Instance inst;
      try {
        inst = load_validated(verify_instance);
      } catch (const ParseError& e) {
        std::cerr << "stage parse: " << e.what() << "\n";
        return kExitUsage;
      } catch (const std::system_error&) {
        return kExitValidation;
      }
      auto doc = nlohmann::json::parse(slurp(verify_report));
      auto sched = schedule_from_report(inst, doc);
      auto feas = verify_schedule(inst, sched);
      if (!feas.ok) {
        std::cerr << "infeasible: " << feas.violation << " at t=" << feas.witness_time
                  << "\n";
        return kExitCheckFailed;
      }
      std::cout << "feasible\n";
      return kExitOk;
    }

    if (*bench) {
      auto cells = read_bench_cells(slurp(bench_configs));
      PipelineOptions opts;
      opts.lp.tolerance = bench_tolerance;
      opts.lp.max_rounds = bench_max_rounds;
      auto outcome = run_bench(cells, opts);
      if (bench_out.empty()) {
        std::cout << outcome.csv;
      } else {
        std::filesystem::create_directories(bench_out);
        emit(bench_out + "/summary.csv", outcome.csv);
      }
      std::cerr << outcome.summary;
      return outcome.failures == 0 ? kExitOk : kExitCheckFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
