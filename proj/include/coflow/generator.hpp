#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "coflow/instance.hpp"

namespace coflow {

enum class PrecShape { none, chain, random_dag };

inline const char* to_string(PrecShape s) {
  switch (s) {
    case PrecShape::none: return "none";
    case PrecShape::chain: return "chain";
    case PrecShape::random_dag: return "random_dag";
  }
  return "?";
}

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int num_ports = 4;
  int num_cores = 1;
  int num_coflows = 4;
  Mode mode = Mode::single_core;
  double density = 0.5;        // probability a (src,dst) pair carries a flow
  std::int64_t size_lo = 1;
  std::int64_t size_hi = 10;
  std::int64_t release_max = 0;
  std::int64_t weight_lo = 1;
  std::int64_t weight_hi = 5;
  PrecShape prec = PrecShape::none;
  double prec_p = 0.25;        // arc probability for random_dag
  int num_jobs = 0;            // 0: no job grouping
};

inline void check_config(const GeneratorConfig& cfg) {
  auto bad = [](const std::string& what) {
    throw std::invalid_argument("generator config: " + what);
  };
  if (cfg.num_ports < 1) bad("num_ports < 1");
  if (cfg.num_cores < 1) bad("num_cores < 1");
  if (cfg.mode == Mode::single_core && cfg.num_cores != 1)
    bad("single_core requires num_cores = 1");
  if (cfg.num_coflows < 0) bad("num_coflows < 0");
  if (cfg.density <= 0.0 || cfg.density > 1.0) bad("density outside (0,1]");
  if (cfg.size_lo < 1 || cfg.size_hi < cfg.size_lo) bad("empty size range");
  if (cfg.release_max < 0) bad("negative release_max");
  if (cfg.weight_lo < 0 || cfg.weight_hi < cfg.weight_lo) bad("empty weight range");
  if (cfg.prec_p < 0.0 || cfg.prec_p > 1.0) bad("prec_p outside [0,1]");
  if (cfg.num_jobs < 0) bad("num_jobs < 0");
}

namespace detail {

// rng() % span keeps generation self-describing and identical across
// standard libraries; the bias is irrelevant at these ranges.
inline std::int64_t rand_between(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline bool rand_chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

}  // namespace detail

/// Seed-deterministic random instance. Every coflow gets at least one flow;
/// precedence arcs only point from lower to higher index, so the DAG is
/// acyclic by construction.
inline Instance generate(const GeneratorConfig& cfg) {
  check_config(cfg);
  std::mt19937_64 rng(cfg.seed);

  Instance inst;
  inst.num_ports = cfg.num_ports;
  inst.num_cores = cfg.num_cores;
  inst.mode = cfg.mode;

  for (int k = 0; k < cfg.num_coflows; ++k) {
    CoflowSpec c;
    c.id = k;
    c.weight = static_cast<double>(detail::rand_between(rng, cfg.weight_lo, cfg.weight_hi));
    c.release = cfg.release_max > 0 ? detail::rand_between(rng, 0, cfg.release_max) : 0;
    for (int i = 0; i < cfg.num_ports; ++i)
      for (int j = 0; j < cfg.num_ports; ++j)
        if (detail::rand_chance(rng, cfg.density))
          c.flows.push_back({i, j, detail::rand_between(rng, cfg.size_lo, cfg.size_hi)});
    if (c.flows.empty()) {
      int i = static_cast<int>(detail::rand_between(rng, 0, cfg.num_ports - 1));
      int j = static_cast<int>(detail::rand_between(rng, 0, cfg.num_ports - 1));
      c.flows.push_back({i, j, detail::rand_between(rng, cfg.size_lo, cfg.size_hi)});
    }
    switch (cfg.prec) {
      case PrecShape::none:
        break;
      case PrecShape::chain:
        if (k > 0) c.predecessors.push_back(k - 1);
        break;
      case PrecShape::random_dag:
        for (int a = 0; a < k; ++a)
          if (detail::rand_chance(rng, cfg.prec_p)) c.predecessors.push_back(a);
        break;
    }
    inst.coflows.push_back(std::move(c));
  }

  if (cfg.num_jobs > 0 && cfg.num_coflows > 0) {
    int jobs = std::min(cfg.num_jobs, cfg.num_coflows);
    for (int t = 0; t < jobs; ++t) {
      JobSpec j;
      j.id = t;
      j.weight = static_cast<double>(detail::rand_between(rng, cfg.weight_lo, cfg.weight_hi));
      inst.jobs.push_back(std::move(j));
    }
    for (int k = 0; k < cfg.num_coflows; ++k)
      inst.jobs[k % jobs].coflows.push_back(k);
  }

  return inst;
}

}  // namespace coflow
