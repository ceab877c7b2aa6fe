#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "coflow/generator.hpp"
#include "coflow/lp.hpp"
#include "coflow/oracle.hpp"
#include "coflow/simplex.hpp"

using namespace coflow;

namespace {

constexpr double kTol = 1e-6;

Instance make(int ports, Mode mode, std::vector<CoflowSpec> coflows, int cores = 1) {
  Instance inst;
  inst.num_ports = ports;
  inst.num_cores = cores;
  inst.mode = mode;
  inst.coflows = std::move(coflows);
  return inst;
}

LpSolution solve(LpProblem& p) {
  SimplexBackend backend;
  return solve_with_cutting_plane(p, backend);
}

// Backend wrapper that records the objective of every round.
struct RecordingBackend : LpBackend {
  SimplexBackend inner;
  std::vector<double> objectives;
  LpVertex solve(const DenseLp& lp) override {
    auto v = inner.solve(lp);
    objectives.push_back(v.objective);
    return v;
  }
};

}  // namespace

TEST_CASE("simplex: single bound") {
  DenseLp lp;
  lp.num_vars = 1;
  lp.objective = {1.0};
  lp.rows = {{{{0, 1.0}}, 5.0}};
  REQUIRE_THAT(SimplexBackend().solve(lp).objective, Catch::Matchers::WithinAbs(5.0, kTol));
}

TEST_CASE("simplex: two-variable vertex") {
  DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {1.0, 1.0};
  lp.rows = {{{{0, 1.0}}, 1.0}, {{{1, 1.0}}, 2.0}, {{{0, 1.0}, {1, 2.0}}, 7.0}};
  REQUIRE_THAT(SimplexBackend().solve(lp).objective, Catch::Matchers::WithinAbs(4.0, kTol));
}

TEST_CASE("simplex: zero objective stays feasible") {
  DenseLp lp;
  lp.num_vars = 2;
  lp.objective = {0.0, 0.0};
  lp.rows = {{{{0, 1.0}, {1, 1.0}}, 3.0}};
  auto v = SimplexBackend().solve(lp);
  REQUIRE_THAT(v.objective, Catch::Matchers::WithinAbs(0.0, kTol));
  REQUIRE(v.x[0] + v.x[1] >= 3.0 - kTol);
}

TEST_CASE("simplex: dual path agrees with two-phase path") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    DenseLp lp;
    lp.num_vars = 2 + static_cast<int>(rng() % 4);
    for (int j = 0; j < lp.num_vars; ++j)
      lp.objective.push_back(static_cast<double>(rng() % 5));
    int rows = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < rows; ++i) {
      DenseLp::Row row;
      for (int j = 0; j < lp.num_vars; ++j)
        if (rng() % 2) row.terms.push_back({j, static_cast<double>(1 + rng() % 4)});
      if (row.terms.empty()) row.terms.push_back({0, 1.0});
      row.rhs = static_cast<double>(rng() % 20);
      lp.rows.push_back(std::move(row));
    }
    SimplexBackend backend;
    auto a = backend.solve_via_dual(lp);
    auto b = backend.solve_two_phase(lp);
    REQUIRE_THAT(a.objective, Catch::Matchers::WithinAbs(b.objective, kTol));
  }
}

TEST_CASE("divisible LP: single flow pins the optimum") {
  auto inst = make(1, Mode::divisible, {{0, 1.0, 0, {{0, 0, 5}}, {}}});
  auto p = build_divisible_lp(inst);
  auto sol = solve(p);
  REQUIRE_THAT(sol.objective, Catch::Matchers::WithinAbs(5.0, kTol));
}

TEST_CASE("divisible LP: chain on disjoint ports") {
  auto inst = make(4, Mode::divisible,
                   {{0, 1.0, 0, {{0, 0, 1}}, {}}, {1, 1.0, 0, {{1, 1, 1}}, {0}}});
  auto p = build_divisible_lp(inst);
  auto sol = solve(p);
  REQUIRE_THAT(sol.value(p.coflow_var[0]), Catch::Matchers::WithinAbs(1.0, kTol));
  REQUIRE_THAT(sol.value(p.coflow_var[1]), Catch::Matchers::WithinAbs(2.0, kTol));
}

TEST_CASE("divisible LP: two flows on one input port, hand-solved optimum 4") {
  auto inst = make(3, Mode::divisible,
                   {{0, 1.0, 0, {{0, 1, 1}}, {}}, {1, 1.0, 0, {{0, 2, 2}}, {}}});
  auto p = build_divisible_lp(inst);
  auto sol = solve(p);
  REQUIRE_THAT(sol.objective, Catch::Matchers::WithinAbs(4.0, kTol));
  REQUIRE(sol.complete);
}

TEST_CASE("builders reject the wrong mode") {
  auto inst = make(1, Mode::divisible, {});
  REQUIRE_THROWS_AS(build_indivisible_lp(inst), std::invalid_argument);
  REQUIRE_THROWS_AS(build_single_core_lp(inst), std::invalid_argument);
}

TEST_CASE("indivisible LP: release plus max load") {
  auto inst = make(2, Mode::indivisible,
                   {{0, 1.0, 3, {{0, 0, 4}, {0, 1, 3}}, {}}}, 2);  // L_i0 = 7
  auto p = build_indivisible_lp(inst);
  auto sol = solve(p);
  REQUIRE_THAT(sol.objective, Catch::Matchers::WithinAbs(10.0, kTol));
}

TEST_CASE("indivisible LP: two identical unit coflows, two cores") {
  auto inst = make(1, Mode::indivisible,
                   {{0, 1.0, 0, {{0, 0, 1}}, {}}, {1, 1.0, 0, {{0, 0, 1}}, {}}}, 2);
  auto p = build_indivisible_lp(inst);
  auto sol = solve(p);
  REQUIRE(sol.value(p.coflow_var[0]) >= 1.0 - kTol);
  REQUIRE(sol.value(p.coflow_var[1]) >= 1.0 - kTol);
}

TEST_CASE("indivisible LP: two coflows sharing a port, optimum 4") {
  auto inst = make(2, Mode::indivisible,
                   {{0, 1.0, 0, {{0, 0, 1}}, {}}, {1, 1.0, 0, {{0, 1, 2}}, {}}});
  auto p = build_indivisible_lp(inst);
  REQUIRE_THAT(solve(p).objective, Catch::Matchers::WithinAbs(4.0, kTol));
}

TEST_CASE("single-core LP: load only") {
  auto inst = make(2, Mode::single_core, {{0, 1.0, 0, {{0, 0, 4}}, {}}});
  auto p = build_single_core_lp(inst);
  REQUIRE_THAT(solve(p).objective, Catch::Matchers::WithinAbs(4.0, kTol));
}

TEST_CASE("single-core LP: three unit coflows on one port give objective 6") {
  auto inst = make(1, Mode::single_core,
                   {{0, 1.0, 0, {{0, 0, 1}}, {}},
                    {1, 1.0, 0, {{0, 0, 1}}, {}},
                    {2, 1.0, 0, {{0, 0, 1}}, {}}});
  auto p = build_single_core_lp(inst);
  REQUIRE_THAT(solve(p).objective, Catch::Matchers::WithinAbs(6.0, kTol));
}

TEST_CASE("job layer: completion bounded by member coflows") {
  auto inst = make(2, Mode::single_core,
                   {{0, 1.0, 0, {{0, 0, 2}}, {}}, {1, 1.0, 0, {{1, 1, 5}}, {}}});
  inst.jobs = {{0, 1.0, {0, 1}}};
  auto p = build_single_core_lp(inst);
  add_job_layer(p, inst, JobObjective::weighted_jobs);
  auto sol = solve(p);
  REQUIRE_THAT(sol.value(p.job_var[0]), Catch::Matchers::WithinAbs(5.0, kTol));
}

TEST_CASE("job layer: makespan is the max completion") {
  auto inst = make(3, Mode::single_core,
                   {{0, 1.0, 0, {{0, 0, 3}}, {}},
                    {1, 1.0, 0, {{1, 1, 7}}, {}},
                    {2, 1.0, 0, {{2, 2, 4}}, {}}});
  auto p = build_single_core_lp(inst);
  add_job_layer(p, inst, JobObjective::makespan);
  auto sol = solve(p);
  REQUIRE_THAT(sol.value(p.cmax_var), Catch::Matchers::WithinAbs(7.0, kTol));
}

TEST_CASE("job layer: weighted objective combines jobs linearly") {
  auto inst = make(2, Mode::single_core,
                   {{0, 1.0, 0, {{0, 0, 2}}, {}}, {1, 1.0, 0, {{1, 1, 3}}, {}}});
  inst.jobs = {{0, 1.0, {0}}, {1, 2.0, {1}}};
  auto p = build_single_core_lp(inst);
  add_job_layer(p, inst, JobObjective::weighted_jobs);
  auto sol = solve(p);
  double expected = sol.value(p.job_var[0]) + 2.0 * sol.value(p.job_var[1]);
  REQUIRE_THAT(sol.objective, Catch::Matchers::WithinAbs(expected, kTol));
}

TEST_CASE("job layer: weighted_jobs without jobs is an error") {
  auto inst = make(1, Mode::single_core, {{0, 1.0, 0, {{0, 0, 1}}, {}}});
  auto p = build_single_core_lp(inst);
  REQUIRE_THROWS_AS(add_job_layer(p, inst, JobObjective::weighted_jobs),
                    std::invalid_argument);
}

TEST_CASE("separation: violated prefix with slack 6") {
  auto inst = make(2, Mode::single_core,
                   {{0, 1.0, 0, {{0, 0, 2}}, {}}, {1, 1.0, 0, {{0, 1, 3}}, {}}});
  auto p = build_single_core_lp(inst);
  LpSolution cand;
  cand.values = {2.0, 3.0};
  auto cuts = separate_prefix_violations(cand, p, 1e-9);
  bool found = false;
  for (const auto& c : cuts)
    if (c.side == PortSide::input && c.port == 0 && c.members.size() == 2) {
      found = true;
      REQUIRE_THAT(c.violation, Catch::Matchers::WithinAbs(6.0, kTol));
      REQUIRE_THAT(c.rhs, Catch::Matchers::WithinAbs(19.0, kTol));
    }
  REQUIRE(found);
}

TEST_CASE("separation: tight singleton is not violated") {
  auto inst = make(1, Mode::single_core, {{0, 1.0, 0, {{0, 0, 5}}, {}}});
  auto p = build_single_core_lp(inst);
  LpSolution cand;
  cand.values = {5.0};
  REQUIRE(separate_prefix_violations(cand, p, 1e-9).empty());
}

TEST_CASE("separation: scaling a feasible point up stays feasible") {
  GeneratorConfig cfg;
  cfg.seed = 3;
  cfg.num_coflows = 5;
  cfg.num_ports = 3;
  auto inst = generate(cfg);
  auto p = build_single_core_lp(inst);
  auto sol = solve(p);
  for (auto& v : sol.values) v *= 10.0;
  REQUIRE(separate_prefix_violations(sol, p, 1e-9).empty());
}

TEST_CASE("cutting plane: objective never decreases across rounds") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.num_ports = 3;
    cfg.num_coflows = 6;
    cfg.density = 0.6;
    cfg.release_max = seed % 2 ? 8 : 0;
    auto inst = generate(cfg);
    auto p = build_single_core_lp(inst);
    RecordingBackend backend;
    auto sol = solve_with_cutting_plane(p, backend);
    REQUIRE(sol.complete);
    for (std::size_t r = 1; r < backend.objectives.size(); ++r)
      REQUIRE(backend.objectives[r] >= backend.objectives[r - 1] - kTol);
  }
}

TEST_CASE("cutting plane: no shared ports converges in round 1") {
  auto inst = make(4, Mode::indivisible,
                   {{0, 2.0, 0, {{0, 0, 3}}, {}}, {1, 1.0, 0, {{1, 1, 5}}, {}}}, 1);
  auto p = build_indivisible_lp(inst);
  auto sol = solve(p);
  REQUIRE(sol.iterations == 1);
  // Singleton cuts alone force C_k >= L; objective = sum w_k * L_k.
  REQUIRE_THAT(sol.objective, Catch::Matchers::WithinAbs(2.0 * 3 + 1.0 * 5, kTol));
}

TEST_CASE("cutting plane: empty instance") {
  auto inst = make(1, Mode::single_core, {});
  auto p = build_single_core_lp(inst);
  auto sol = solve(p);
  REQUIRE_THAT(sol.objective, Catch::Matchers::WithinAbs(0.0, kTol));
  REQUIRE(sol.iterations == 0);
}

TEST_CASE("Prefix bound holds for solved LPs") {
  for (unsigned seed = 0; seed < 25; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.num_ports = 3;
    cfg.num_coflows = 6;
    cfg.mode = seed % 2 ? Mode::single_core : Mode::indivisible;
    cfg.num_cores = seed % 2 ? 1 : 2;
    auto inst = generate(cfg);
    auto p = build_lp(inst);
    auto sol = solve(p);
    // Per port: C_k >= (1/2m) * prefix load sum in ascending-C order.
    for (auto side : {PortSide::input, PortSide::output}) {
      const auto& ports = side == PortSide::input ? p.input_members : p.output_members;
      for (const auto& members_in : ports) {
        auto members = members_in;
        std::sort(members.begin(), members.end(),
                  [&](const PortMember& a, const PortMember& b) {
                    return sol.value(a.var) < sol.value(b.var);
                  });
        std::int64_t prefix = 0;
        for (const auto& m : members) {
          prefix += m.demand;
          REQUIRE(sol.value(m.var) >=
                  static_cast<double>(prefix) / (2.0 * p.cores) - kTol);
        }
      }
    }
  }
}

TEST_CASE("precedence consistency of solved LPs") {
  for (unsigned seed = 0; seed < 15; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.num_ports = 3;
    cfg.num_coflows = 5;
    cfg.mode = Mode::indivisible;
    cfg.num_cores = 2;
    cfg.prec = PrecShape::random_dag;
    cfg.prec_p = 0.4;
    auto inst = generate(cfg);
    auto loads = port_loads(inst);
    auto p = build_indivisible_lp(inst);
    auto sol = solve(p);
    auto preds = predecessor_indices(inst);
    for (std::size_t k = 0; k < inst.coflows.size(); ++k) {
      std::int64_t max_load = 0;
      for (int port = 0; port < inst.num_ports; ++port)
        max_load = std::max({max_load, loads.input_load[k][port],
                             loads.output_load[k][port]});
      for (int kp : preds[k])
        REQUIRE(sol.value(p.coflow_var[k]) >=
                sol.value(p.coflow_var[kp]) + static_cast<double>(max_load) - kTol);
    }
  }
}
