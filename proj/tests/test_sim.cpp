#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rodgrowth/sim.hpp"

using namespace rodgrowth;

namespace {

const Grid kGrid = make_uniform_grid(1.0, 16);

CoupledProblem<LogQuadraticEnergy> unit_problem(double nL, double nR, double l0 = 1.0) {
  return CoupledProblem<LogQuadraticEnergy>{make_log_quadratic(ScalarField::constant(kGrid, 1.0)),
                                            ScalarField::constant(kGrid, 1.0),
                                            ScalarField::constant(kGrid, 1.0),
                                            l0,
                                            nL,
                                            nR,
                                            1e-12};
}

ExampleLawParams degenerate_law(double lambda) {
  ExampleLawParams p;
  p.gamma = ScalarField::constant(kGrid, lambda);
  p.mu0 = p.mu1 = 1.0;
  p.S_ref = 1.0;
  p.eta0 = p.eta1 = 1.0;
  p.N_ref = 1.0;
  return p;
}

ExampleLawParams reference_law() {
  ExampleLawParams p;
  p.gamma = ScalarField::constant(kGrid, 1.0);
  p.mu0 = 0.5;
  p.mu1 = 1.5;
  p.S_ref = 1.0;
  p.eta0 = 0.0;
  p.eta1 = 1.0;
  p.N_ref = 1.0;
  return p;
}

}  // namespace

TEST_CASE("one RK4 step reproduces the quartic Taylor polynomial of exp") {
  const auto prob = unit_problem(1.0, 1.0);
  const ExampleLawParams p = degenerate_law(1.0);  // dG/dt = G exactly

  const SimState next = rk4_step(prob, ExampleLaw{p}, SimState{0.0, ScalarField::constant(kGrid, 1.0)}, 0.1);

  // 1 + h + h^2/2 + h^3/6 + h^4/24 at h = 0.1, frozen from exact rationals.
  const double rk4_value = 1.10517083333333333;
  for (std::size_t i = 0; i < next.G.size(); ++i) {
    CHECK(next.G[i] == Catch::Approx(rk4_value).margin(5e-15));
    CHECK(std::abs(next.G[i] - std::exp(0.1)) <= 1e-7);
  }
  CHECK(next.t == 0.1);
}

TEST_CASE("step size must be positive and finite") {
  const auto prob = unit_problem(1.0, 1.0);
  const ExampleLaw law{degenerate_law(1.0)};
  const SimState state{0.0, ScalarField::constant(kGrid, 1.0)};
  CHECK_THROWS_AS(rk4_step(prob, law, state, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rk4_step(prob, law, state, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(rk4_step(prob, law, state, std::nan("")), std::invalid_argument);
}

TEST_CASE("starved rod stays exactly stationary") {
  // No nutrient at either end and eta0 = 0: the rate vanishes identically,
  // so G remains bit-for-bit 1 and the rod never leaves its rest state.
  const auto prob = unit_problem(0.0, 0.0);
  const ExampleLawParams p = reference_law();
  SimulationSetup setup{prob, ExampleLaw{p}, envelope(p), ScalarField::constant(kGrid, 1.0),
                        1.0,  10LL,          5LL};

  const RunResult result = run(setup);
  REQUIRE(result.completed);
  REQUIRE(result.snapshots.size() == 3);
  CHECK(result.snapshots[0].step == 0);
  CHECK(result.snapshots[1].step == 5);
  CHECK(result.snapshots[2].step == 10);

  for (const Snapshot& snap : result.snapshots) {
    CHECK(snap.S == 0.0);
    for (std::size_t i = 0; i < snap.G.size(); ++i) {
      CHECK(snap.G[i] == 1.0);
      CHECK(snap.N[i] == 0.0);
    }
    CHECK(snap.checks.boundary_residual == 0.0);
  }
  CHECK(result.checks.positivity_pass);
  CHECK(result.checks.envelope_pass);
  CHECK(result.checks.boundary_pass);
  CHECK(result.checks.max_principle_pass);
}

TEST_CASE("uniform degenerate law integrates to the exponential") {
  const auto prob = unit_problem(1.0, 1.0);
  const ExampleLawParams p = degenerate_law(0.5);
  SimulationSetup setup{prob, ExampleLaw{p}, envelope(p), ScalarField::constant(kGrid, 1.0),
                        1.0,  100LL,         25LL};

  const RunResult result = run(setup);
  REQUIRE(result.completed);
  REQUIRE(result.snapshots.size() == 5);

  const Snapshot& last = result.snapshots.back();
  CHECK(last.t == Catch::Approx(1.0).margin(1e-9));

  // e^{1/2}, frozen from an extended-precision evaluation.
  const double target = 1.64872127070012815;
  for (std::size_t i = 0; i < last.G.size(); ++i)
    CHECK(std::abs(last.G[i] - target) <= 1e-8);

  // Uniform data: every node sees identical arithmetic.
  CHECK(last.G.min_value() == last.G.max_value());

  // The quasi-stationary stress tracks the current growth: a uniformly
  // grown rod clamped at its original length carries p = 1/G, so
  // S = 2 (1/G - G).
  const double Gf = last.G[0];
  CHECK(last.S == Catch::Approx(2.0 * (1.0 / Gf - Gf)).margin(1e-9));
  CHECK(last.S < 0.0);

  CHECK(result.checks.envelope_pass);
  CHECK(result.checks.boundary_pass);
}

TEST_CASE("runs are deterministic") {
  const auto prob = unit_problem(1.0, 0.5);
  const ExampleLawParams p = reference_law();
  SimulationSetup setup{prob, ExampleLaw{p}, envelope(p), ScalarField::constant(kGrid, 1.0),
                        0.5,  20LL,          10LL};

  const RunResult a = run(setup);
  const RunResult b = run(setup);
  REQUIRE(a.completed);
  REQUIRE(b.completed);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    CHECK(a.snapshots[s].S == b.snapshots[s].S);
    for (std::size_t i = 0; i < a.snapshots[s].G.size(); ++i) {
      CHECK(a.snapshots[s].G[i] == b.snapshots[s].G[i]);
      CHECK(a.snapshots[s].N[i] == b.snapshots[s].N[i]);
    }
  }
}

TEST_CASE("zero-horizon run produces only the initial snapshot") {
  const auto prob = unit_problem(1.0, 1.0);
  const ExampleLawParams p = reference_law();
  SimulationSetup setup{prob, ExampleLaw{p}, envelope(p), ScalarField::constant(kGrid, 1.0),
                        0.0,  1LL,           1LL};
  const RunResult result = run(setup);
  REQUIRE(result.completed);
  CHECK(result.snapshots.size() == 1);
  CHECK(result.snapshots[0].t == 0.0);
}

TEST_CASE("run rejects inconsistent marching parameters") {
  const auto prob = unit_problem(1.0, 1.0);
  const ExampleLawParams p = reference_law();
  const ScalarField G0 = ScalarField::constant(kGrid, 1.0);

  SimulationSetup bad_T{prob, ExampleLaw{p}, envelope(p), G0, -1.0, 10LL, 1LL};
  CHECK_THROWS_AS(run(bad_T), std::invalid_argument);

  SimulationSetup bad_steps{prob, ExampleLaw{p}, envelope(p), G0, 1.0, 0LL, 1LL};
  CHECK_THROWS_AS(run(bad_steps), std::invalid_argument);

  SimulationSetup bad_every{prob, ExampleLaw{p}, envelope(p), G0, 1.0, 10LL, 0LL};
  CHECK_THROWS_AS(run(bad_every), std::invalid_argument);
}

TEST_CASE("a collapsing law yields a partial trajectory, not an exception") {
  const auto prob = unit_problem(1.0, 1.0);
  const auto shrink = [](double, double, double, double) { return -5.0; };
  const GrowthEnvelope env{-5.0, -5.0};
  SimulationSetup setup{prob, shrink, env, ScalarField::constant(kGrid, 1.0), 1.0, 10LL, 1LL};

  const RunResult result = run(setup);
  CHECK_FALSE(result.completed);
  CHECK_FALSE(result.failure.empty());
  // Step 1 lands at G = 1/2; the fourth stage of step 2 hits exactly zero.
  CHECK(result.snapshots.size() == 2);
}

TEST_CASE("monitors flag corrupted snapshots") {
  const auto prob = unit_problem(1.0, 0.5);
  const ExampleLawParams p = reference_law();
  SimulationSetup setup{prob, ExampleLaw{p}, envelope(p), ScalarField::constant(kGrid, 1.0),
                        0.5,  10LL,          10LL};
  const RunResult result = run(setup);
  REQUIRE(result.completed);
  const WellposednessContext ctx{setup.G0, setup.env, prob.l0, prob.nL, prob.nR, prob.root_tol};

  Snapshot snap = result.snapshots.back();
  REQUIRE(check_wellposedness(snap, ctx).envelope_pass);

  Snapshot bad_G = snap;
  bad_G.G[3] = -0.1;
  const SnapshotChecks cG = check_wellposedness(bad_G, ctx);
  CHECK_FALSE(cG.positivity_pass);

  Snapshot bad_env = snap;
  bad_env.G[3] = 100.0;
  CHECK_FALSE(check_wellposedness(bad_env, ctx).envelope_pass);

  Snapshot bad_y = snap;
  bad_y.y.values.back() += 1e-6;
  CHECK_FALSE(check_wellposedness(bad_y, ctx).boundary_pass);

  Snapshot bad_N = snap;
  bad_N.N[2] = 2.0;  // above max(nL, nR) = 1
  CHECK_FALSE(check_wellposedness(bad_N, ctx).max_principle_pass);
  bad_N.N[2] = -1e-6;
  CHECK_FALSE(check_wellposedness(bad_N, ctx).max_principle_pass);
}

TEST_CASE("envelope monitor catches rates beyond the declared bounds") {
  const auto prob = unit_problem(1.0, 1.0);
  const ExampleLawParams p = degenerate_law(0.5);
  // Deliberately understate the fastest admissible rate.
  const GrowthEnvelope lying{0.0, 0.1};
  SimulationSetup setup{prob, ExampleLaw{p}, lying, ScalarField::constant(kGrid, 1.0),
                        1.0,  50LL,          50LL};
  const RunResult result = run(setup);
  REQUIRE(result.completed);
  CHECK(result.snapshots.front().checks.envelope_pass);
  CHECK_FALSE(result.snapshots.back().checks.envelope_pass);
  CHECK_FALSE(result.checks.envelope_pass);
}
