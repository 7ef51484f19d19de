#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "rodgrowth/nutrient.hpp"

using namespace rodgrowth;

namespace {

// Node-wise max difference between two fields on the same grid.
double max_diff(const ScalarField& a, const ScalarField& b) {
  REQUIRE(a.grid == b.grid);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// -N'' + kappa^2 N = 0 on [0,1], N(0) = 0, N(1) = 1 has the sinh profile.
double sinh_profile(double kappa, double X) {
  return std::sinh(kappa * X) / std::sinh(kappa);
}

ScalarField unit_const(const Grid& g) { return ScalarField::constant(g, 1.0); }

double solve_error_vs_sinh(long long M, double kappa) {
  const Grid g = make_uniform_grid(1.0, M);
  const ScalarField a = unit_const(g);
  const ScalarField c = ScalarField::constant(g, kappa * kappa);
  const ScalarField N = solve_sturm_liouville(a, c, 0.0, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < N.size(); ++i)
    err = std::max(err, std::abs(N[i] - sinh_profile(kappa, g.node(i))));
  return err;
}

}  // namespace

TEST_CASE("diffusion-absorption solve matches the sinh solution") {
  // sinh(1/2)/sinh(1) and sinh(1)/sinh(2), frozen from an extended-precision
  // evaluation of the closed forms.
  const double mid_k1 = 0.44340944198503695;
  const double mid_k2 = 0.32402713683194270;

  const Grid g = make_uniform_grid(1.0, 64);
  const ScalarField a = unit_const(g);

  const ScalarField N1 = solve_sturm_liouville(a, unit_const(g), 0.0, 1.0);
  CHECK(N1[32] == Catch::Approx(mid_k1).margin(2e-4));

  const ScalarField N2 = solve_sturm_liouville(a, ScalarField::constant(g, 4.0), 0.0, 1.0);
  CHECK(N2[32] == Catch::Approx(mid_k2).margin(5e-4));

  // Equal boundary data: cosh profile, midpoint 1/cosh(1/2).
  const ScalarField N3 = solve_sturm_liouville(a, unit_const(g), 1.0, 1.0);
  CHECK(N3[32] == Catch::Approx(0.88681888397007391).margin(2e-4));
}

TEST_CASE("solve converges at second order to the analytic profile") {
  std::vector<double> errors, spacings;
  for (long long M : {64, 128, 256, 512}) {
    errors.push_back(solve_error_vs_sinh(M, 1.0));
    spacings.push_back(1.0 / static_cast<double>(M));
  }
  CHECK(errors[0] <= 2e-4);
  const double order = observed_order(errors, spacings);
  CHECK(order >= 1.9);
  CHECK(order <= 2.1);
}

TEST_CASE("boundary rows reproduce the Dirichlet data exactly") {
  const Grid g = make_uniform_grid(1.0, 32);
  const ScalarField N =
      solve_sturm_liouville(unit_const(g), ScalarField::constant(g, 3.0), 0.7, 0.2);
  CHECK(N[0] == 0.7);
  CHECK(N[32] == 0.2);
}

TEST_CASE("discrete solution obeys the maximum principle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(0.1, 3.0);
  std::uniform_real_distribution<double> bc(0.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Grid g = make_uniform_grid(1.0, 50);
    std::vector<double> av(g.node_count()), cv(g.node_count());
    for (double& x : av) x = coef(rng);
    for (double& x : cv) x = coef(rng) - 0.1;  // stays >= 0
    const double nL = bc(rng), nR = bc(rng);
    const ScalarField N =
        solve_sturm_liouville(ScalarField(g, av), ScalarField(g, cv), nL, nR);
    // Elimination on this matrix never subtracts like-signed terms in the
    // right-hand side, so nonnegativity is exact, not just approximate.
    CHECK(N.min_value() >= 0.0);
    CHECK(N.max_value() <= std::max(nL, nR) + 1e-12);
  }
}

TEST_CASE("zero absorption yields the linear interpolant") {
  const Grid g = make_uniform_grid(1.0, 16);
  const ScalarField N =
      solve_sturm_liouville(unit_const(g), ScalarField::constant(g, 0.0), 1.0, 0.0);
  for (std::size_t i = 0; i < N.size(); ++i)
    CHECK(N[i] == Catch::Approx(1.0 - g.node(i)).margin(1e-12));
}

TEST_CASE("solver rejects unusable coefficients") {
  const Grid g = make_uniform_grid(1.0, 8);
  std::vector<double> bad_a(g.node_count(), 1.0);
  bad_a[3] = 0.0;
  CHECK_THROWS_AS(solve_sturm_liouville(ScalarField(g, bad_a), unit_const(g), 0.0, 1.0),
                  invalid_coefficient_error);

  std::vector<double> bad_c(g.node_count(), 1.0);
  bad_c[2] = -0.5;
  CHECK_THROWS_AS(solve_sturm_liouville(unit_const(g), ScalarField(g, bad_c), 0.0, 1.0),
                  invalid_coefficient_error);

  const Grid other = make_uniform_grid(1.0, 16);
  CHECK_THROWS_AS(solve_sturm_liouville(unit_const(g), unit_const(other), 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("reference-grid coefficients divide and multiply by growth") {
  const Grid g = make_uniform_grid(2.0, 8);
  const ScalarField G = ScalarField::sample(g, [](double X) { return 1.0 + 0.25 * X; });
  const ScalarField D0 = ScalarField::constant(g, 3.0);
  const ScalarField beta0 = ScalarField::sample(g, [](double X) { return 0.5 + X; });
  const auto [a, c] = lagrangian_coefficients(G, D0, beta0);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    CHECK(a[i] == 3.0 / G[i]);
    CHECK(c[i] == beta0[i] * G[i]);
  }

  std::vector<double> collapsed(g.node_count(), 1.0);
  collapsed[4] = -0.1;
  CHECK_THROWS_AS(lagrangian_coefficients(ScalarField(g, collapsed), D0, beta0),
                  growth_collapse_error);
  CHECK_THROWS_AS(lagrangian_coefficients(G, ScalarField::constant(g, 0.0), beta0),
                  invalid_coefficient_error);
  std::vector<double> negb(g.node_count(), -1.0);
  CHECK_THROWS_AS(lagrangian_coefficients(G, D0, ScalarField(g, negb)),
                  invalid_coefficient_error);
}

TEST_CASE("undeformed rod: both formulations coincide bit for bit") {
  const Grid g = make_uniform_grid(1.0, 64);
  const auto e = make_log_quadratic(unit_const(g));
  const ScalarField G = unit_const(g);
  const ScalarField D0 = ScalarField::sample(g, [](double X) { return 1.0 + 0.5 * X; });
  const ScalarField beta0 = ScalarField::sample(g, [](double X) { return 2.0 - X; });

  const ElasticSolution sol = elastic_response(e, G, 1.0);
  REQUIRE(sol.S == 0.0);

  const NutrientSolution lag = solve_nutrient_lagrangian(G, D0, beta0, 1.0, 0.25);
  const auto coeffs = eulerian_coefficients(sol, D0, beta0, 1.0);
  const NutrientSolution eul = solve_nutrient_eulerian(coeffs, 1.0, 0.25, sol.y);

  REQUIRE(eul.n.has_value());
  for (std::size_t i = 0; i < lag.N.size(); ++i) CHECK(eul.N[i] == lag.N[i]);
}

TEST_CASE("uniformly stretched rod: current-configuration solve agrees with the pullback") {
  const Grid g = make_uniform_grid(1.0, 128);
  const auto e = make_log_quadratic(unit_const(g));
  const ScalarField G = unit_const(g);
  const ScalarField one = unit_const(g);

  // l0 = 2 forces Fe = 2: the current rod is [0, 2] with D = 2, beta = 1/2.
  const ElasticSolution sol = elastic_response(e, G, 2.0);
  REQUIRE(sol.S == Catch::Approx(3.0).margin(1e-10));

  const NutrientSolution lag = solve_nutrient_lagrangian(G, one, one, 0.0, 1.0);
  const auto coeffs = eulerian_coefficients(sol, one, one, 2.0);
  for (std::size_t j = 0; j < coeffs.diffusion.size(); ++j) {
    CHECK(coeffs.diffusion[j] == Catch::Approx(2.0).margin(1e-9));
    CHECK(coeffs.absorption[j] == Catch::Approx(0.5).margin(1e-9));
  }
  const NutrientSolution eul = solve_nutrient_eulerian(coeffs, 0.0, 1.0, sol.y);

  CHECK(max_diff(lag.N, eul.N) <= 5e-3);
  for (std::size_t i = 0; i < lag.N.size(); ++i) {
    const double exact = sinh_profile(1.0, g.node(i));
    CHECK(lag.N[i] == Catch::Approx(exact).margin(1e-4));
    CHECK(eul.N[i] == Catch::Approx(exact).margin(1e-4));
  }
}

namespace {

struct RandomScenario {
  ScalarField G, D0, beta0;
  double l0 = 0.0, nL = 0.0, nR = 0.0;
};

RandomScenario draw_scenario(std::mt19937_64& rng, const Grid& g) {
  std::uniform_real_distribution<double> base(0.6, 1.8);
  std::uniform_real_distribution<double> slope(-0.3, 0.3);
  std::uniform_real_distribution<double> len(0.7, 1.6);
  std::uniform_real_distribution<double> bc(0.0, 1.5);
  auto affine = [&](double floor_value) {
    const double a0 = base(rng), a1 = slope(rng);
    return ScalarField::sample(g, [=](double X) { return std::max(a0 + a1 * X, floor_value); });
  };
  return RandomScenario{affine(0.4), affine(0.4), affine(0.0),
                        len(rng),    bc(rng),     bc(rng)};
}

double dual_route_gap(const RandomScenario& sc, const Grid& g) {
  const auto e = make_log_quadratic(ScalarField::constant(g, 1.0));
  const ElasticSolution sol = elastic_response(e, sc.G, sc.l0);
  const NutrientSolution lag = solve_nutrient_lagrangian(sc.G, sc.D0, sc.beta0, sc.nL, sc.nR);
  const auto coeffs = eulerian_coefficients(sol, sc.D0, sc.beta0, sc.l0);
  const NutrientSolution eul = solve_nutrient_eulerian(coeffs, sc.nL, sc.nR, sol.y);
  return max_diff(lag.N, eul.N);
}

}  // namespace

TEST_CASE("random scenarios: reference and current formulations agree") {
  std::mt19937_64 rng(2024);
  const Grid g = make_uniform_grid(1.0, 256);
  for (int trial = 0; trial < 10; ++trial) {
    const RandomScenario sc = draw_scenario(rng, g);
    CHECK(dual_route_gap(sc, g) <= 5e-3);
  }
}

TEST_CASE("the dual-route gap shrinks under refinement") {
  std::mt19937_64 rng(99);
  const RandomScenario coarse_sc = draw_scenario(rng, make_uniform_grid(1.0, 64));
  // Re-sample the same coefficient functions on the finer grid by rebuilding
  // from the same RNG draw: easier to just draw once per grid from a fixed
  // seed so both levels see the same functions.
  auto scenario_on = [](long long M) {
    std::mt19937_64 r(99);
    return draw_scenario(r, make_uniform_grid(1.0, M));
  };
  (void)coarse_sc;
  const double gap_coarse = dual_route_gap(scenario_on(64), make_uniform_grid(1.0, 64));
  const double gap_fine = dual_route_gap(scenario_on(256), make_uniform_grid(1.0, 256));
  CHECK(gap_fine < gap_coarse);
  CHECK(gap_coarse / gap_fine >= 4.0);  // at least first order across a 4x refinement
}

TEST_CASE("current-configuration coefficient construction validates its inputs") {
  const Grid g = make_uniform_grid(1.0, 16);
  const auto e = make_log_quadratic(unit_const(g));
  const ScalarField one = unit_const(g);
  const ElasticSolution sol = elastic_response(e, one, 1.3);

  CHECK_THROWS_AS(eulerian_coefficients(sol, one, one, 1.0), inconsistent_geometry_error);
  CHECK_THROWS_AS(eulerian_coefficients(sol, one, one, -2.0), std::invalid_argument);

  const Grid other = make_uniform_grid(1.0, 8);
  CHECK_THROWS_AS(eulerian_coefficients(sol, unit_const(other), one, 1.3), std::invalid_argument);
}
