#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rodgrowth/elasticity.hpp"
#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"
#include "rodgrowth/numerics.hpp"

namespace rodgrowth {

/// Steady diffusion-absorption solve for the nutrient along the rod.
///
/// The physical problem lives on the deformed rod [0, l0]:
///   -(D n')' + beta n = 0,  n(0) = nL,  n(l0) = nR,
/// with coefficients obtained from the reference data through the total
/// deformation y. Pulling the equation back to the reference rod cancels the
/// elastic stretch entirely and leaves
///   -((D0/G) N')' + beta0 G N = 0 on [0, L0],
/// which is how production solves run (no inversion of y involved). The
/// literal current-configuration solve is kept alongside as an independent
/// cross-check of that reduction.
struct NutrientSolution {
  ScalarField N;                 // concentration pulled back to the reference grid
  std::optional<ScalarField> n;  // current-configuration solve, when one was performed
};

struct LagrangianCoefficients {
  ScalarField diffusion;   // D0 / G on the reference grid
  ScalarField absorption;  // beta0 * G on the reference grid
};

struct CurrentCoefficients {
  ScalarField diffusion;   // D on the deformed grid [0, l0]
  ScalarField absorption;  // beta on the deformed grid [0, l0]
};

/// Conservative second-order scheme for -(a u')' + c u = 0 with Dirichlet
/// data. Face values of a are arithmetic means of the nodal values; boundary
/// rows are identities, so the data is met exactly. For a > 0, c >= 0 the
/// matrix is an M-matrix and the discrete solution obeys the same maximum
/// principle as the continuous one.
inline ScalarField solve_sturm_liouville(const ScalarField& a, const ScalarField& c, double left,
                                         double right) {
  require_same_grid(a, c, "solve_sturm_liouville");
  if (!std::isfinite(left) || !std::isfinite(right))
    throw std::invalid_argument("solve_sturm_liouville: non-finite boundary value");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0))
      throw invalid_coefficient_error("solve_sturm_liouville: a[" + std::to_string(i) +
                                      "] = " + std::to_string(a[i]) + " is not positive");
    if (c[i] < 0.0)
      throw invalid_coefficient_error("solve_sturm_liouville: c[" + std::to_string(i) +
                                      "] = " + std::to_string(c[i]) + " is negative");
  }

  const std::size_t n = a.grid.node_count();
  const double h = a.grid.spacing();
  const double inv_h2 = 1.0 / (h * h);

  std::vector<double> lower(n - 1, 0.0), diag(n, 0.0), upper(n - 1, 0.0), rhs(n, 0.0);
  diag[0] = 1.0;
  rhs[0] = left;
  diag[n - 1] = 1.0;
  rhs[n - 1] = right;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a_minus = 0.5 * (a[i - 1] + a[i]);
    const double a_plus = 0.5 * (a[i] + a[i + 1]);
    lower[i - 1] = -a_minus * inv_h2;
    upper[i] = -a_plus * inv_h2;
    diag[i] = (a_minus + a_plus) * inv_h2 + c[i];
  }

  return ScalarField(a.grid, solve_tridiagonal(lower, diag, upper, rhs));
}

/// Reference-grid coefficients of the pulled-back equation: a = D0/G,
/// c = beta0*G. Note l0 and the elastic stretch do not appear; that
/// cancellation is the point of the Lagrangian form.
inline LagrangianCoefficients lagrangian_coefficients(const ScalarField& G, const ScalarField& D0,
                                                      const ScalarField& beta0) {
  require_same_grid(G, D0, "lagrangian_coefficients");
  require_same_grid(G, beta0, "lagrangian_coefficients");
  std::vector<double> a(G.size()), c(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (!(G[i] > 0.0))
      throw growth_collapse_error("lagrangian_coefficients: G[" + std::to_string(i) +
                                  "] = " + std::to_string(G[i]) + " is not positive");
    if (!(D0[i] > 0.0))
      throw invalid_coefficient_error("lagrangian_coefficients: D0 must be positive");
    if (beta0[i] < 0.0)
      throw invalid_coefficient_error("lagrangian_coefficients: beta0 must be nonnegative");
    a[i] = D0[i] / G[i];
    c[i] = beta0[i] * G[i];
  }
  return {ScalarField(G.grid, std::move(a)), ScalarField(G.grid, std::move(c))};
}

inline NutrientSolution solve_nutrient_lagrangian(const ScalarField& G, const ScalarField& D0,
                                                  const ScalarField& beta0, double nL, double nR) {
  const auto [a, c] = lagrangian_coefficients(G, D0, beta0);
  return NutrientSolution{solve_sturm_liouville(a, c, nL, nR), std::nullopt};
}

namespace detail {

// Pull a point of [0, l0] back through y. The placement meets l0 only up to
// the stress solver's residual, so targets are clamped into the attained
// range when the overshoot is within a strict geometric slack.
inline double placement_preimage(const ScalarField& y, double x) {
  constexpr double slack = 1e-9;
  const double y_first = y.values.front();
  const double y_last = y.values.back();
  double target = x;
  if (target < y_first || target > y_last) {
    if (target < y_first - slack || target > y_last + slack)
      throw inconsistent_geometry_error("placement preimage: x = " + std::to_string(x) +
                                        " is outside the deformed rod [" +
                                        std::to_string(y_first) + ", " + std::to_string(y_last) +
                                        "]");
    target = std::clamp(target, y_first, y_last);
  }
  return invert_monotone_field(y, target);
}

}  // namespace detail

/// Coefficients of the literal current-configuration equation on [0, l0]:
/// D(x) = D0(X) Fe(X) and beta(x) = beta0(X) / Fe(X) at X = y^{-1}(x).
inline CurrentCoefficients eulerian_coefficients(const ElasticSolution& sol, const ScalarField& D0,
                                                 const ScalarField& beta0, double l0) {
  require_same_grid(sol.y, D0, "eulerian_coefficients");
  require_same_grid(sol.y, beta0, "eulerian_coefficients");
  if (!(l0 > 0.0)) throw std::invalid_argument("eulerian_coefficients: l0 must be positive");
  if (std::abs(sol.y.values.back() - l0) > 1e-9)
    throw inconsistent_geometry_error(
        "eulerian_coefficients: y(L0) = " + std::to_string(sol.y.values.back()) +
        " does not match l0 = " + std::to_string(l0));

  const Grid current = make_uniform_grid(l0, static_cast<long long>(sol.y.grid.intervals));
  std::vector<double> D(current.node_count()), beta(current.node_count());
  for (std::size_t j = 0; j < current.node_count(); ++j) {
    const double X = detail::placement_preimage(sol.y, current.node(j));
    const double Fe = eval_linear(sol.Fe, X);
    if (!(Fe > 0.0))
      throw inconsistent_geometry_error("eulerian_coefficients: nonpositive elastic stretch");
    D[j] = eval_linear(D0, X) * Fe;
    beta[j] = eval_linear(beta0, X) / Fe;
  }
  return {ScalarField(current, std::move(D)), ScalarField(current, std::move(beta))};
}

/// Solve on the deformed rod and pull the result back through y. The N field
/// this produces should agree with solve_nutrient_lagrangian up to
/// discretization error; the two paths share no coefficient algebra.
inline NutrientSolution solve_nutrient_eulerian(const CurrentCoefficients& coeffs, double nL,
                                                double nR, const ScalarField& y) {
  ScalarField n = solve_sturm_liouville(coeffs.diffusion, coeffs.absorption, nL, nR);
  const double l0 = n.grid.length;
  std::vector<double> N(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    double x = y[i];
    if (x < 0.0 || x > l0) {
      if (x < -1e-9 || x > l0 + 1e-9)
        throw inconsistent_geometry_error("solve_nutrient_eulerian: placement leaves [0, l0]");
      x = std::clamp(x, 0.0, l0);
    }
    N[i] = eval_linear(n, x);
  }
  return NutrientSolution{ScalarField(y.grid, std::move(N)), std::move(n)};
}

}  // namespace rodgrowth
