#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rodgrowth/energy.hpp"
#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"
#include "rodgrowth/numerics.hpp"

namespace rodgrowth {

/// Equilibrium of the grown rod pinned to [0, l0].
///
/// In 1D the minimizer of the stored energy has pointwise constant stress S,
/// so the elastic stretch is Fe(X) = stretch_from_stress(X, S) and S is fixed
/// by the length constraint: integral of Fe * G over the reference rod equals
/// l0. That scalar equation is strictly increasing in S, which makes the
/// whole solve a one-dimensional monotone root find.
struct ElasticSolution {
  double S = 0.0;   // constant first Piola stress
  ScalarField Fe;   // elastic stretch on the reference grid
  ScalarField g;    // grown arc length, g' = G, g(0) = 0
  ScalarField y;    // total placement, y' = Fe * G, y(0) = 0
};

namespace detail {

template <stored_energy E>
void check_growth_field(const E& model, const ScalarField& G, const char* where) {
  if (!(G.grid == model.grid()))
    throw std::invalid_argument(std::string(where) + ": G and the energy live on different grids");
  for (std::size_t i = 0; i < G.size(); ++i)
    if (!(G[i] > 0.0))
      throw growth_collapse_error(std::string(where) + ": G[" + std::to_string(i) +
                                  "] = " + std::to_string(G[i]) + " is not positive");
}

}  // namespace detail

/// Mismatch between the deformed length produced by stress level S and the
/// imposed length l0: integral of stretch_from_stress(X, S) * G(X) minus l0.
template <stored_energy E>
double length_residual(const E& model, const ScalarField& G, double S, double l0) {
  detail::check_growth_field(model, G, "length_residual");
  if (!(l0 > 0.0)) throw std::invalid_argument("length_residual: l0 must be positive");
  const Grid& grid = G.grid;
  std::vector<double> integrand(G.size());
  for (std::size_t i = 0; i < G.size(); ++i)
    integrand[i] = stretch_from_stress(model, grid.node(i), S) * G[i];
  return integrate(ScalarField(grid, std::move(integrand))) - l0;
}

/// The unique stress satisfying the length constraint. Seeds the root find
/// with the homogenized guess: the stress a uniform rod of the averaged
/// modulus would need to stretch by l0 / (grown length).
template <stored_energy E>
double solve_stress(const E& model, const ScalarField& G, double l0, double tol = 1e-12) {
  detail::check_growth_field(model, G, "solve_stress");
  if (!(l0 > 0.0)) throw std::invalid_argument("solve_stress: l0 must be positive");
  const double grown = integrate(G);
  const double guess = model.stress(0.5 * G.grid.length, l0 / grown);
  return find_root_monotone([&](double S) { return length_residual(model, G, S, l0); }, guess,
                            tol);
}

/// Grown arc length, elastic stretch, and placement for a given stress level.
template <stored_energy E>
ElasticSolution reconstruct(const E& model, const ScalarField& G, double S) {
  detail::check_growth_field(model, G, "reconstruct");
  const Grid& grid = G.grid;

  ScalarField Fe = ScalarField::sample(grid, [&](double X) {
    return stretch_from_stress(model, X, S);
  });
  std::vector<double> flow(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) flow[i] = Fe[i] * G[i];

  ElasticSolution sol;
  sol.S = S;
  sol.g = cumulative_integral(G);
  sol.y = cumulative_integral(ScalarField(grid, std::move(flow)));
  sol.Fe = std::move(Fe);
  return sol;
}

template <stored_energy E>
ElasticSolution elastic_response(const E& model, const ScalarField& G, double l0,
                                 double tol = 1e-12) {
  return reconstruct(model, G, solve_stress(model, G, l0, tol));
}

}  // namespace rodgrowth
