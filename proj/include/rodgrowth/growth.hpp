#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rodgrowth/elasticity.hpp"
#include "rodgrowth/energy.hpp"
#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"
#include "rodgrowth/nutrient.hpp"

namespace rodgrowth {

/// Product-form growth law: rate = gamma(X) * mu(S) * eta(N) * G, where the
/// stress response mu is a bounded logistic ramp and the nutrient response
/// eta a bounded saturating exponential. Both responses are monotone
/// increasing and confined to their bound intervals, which is what the
/// exponential comparison envelope below relies on.
struct ExampleLawParams {
  ScalarField gamma;  // positive site-specific rate factor on [0, L0]
  double mu0 = 0.0, mu1 = 0.0;    // stress response bounds, mu0 <= mu1
  double S_ref = 1.0;             // stress scale of the logistic ramp
  double eta0 = 0.0, eta1 = 0.0;  // nutrient response bounds, 0 <= eta0 <= eta1
  double N_ref = 1.0;             // nutrient scale of the saturation
};

inline void validate_law_params(const ExampleLawParams& p) {
  if (!(p.gamma.min_value() > 0.0))
    throw invalid_coefficient_error("growth law: gamma must be positive at every node");
  if (!(p.mu0 <= p.mu1)) throw std::invalid_argument("growth law: need mu0 <= mu1");
  if (!(p.eta0 >= 0.0) || !(p.eta0 <= p.eta1))
    throw std::invalid_argument("growth law: need 0 <= eta0 <= eta1");
  if (!(p.S_ref > 0.0)) throw std::invalid_argument("growth law: S_ref must be positive");
  if (!(p.N_ref > 0.0)) throw std::invalid_argument("growth law: N_ref must be positive");
}

/// mu0 + (mu1 - mu0) / (1 + exp(-S / S_ref)); equals the midpoint at S = 0
/// and approaches the bounds as |S| grows.
inline double response_mu(const ExampleLawParams& p, double S) {
  return p.mu0 + (p.mu1 - p.mu0) / (1.0 + std::exp(-S / p.S_ref));
}

/// eta0 + (eta1 - eta0) * (1 - exp(-N / N_ref)); exactly eta0 at N = 0.
inline double response_eta(const ExampleLawParams& p, double N) {
  if (N < 0.0)
    throw std::invalid_argument("response_eta: negative nutrient concentration " +
                                std::to_string(N));
  return p.eta0 + (p.eta1 - p.eta0) * (1.0 - std::exp(-N / p.N_ref));
}

inline double example_law(const ExampleLawParams& p, double G, double S, double N, double X) {
  if (!(G > 0.0))
    throw growth_collapse_error("example_law: G = " + std::to_string(G) + " is not positive");
  return eval_linear(p.gamma, X) * response_mu(p, S) * response_eta(p, N) * G;
}

/// Extreme per-unit-G rates over all admissible (gamma, mu, eta) corner
/// combinations. With G(0) = 1, comparison against dG/dt = c G gives
/// exp(c_min t) <= G(t, X) <= exp(c_max t).
struct GrowthEnvelope {
  double c_min = 0.0;
  double c_max = 0.0;
};

inline GrowthEnvelope envelope(const ExampleLawParams& p) {
  validate_law_params(p);
  const double g_bounds[2] = {p.gamma.min_value(), p.gamma.max_value()};
  const double m_bounds[2] = {p.mu0, p.mu1};
  const double e_bounds[2] = {p.eta0, p.eta1};
  GrowthEnvelope env{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
  for (double g : g_bounds)
    for (double m : m_bounds)
      for (double e : e_bounds) {
        const double c = g * m * e;
        env.c_min = std::min(env.c_min, c);
        env.c_max = std::max(env.c_max, c);
      }
  return env;
}

/// Invocable adapter so the integrator can take any rate(G, S, N, X).
struct ExampleLaw {
  ExampleLawParams params;
  double operator()(double G, double S, double N, double X) const {
    return example_law(params, G, S, N, X);
  }
};

template <class L>
concept growth_law = requires(const L& law, double G, double S, double N, double X) {
  { law(G, S, N, X) } -> std::convertible_to<double>;
};

/// Everything the quasi-stationary coupling needs besides the growth field
/// itself: the energy, the reference transport data, and the clamp length.
template <stored_energy E>
struct CoupledProblem {
  E model;
  ScalarField D0;
  ScalarField beta0;
  double l0 = 1.0;
  double nL = 0.0, nR = 0.0;
  double root_tol = 1e-12;
};

struct CoupledState {
  double S = 0.0;
  NutrientSolution nutrient;
};

/// One elastic solve plus one nutrient solve for the given growth field.
template <stored_energy E>
CoupledState solve_coupled(const CoupledProblem<E>& prob, const ScalarField& G) {
  CoupledState state;
  state.S = solve_stress(prob.model, G, prob.l0, prob.root_tol);
  state.nutrient = solve_nutrient_lagrangian(G, prob.D0, prob.beta0, prob.nL, prob.nR);
  return state;
}

/// Right-hand side of the growth ODE under quasi-stationary coupling: the
/// stress and nutrient fields are recomputed from G before the law applies.
template <stored_energy E, growth_law L>
ScalarField growth_rhs(const CoupledProblem<E>& prob, const L& law, const ScalarField& G) {
  const CoupledState state = solve_coupled(prob, G);
  const ScalarField& N = state.nutrient.N;
  std::vector<double> rate(G.size());
  for (std::size_t i = 0; i < G.size(); ++i)
    rate[i] = law(G[i], state.S, N[i], G.grid.node(i));
  return ScalarField(G.grid, std::move(rate));
}

}  // namespace rodgrowth
