#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "rodgrowth/elasticity.hpp"
#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"
#include "rodgrowth/growth.hpp"
#include "rodgrowth/nutrient.hpp"

namespace rodgrowth {

struct SimState {
  double t = 0.0;
  ScalarField G;
};

/// Classical fixed-step RK4 on the growth field. Every stage reevaluates the
/// quasi-stationary stress and nutrient solves at the stage state; nothing is
/// frozen across the step. Positivity is checked, never restored by clipping:
/// a nonpositive node aborts the step with growth_collapse_error.
template <stored_energy E, growth_law L>
SimState rk4_step(const CoupledProblem<E>& prob, const L& law, const SimState& state, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("rk4_step: dt must be positive and finite");

  const ScalarField& G = state.G;
  const std::size_t n = G.size();

  auto blend = [&](const ScalarField& k, double w) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = G[i] + w * k[i];
    return ScalarField(G.grid, std::move(v));
  };

  const ScalarField k1 = growth_rhs(prob, law, G);
  const ScalarField k2 = growth_rhs(prob, law, blend(k1, 0.5 * dt));
  const ScalarField k3 = growth_rhs(prob, law, blend(k2, 0.5 * dt));
  const ScalarField k4 = growth_rhs(prob, law, blend(k3, dt));

  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i)
    next[i] = G[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

  SimState out{state.t + dt, ScalarField(G.grid, std::move(next))};
  for (std::size_t i = 0; i < n; ++i)
    if (!(out.G[i] > 0.0))
      throw growth_collapse_error("rk4_step: G lost positivity at node " + std::to_string(i) +
                                  ", t = " + std::to_string(out.t));
  return out;
}

/// Per-snapshot monitor results. Violations are signed: <= 0 means the bound
/// holds, except positivity which reports min G directly.
struct SnapshotChecks {
  bool positivity_pass = false;
  double min_G = 0.0;
  bool envelope_pass = false;
  double envelope_violation = 0.0;  // max over nodes of (lower - G, G - upper)
  bool boundary_pass = false;
  double boundary_residual = 0.0;  // |y(L0) - l0|
  bool max_principle_pass = false;
  double max_principle_violation = 0.0;  // max(-min N, max N - max(nL, nR))
};

struct Snapshot {
  std::size_t step = 0;
  double t = 0.0;
  double S = 0.0;
  ScalarField G, g, y, Fe, N;
  SnapshotChecks checks;
};

struct WellposednessContext {
  ScalarField G0;
  GrowthEnvelope env;
  double l0 = 1.0;
  double nL = 0.0, nR = 0.0;
  double root_tol = 1e-12;
};

/// Monitors from the well-posedness theory: positivity of G, the exponential
/// comparison envelope around G0 with slack eps(t) = 1e-8 exp(c_max t), the
/// restored boundary |y(L0) - l0| <= 10 * root_tol, and the nutrient maximum
/// principle 0 <= N <= max(nL, nR) up to 1e-12.
inline SnapshotChecks check_wellposedness(const Snapshot& snap, const WellposednessContext& ctx) {
  SnapshotChecks checks;

  checks.min_G = snap.G.min_value();
  checks.positivity_pass = checks.min_G > 0.0;

  const double eps = 1e-8 * std::exp(ctx.env.c_max * snap.t);
  const double lo_factor = std::exp(ctx.env.c_min * snap.t);
  const double hi_factor = std::exp(ctx.env.c_max * snap.t);
  double violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snap.G.size(); ++i) {
    const double lower = ctx.G0[i] * lo_factor - eps;
    const double upper = ctx.G0[i] * hi_factor + eps;
    violation = std::max(violation, std::max(lower - snap.G[i], snap.G[i] - upper));
  }
  checks.envelope_violation = violation;
  checks.envelope_pass = violation <= 0.0;

  checks.boundary_residual = std::abs(snap.y.values.back() - ctx.l0);
  checks.boundary_pass = checks.boundary_residual <= 10.0 * ctx.root_tol;

  const double bound = std::max(ctx.nL, ctx.nR);
  checks.max_principle_violation =
      std::max(-snap.N.min_value(), snap.N.max_value() - bound);
  checks.max_principle_pass = checks.max_principle_violation <= 1e-12;

  return checks;
}

template <stored_energy E, growth_law L>
struct SimulationSetup {
  CoupledProblem<E> problem;
  L law;
  GrowthEnvelope env;
  ScalarField G0;
  double T = 1.0;
  long long n_steps = 1;
  long long snapshot_every = 1;
};

/// Aggregates of the per-snapshot checks, worst case over the whole run.
struct RunChecks {
  bool positivity_pass = true;
  double positivity_worst = std::numeric_limits<double>::infinity();  // min G seen
  bool envelope_pass = true;
  double envelope_worst = -std::numeric_limits<double>::infinity();
  bool boundary_pass = true;
  double boundary_worst = 0.0;
  bool max_principle_pass = true;
  double max_principle_worst = -std::numeric_limits<double>::infinity();
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  bool completed = false;
  std::string failure;  // empty when completed
  RunChecks checks;
};

namespace detail {

template <stored_energy E, growth_law L>
Snapshot take_snapshot(const SimulationSetup<E, L>& setup, const WellposednessContext& ctx,
                       const SimState& state, std::size_t step) {
  Snapshot snap;
  snap.step = step;
  snap.t = state.t;
  snap.G = state.G;

  ElasticSolution elastic =
      elastic_response(setup.problem.model, state.G, setup.problem.l0, setup.problem.root_tol);
  snap.S = elastic.S;
  snap.g = std::move(elastic.g);
  snap.y = std::move(elastic.y);
  snap.Fe = std::move(elastic.Fe);
  snap.N = solve_nutrient_lagrangian(state.G, setup.problem.D0, setup.problem.beta0,
                                     setup.problem.nL, setup.problem.nR)
               .N;
  snap.checks = check_wellposedness(snap, ctx);
  return snap;
}

inline void fold_checks(RunChecks& agg, const SnapshotChecks& c) {
  agg.positivity_pass = agg.positivity_pass && c.positivity_pass;
  agg.positivity_worst = std::min(agg.positivity_worst, c.min_G);
  agg.envelope_pass = agg.envelope_pass && c.envelope_pass;
  agg.envelope_worst = std::max(agg.envelope_worst, c.envelope_violation);
  agg.boundary_pass = agg.boundary_pass && c.boundary_pass;
  agg.boundary_worst = std::max(agg.boundary_worst, c.boundary_residual);
  agg.max_principle_pass = agg.max_principle_pass && c.max_principle_pass;
  agg.max_principle_worst = std::max(agg.max_principle_worst, c.max_principle_violation);
}

}  // namespace detail

/// March the growth ODE from t = 0 to t = T with n_steps RK4 steps,
/// snapshotting step 0, every snapshot_every-th step, and the final step.
/// T = 0 produces the initial snapshot only. A growth collapse mid-run
/// returns the partial trajectory with completed = false.
template <stored_energy E, growth_law L>
RunResult run(const SimulationSetup<E, L>& setup) {
  if (setup.T < 0.0 || !std::isfinite(setup.T))
    throw std::invalid_argument("run: T must be nonnegative and finite");
  if (setup.T > 0.0 && setup.n_steps < 1)
    throw std::invalid_argument("run: n_steps must be at least 1");
  if (setup.snapshot_every < 1)
    throw std::invalid_argument("run: snapshot_every must be at least 1");

  const WellposednessContext ctx{setup.G0, setup.env, setup.problem.l0, setup.problem.nL,
                                 setup.problem.nR, setup.problem.root_tol};

  RunResult result;
  SimState state{0.0, setup.G0};

  try {
    result.snapshots.push_back(detail::take_snapshot(setup, ctx, state, 0));
    detail::fold_checks(result.checks, result.snapshots.back().checks);

    if (setup.T > 0.0) {
      const double dt = setup.T / static_cast<double>(setup.n_steps);
      for (long long step = 1; step <= setup.n_steps; ++step) {
        state = rk4_step(setup.problem, setup.law, state, dt);
        if (step % setup.snapshot_every == 0 || step == setup.n_steps) {
          result.snapshots.push_back(
              detail::take_snapshot(setup, ctx, state, static_cast<std::size_t>(step)));
          detail::fold_checks(result.checks, result.snapshots.back().checks);
        }
      }
    }
    result.completed = true;
  } catch (const growth_collapse_error& err) {
    result.completed = false;
    result.failure = err.what();
  }
  return result;
}

}  // namespace rodgrowth
