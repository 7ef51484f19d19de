#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"
#include "rodgrowth/numerics.hpp"

namespace rodgrowth {

/// A stored-energy density W(X, p): position-dependent, strictly convex in
/// the stretch p > 0, with enough derivative access for the inverse stress
/// map and its sensitivities.
template <class E>
concept stored_energy = requires(const E& e, double X, double p) {
  { e.grid() } -> std::convertible_to<Grid>;
  { e.density(X, p) } -> std::convertible_to<double>;                     // W
  { e.stress(X, p) } -> std::convertible_to<double>;                      // dW/dp
  { e.stiffness(X, p) } -> std::convertible_to<double>;                   // d2W/dp2
  { e.stress_position_derivative(X, p) } -> std::convertible_to<double>;  // d2W/dXdp
};

/// W(X, p) = mu(X) (p^2 - 1 - 2 ln p).
///
/// Vanishes at p = 1, is strictly convex (d2W/dp2 = 2 mu (1 + 1/p^2) >= 2 mu),
/// and blows up toward p -> 0+ and p -> infinity. The stiffness modulus mu is
/// a strictly positive nodal field, interpolated linearly in X.
class LogQuadraticEnergy {
 public:
  explicit LogQuadraticEnergy(ScalarField mu) : mu_(std::move(mu)) {
    for (std::size_t i = 0; i < mu_.size(); ++i)
      if (!(mu_[i] > 0.0))
        throw invalid_coefficient_error("log-quadratic energy: mu must be positive, node " +
                                        std::to_string(i) + " has " + std::to_string(mu_[i]));
  }

  const Grid& grid() const noexcept { return mu_.grid; }
  const ScalarField& modulus() const noexcept { return mu_; }

  double density(double X, double p) const {
    check_stretch(p);
    return mu_at(X) * (p * p - 1.0 - 2.0 * std::log(p));
  }

  double stress(double X, double p) const {
    check_stretch(p);
    return 2.0 * mu_at(X) * (p - 1.0 / p);
  }

  double stiffness(double X, double p) const {
    check_stretch(p);
    return 2.0 * mu_at(X) * (1.0 + 1.0 / (p * p));
  }

  double stress_position_derivative(double X, double p) const {
    check_stretch(p);
    return 2.0 * modulus_slope(X) * (p - 1.0 / p);
  }

  // Positive root of 2 mu p^2 - S p - 2 mu = 0. The S < 0 branch is the
  // conjugate form of the quadratic formula, which avoids cancellation.
  // At S = 0 this yields exactly 1.0.
  double stretch_from_stress_closed_form(double X, double S) const {
    const double mu = mu_at(X);
    const double q = std::sqrt(S * S + 16.0 * mu * mu);
    return S >= 0.0 ? (S + q) / (4.0 * mu) : (4.0 * mu) / (q - S);
  }

 private:
  static void check_stretch(double p) {
    if (!(p > 0.0) || !std::isfinite(p))
      throw invalid_stretch_error("log-quadratic energy: stretch must be positive, got " +
                                  std::to_string(p));
  }

  double mu_at(double X) const { return eval_linear(mu_, X); }

  // Slope of the interpolated modulus; right-sided at interior nodes, the
  // last cell's slope at X = L.
  double modulus_slope(double X) const {
    const double L = mu_.grid.length;
    constexpr double slack = 1e-12;
    if (!(X >= -slack && X <= L + slack))
      throw out_of_domain_error("modulus_slope: X outside [0, L]");
    const double xc = std::clamp(X, 0.0, L);
    const std::size_t M = mu_.grid.intervals;
    const double h = mu_.grid.spacing();
    auto i = static_cast<std::size_t>(xc / h);
    i = std::min(i, M - 1);
    if (xc < mu_.grid.node(i) && i > 0) --i;
    return (mu_[i + 1] - mu_[i]) / h;
  }

  ScalarField mu_;
};

inline LogQuadraticEnergy make_log_quadratic(ScalarField mu) {
  return LogQuadraticEnergy(std::move(mu));
}

namespace detail {

// Inverse stress map without a closed form: expand a multiplicative bracket
// around p = 1, then Newton iterate with bisection fallback until the stress
// residual is within tol.
template <stored_energy E>
double invert_stress_by_newton(const E& e, double X, double S, double tol) {
  double p_lo = 1.0, p_hi = 1.0;
  double s_lo = e.stress(X, 1.0), s_hi = s_lo;
  for (int k = 0; s_lo > S; ++k) {
    if (k >= 200) throw no_bracket_error("inverse stress: no bracket below p = 1");
    p_lo *= 0.5;
    s_lo = e.stress(X, p_lo);
  }
  for (int k = 0; s_hi < S; ++k) {
    if (k >= 200) throw no_bracket_error("inverse stress: no bracket above p = 1");
    p_hi *= 2.0;
    s_hi = e.stress(X, p_hi);
  }

  double p = 0.5 * (p_lo + p_hi);
  for (int it = 0; it < 200; ++it) {
    const double r = e.stress(X, p) - S;
    if (std::abs(r) <= tol) return p;
    if (r > 0.0)
      p_hi = p;
    else
      p_lo = p;
    const double step = r / e.stiffness(X, p);
    double next = p - step;
    if (!(next > p_lo && next < p_hi)) next = 0.5 * (p_lo + p_hi);
    if (next == p) break;
    p = next;
  }
  if (std::abs(e.stress(X, p) - S) <= tol) return p;
  throw numeric_failure_error("inverse stress: Newton failed to reach tolerance");
}

}  // namespace detail

/// The stretch p > 0 with stress(X, p) = S; unique by strict convexity.
template <stored_energy E>
double stretch_from_stress(const E& e, double X, double S, double tol = 1e-12) {
  if constexpr (requires { e.stretch_from_stress_closed_form(X, S); })
    return e.stretch_from_stress_closed_form(X, S);
  else
    return detail::invert_stress_by_newton(e, X, S, tol);
}

/// d/dS of the inverse stress map: 1 / (d2W/dp2 at the attained stretch).
/// Strictly positive, which is what makes the stress equation monotone.
template <stored_energy E>
double stretch_from_stress_dS(const E& e, double X, double S) {
  return 1.0 / e.stiffness(X, stretch_from_stress(e, X, S));
}

/// d/dX of the inverse stress map at fixed S, by implicit differentiation:
/// -(d2W/dXdp) / (d2W/dp2), both at the attained stretch.
template <stored_energy E>
double stretch_from_stress_dX(const E& e, double X, double S) {
  const double p = stretch_from_stress(e, X, S);
  return -e.stress_position_derivative(X, p) / e.stiffness(X, p);
}

/// Stress values attained across the rod at a pair of stretch levels:
/// S_lo = min over nodes of stress(X, p_lo), S_hi = max of stress(X, p_hi).
/// Any stress in [S_lo, S_hi] keeps every nodal stretch inside [p_lo, p_hi].
struct StressBracket {
  double p_lo = 0.0, p_hi = 0.0;
  double S_lo = 0.0, S_hi = 0.0;
};

template <stored_energy E>
StressBracket stress_bracket(const E& e, double p_lo, double p_hi) {
  if (!(p_lo > 0.0) || !(p_hi >= p_lo) || !std::isfinite(p_hi))
    throw std::invalid_argument("stress_bracket: need 0 < p_lo <= p_hi");
  const Grid g = e.grid();
  double s_lo = std::numeric_limits<double>::infinity();
  double s_hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    s_lo = std::min(s_lo, e.stress(g.node(i), p_lo));
    s_hi = std::max(s_hi, e.stress(g.node(i), p_hi));
  }
  return StressBracket{p_lo, p_hi, s_lo, s_hi};
}

struct EnergyCheckResult {
  std::string name;
  bool pass = false;
  double worst_value = 0.0;  // extremal quantity the check is judged on
  double worst_X = 0.0;
  double worst_p = 0.0;
};

struct EnergyValidationReport {
  std::vector<EnergyCheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline std::vector<double> default_energy_probes() {
  return {0.01, 0.1, 0.5, 1.0, 2.0, 10.0};
}

/// Checks the assumptions the rest of the pipeline leans on: W(X,1) = 0,
/// positive stiffness, stress increasing in p, and energetic blow-up as the
/// compression probes approach zero stretch.
template <stored_energy E>
EnergyValidationReport validate_energy(const E& e, std::span<const double> p_probes) {
  if (p_probes.empty()) throw std::invalid_argument("validate_energy: empty probe set");
  std::vector<double> probes(p_probes.begin(), p_probes.end());
  for (double p : probes)
    if (!(p > 0.0)) throw invalid_stretch_error("validate_energy: probes must be positive");
  std::sort(probes.begin(), probes.end());

  const Grid g = e.grid();
  EnergyValidationReport report;

  {
    EnergyCheckResult c{"identity_energy_zero", true, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const double X = g.node(i);
      const double w = std::abs(e.density(X, 1.0));
      if (w > c.worst_value) c = {c.name, true, w, X, 1.0};
    }
    c.pass = c.worst_value <= 1e-12;
    report.checks.push_back(c);
  }

  {
    EnergyCheckResult c{"stiffness_positive", true, std::numeric_limits<double>::infinity(), 0.0,
                        0.0};
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (double p : probes) {
        const double X = g.node(i);
        const double s = e.stiffness(X, p);
        if (s < c.worst_value) c = {c.name, true, s, X, p};
      }
    c.pass = c.worst_value > 0.0;
    report.checks.push_back(c);
  }

  {
    // Smallest stress increment across consecutive probes; must stay positive.
    EnergyCheckResult c{"stress_increasing", true, std::numeric_limits<double>::infinity(), 0.0,
                        0.0};
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (std::size_t j = 0; j + 1 < probes.size(); ++j) {
        const double X = g.node(i);
        const double d = e.stress(X, probes[j + 1]) - e.stress(X, probes[j]);
        if (d < c.worst_value) c = {c.name, true, d, X, probes[j + 1]};
      }
    c.pass = probes.size() < 2 || c.worst_value > 0.0;
    report.checks.push_back(c);
  }

  {
    // Walking the sub-identity probes toward zero must raise the energy.
    EnergyCheckResult c{"compression_blowup", true, std::numeric_limits<double>::infinity(), 0.0,
                        0.0};
    std::vector<double> small;
    for (double p : probes)
      if (p < 1.0) small.push_back(p);
    std::sort(small.begin(), small.end(), std::greater<>());
    bool any_pair = false;
    for (std::size_t i = 0; i < g.node_count(); ++i)
      for (std::size_t j = 0; j + 1 < small.size(); ++j) {
        any_pair = true;
        const double X = g.node(i);
        const double d = e.density(X, small[j + 1]) - e.density(X, small[j]);
        if (d < c.worst_value) c = {c.name, true, d, X, small[j + 1]};
      }
    c.pass = !any_pair || c.worst_value > 0.0;
    if (!any_pair) c.worst_value = 0.0;
    report.checks.push_back(c);
  }

  return report;
}

}  // namespace rodgrowth
