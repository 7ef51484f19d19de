#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rodgrowth/errors.hpp"
#include "rodgrowth/grid.hpp"

namespace rodgrowth {

/// Running partial sums of the composite trapezoid rule. out[0] = 0,
/// out[i+1] = out[i] + h/2 (f[i] + f[i+1]). Exact for piecewise-linear data.
inline ScalarField cumulative_integral(const ScalarField& f) {
  const double h = f.grid.spacing();
  std::vector<double> out(f.size());
  out[0] = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i)
    out[i + 1] = out[i] + 0.5 * h * (f.values[i] + f.values[i + 1]);
  return ScalarField(f.grid, std::move(out));
}

/// Composite trapezoid over the whole grid. Accumulates left to right with
/// the same arithmetic as cumulative_integral, so the two agree bit for bit.
inline double integrate(const ScalarField& f) {
  const double h = f.grid.spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) acc += 0.5 * h * (f.values[i] + f.values[i + 1]);
  return acc;
}

/// Thomas elimination for a tridiagonal system. lower/upper have n-1 entries,
/// diag and rhs have n. Pivots are compared against the row magnitude; an
/// unusable pivot raises singular_system_error rather than dividing through.
inline std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                             std::span<const double> diag,
                                             std::span<const double> upper,
                                             std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("solve_tridiagonal: empty system");
  if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: band/rhs sizes do not match");

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> r(rhs.begin(), rhs.end());

  auto pivot_ok = [](double piv, double scale) {
    return std::isfinite(piv) && std::abs(piv) > 1e-14 * scale && piv != 0.0;
  };

  double scale0 = std::abs(d[0]) + (n > 1 ? std::abs(upper[0]) : 0.0);
  if (!pivot_ok(d[0], scale0)) throw singular_system_error("solve_tridiagonal: zero pivot in row 0");

  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i - 1] / d[i - 1];
    d[i] -= m * upper[i - 1];
    r[i] -= m * r[i - 1];
    const double scale =
        std::abs(lower[i - 1]) + std::abs(diag[i]) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
    if (!pivot_ok(d[i], scale))
      throw singular_system_error("solve_tridiagonal: zero pivot in row " + std::to_string(i));
  }

  std::vector<double> x(n);
  x[n - 1] = r[n - 1] / d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (r[i] - upper[i] * x[i + 1]) / d[i];
  return x;
}

/// Root of a continuous strictly increasing scalar function.
///
/// The guess is tried first (cheap fixed points stay exact). Otherwise a
/// bracket is grown geometrically around the guess, half-width 1 doubled up
/// to 60 times, then refined by secant steps that fall back to bisection
/// whenever the proposal leaves the bracket. Stops at |f(s)| <= tol.
template <std::invocable<double> F>
double find_root_monotone(F&& f, double guess, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root_monotone: tol must be positive");
  if (!std::isfinite(guess)) throw std::invalid_argument("find_root_monotone: non-finite guess");

  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v))
      throw numeric_failure_error("find_root_monotone: f(" + std::to_string(x) +
                                  ") is not finite");
    return v;
  };

  double fg = eval(guess);
  if (std::abs(fg) <= tol) return guess;

  // Grow the bracket on the deficient side only; monotonicity fixes the other.
  double lo, hi, flo, fhi;
  if (fg > 0.0) {
    hi = guess;
    fhi = fg;
    double w = 1.0;
    lo = guess - w;
    flo = eval(lo);
    for (int k = 0; flo > 0.0; ++k) {
      if (k >= 60) throw no_bracket_error("find_root_monotone: no sign change within 2^60 of guess");
      hi = lo;
      fhi = flo;
      w *= 2.0;
      lo = guess - w;
      flo = eval(lo);
    }
  } else {
    lo = guess;
    flo = fg;
    double w = 1.0;
    hi = guess + w;
    fhi = eval(hi);
    for (int k = 0; fhi < 0.0; ++k) {
      if (k >= 60) throw no_bracket_error("find_root_monotone: no sign change within 2^60 of guess");
      lo = hi;
      flo = fhi;
      w *= 2.0;
      hi = guess + w;
      fhi = eval(hi);
    }
  }
  if (std::abs(flo) <= tol) return lo;
  if (std::abs(fhi) <= tol) return hi;

  // f(lo) < -tol < tol < f(hi) from here on.
  bool force_bisect = false;
  for (int it = 0; it < 300; ++it) {
    double s;
    if (!force_bisect && fhi != flo) {
      s = hi - fhi * (hi - lo) / (fhi - flo);
      if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
    } else {
      s = 0.5 * (lo + hi);
    }
    if (s <= lo || s >= hi) break;  // bracket collapsed to adjacent doubles

    const double fs = eval(s);
    if (std::abs(fs) <= tol) return s;
    if (fs > 0.0) {
      hi = s;
      fhi = fs;
    } else {
      lo = s;
      flo = fs;
    }
    force_bisect = !force_bisect;  // alternate to guarantee bracket shrinkage
  }
  throw numeric_failure_error("find_root_monotone: bracket collapsed without meeting tolerance");
}

/// Piecewise-linear evaluation. Points within 1e-12 of the domain are
/// clamped; exact node hits return the stored value unchanged.
inline double eval_linear(const ScalarField& f, double x) {
  const double L = f.grid.length;
  constexpr double slack = 1e-12;
  if (!(x >= -slack && x <= L + slack))
    throw out_of_domain_error("eval_linear: x = " + std::to_string(x) + " outside [0, " +
                              std::to_string(L) + "]");
  const double xc = std::clamp(x, 0.0, L);
  const std::size_t M = f.grid.intervals;
  const double h = f.grid.spacing();

  const auto k = static_cast<std::size_t>(std::llround(xc / h));
  if (k <= M && f.grid.node(k) == xc) return f.values[k];

  auto i = static_cast<std::size_t>(xc / h);
  i = std::min(i, M - 1);
  if (xc < f.grid.node(i) && i > 0) --i;  // guard against floor rounding up at a cell edge
  const double t = std::clamp((xc - f.grid.node(i)) / h, 0.0, 1.0);
  return f.values[i] * (1.0 - t) + f.values[i + 1] * t;
}

/// Inverse of a strictly increasing piecewise-linear field: the x with
/// eval_linear(f, x) == target. Exact at nodes; errors if the values are not
/// strictly increasing or the target lies outside [f[0], f[M]].
inline double invert_monotone_field(const ScalarField& f, double target) {
  const auto& v = f.values;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (!(v[i] < v[i + 1]))
      throw not_monotone_error("invert_monotone_field: values not strictly increasing at node " +
                               std::to_string(i));
  if (!(target >= v.front() && target <= v.back()))
    throw out_of_range_error("invert_monotone_field: target " + std::to_string(target) +
                             " outside [" + std::to_string(v.front()) + ", " +
                             std::to_string(v.back()) + "]");

  // Bisect on the node values, then invert the straddling segment.
  std::size_t lo = 0, hi = v.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (v[mid] <= target ? lo : hi) = mid;
  }
  if (v[lo] == target) return f.grid.node(lo);
  if (v[hi] == target) return f.grid.node(hi);
  const double t = (target - v[lo]) / (v[hi] - v[lo]);
  const double x = f.grid.node(lo) + t * f.grid.spacing();
  return std::clamp(x, f.grid.node(lo), f.grid.node(hi));
}

/// Least-squares slope of log(error) against log(spacing). Expects matched
/// positive sequences with strictly decreasing spacings.
inline double observed_order(std::span<const double> errors, std::span<const double> spacings) {
  if (errors.size() != spacings.size())
    throw std::invalid_argument("observed_order: sequence lengths differ");
  if (errors.size() < 2) throw std::invalid_argument("observed_order: need at least two samples");
  for (double e : errors)
    if (!(e > 0.0)) throw std::invalid_argument("observed_order: errors must be positive");
  for (double h : spacings)
    if (!(h > 0.0)) throw std::invalid_argument("observed_order: spacings must be positive");
  for (std::size_t i = 0; i + 1 < spacings.size(); ++i)
    if (!(spacings[i] > spacings[i + 1]))
      throw std::invalid_argument("observed_order: spacings must be strictly decreasing");

  const auto n = static_cast<double>(errors.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    sx += std::log(spacings[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double dx = std::log(spacings[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  return sxy / sxx;
}

}  // namespace rodgrowth
