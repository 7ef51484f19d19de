#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rodgrowth {

/// Uniform 1D grid on [0, length] with `intervals` equal cells.
struct Grid {
  double length = 0.0;
  std::size_t intervals = 0;

  std::size_t node_count() const noexcept { return intervals + 1; }
  double spacing() const noexcept { return length / static_cast<double>(intervals); }

  // node(intervals) == length exactly: the ratio i/M evaluates to 1.0.
  double node(std::size_t i) const noexcept {
    return length * (static_cast<double>(i) / static_cast<double>(intervals));
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline Grid make_uniform_grid(double length, long long intervals) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("make_uniform_grid: length must be positive and finite, got " +
                                std::to_string(length));
  if (intervals < 2)
    throw std::invalid_argument("make_uniform_grid: need at least 2 intervals, got " +
                                std::to_string(intervals));
  return Grid{length, static_cast<std::size_t>(intervals)};
}

/// Nodal values of a scalar quantity on a uniform grid, interpolated
/// piecewise-linearly between nodes.
struct ScalarField {
  Grid grid{};
  std::vector<double> values{};

  ScalarField() = default;

  ScalarField(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.node_count())
      throw std::invalid_argument("ScalarField: got " + std::to_string(values.size()) +
                                  " values for " + std::to_string(grid.node_count()) + " nodes");
    for (double x : values)
      if (!std::isfinite(x)) throw std::invalid_argument("ScalarField: non-finite value");
  }

  static ScalarField constant(Grid g, double value) {
    return ScalarField(g, std::vector<double>(g.node_count(), value));
  }

  template <class F>
  static ScalarField sample(Grid g, F&& f) {
    std::vector<double> v(g.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.node(i));
    return ScalarField(g, std::move(v));
  }

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  std::size_t size() const noexcept { return values.size(); }

  double min_value() const { return *std::min_element(values.begin(), values.end()); }
  double max_value() const { return *std::max_element(values.begin(), values.end()); }
};

inline void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

}  // namespace rodgrowth
