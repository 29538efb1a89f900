#pragma once

#include <functional>
#include <vector>

#include "pcs/error.hpp"

namespace pcs {

/// Uniform 1-D grid over [left, right] with n nodes inclusive.
struct grid1d {
  double left = 0.0;
  double right = 1.0;
  int n = 0;
  double h = 0.0;

  grid1d() = default;
  grid1d(double left_, double right_, int n_) : left(left_), right(right_), n(n_) {
    if (!(right > left)) throw error(errc::invalid_argument, "grid: right must exceed left");
    if (n < 8) throw error(errc::invalid_argument, "grid: need at least 8 nodes");
    h = (right - left) / (n - 1);
  }

  double node(int j) const { return left + j * h; }
  bool operator==(const grid1d& o) const { return left == o.left && right == o.right && n == o.n; }
};

/// Nodal values of a function on a grid1d.
struct grid_function {
  grid1d grid;
  std::vector<double> values;

  grid_function() = default;
  explicit grid_function(const grid1d& g) : grid(g), values(static_cast<std::size_t>(g.n), 0.0) {}

  static grid_function sample(const grid1d& g, const std::function<double(double)>& f) {
    grid_function u(g);
    for (int j = 0; j < g.n; ++j) u.values[static_cast<std::size_t>(j)] = f(g.node(j));
    return u;
  }

  double& operator[](int j) { return values[static_cast<std::size_t>(j)]; }
  double operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
  int size() const { return grid.n; }
};

} // namespace pcs
