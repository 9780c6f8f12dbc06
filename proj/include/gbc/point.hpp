#pragma once

#include <span>
#include <vector>

#include "gbc/common.hpp"
#include "gbc/grid.hpp"

namespace gbc {

/// Configuration-space point: the N Bohmian positions, one d-vector per
/// particle, stored particle-major to match grid axis ordering.
struct BohmianPoint {
  std::vector<double> q;  // size N*d

  BohmianPoint() = default;
  explicit BohmianPoint(std::vector<double> coords) : q(std::move(coords)) {}

  int axes() const { return static_cast<int>(q.size()); }

  std::span<const double> coords() const { return q; }

  /// Coordinates of one particle.
  std::span<const double> particle(int n, int d) const {
    return std::span<const double>(q.data() + static_cast<std::size_t>(n) * d, d);
  }

  /// Wraps every coordinate into the periodic domain.
  void wrap(const Grid& g) {
    for (double& x : q) x = g.wrap_coord(x);
  }
};

}  // namespace gbc
