#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "gbc/common.hpp"
#include "gbc/fft.hpp"
#include "gbc/grid.hpp"
#include "gbc/point.hpp"

namespace gbc {

/// Coupling parameters of the gravitational term. kappa is the product of the
/// Newton constant and the squared particle mass in simulation units; epsilon
/// is the dimensionless imaginary fraction of the coupling.
struct GravityParams {
  double kappa = 1.0;
  double epsilon = 0.0;
  double softening = 0.0;  // 0 selects the default of 2 * grid spacing
  bool include_hermitian_gravity = true;
  bool include_self_pairs = true;

  void validate() const {
    if (kappa < 0) throw Error("GravityParams: kappa must be >= 0");
    if (epsilon < 0 || epsilon > 1) throw Error("GravityParams: epsilon must lie in [0, 1]");
    if (softening < 0) throw Error("GravityParams: softening must be >= 0");
  }

  double softening_for(const Grid& g) const { return softening > 0 ? softening : 2 * g.spacing(); }
};

/// Softened Coulomb kernel 1/sqrt(|s|^2 + a^2), the 3D form kept in every
/// dimension. The softening removes the singularity at the source points.
inline double softened_kernel(double dist2, double a) { return 1.0 / std::sqrt(dist2 + a * a); }

/// |V_G| and its gradient (the gravitational force) on the physical grid,
/// together with the source configuration that generated them.
struct GravitySample {
  RealField abs_potential;         // kappa * sum_n amp_n * u_a(r - q_n), >= 0
  std::vector<RealField> force;    // spectral gradient of abs_potential, d components
  BohmianPoint source_point;
  std::vector<double> source_amplification;  // per particle, empty = all 1

  double softening = 0;  // value actually used, for diagnostics
};

namespace detail {

/// Squared minimum-image distance between a physical grid node and a point.
inline double min_image_dist2(const Grid& phys, std::span<const double> node,
                              std::span<const double> p) {
  double acc = 0;
  for (std::size_t c = 0; c < node.size(); ++c) {
    const double dx = phys.min_image(node[c] - p[c]);
    acc += dx * dx;
  }
  return acc;
}

/// Decodes the physical multi-index of flat index `idx` into coordinates.
inline void phys_coords(const Grid& phys, std::size_t idx, std::span<double> out) {
  const int m = phys.points_per_axis();
  for (int a = phys.axes() - 1; a >= 0; --a) {
    out[a] = phys.coord(static_cast<int>(idx % m));
    idx /= m;
  }
}

}  // namespace detail

/// Builds the Bohmian-sourced potential magnitude and force field.
/// `amplification` optionally scales each particle's source strength
/// (used by the pointer model); empty means 1 for every particle.
inline GravitySample potential_from_positions(const BohmianPoint& p, const Grid& grid,
                                              const GravityParams& params,
                                              std::span<const double> amplification = {}) {
  params.validate();
  const Grid phys = grid.physical();
  const int d = grid.dims_per_particle();
  const int n = grid.particles();
  if (p.axes() != n * d) throw Error("potential_from_positions: point/grid mismatch");
  if (!amplification.empty() && static_cast<int>(amplification.size()) != n)
    throw Error("potential_from_positions: amplification size mismatch");
  const double a = params.softening_for(grid);

  GravitySample gs;
  gs.abs_potential = RealField(phys);
  gs.source_point = p;
  gs.source_amplification.assign(amplification.begin(), amplification.end());
  gs.softening = a;

  std::vector<double> node(d);
  for (std::size_t idx = 0; idx < phys.total_points(); ++idx) {
    detail::phys_coords(phys, idx, node);
    double acc = 0;
    for (int j = 0; j < n; ++j) {
      const double amp = amplification.empty() ? 1.0 : amplification[j];
      acc += amp * softened_kernel(detail::min_image_dist2(phys, node, p.particle(j, d)), a);
    }
    gs.abs_potential.values[idx] = params.kappa * acc;
  }
  gs.force.reserve(d);
  for (int c = 0; c < d; ++c) gs.force.push_back(spectral_gradient(gs.abs_potential, c));
  return gs;
}

/// Hermitian gravitational potential energy of a configuration point against
/// the Bohmian sources: -kappa * sum_n sum_j amp_j * u_a(r_n - q_j).
/// Self-pairs (j == n) are included unless the params flag disables them.
/// Returns 0 when Hermitian gravity is switched off.
inline double pairwise_potential_energy(std::span<const double> config_point,
                                        const BohmianPoint& sources, const Grid& grid,
                                        const GravityParams& params,
                                        std::span<const double> amplification = {}) {
  params.validate();
  if (!params.include_hermitian_gravity) return 0.0;
  const int d = grid.dims_per_particle();
  const int n = grid.particles();
  if (static_cast<int>(config_point.size()) != n * d || sources.axes() != n * d)
    throw Error("pairwise_potential_energy: point/grid mismatch");
  const double a = params.softening_for(grid);
  const Grid phys = grid.physical();
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> r(config_point.data() + static_cast<std::size_t>(i) * d, d);
    for (int j = 0; j < n; ++j) {
      if (!params.include_self_pairs && i == j) continue;
      const double amp = amplification.empty() ? 1.0 : amplification[j];
      acc += amp * softened_kernel(detail::min_image_dist2(phys, r, sources.particle(j, d)), a);
    }
  }
  return -params.kappa * acc;
}

/// The diagonal localization bracket of the evolution equation, evaluated at
/// one configuration point: epsilon * (sum_n |V_G(r_n)| - integral <D> |V_G|).
/// Positive where the configuration sits in deeper potential than the state
/// average. `mean_density` must integrate to the particle number.
inline double localization_rate(std::span<const double> config_point, const RealField& mean_density,
                                const GravitySample& gsample, const Grid& grid,
                                const GravityParams& params) {
  params.validate();
  const int d = grid.dims_per_particle();
  const int n = grid.particles();
  if (static_cast<int>(config_point.size()) != n * d)
    throw Error("localization_rate: point/grid mismatch");
  if (!mean_density.grid.same_shape(gsample.abs_potential.grid))
    throw Error("localization_rate: grid mismatch");
  if (std::abs(integrate(mean_density) - n) > 1e-6)
    throw Error("localization_rate: mean density does not integrate to the particle number");

  double sampled = 0;
  for (int i = 0; i < n; ++i) {
    std::span<const double> r(config_point.data() + static_cast<std::size_t>(i) * d, d);
    sampled += interpolate(gsample.abs_potential, r);
  }
  double averaged = 0;
  for (std::size_t idx = 0; idx < mean_density.size(); ++idx)
    averaged += mean_density.values[idx] * gsample.abs_potential.values[idx];
  averaged *= mean_density.grid.cell_volume();
  return params.epsilon * (sampled - averaged);
}

}  // namespace gbc
