#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gbc/common.hpp"

namespace gbc {

inline constexpr std::uint64_t default_memory_budget = 2ULL * 1024 * 1024 * 1024;  // 2 GiB

/// Uniform periodic tensor-product grid for N particles in d spatial
/// dimensions: N*d axes, each with M points covering [-extent/2, extent/2).
/// Periodic wrap-around is the only boundary condition.
class Grid {
public:
  Grid() = default;
  Grid(int dims_per_particle, int particles, int points_per_axis, double extent)
      : d_(dims_per_particle),
        n_(particles),
        m_(points_per_axis),
        extent_(extent),
        spacing_(extent / points_per_axis),
        axes_(dims_per_particle * particles) {
    total_ = 1;
    for (int a = 0; a < axes_; ++a) total_ *= static_cast<std::size_t>(m_);
  }

  int dims_per_particle() const { return d_; }
  int particles() const { return n_; }
  int points_per_axis() const { return m_; }
  double extent() const { return extent_; }
  double spacing() const { return spacing_; }
  int axes() const { return axes_; }
  std::size_t total_points() const { return total_; }
  /// Quadrature cell volume, spacing^axes.
  double cell_volume() const { return std::pow(spacing_, axes_); }

  double coord(int i) const { return -extent_ / 2 + spacing_ * i; }
  std::vector<double> coords() const {
    std::vector<double> c(m_);
    for (int i = 0; i < m_; ++i) c[i] = coord(i);
    return c;
  }

  /// Row-major stride of an axis (last axis is contiguous).
  std::size_t stride(int axis) const {
    std::size_t s = 1;
    for (int a = axes_ - 1; a > axis; --a) s *= static_cast<std::size_t>(m_);
    return s;
  }

  int wrap_index(long long i) const {
    long long m = static_cast<long long>(m_);
    long long r = i % m;
    return static_cast<int>(r < 0 ? r + m : r);
  }

  /// Wraps a coordinate into [-extent/2, extent/2).
  double wrap_coord(double x) const {
    double y = std::remainder(x, extent_);
    if (y >= extent_ / 2) y -= extent_;
    return y;
  }

  /// Minimum-image displacement (nearest periodic image of dx per axis).
  double min_image(double dx) const { return wrap_coord(dx); }

  /// The d-dimensional single-particle grid carrying physical-space fields.
  Grid physical() const { return Grid(d_, 1, m_, extent_); }

  bool same_shape(const Grid& o) const {
    return d_ == o.d_ && n_ == o.n_ && m_ == o.m_ && extent_ == o.extent_;
  }

private:
  int d_ = 1, n_ = 1, m_ = 0;
  double extent_ = 0, spacing_ = 0;
  int axes_ = 0;
  std::size_t total_ = 0;
};

/// Builds a grid after validating the power-of-two and memory preconditions.
inline Grid make_grid(int dims_per_particle, int particles, int points_per_axis, double extent,
                      std::uint64_t budget_bytes = default_memory_budget) {
  if (dims_per_particle < 1 || dims_per_particle > 3)
    throw Error("make_grid: dims_per_particle must be 1, 2 or 3");
  if (particles < 1) throw Error("make_grid: particles must be >= 1");
  if (extent <= 0) throw Error("make_grid: extent must be positive");
  int m = points_per_axis;
  if (m < 2 || (m & (m - 1)) != 0) throw Error("make_grid: points_per_axis must be a power of two");
  const int axes = dims_per_particle * particles;
  const long double amplitudes = std::pow(static_cast<long double>(m), axes);
  const long double bytes = amplitudes * static_cast<long double>(sizeof(cplx));
  if (bytes > static_cast<long double>(budget_bytes))
    throw Error("make_grid: memory budget exceeded (" + std::to_string(static_cast<double>(bytes)) +
                " bytes needed, budget " + std::to_string(budget_bytes) + ")");
  return Grid(dims_per_particle, particles, m, extent);
}

/// Scalar field sampled on a grid. Vector-valued quantities are stored as one
/// Field per component.
template <typename T>
struct Field {
  Grid grid;
  aligned_vector<T> values;

  Field() = default;
  explicit Field(const Grid& g, T init = T{}) : grid(g), values(g.total_points(), init) {}

  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

using RealField = Field<double>;
using ComplexField = Field<cplx>;

/// Periodic-trapezoid quadrature: sum of samples times the cell volume.
template <typename T>
T integrate(const Field<T>& f) {
  T acc{};
  for (const T& v : f.values) acc += v;
  return acc * static_cast<T>(f.grid.cell_volume());
}

inline double integrate(const RealField& f) {
  double acc = 0;
  for (double v : f.values) acc += v;
  return acc * f.grid.cell_volume();
}

inline double norm_squared(const ComplexField& f) {
  double acc = 0;
  for (const cplx& z : f.values) acc += std::norm(z);
  return acc * f.grid.cell_volume();
}

inline void scale(ComplexField& f, double s) {
  for (cplx& z : f.values) z *= s;
}

/// Normalizes in place; returns the norm before normalization.
inline double normalize(ComplexField& f) {
  const double n = std::sqrt(norm_squared(f));
  if (!(n > 0) || !std::isfinite(n)) throw Error("normalize: state has invalid norm");
  scale(f, 1.0 / n);
  return n;
}

namespace detail {

struct AxisStencil {
  int idx[4];
  double w[4];
  int count;  // 1 when the query sits on a node, else 4
};

inline AxisStencil axis_stencil(const Grid& g, double x) {
  AxisStencil st{};
  const double u = (g.wrap_coord(x) + g.extent() / 2) / g.spacing();
  const long long nearest = std::llround(u);
  if (std::abs(u - static_cast<double>(nearest)) < 1e-9) {
    st.count = 1;
    st.idx[0] = g.wrap_index(nearest);
    st.w[0] = 1.0;
    return st;
  }
  const long long i1 = static_cast<long long>(std::floor(u));
  const double t = u - static_cast<double>(i1);
  // Cubic Lagrange weights for nodes at offsets {-1, 0, 1, 2}.
  st.count = 4;
  st.w[0] = -t * (t - 1) * (t - 2) / 6;
  st.w[1] = (t + 1) * (t - 1) * (t - 2) / 2;
  st.w[2] = -(t + 1) * t * (t - 2) / 2;
  st.w[3] = (t + 1) * t * (t - 1) / 6;
  for (int k = 0; k < 4; ++k) st.idx[k] = g.wrap_index(i1 - 1 + k);
  return st;
}

}  // namespace detail

inline constexpr int max_interp_axes = 16;

/// Cubic (4-point) periodic interpolation per axis; exact at grid nodes.
/// `point` has one coordinate per grid axis; it is wrapped into the domain.
template <typename T>
T interpolate(const Field<T>& f, std::span<const double> point) {
  const Grid& g = f.grid;
  const int axes = g.axes();
  if (static_cast<int>(point.size()) != axes) throw Error("interpolate: point/axes mismatch");
  if (axes > max_interp_axes) throw Error("interpolate: too many axes");
  detail::AxisStencil st[max_interp_axes];
  std::size_t strides[max_interp_axes];
  for (int a = 0; a < axes; ++a) {
    st[a] = detail::axis_stencil(g, point[a]);
    strides[a] = g.stride(a);
  }

  T acc{};
  // Odometer over the tensor-product stencil.
  int c[max_interp_axes] = {};
  for (;;) {
    std::size_t flat = 0;
    double w = 1.0;
    for (int a = 0; a < axes; ++a) {
      flat += static_cast<std::size_t>(st[a].idx[c[a]]) * strides[a];
      w *= st[a].w[c[a]];
    }
    acc += f.values[flat] * w;
    int a = axes - 1;
    while (a >= 0 && ++c[a] == st[a].count) c[a--] = 0;
    if (a < 0) break;
  }
  return acc;
}

}  // namespace gbc
