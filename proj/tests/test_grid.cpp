#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gbc/fft.hpp"
#include "gbc/grid.hpp"
#include "gbc/rng.hpp"

using namespace gbc;

namespace {

// High-order centered finite difference, the independent oracle for the
// spectral derivative (8th order, periodic indexing).
double fd8_derivative(const RealField& f, int axis, std::size_t flat) {
  const Grid& g = f.grid;
  const std::size_t stride = g.stride(axis);
  const int m = g.points_per_axis();
  const int i = static_cast<int>((flat / stride) % static_cast<std::size_t>(m));
  const std::size_t base = flat - static_cast<std::size_t>(i) * stride;
  auto at = [&](int off) {
    return f.values[base + static_cast<std::size_t>(g.wrap_index(i + off)) * stride];
  };
  const double c1 = 4.0 / 5, c2 = -1.0 / 5, c3 = 4.0 / 105, c4 = -1.0 / 280;
  return (c1 * (at(1) - at(-1)) + c2 * (at(2) - at(-2)) + c3 * (at(3) - at(-3)) +
          c4 * (at(4) - at(-4))) /
         g.spacing();
}

RealField random_band_limited(const Grid& g, int max_mode, std::uint64_t seed) {
  RngStream rng(seed, 0);
  RealField f(g);
  const int m = g.points_per_axis();
  for (int mode = 0; mode <= max_mode; ++mode) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    const double k = 2 * pi * mode / g.extent();
    for (int i = 0; i < m; ++i) {
      const double x = g.coord(i);
      f.values[i] += a * std::cos(k * x) + b * std::sin(k * x);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("make_grid arithmetic", "[grid]") {
  Grid g = make_grid(1, 1, 8, 8.0);
  CHECK(g.spacing() == 1.0);
  CHECK(g.total_points() == 8);
  for (int i = 0; i < 8; ++i) CHECK(g.coord(i) == -4.0 + i);

  Grid g2 = make_grid(1, 2, 256, 20.0);
  CHECK(g2.total_points() == 65536);
  CHECK(g2.spacing() == Catch::Approx(0.078125));
}

TEST_CASE("make_grid rejects over-budget and bad sizes", "[grid]") {
  // 4096^4 complex amplitudes is ~4.5e15 bytes, far past the 2 GiB default.
  CHECK_THROWS_AS(make_grid(1, 4, 4096, 40.0), Error);
  CHECK_THROWS_AS(make_grid(1, 1, 100, 8.0), Error);
  CHECK_THROWS_AS(make_grid(1, 1, 64, -1.0), Error);
  CHECK_THROWS_AS(make_grid(4, 1, 64, 8.0), Error);
  // A custom budget admits what the default rejects only when it fits.
  CHECK_THROWS_AS(make_grid(1, 1, 1024, 8.0, 1024), Error);
  CHECK_NOTHROW(make_grid(1, 1, 1024, 8.0));
}

TEST_CASE("spectral gradient of single Fourier mode", "[grid]") {
  Grid g = make_grid(1, 1, 64, 10.0);
  RealField f(g);
  const double k = 2 * pi / g.extent();
  for (int i = 0; i < 64; ++i) f.values[i] = std::sin(k * g.coord(i));
  RealField df = spectral_gradient(f, 0);
  double max_err = 0;
  for (int i = 0; i < 64; ++i)
    max_err = std::max(max_err, std::abs(df.values[i] - k * std::cos(k * g.coord(i))));
  CHECK(max_err < 1e-12);
}

TEST_CASE("spectral gradient of constant is zero", "[grid]") {
  Grid g = make_grid(2, 1, 16, 4.0);
  RealField f(g);
  for (auto& v : f.values) v = 3.25;
  RealField df = spectral_gradient(f, 1);
  for (auto v : df.values) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("spectral gradient matches finite-difference oracle", "[grid]") {
  Grid g = make_grid(1, 1, 256, 12.0);
  RealField f = random_band_limited(g, 10, 977);
  RealField df = spectral_gradient(f, 0);
  double scale = 0;
  for (auto v : df.values) scale = std::max(scale, std::abs(v));
  double max_err = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    max_err = std::max(max_err, std::abs(df.values[i] - fd8_derivative(f, 0, i)));
  CHECK(max_err / scale < 1e-6);
}

TEST_CASE("integrate: normalized Gaussian, zero field, indicator", "[grid]") {
  Grid g = make_grid(1, 1, 256, 32.0);
  RealField f(g);
  const double sigma = 1.3;
  for (int i = 0; i < 256; ++i) {
    const double x = g.coord(i);
    f.values[i] = std::exp(-x * x / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * pi));
  }
  // Quadrature oracle at double resolution.
  Grid g2 = make_grid(1, 1, 512, 32.0);
  RealField f2(g2);
  for (int i = 0; i < 512; ++i) {
    const double x = g2.coord(i);
    f2.values[i] = std::exp(-x * x / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * pi));
  }
  CHECK(std::abs(integrate(f) - integrate(f2)) < 1e-12);
  CHECK(integrate(f) == Catch::Approx(1.0).margin(1e-8));

  RealField z(g);
  CHECK(integrate(z) == 0.0);

  RealField ind(g);
  for (int i = 0; i < 128; ++i) ind.values[i] = 1.0;
  CHECK(integrate(ind) == Catch::Approx(16.0));
}

TEST_CASE("integrate is linear", "[grid]") {
  Grid g = make_grid(1, 2, 32, 7.0);
  RngStream rng(11, 0);
  RealField f(g), h(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.values[i] = rng.uniform(-1, 1);
    h.values[i] = rng.uniform(-1, 1);
  }
  const double a = 2.5, b = -0.75;
  RealField combo(g);
  for (std::size_t i = 0; i < f.size(); ++i) combo.values[i] = a * f.values[i] + b * h.values[i];
  CHECK(std::abs(integrate(combo) - (a * integrate(f) + b * integrate(h))) < 1e-12);
}

TEST_CASE("gradient then integrate vanishes", "[grid]") {
  Grid g = make_grid(1, 1, 128, 9.0);
  RealField f = random_band_limited(g, 20, 1234);
  double mag = 0;
  for (auto v : f.values) mag = std::max(mag, std::abs(v));
  RealField df = spectral_gradient(f, 0);
  CHECK(std::abs(integrate(df)) < 1e-10 * mag);
}

TEST_CASE("interpolate reproduces grid nodes bit-exactly", "[grid]") {
  Grid g = make_grid(1, 2, 16, 6.0);
  RngStream rng(5, 0);
  ComplexField f(g);
  for (auto& v : f.values) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  for (int trial = 0; trial < 50; ++trial) {
    int i = static_cast<int>(rng.next_u64() % 16), j = static_cast<int>(rng.next_u64() % 16);
    double p[2] = {g.coord(i), g.coord(j)};
    cplx v = interpolate(f, std::span<const double>(p, 2));
    CHECK(v == f.values[static_cast<std::size_t>(i) * 16 + j]);
  }
}

TEST_CASE("interpolate reproduces linear fields mid-cell", "[grid]") {
  Grid g = make_grid(1, 1, 64, 16.0);
  RealField f(g);
  for (int i = 0; i < 64; ++i) f.values[i] = 0.5 * g.coord(i) + 1.0;
  // Stay away from the wrap, where a linear field is discontinuous.
  for (double x : {-3.1411, -0.625, 0.1875, 2.33}) {
    double p[1] = {x};
    CHECK(std::abs(interpolate(f, std::span<const double>(p, 1)) - (0.5 * x + 1.0)) < 1e-12);
  }
}

TEST_CASE("interpolate refinement study on a Gaussian", "[grid]") {
  // Cubic interpolation: error should shrink by >= 2^3 per halving.
  auto max_err = [](int m) {
    Grid g = make_grid(1, 1, m, 20.0);
    RealField f(g);
    for (int i = 0; i < m; ++i) f.values[i] = std::exp(-0.5 * g.coord(i) * g.coord(i));
    double err = 0;
    for (int t = 0; t < 200; ++t) {
      const double x = -4.0 + 8.0 * t / 199.0 + 0.37 * g.spacing();
      double p[1] = {x};
      err = std::max(err, std::abs(interpolate(f, std::span<const double>(p, 1)) -
                                   std::exp(-0.5 * x * x)));
    }
    return err;
  };
  const double e1 = max_err(64), e2 = max_err(128);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.0);
}

TEST_CASE("fft round-trip", "[grid]") {
  Grid g = make_grid(1, 2, 32, 5.0);
  RngStream rng(7, 0);
  ComplexField f(g);
  for (auto& v : f.values) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  ComplexField f2 = f;
  fft_forward(f2);
  fft_inverse(f2);
  double max_err = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    max_err = std::max(max_err, std::abs(f2.values[i] - f.values[i]));
  CHECK(max_err < 1e-12);
}
