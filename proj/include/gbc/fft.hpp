#pragma once

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "gbc/common.hpp"
#include "gbc/grid.hpp"

namespace gbc {
namespace detail {

/// In-place multi-dimensional c2c FFTW plans for one grid shape.
/// FFTW_ESTIMATE keeps planning deterministic run-to-run.
class FftPlan {
public:
  explicit FftPlan(const Grid& g) {
    std::vector<int> dims(g.axes(), g.points_per_axis());
    aligned_vector<cplx> scratch(g.total_points());
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_FORWARD,
                         FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, FFTW_BACKWARD,
                         FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw Error("FftPlan: planner failed");
  }
  ~FftPlan() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void forward(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(fwd_, p, p);
  }
  /// Unnormalized inverse; callers divide by total point count.
  void backward(cplx* data) const {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(bwd_, p, p);
  }

private:
  fftw_plan fwd_, bwd_;
};

/// Plan creation is not thread-safe in FFTW; the cache serializes it.
/// Execution on distinct arrays is safe from any thread.
inline const FftPlan& plan_for(const Grid& g) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(g.axes(), g.points_per_axis());
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<FftPlan>(g)).first;
  return *it->second;
}

}  // namespace detail

inline void fft_forward(ComplexField& f) { detail::plan_for(f.grid).forward(f.values.data()); }

inline void fft_inverse(ComplexField& f) {
  detail::plan_for(f.grid).backward(f.values.data());
  const double inv = 1.0 / static_cast<double>(f.grid.total_points());
  for (cplx& z : f.values) z *= inv;
}

/// Angular wavenumber of FFT bin i (standard fftfreq ordering).
inline double wavenumber(const Grid& g, int i) {
  const int m = g.points_per_axis();
  const int j = (i < m / 2) ? i : i - m;
  return 2 * pi * j / g.extent();
}

/// Wavenumber used in odd-order spectral derivatives; the unpaired Nyquist
/// mode is zeroed so real fields keep real derivatives.
inline double wavenumber_deriv(const Grid& g, int i) {
  const int m = g.points_per_axis();
  if (i == m / 2) return 0.0;
  return wavenumber(g, i);
}

/// Partial derivative along one axis via Fourier multiplier; exact for
/// resolved modes on the periodic grid.
inline ComplexField spectral_gradient(const ComplexField& f, int axis) {
  const Grid& g = f.grid;
  if (axis < 0 || axis >= g.axes()) throw Error("spectral_gradient: axis out of range");
  ComplexField out = f;
  fft_forward(out);
  const std::size_t stride = g.stride(axis);
  const std::size_t m = static_cast<std::size_t>(g.points_per_axis());
  std::vector<cplx> mult(m);
  for (std::size_t i = 0; i < m; ++i) mult[i] = iu * wavenumber_deriv(g, static_cast<int>(i));
  for (std::size_t idx = 0; idx < out.size(); ++idx) out.values[idx] *= mult[(idx / stride) % m];
  fft_inverse(out);
  return out;
}

inline RealField spectral_gradient(const RealField& f, int axis) {
  ComplexField tmp(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) tmp.values[i] = f.values[i];
  tmp = spectral_gradient(tmp, axis);
  RealField out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out.values[i] = tmp.values[i].real();
  return out;
}

/// Sum of second derivatives weighted per axis (weights[a] * d^2/dx_a^2);
/// used for mass-weighted Laplacians.
inline ComplexField spectral_laplacian(const ComplexField& f, std::span<const double> weights) {
  const Grid& g = f.grid;
  if (static_cast<int>(weights.size()) != g.axes()) throw Error("spectral_laplacian: weights/axes mismatch");
  ComplexField out = f;
  fft_forward(out);
  const int m = g.points_per_axis();
  std::vector<double> k2(m);
  for (int i = 0; i < m; ++i) {
    const double k = wavenumber(g, i);
    k2[i] = k * k;
  }
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    double acc = 0;
    std::size_t rest = idx;
    for (int a = g.axes() - 1; a >= 0; --a) {
      acc += weights[a] * k2[rest % m];
      rest /= m;
    }
    out.values[idx] *= -acc;
  }
  fft_inverse(out);
  return out;
}

}  // namespace gbc
