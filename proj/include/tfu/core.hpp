#pragma once

// Sampled signals, time-frequency lattices, quadrature and the continuous
// Fourier transform contract (e^{-2 pi i x xi} convention) shared by every
// other part of the library.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfu {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform, origin-centred sampling: sample k sits at t_k = (k - count/2) * step.
struct SignalLayout {
  std::size_t count = 256;
  double step = 1.0 / 16.0;

  void validate() const;
  double time(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(count / 2)) * step;
  }
  double half_extent() const { return static_cast<double>(count / 2) * step; }
  /// Step of the frequency lattice reached by discrete_fourier.
  double dual_step() const { return 1.0 / (static_cast<double>(count) * step); }
  SignalLayout dual() const { return {count, dual_step()}; }

  bool operator==(const SignalLayout&) const = default;
};

/// 256 samples on [-8, 8), step 1/16. Self-dual.
SignalLayout default_layout();

class SampledSignal {
 public:
  SampledSignal(SignalLayout layout, std::vector<complex> samples);
  static SampledSignal zeros(SignalLayout layout);

  const SignalLayout& layout() const { return layout_; }
  std::size_t count() const { return layout_.count; }
  double step() const { return layout_.step; }
  std::size_t center_index() const { return layout_.count / 2; }
  double time(std::size_t k) const { return layout_.time(k); }

  std::span<const complex> samples() const { return samples_; }
  complex operator[](std::size_t k) const { return samples_[k]; }

  SampledSignal scaled(complex factor) const;

 private:
  SignalLayout layout_;
  std::vector<complex> samples_;
};

/// sqrt(step * sum |s_k|^2), pairwise-summed.
double l2_norm(const SampledSignal& s);

/// True when both end samples are at most `relative` times the peak magnitude.
bool boundary_sound(const SampledSignal& s, double relative = 1e-12);

/// The discrete (x, xi) lattice. Node (j, k) is
/// ((j - x_count/2) * x_step, (k - xi_count/2) * xi_step).
class TFGrid {
 public:
  TFGrid(double x_step, std::size_t x_count, double xi_step, std::size_t xi_count);
  /// Square lattice with equal steps on both axes.
  TFGrid(double step, std::size_t count) : TFGrid(step, count, step, count) {}

  double x_step() const { return x_step_; }
  double xi_step() const { return xi_step_; }
  std::size_t x_count() const { return x_count_; }
  std::size_t xi_count() const { return xi_count_; }
  std::size_t size() const { return x_count_ * xi_count_; }
  double cell_measure() const { return x_step_ * xi_step_; }

  double x(std::size_t j) const {
    return (static_cast<double>(j) - static_cast<double>(x_count_ / 2)) * x_step_;
  }
  double xi(std::size_t k) const {
    return (static_cast<double>(k) - static_cast<double>(xi_count_ / 2)) * xi_step_;
  }
  double x_half_extent() const { return static_cast<double>(x_count_ / 2) * x_step_; }
  double xi_half_extent() const { return static_cast<double>(xi_count_ / 2) * xi_step_; }

  /// Lattice reached by the 2-D transform: steps 1/(count*step) per axis.
  TFGrid dual() const;
  /// Square with step^2 * count == 1, so dual() reproduces the grid.
  bool self_dual() const;

  bool operator==(const TFGrid&) const = default;

 private:
  double x_step_;
  double xi_step_;
  std::size_t x_count_;
  std::size_t xi_count_;
};

/// Full STFT lattice for the default layout: 256 x 256, steps 1/16.
TFGrid default_grid();

/// Complex samples on a TFGrid, row-major with x as the slow index.
class TFArray {
 public:
  TFArray(TFGrid grid, std::vector<complex> values);
  static TFArray zeros(TFGrid grid);

  const TFGrid& grid() const { return grid_; }
  std::span<const complex> values() const { return values_; }
  complex operator()(std::size_t j, std::size_t k) const {
    return values_[j * grid_.xi_count() + k];
  }
  std::size_t index(std::size_t j, std::size_t k) const { return j * grid_.xi_count() + k; }

  double max_abs() const;

 private:
  TFGrid grid_;
  std::vector<complex> values_;
};

/// Cascade (pairwise) summation with a fixed reduction tree: the tree only
/// depends on values.size(), so repeated calls are bit-identical.
double pairwise_sum(std::span<const double> values);

/// cell_measure * sum integrand(value) over every node. Throws when the
/// integrand is not finite at some node.
double quadrature_sum(const TFArray& a, const std::function<double(complex)>& integrand);

/// Samples of the continuous Fourier transform on the dual layout.
/// Throws "truncation unsound" when the input does not decay to 1e-12 of its
/// peak at the window edges.
SampledSignal discrete_fourier(const SampledSignal& s);

/// 2-D continuous Fourier transform on the dual grid; the first output
/// variable is dual to x. Requires decay to 1e-10 of the peak on the border.
TFArray fourier_2d(const TFArray& a);

namespace detail {

/// In-place centred transform of one contiguous line:
/// out_m = step * sum_k in_k exp(-2 pi i (m - n/2)(k - n/2) / n).
void centered_transform(std::span<complex> line, double step);

}  // namespace detail

}  // namespace tfu
