#include "tfu/core.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "tfu/parallel.hpp"

namespace tfu {

namespace {

bool is_even(std::size_t n) { return n % 2 == 0; }

std::string describe_node(const TFGrid& grid, std::size_t j, std::size_t k) {
  std::ostringstream os;
  os.precision(17);
  os << "node (" << j << ", " << k << ") at (x, xi) = (" << grid.x(j) << ", " << grid.xi(k) << ")";
  return os.str();
}

// FFTW planning is not thread-safe; execution of an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& entry : plans_) fftw_destroy_plan(entry.second);
  }

  fftw_plan forward(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end()) return it->second;
    std::vector<complex> scratch(n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("fftw: could not create a plan of length " + std::to_string(n));
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

double pairwise_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

}  // namespace

void SignalLayout::validate() const {
  if (count < 16 || !is_even(count)) {
    throw Error("signal layout: count must be even and >= 16, got " + std::to_string(count));
  }
  if (!(step > 0.0) || !std::isfinite(step)) throw Error("signal layout: step must be finite and > 0");
}

SignalLayout default_layout() { return {256, 1.0 / 16.0}; }

SampledSignal::SampledSignal(SignalLayout layout, std::vector<complex> samples)
    : layout_(layout), samples_(std::move(samples)) {
  layout_.validate();
  if (samples_.size() != layout_.count) {
    throw Error("sampled signal: " + std::to_string(samples_.size()) + " samples for a layout of " +
                std::to_string(layout_.count));
  }
  for (const complex& s : samples_) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw Error("sampled signal: non-finite sample");
  }
}

SampledSignal SampledSignal::zeros(SignalLayout layout) {
  return SampledSignal(layout, std::vector<complex>(layout.count));
}

SampledSignal SampledSignal::scaled(complex factor) const {
  std::vector<complex> out(samples_.begin(), samples_.end());
  for (complex& s : out) s *= factor;
  return SampledSignal(layout_, std::move(out));
}

double l2_norm(const SampledSignal& s) {
  std::vector<double> sq(s.count());
  for (std::size_t k = 0; k < s.count(); ++k) sq[k] = std::norm(s[k]);
  return std::sqrt(s.step() * pairwise_sum(sq));
}

bool boundary_sound(const SampledSignal& s, double relative) {
  double peak = 0.0;
  for (const complex& v : s.samples()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return true;
  const double edge = std::max(std::abs(s[0]), std::abs(s[s.count() - 1]));
  return edge <= relative * peak;
}

TFGrid::TFGrid(double x_step, std::size_t x_count, double xi_step, std::size_t xi_count)
    : x_step_(x_step), xi_step_(xi_step), x_count_(x_count), xi_count_(xi_count) {
  if (x_count_ == 0 || xi_count_ == 0 || !is_even(x_count_) || !is_even(xi_count_)) {
    throw Error("tf grid: counts must be positive and even");
  }
  if (!(x_step_ > 0.0) || !(xi_step_ > 0.0) || !std::isfinite(x_step_) || !std::isfinite(xi_step_)) {
    throw Error("tf grid: steps must be finite and > 0");
  }
}

TFGrid TFGrid::dual() const {
  return TFGrid(1.0 / (static_cast<double>(x_count_) * x_step_), x_count_,
                1.0 / (static_cast<double>(xi_count_) * xi_step_), xi_count_);
}

bool TFGrid::self_dual() const {
  if (x_count_ != xi_count_ || x_step_ != xi_step_) return false;
  const double product = x_step_ * x_step_ * static_cast<double>(x_count_);
  return std::abs(product - 1.0) <= 1e-12;
}

TFGrid default_grid() { return TFGrid(1.0 / 16.0, 256); }

TFArray::TFArray(TFGrid grid, std::vector<complex> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error("tf array: " + std::to_string(values_.size()) + " values for a " +
                std::to_string(grid_.x_count()) + "x" + std::to_string(grid_.xi_count()) + " grid");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw Error("tf array: non-finite value at " +
                  describe_node(grid_, i / grid_.xi_count(), i % grid_.xi_count()));
    }
  }
}

TFArray TFArray::zeros(TFGrid grid) { return TFArray(grid, std::vector<complex>(grid.size())); }

double TFArray::max_abs() const {
  double m = 0.0;
  for (const complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double pairwise_sum(std::span<const double> values) { return pairwise_range(values.data(), values.size()); }

double quadrature_sum(const TFArray& a, const std::function<double(complex)>& integrand) {
  const TFGrid& grid = a.grid();
  std::vector<double> terms(grid.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double v = integrand(a.values()[i]);
    if (!std::isfinite(v)) {
      throw Error("quadrature: non-finite integrand at " +
                  describe_node(grid, i / grid.xi_count(), i % grid.xi_count()));
    }
    terms[i] = v;
  }
  return grid.cell_measure() * pairwise_sum(terms);
}

namespace detail {

void centered_transform(std::span<complex> line, double step) {
  const std::size_t n = line.size();
  for (std::size_t k = 1; k < n; k += 2) line[k] = -line[k];
  auto* buf = reinterpret_cast<fftw_complex*>(line.data());
  fftw_execute_dft(plan_cache().forward(n), buf, buf);
  // exp(-i pi n / 2) is +1 for n divisible by 4 and -1 otherwise (n even).
  const double scale = (n % 4 == 0) ? step : -step;
  for (std::size_t m = 0; m < n; ++m) line[m] *= (m % 2 == 0) ? scale : -scale;
}

}  // namespace detail

SampledSignal discrete_fourier(const SampledSignal& s) {
  if (!boundary_sound(s, 1e-12)) throw Error("discrete_fourier: truncation unsound");
  std::vector<complex> out(s.samples().begin(), s.samples().end());
  detail::centered_transform(out, s.step());
  return SampledSignal(s.layout().dual(), std::move(out));
}

TFArray fourier_2d(const TFArray& a) {
  const TFGrid& grid = a.grid();
  const std::size_t nx = grid.x_count();
  const std::size_t nxi = grid.xi_count();

  double peak = a.max_abs();
  double border = 0.0;
  for (std::size_t k = 0; k < nxi; ++k) border = std::max({border, std::abs(a(0, k)), std::abs(a(nx - 1, k))});
  for (std::size_t j = 0; j < nx; ++j) border = std::max({border, std::abs(a(j, 0)), std::abs(a(j, nxi - 1))});
  if (peak > 0.0 && border > 1e-10 * peak) throw Error("fourier_2d: truncation unsound");

  std::vector<complex> v(a.values().begin(), a.values().end());
  if (nx < 2 || nxi < 2) throw Error("fourier_2d: grid too small");

  parallel_for(nx, [&](std::size_t j) {
    detail::centered_transform(std::span<complex>(v.data() + j * nxi, nxi), grid.xi_step());
  });
  parallel_for(nxi, [&](std::size_t k) {
    std::vector<complex> column(nx);
    for (std::size_t j = 0; j < nx; ++j) column[j] = v[j * nxi + k];
    detail::centered_transform(column, grid.x_step());
    for (std::size_t j = 0; j < nx; ++j) v[j * nxi + k] = column[j];
  });
  return TFArray(grid.dual(), std::move(v));
}

}  // namespace tfu
