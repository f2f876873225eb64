#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "tfu/core.hpp"
#include "tfu/reference.hpp"

using namespace tfu;
using reference::AnalyticFunction;

namespace {

TFArray sampled_field(const TFGrid& grid, auto fn) {
  std::vector<complex> v(grid.size());
  for (std::size_t j = 0; j < grid.x_count(); ++j)
    for (std::size_t k = 0; k < grid.xi_count(); ++k) v[j * grid.xi_count() + k] = fn(grid.x(j), grid.xi(k));
  return TFArray(grid, std::move(v));
}

double max_deviation(std::span<const complex> a, std::span<const complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("layout and grid invariants") {
  const SignalLayout layout = default_layout();
  CHECK(layout.count == 256);
  CHECK(layout.time(0) == -8.0);
  CHECK(layout.time(128) == 0.0);
  CHECK(layout.dual_step() == doctest::Approx(1.0 / 16.0));

  CHECK_THROWS_AS(SignalLayout({14, 0.1}).validate(), Error);
  CHECK_THROWS_AS(SignalLayout({17, 0.1}).validate(), Error);
  CHECK_THROWS_AS(SignalLayout({16, 0.0}).validate(), Error);
  CHECK_THROWS_AS(TFGrid(0.1, 7), Error);
  CHECK_THROWS_AS(TFGrid(-0.1, 8), Error);

  const TFGrid grid = default_grid();
  CHECK(grid.cell_measure() == 1.0 / 256.0);
  CHECK(grid.x(128) == 0.0);
  CHECK(grid.xi(0) == -8.0);
  CHECK(grid.self_dual());
  CHECK(grid.dual() == grid);
  CHECK(TFGrid(0.25, 16).self_dual());
  CHECK_FALSE(TFGrid(0.25, 32).self_dual());
}

TEST_CASE("tf array rejects bad shapes and non-finite values") {
  const TFGrid grid(0.5, 8);
  CHECK_THROWS_AS(TFArray(grid, std::vector<complex>(10)), Error);
  std::vector<complex> v(grid.size());
  v[5] = complex{std::nan(""), 0.0};
  CHECK_THROWS_AS(TFArray(grid, v), Error);
}

TEST_CASE("quadrature_sum examples") {
  const TFGrid small(0.25, 16);
  const TFArray ones(small, std::vector<complex>(small.size(), complex{1.0, 0.0}));
  CHECK(quadrature_sum(ones, [](complex z) { return z.real(); }) == 16.0);

  const TFArray zero = TFArray::zeros(small);
  CHECK(quadrature_sum(zero, [](complex z) { return std::abs(z); }) == 0.0);

  const TFGrid grid = default_grid();
  const TFArray gauss = sampled_field(grid, [](double x, double xi) {
    return complex{std::exp(-kPi * (x * x + xi * xi)), 0.0};
  });
  CHECK(std::abs(quadrature_sum(gauss, [](complex z) { return z.real(); }) - 1.0) < 1e-10);
}

TEST_CASE("quadrature_sum reports the offending node") {
  const TFArray ones(TFGrid(0.25, 16), std::vector<complex>(256, complex{1.0, 0.0}));
  try {
    quadrature_sum(ones, [](complex) { return std::numeric_limits<double>::infinity(); });
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("node (0, 0)") != std::string::npos);
  }
}

TEST_CASE("pairwise summation is reproducible and order-stable") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const TFGrid grid(0.125, 64);
  std::vector<complex> v(grid.size());
  for (complex& z : v) z = {dist(rng), dist(rng)};
  const TFArray a(grid, v);
  auto integrand = [](complex z) { return std::norm(z); };
  const double first = quadrature_sum(a, integrand);
  CHECK(first == quadrature_sum(a, integrand));

  std::shuffle(v.begin(), v.end(), rng);
  const double shuffled = quadrature_sum(TFArray(grid, v), integrand);
  CHECK(std::abs(shuffled - first) <= 1e-14 * first);

  // Cancellation-free sums of 1..n are exact.
  std::vector<double> ints(1000);
  for (std::size_t i = 0; i < ints.size(); ++i) ints[i] = static_cast<double>(i + 1);
  CHECK(pairwise_sum(ints) == 500500.0);
  CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("discrete_fourier of Gaussians and Hermite functions") {
  const SignalLayout layout = default_layout();

  const SampledSignal unit = reference::sample(AnalyticFunction::gaussian(1.0), layout);
  const SampledSignal unit_hat = discrete_fourier(unit);
  CHECK(unit_hat.layout() == layout.dual());
  CHECK(max_deviation(unit_hat.samples(), unit.samples()) < 1e-10);

  // e^{-2 pi t^2} -> 2^{-1/2} e^{-pi xi^2 / 2}
  const SampledSignal wide = reference::sample(AnalyticFunction::gaussian(2.0, complex{1.0, 0.0}), layout);
  const SampledSignal wide_hat = discrete_fourier(wide);
  double dev = 0.0;
  for (std::size_t m = 0; m < wide_hat.count(); ++m) {
    const double xi = wide_hat.time(m);
    dev = std::max(dev, std::abs(wide_hat[m] - std::exp(-kPi * xi * xi / 2.0) / std::sqrt(2.0)));
  }
  CHECK(dev < 1e-12);

  for (int n = 0; n <= 4; ++n) {
    CAPTURE(n);
    const SampledSignal h = reference::sample(AnalyticFunction::hermite(n), layout);
    const SampledSignal expected = h.scaled(reference::hermite_fourier_eigenvalue(n));
    CHECK(max_deviation(discrete_fourier(h).samples(), expected.samples()) < 1e-10);
  }
}

TEST_CASE("discrete_fourier: Parseval and period four") {
  const SignalLayout layout = default_layout();
  const std::vector<AnalyticFunction> fns = {
      AnalyticFunction::gaussian(0.5), AnalyticFunction::hermite(3),
      AnalyticFunction::gaussian(1.0).translated_modulated(1.5, -2.25),
      AnalyticFunction::poly_gaussian({complex{1.0, 0.5}, 0.0, complex{0.0, -2.0}}, 1.7)};
  for (const auto& fn : fns) {
    const SampledSignal s = reference::sample(fn, layout);
    const SampledSignal s1 = discrete_fourier(s);
    const double lhs = std::pow(l2_norm(s), 2);
    const double rhs = std::pow(l2_norm(s1), 2);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * lhs);

    const SampledSignal s4 = discrete_fourier(discrete_fourier(discrete_fourier(s1)));
    double peak = 0.0;
    for (const complex& z : s.samples()) peak = std::max(peak, std::abs(z));
    CHECK(max_deviation(s4.samples(), s.samples()) <= 1e-10 * peak);
  }
}

TEST_CASE("discrete_fourier refuses truncated signals") {
  const SampledSignal wide = reference::sample(AnalyticFunction::gaussian(0.01), default_layout());
  CHECK_FALSE(boundary_sound(wide));
  CHECK_THROWS_WITH_AS(discrete_fourier(wide), "discrete_fourier: truncation unsound", Error);
}

TEST_CASE("fourier_2d examples") {
  const TFGrid grid = default_grid();
  const TFArray gauss = sampled_field(grid, [](double x, double xi) {
    return complex{std::exp(-kPi * (x * x + xi * xi)), 0.0};
  });
  const TFArray gauss_hat = fourier_2d(gauss);
  CHECK(gauss_hat.grid() == grid);
  CHECK(max_deviation(gauss_hat.values(), gauss.values()) < 1e-9);

  const TFArray zero = TFArray::zeros(grid);
  CHECK(fourier_2d(zero).max_abs() == 0.0);

  // e^{-pi(x^2+xi^2)} e^{2 pi i x u}, u = 1 -> e^{-pi((X-1)^2 + Xi^2)}
  const TFArray modulated = sampled_field(grid, [](double x, double xi) {
    return std::polar(std::exp(-kPi * (x * x + xi * xi)), 2.0 * kPi * x);
  });
  const TFArray expected = sampled_field(grid, [](double x, double xi) {
    return complex{std::exp(-kPi * ((x - 1.0) * (x - 1.0) + xi * xi)), 0.0};
  });
  CHECK(max_deviation(fourier_2d(modulated).values(), expected.values()) < 1e-9);
}

TEST_CASE("fourier_2d refuses fields that do not decay") {
  const TFGrid grid(0.25, 16);
  const TFArray ones(grid, std::vector<complex>(grid.size(), complex{1.0, 0.0}));
  CHECK_THROWS_WITH_AS(fourier_2d(ones), "fourier_2d: truncation unsound", Error);
}
