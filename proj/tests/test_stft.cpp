#include <cmath>

#include "bank.hpp"
#include "doctest.h"
#include "tfu/reference.hpp"
#include "tfu/stft.hpp"

using namespace tfu;
using reference::AnalyticFunction;

namespace {

const SignalLayout kLayout = default_layout();

SampledSignal unit_gaussian() { return reference::sample(AnalyticFunction::gaussian(1.0), kLayout); }

}  // namespace

TEST_CASE("unit Gaussian pair matches the closed form") {
  const TFGrid grid = stft_grid(kLayout);
  CHECK(grid == default_grid());
  const TFArray v = compute_stft(unit_gaussian(), unit_gaussian(), grid);
  CHECK(std::abs(v(128, 128) - complex{1.0, 0.0}) < 1e-10);

  double err = 0.0;
  for (std::size_t j = 0; j < grid.x_count(); ++j)
    for (std::size_t k = 0; k < grid.xi_count(); ++k)
      err = std::max(err, std::abs(v(j, k) - reference::gaussian_stft_closed_form(grid.x(j), grid.xi(k))));
  CHECK(err < 1e-8);
}

TEST_CASE("covariance: shifted Gaussian has a shifted envelope") {
  const TFGrid grid = stft_grid(kLayout);
  const SampledSignal f = reference::translate_modulate(unit_gaussian(), 2.0, 1.0);
  const TFArray v = compute_stft(f, unit_gaussian(), grid);
  double err = 0.0;
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    for (std::size_t k = 0; k < grid.xi_count(); ++k) {
      const double dx = grid.x(j) - 2.0;
      const double dxi = grid.xi(k) - 1.0;
      err = std::max(err, std::abs(std::abs(v(j, k)) - std::exp(-kPi * (dx * dx + dxi * dxi) / 2.0)));
    }
  }
  CHECK(err < 1e-8);
}

TEST_CASE("covariance: |V_g(M T f)(x, xi)| = |V_g f(x - z, xi - zeta)|") {
  const TFGrid grid = stft_grid(kLayout);
  const SampledSignal g = unit_gaussian();
  const TFArray base = compute_stft(g, g, grid);
  const TFArray moved = compute_stft(reference::translate_modulate(g, 1.0, 2.0), g, grid);
  double err = 0.0;
  for (std::size_t j = 16; j < grid.x_count(); ++j)
    for (std::size_t k = 32; k < grid.xi_count(); ++k)
      err = std::max(err, std::abs(std::abs(moved(j, k)) - std::abs(base(j - 16, k - 32))));
  CHECK(err < 1e-8);
}

TEST_CASE("isometry defect examples") {
  const TFGrid grid = stft_grid(kLayout);
  CHECK(isometry_defect(unit_gaussian(), unit_gaussian(), grid) < 1e-9);
  const SampledSignal h2 = reference::sample(AnalyticFunction::hermite(2), kLayout);
  CHECK(isometry_defect(h2, unit_gaussian(), grid) < 1e-8);

  const double base = isometry_defect(h2, unit_gaussian(), grid);
  const double scaled = isometry_defect(h2.scaled(3.0), unit_gaussian(), grid);
  CHECK(std::abs(scaled - base) < 1e-14);

  CHECK_THROWS_WITH_AS(isometry_defect(SampledSignal::zeros(kLayout), unit_gaussian(), grid),
                       "isometry_defect: degenerate pair", Error);
}

TEST_CASE("isometry holds across the test bank") {
  const TFGrid grid = stft_grid(kLayout);
  for (const auto& pair : tfu::testing::standard_bank()) {
    CAPTURE(pair.name);
    CHECK(isometry_defect(reference::sample(pair.f, kLayout), reference::sample(pair.g, kLayout), grid) < 1e-8);
  }
  for (int n = 3; n <= 4; ++n) {
    const SampledSignal hn = reference::sample(AnalyticFunction::hermite(n), kLayout);
    CHECK(isometry_defect(hn, reference::sample(AnalyticFunction::gaussian(2.0), kLayout), grid) < 1e-8);
  }
}

TEST_CASE("pointwise Cauchy-Schwarz bound and reflection symmetry") {
  const TFGrid grid = stft_grid(kLayout);
  for (const auto& pair : tfu::testing::standard_bank()) {
    const SampledSignal f = reference::sample(pair.f, kLayout);
    const SampledSignal g = reference::sample(pair.g, kLayout);
    const TFArray v = compute_stft(f, g, grid);
    CHECK(v.max_abs() <= l2_norm(f) * l2_norm(g) * (1.0 + 1e-12));
  }

  // real, even f = g
  const SampledSignal h2 = reference::sample(AnalyticFunction::hermite(2), kLayout);
  const TFArray v = compute_stft(h2, h2, grid);
  double err = 0.0;
  for (std::size_t j = 1; j < grid.x_count(); ++j)
    for (std::size_t k = 1; k < grid.xi_count(); ++k)
      err = std::max(err, std::abs(std::abs(v(j, k)) - std::abs(v(256 - j, 256 - k))));
  CHECK(err < 1e-10);
}

TEST_CASE("compute_stft preconditions") {
  const TFGrid grid = stft_grid(kLayout);
  const SampledSignal other = reference::sample(AnalyticFunction::gaussian(1.0), SignalLayout{128, 1.0 / 8.0});
  CHECK_THROWS_AS(compute_stft(unit_gaussian(), other, grid), Error);
  CHECK_THROWS_AS(compute_stft(unit_gaussian(), unit_gaussian(), TFGrid(1.0 / 32.0, 256, 1.0 / 16.0, 256)), Error);
  CHECK_THROWS_AS(compute_stft(unit_gaussian(), unit_gaussian(), TFGrid(1.0 / 16.0, 256, 1.0 / 8.0, 256)), Error);
  CHECK_THROWS_AS(compute_stft(unit_gaussian(), unit_gaussian(), TFGrid(1.0 / 16.0, 256, 1.0 / 16.0, 512)), Error);
  const SampledSignal wide = reference::sample(AnalyticFunction::gaussian(0.01), kLayout);
  CHECK_THROWS_AS(compute_stft(wide, unit_gaussian(), grid), Error);
}

TEST_CASE("coarser x lattice and a centred xi slice") {
  const TFGrid coarse(1.0 / 8.0, 64, 1.0 / 16.0, 64);
  const TFArray v = compute_stft(unit_gaussian(), unit_gaussian(), coarse);
  double err = 0.0;
  for (std::size_t j = 0; j < coarse.x_count(); ++j)
    for (std::size_t k = 0; k < coarse.xi_count(); ++k)
      err = std::max(err, std::abs(v(j, k) - reference::gaussian_stft_closed_form(coarse.x(j), coarse.xi(k))));
  CHECK(err < 1e-8);
}
