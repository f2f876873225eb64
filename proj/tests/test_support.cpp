#include <algorithm>
#include <cmath>
#include <random>

#include "bank.hpp"
#include "doctest.h"
#include "tfu/reference.hpp"
#include "tfu/stft.hpp"
#include "tfu/support.hpp"

using namespace tfu;
using reference::AnalyticFunction;
using support::SupportMode;
using support::SupportVariant;

namespace {

const SignalLayout kLayout = default_layout();

struct Pair {
  SampledSignal f;
  SampledSignal g;
  TFArray V;
};

Pair make_pair(const AnalyticFunction& f, const AnalyticFunction& g) {
  SampledSignal fs = reference::sample(f, kLayout);
  SampledSignal gs = reference::sample(g, kLayout);
  TFArray V = compute_stft(fs, gs, stft_grid(kLayout));
  return {std::move(fs), std::move(gs), std::move(V)};
}

const Pair& gaussian_pair() {
  static const Pair pair = make_pair(AnalyticFunction::gaussian(1.0), AnalyticFunction::gaussian(1.0));
  return pair;
}

support::SupportReport run(const Pair& p, SupportMode mode) {
  return support::greedy_essential_support(p.V, mode, l2_norm(p.f), l2_norm(p.g));
}

// Test-side compensated sum, mirroring the documented accumulation.
double neumaier(const std::vector<double>& v) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

TEST_CASE("lower_bound examples") {
  CHECK(support::lower_bound({SupportVariant::L1Fraction, 2.0, 0.0}, 1) == 1.0);
  CHECK(support::lower_bound({SupportVariant::LpVsL1p, 1.0, 0.0}, 1) == 4.0);
  const long double expected = std::pow(0.9L, 4.0L / 3.0L) * std::cbrt(2.0L);
  CHECK(std::abs(support::lower_bound({SupportVariant::L1Fraction, 4.0, 0.1}, 1) - static_cast<double>(expected)) <
        1e-15);
  CHECK(support::lower_bound({SupportVariant::L1Fraction, 4.0, 0.1}, 1) == doctest::Approx(1.0947).epsilon(1e-4));
  CHECK(support::lower_bound({SupportVariant::LpVsEnergy, 3.0, 0.25}, 1) == 0.75);
  CHECK(support::lower_bound({SupportVariant::LpVsL1p, 1.0, 0.25}, 1) == doctest::Approx(2.25));
  // d = 2 doubles the dimension exponent
  CHECK(support::lower_bound({SupportVariant::LpVsL1p, 1.0, 0.0}, 2) == 16.0);
}

TEST_CASE("mode validation") {
  CHECK_THROWS_WITH_AS(support::lower_bound({SupportVariant::LpVsL1p, 2.0, 0.0}, 1),
                       "p out of range for lp_vs_l1p bound (requires 1 <= p < 2), got 2", Error);
  CHECK_THROWS_AS(support::lower_bound({SupportVariant::L1Fraction, 1.5, 0.0}, 1), Error);
  CHECK_THROWS_AS(support::lower_bound({SupportVariant::LpVsEnergy, 0.5, 0.0}, 1), Error);
  CHECK_THROWS_AS(support::lower_bound({SupportVariant::LpVsEnergy, 1.0, 1.0}, 1), Error);
  CHECK_THROWS_AS(support::lower_bound({SupportVariant::LpVsEnergy, 1.0, -0.1}, 1), Error);
  CHECK_THROWS_AS(support::lower_bound({SupportVariant::LpVsEnergy, 1.0, 0.0}, 0), Error);
  CHECK(support::parse_variant("lp_vs_energy") == SupportVariant::LpVsEnergy);
  CHECK_THROWS_AS(support::parse_variant("l2"), Error);
}

TEST_CASE("lieb_ratio examples") {
  const Pair& gp = gaussian_pair();
  CHECK(std::abs(support::lieb_ratio(gp.V, 2.0, 1.0, 1.0) - 1.0) < 1e-8);
  CHECK(std::abs(support::lieb_ratio(gp.V, 4.0, 1.0, 1.0) - 1.0) < 1e-6);

  const Pair h1 = make_pair(AnalyticFunction::hermite(1), AnalyticFunction::gaussian(1.0));
  CHECK(support::lieb_ratio(h1.V, 4.0, 1.0, 1.0) <= 1.0);
  CHECK(support::lieb_ratio(h1.V, 1.5, 1.0, 1.0) >= 1.0);

  CHECK_THROWS_AS(support::lieb_ratio(gp.V, 0.5, 1.0, 1.0), Error);
  CHECK_THROWS_AS(support::lieb_ratio(gp.V, 2.0, 0.0, 1.0), Error);
}

TEST_CASE("lieb inequality over the bank, Gaussian pairs extremal") {
  for (const auto& bp : tfu::testing::standard_bank()) {
    CAPTURE(bp.name);
    const Pair p = make_pair(bp.f, bp.g);
    const double fn = l2_norm(p.f);
    const double gn = l2_norm(p.g);
    CHECK(std::abs(support::lieb_ratio(p.V, 2.0, fn, gn) - 1.0) <= 1e-6);
    for (double q : {3.0, 4.0, 6.0}) CHECK(support::lieb_ratio(p.V, q, fn, gn) <= 1.0 + 1e-6);
    for (double q : {1.0, 1.25, 1.5}) CHECK(support::lieb_ratio(p.V, q, fn, gn) >= 1.0 - 1e-6);
  }
  // Equality needs matching widths; only the a = 1 window is extremal for the unit Gaussian.
  const Pair& gp = gaussian_pair();
  for (double q : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0}) {
    CAPTURE(q);
    CHECK(std::abs(support::lieb_ratio(gp.V, q, 1.0, 1.0) - 1.0) <= 1e-5);
  }
  const Pair mismatched = make_pair(AnalyticFunction::gaussian(1.0), AnalyticFunction::gaussian(2.0));
  CHECK(support::lieb_ratio(mismatched.V, 4.0, 1.0, 1.0) < 1.0 - 1e-3);
}

TEST_CASE("greedy_essential_support examples") {
  const Pair& gp = gaussian_pair();
  const double cell = gp.V.grid().cell_measure();

  const double eps = std::exp(-2.0);
  const auto disc = run(gp, {SupportVariant::L1Fraction, 2.0, eps});
  REQUIRE(disc.satisfiable);
  // minimal region: disc with 1 - e^{-pi R^2 / 2} = (1 - eps) / 2, area pi R^2
  const double analytic = 2.0 * std::log(2.0 / (1.0 + eps));
  CHECK(std::abs(*disc.measured_area - analytic) <= 2.0 * cell);

  const auto unsat = run(gp, {SupportVariant::LpVsL1p, 1.5, 0.1});
  CHECK_FALSE(unsat.satisfiable);
  CHECK_FALSE(unsat.measured_area.has_value());
  CHECK(unsat.total_mass == doctest::Approx(2.0 / 1.5).epsilon(1e-9));
  CHECK(unsat.threshold == doctest::Approx(0.9 * std::pow(2.0, 1.5)).epsilon(1e-9));

  const auto energy = run(gp, {SupportVariant::LpVsEnergy, 1.0, 0.0});
  REQUIRE(energy.satisfiable);
  CHECK(*energy.measured_area >= 1.0);
  CHECK(energy.total_mass == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(energy.cells == static_cast<std::size_t>(std::llround(*energy.measured_area / cell)));

  const auto l1p = run(gp, {SupportVariant::LpVsL1p, 1.0, 0.25});
  REQUIRE(l1p.satisfiable);
  CHECK(*l1p.measured_area >= 2.25);
}

TEST_CASE("bound_sweep") {
  const Pair& gp = gaussian_pair();
  std::vector<SupportMode> modes;
  for (double p : {2.0, 3.0, 4.0})
    for (double e : {0.0, 0.1, 0.25}) modes.push_back({SupportVariant::L1Fraction, p, e});
  const auto reports = support::bound_sweep(gp.f, gp.g, gp.V.grid(), modes);
  REQUIRE(reports.size() == 9);
  for (const auto& r : reports) {
    CHECK(r.satisfiable);
    CHECK(r.bound_holds);
    CHECK(*r.measured_area >= r.lower_bound);
    CHECK(r.error.empty());
  }

  const auto lp3 = support::bound_sweep(gp.f, gp.g, gp.V.grid(), {{SupportVariant::LpVsEnergy, 3.0, 0.0}});
  REQUIRE(lp3.size() == 1);
  CHECK_FALSE(lp3[0].satisfiable);
  CHECK(lp3[0].total_mass == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  CHECK(support::bound_sweep(gp.f, gp.g, gp.V.grid(), {}).empty());

  const auto bad = support::bound_sweep(gp.f, gp.g, gp.V.grid(),
                                        {{SupportVariant::LpVsL1p, 2.0, 0.0}, {SupportVariant::LpVsEnergy, 1.0, 0.0}});
  REQUIRE(bad.size() == 2);
  CHECK(bad[0].error.find("p out of range") != std::string::npos);
  CHECK(bad[1].error.empty());
  CHECK(bad[1].satisfiable);
}

TEST_CASE("support bounds hold across the bank") {
  for (const auto& bp : tfu::testing::standard_bank()) {
    CAPTURE(bp.name);
    const Pair p = make_pair(bp.f, bp.g);
    std::vector<SupportMode> modes;
    for (double e : {0.0, 0.1, 0.25, 0.5}) {
      for (double q : {2.0, 3.0, 4.0}) modes.push_back({SupportVariant::L1Fraction, q, e});
      for (double q : {1.0, 1.25}) modes.push_back({SupportVariant::LpVsL1p, q, e});
      for (double q : {1.0, 2.0}) modes.push_back({SupportVariant::LpVsEnergy, q, e});
    }
    for (const auto& r : support::bound_sweep(p.f, p.g, p.V.grid(), modes)) {
      CHECK(r.error.empty());
      if (r.satisfiable) CHECK(*r.measured_area >= r.lower_bound);
    }
  }
}

TEST_CASE("measured area is nonincreasing in epsilon") {
  const Pair h2 = make_pair(AnalyticFunction::hermite(2), AnalyticFunction::gaussian(0.5));
  for (const Pair* p : {&gaussian_pair(), &h2}) {
    for (auto [variant, q] : {std::pair{SupportVariant::L1Fraction, 2.0}, {SupportVariant::LpVsL1p, 1.0},
                              {SupportVariant::LpVsEnergy, 1.0}, {SupportVariant::LpVsEnergy, 2.0}}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 20; ++i) {
        const auto r = run(*p, {variant, q, 0.045 * i});
        if (!r.satisfiable) continue;
        CHECK(*r.measured_area <= prev);
        prev = *r.measured_area;
      }
    }
  }
}

TEST_CASE("greedy prefix equals the brute-force best subset") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dist(0.0, 1.0);
  const TFGrid grid(0.125, 8);
  for (int field = 0; field < 20; ++field) {
    std::vector<complex> v(grid.size());
    for (complex& z : v) z = {dist(rng), dist(rng)};
    const TFArray V(grid, v);
    const std::vector<double> prefix = support::prefix_masses(V, 1.0);

    std::vector<double> mass(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mass[i] = grid.cell_measure() * std::abs(v[i]);
    auto subset_mass = [&](std::vector<std::size_t> idx) {
      std::vector<double> terms;
      for (std::size_t i : idx) terms.push_back(mass[i]);
      std::sort(terms.begin(), terms.end(), std::greater<>());
      return neumaier(terms);
    };
    const std::size_t n = v.size();
    double best1 = 0.0;
    double best2 = 0.0;
    double best3 = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      best1 = std::max(best1, subset_mass({a}));
      for (std::size_t b = a + 1; b < n; ++b) {
        best2 = std::max(best2, subset_mass({a, b}));
        for (std::size_t c = b + 1; c < n; ++c) best3 = std::max(best3, subset_mass({a, b, c}));
      }
    }
    CAPTURE(field);
    CHECK(prefix[0] == best1);
    CHECK(prefix[1] == best2);
    CHECK(prefix[2] == best3);
  }
}

TEST_CASE("greedy order breaks ties by row-major index") {
  const TFGrid grid(0.25, 16);
  std::vector<complex> v(grid.size(), complex{1.0, 0.0});
  v[5] = complex{0.0, 2.0};
  v[200] = complex{2.0, 0.0};
  const auto order = support::greedy_order(TFArray(grid, v));
  CHECK(order[0] == 5);
  CHECK(order[1] == 200);
  CHECK(order[2] == 0);
  CHECK(order[3] == 1);
  CHECK(order.back() == 255);
}

TEST_CASE("bound violations and resolution-limited reports") {
  // one live cell of a 16 x 16 unit-area grid: |U| is a single cell, 1/256
  const TFGrid grid(0.25, 16);
  const double cell = grid.cell_measure();
  std::vector<complex> v(grid.size());
  v[100] = complex{1.0, 0.0};
  const TFArray V(grid, v);

  // threshold (1 - eps) fn gn = cell; bound (1 - eps)^2 = 1/256 = cell
  const double eps = 1.0 - 1.0 / 16.0;
  const double norm = std::sqrt(cell / (1.0 - eps));
  const auto edge = support::greedy_essential_support(V, {SupportVariant::L1Fraction, 2.0, eps}, norm, norm);
  REQUIRE(edge.satisfiable);
  CHECK(edge.cells == 1);
  CHECK(edge.bound_holds);
  CHECK(edge.resolution_limited);

  // eps = 0: the bound 1 exceeds the single cell, reported rather than hidden
  const double unit = std::sqrt(cell);
  const auto violated = support::greedy_essential_support(V, {SupportVariant::L1Fraction, 2.0, 0.0}, unit, unit);
  REQUIRE(violated.satisfiable);
  CHECK_FALSE(violated.bound_holds);
  CHECK_FALSE(violated.resolution_limited);

  CHECK_THROWS_AS(support::greedy_essential_support(TFArray::zeros(grid), {SupportVariant::LpVsEnergy, 1.0, 0.0},
                                                    1.0, 1.0),
                  Error);
  CHECK_THROWS_AS(support::greedy_essential_support(V, {SupportVariant::LpVsEnergy, 1.0, 0.0}, 0.0, 1.0), Error);
}
