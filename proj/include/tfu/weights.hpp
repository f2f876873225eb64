#pragma once

// Weighted-mass functionals for the integrability conditions of Beurling,
// Hardy and Cowling-Price type, growth scans that classify a truncated mass
// curve as convergent or divergent, and Gaussian decay-constant fitting.
//
// Truncation is the square max(|x|, |xi|) <= R. A node contributes the
// fraction of its cell that lies inside the square, so a constant integrand
// gives exactly (2R)^2 for R on the lattice and masses are nondecreasing in R
// term by term.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tfu/core.hpp"

namespace tfu::weights {

enum class WeightFamily {
  RadialHalf,          // e^{pi p (x^2 + xi^2) / 2}
  RadialFull,          // e^{pi p (x^2 + xi^2)}
  Hyperbolic,          // e^{pi p |x xi|}
  PairHyperbolic,      // e^{2 pi p |x xi|}
  BonamiDenominator,   // e^{2 pi |x xi|} / (1 + |x| + |xi|)^N
  DemangeDenominator,  // e^{pi |x xi|} / (1 + |x| + |xi|)^N
};

std::string to_string(WeightFamily family);
WeightFamily parse_family(const std::string& name);

struct WeightSpec {
  WeightFamily family = WeightFamily::RadialHalf;
  double p = 1.0;  // exponent on the field magnitude
  double N = 0.0;  // denominator power, denominator families only

  void validate() const;
  /// Natural log of the weight at (x, xi).
  double log_weight(double x, double xi) const;
  bool separable() const { return family == WeightFamily::RadialHalf || family == WeightFamily::RadialFull; }
  /// Per-axis log weight; only meaningful when separable().
  double log_axis_weight(double u) const;
};

/// cell_measure * sum |field|^p * weight over the truncated square.
double weighted_mass(const TFArray& field, const WeightSpec& w, double R);

/// Same functional on |f(x) f_hat(xi)|, with f_hat computed by discrete_fourier.
double pair_weighted_mass(const SampledSignal& f, const WeightSpec& w, double R);

/// Same functional with a supplied transform (x lattice from f, xi lattice from f_hat).
double pair_weighted_mass(const SampledSignal& f, const SampledSignal& f_hat, const WeightSpec& w, double R);

enum class Verdict { Convergent, Divergent };
std::string to_string(Verdict v);

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> masses;
  /// Least-squares slope of log I against log R over the tail radii.
  double fitted_exponent = 0.0;
  /// gamma with dI/dR ~ R^{-gamma} over the tail increments (+inf when the
  /// increments vanish).
  double tail_decay_exponent = 0.0;
  /// (I_n - I_{n-1}) / I_n for the last two radii.
  double relative_increment = 0.0;
  Verdict verdict = Verdict::Divergent;
  /// Divergent but slowly: fitted_exponent < 0.3 or gamma in [0.75, 1.5].
  bool borderline = false;
};

inline constexpr double kConvergentSlope = 0.1;
inline constexpr double kConvergentIncrement = 1e-3;
inline constexpr double kConvergentDecayExponent = 1.5;

/// Builds a report from mass(R) at each radius. Needs >= 4 strictly increasing radii.
GrowthReport growth_scan(const std::function<double(double)>& mass, std::span<const double> radii);
GrowthReport growth_scan(const TFArray& field, const WeightSpec& w, std::span<const double> radii);
GrowthReport growth_scan(const SampledSignal& f, const SampledSignal& f_hat, const WeightSpec& w,
                         std::span<const double> radii);

/// Decay constant a of |s(t)| ~ C e^{-a pi t^2}, fitted by least squares of
/// -ln|s| / pi against t^2 over the outer tail_fraction of the nodes (values
/// below 1e-250 are dropped).
double decay_fit(const SampledSignal& s, double tail_fraction);

inline constexpr double kDecayFloor = 1e-250;

}  // namespace tfu::weights
