#pragma once

// Lieb-type p-norm bounds for STFT fields and essential-support estimation:
// the smallest set U capturing a (1 - eps) share of a mass functional is built
// greedily, and its measure is compared against the closed-form lower bounds
//   L1Fraction  (p >= 2):    |U| >= (1-eps)^{p/(p-1)} (p/2)^{d/(p-1)}
//   LpVsL1p     (1 <= p < 2): |U| >= 2^{2pd/(2-p)} (1-eps)^{2/(2-p)}
//   LpVsEnergy  (p >= 1):    |U| >= 1 - eps

#include <optional>
#include <string>
#include <vector>

#include "tfu/core.hpp"

namespace tfu::support {

enum class SupportVariant {
  L1Fraction,  // integral_U |V| >= (1-eps) |f| |g|
  LpVsL1p,     // integral_U |V|^p >= (1-eps) |V|_1^p
  LpVsEnergy,  // integral_U |V|^p >= (1-eps) |f|^p |g|^p
};

std::string to_string(SupportVariant v);
SupportVariant parse_variant(const std::string& name);

struct SupportMode {
  SupportVariant variant = SupportVariant::L1Fraction;
  double p = 2.0;
  double epsilon = 0.0;

  /// Throws when eps is outside [0, 1) or p is outside the variant's range.
  void validate() const;
};

struct SupportReport {
  SupportMode mode;
  std::optional<double> measured_area;  // present iff satisfiable
  double lower_bound = 0.0;
  bool satisfiable = false;
  std::size_t cells = 0;
  double threshold = 0.0;     // mass the set had to reach
  double total_mass = 0.0;    // mass of the full grid
  bool bound_holds = true;    // measured_area >= lower_bound (vacuous when unsatisfiable)
  bool resolution_limited = false;  // measured within one cell of the bound
  std::string error;          // set by bound_sweep when the mode could not run
};

/// quadrature(|V|^p) / ((2/p)^d (f_norm g_norm)^p), d = 1.
double lieb_ratio(const TFArray& V, double p, double f_norm, double g_norm);

double lower_bound(const SupportMode& mode, int d);

/// Cells ordered by |V| descending, ties broken by row-major index.
std::vector<std::size_t> greedy_order(const TFArray& V);

/// Accumulated cell_measure * |V|^q along greedy_order (compensated running sum).
std::vector<double> prefix_masses(const TFArray& V, double q);

SupportReport greedy_essential_support(const TFArray& V, const SupportMode& mode, double f_norm, double g_norm);

/// One STFT, one report per mode. Failures land in SupportReport::error.
std::vector<SupportReport> bound_sweep(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid,
                                       const std::vector<SupportMode>& modes);

}  // namespace tfu::support
