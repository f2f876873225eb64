#include "tfu/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tfu::weights {

namespace {

double axis_overlap(double centre, double half_step, double R) {
  const double lo = std::max(centre - half_step, -R);
  const double hi = std::min(centre + half_step, R);
  return hi > lo ? (hi - lo) / (2.0 * half_step) : 0.0;
}

std::vector<double> overlaps(std::size_t count, double step, double R) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double c = (static_cast<double>(i) - static_cast<double>(count / 2)) * step;
    out[i] = axis_overlap(c, step / 2.0, R);
  }
  return out;
}

void check_radius(double R, double half_extent, const char* what) {
  if (!(R >= 0.0) || R > half_extent) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": R = " << R << " exceeds the grid half-extent " << half_extent;
    throw Error(os.str());
  }
}

// |v|^p * e^{log_w}, evaluated in the log domain so neither factor overflows alone.
double weighted_power(double magnitude, double p, double log_w) {
  if (magnitude == 0.0) return 0.0;
  return std::exp(p * std::log(magnitude) + log_w);
}

void require_finite(double v, double x, double xi, const char* what) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": non-finite integrand at (x, xi) = (" << x << ", " << xi << ")";
    throw Error(os.str());
  }
}

double least_squares_slope(std::span<const double> u, std::span<const double> y) {
  const double n = static_cast<double>(u.size());
  double mu = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    my += y[i];
  }
  mu /= n;
  my /= n;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    num += (u[i] - mu) * (y[i] - my);
    den += (u[i] - mu) * (u[i] - mu);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

std::string to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::RadialHalf: return "radial_half";
    case WeightFamily::RadialFull: return "radial_full";
    case WeightFamily::Hyperbolic: return "hyperbolic";
    case WeightFamily::PairHyperbolic: return "pair_hyperbolic";
    case WeightFamily::BonamiDenominator: return "bonami_denominator";
    case WeightFamily::DemangeDenominator: return "demange_denominator";
  }
  return "unknown";
}

WeightFamily parse_family(const std::string& name) {
  for (WeightFamily f : {WeightFamily::RadialHalf, WeightFamily::RadialFull, WeightFamily::Hyperbolic,
                         WeightFamily::PairHyperbolic, WeightFamily::BonamiDenominator,
                         WeightFamily::DemangeDenominator}) {
    if (to_string(f) == name) return f;
  }
  throw Error("unknown weight family '" + name + "'");
}

std::string to_string(Verdict v) { return v == Verdict::Convergent ? "convergent" : "divergent"; }

void WeightSpec::validate() const {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("weight: p must be finite and >= 1");
  if (!(N >= 0.0) || !std::isfinite(N)) throw Error("weight: N must be finite and >= 0");
}

double WeightSpec::log_weight(double x, double xi) const {
  const double hyperbolic = std::abs(x * xi);
  const double radial = (x * x + xi * xi) / 2.0;
  switch (family) {
    case WeightFamily::RadialHalf: return (kPi * p) * radial;
    case WeightFamily::RadialFull: return (kPi * p) * (2.0 * radial);
    case WeightFamily::Hyperbolic: return (kPi * p) * hyperbolic;
    case WeightFamily::PairHyperbolic: return (kPi * p) * (2.0 * hyperbolic);
    case WeightFamily::BonamiDenominator:
      return 2.0 * kPi * hyperbolic - N * std::log1p(std::abs(x) + std::abs(xi));
    case WeightFamily::DemangeDenominator:
      return kPi * hyperbolic - N * std::log1p(std::abs(x) + std::abs(xi));
  }
  return 0.0;
}

double WeightSpec::log_axis_weight(double u) const {
  switch (family) {
    case WeightFamily::RadialHalf: return (kPi * p) * (u * u / 2.0);
    case WeightFamily::RadialFull: return (kPi * p) * (u * u);
    default: throw Error("weight: " + to_string(family) + " is not separable");
  }
}

double weighted_mass(const TFArray& field, const WeightSpec& w, double R) {
  w.validate();
  const TFGrid& grid = field.grid();
  check_radius(R, std::min(grid.x_half_extent(), grid.xi_half_extent()), "weighted_mass");
  const std::vector<double> wx = overlaps(grid.x_count(), grid.x_step(), R);
  const std::vector<double> wxi = overlaps(grid.xi_count(), grid.xi_step(), R);

  std::vector<double> terms(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    if (wx[j] == 0.0) continue;
    for (std::size_t k = 0; k < grid.xi_count(); ++k) {
      if (wxi[k] == 0.0) continue;
      const double x = grid.x(j);
      const double xi = grid.xi(k);
      const double v = (wx[j] * wxi[k]) * weighted_power(std::abs(field(j, k)), w.p, w.log_weight(x, xi));
      require_finite(v, x, xi, "weighted_mass");
      terms[field.index(j, k)] = v;
    }
  }
  return grid.cell_measure() * pairwise_sum(terms);
}

double pair_weighted_mass(const SampledSignal& f, const WeightSpec& w, double R) {
  return pair_weighted_mass(f, discrete_fourier(f), w, R);
}

double pair_weighted_mass(const SampledSignal& f, const SampledSignal& f_hat, const WeightSpec& w, double R) {
  w.validate();
  check_radius(R, std::min(f.layout().half_extent(), f_hat.layout().half_extent()), "pair_weighted_mass");
  const std::vector<double> wx = overlaps(f.count(), f.step(), R);
  const std::vector<double> wxi = overlaps(f_hat.count(), f_hat.step(), R);

  if (w.separable()) {
    auto axis_mass = [&](const SampledSignal& s, const std::vector<double>& frac) {
      std::vector<double> terms(s.count(), 0.0);
      for (std::size_t k = 0; k < s.count(); ++k) {
        if (frac[k] == 0.0) continue;
        terms[k] = frac[k] * weighted_power(std::abs(s[k]), w.p, w.log_axis_weight(s.time(k)));
        require_finite(terms[k], s.time(k), s.time(k), "pair_weighted_mass");
      }
      return s.step() * pairwise_sum(terms);
    };
    const double mass = axis_mass(f, wx) * axis_mass(f_hat, wxi);
    require_finite(mass, R, R, "pair_weighted_mass");
    return mass;
  }

  std::vector<double> log_f(f.count());
  std::vector<double> log_fhat(f_hat.count());
  const double neg_inf = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < f.count(); ++j) log_f[j] = f[j] == 0.0 ? neg_inf : std::log(std::abs(f[j]));
  for (std::size_t k = 0; k < f_hat.count(); ++k)
    log_fhat[k] = f_hat[k] == 0.0 ? neg_inf : std::log(std::abs(f_hat[k]));

  std::vector<double> terms(f.count() * f_hat.count(), 0.0);
  for (std::size_t j = 0; j < f.count(); ++j) {
    if (wx[j] == 0.0 || log_f[j] == neg_inf) continue;
    for (std::size_t k = 0; k < f_hat.count(); ++k) {
      if (wxi[k] == 0.0 || log_fhat[k] == neg_inf) continue;
      const double x = f.time(j);
      const double xi = f_hat.time(k);
      const double v = (wx[j] * wxi[k]) * std::exp(w.p * (log_f[j] + log_fhat[k]) + w.log_weight(x, xi));
      require_finite(v, x, xi, "pair_weighted_mass");
      terms[j * f_hat.count() + k] = v;
    }
  }
  return f.step() * f_hat.step() * pairwise_sum(terms);
}

GrowthReport growth_scan(const std::function<double(double)>& mass, std::span<const double> radii) {
  if (radii.size() < 4) throw Error("growth_scan: needs at least 4 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw Error("growth_scan: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw Error("growth_scan: radii must be strictly increasing");
  }

  GrowthReport report;
  report.radii.assign(radii.begin(), radii.end());
  for (double R : radii) report.masses.push_back(mass(R));

  const std::size_t n = radii.size();
  const std::size_t tail = std::max<std::size_t>(3, (n + 1) / 2);
  const std::size_t first = n - tail;

  std::vector<double> lu;
  std::vector<double> ly;
  for (std::size_t i = first; i < n; ++i) {
    if (report.masses[i] > 0.0) {
      lu.push_back(std::log(radii[i]));
      ly.push_back(std::log(report.masses[i]));
    }
  }
  report.fitted_exponent = lu.size() >= 2 ? least_squares_slope(lu, ly) : 0.0;

  const double last = report.masses[n - 1];
  report.relative_increment = last > 0.0 ? (last - report.masses[n - 2]) / last : 0.0;

  std::vector<double> du;
  std::vector<double> dy;
  for (std::size_t i = first + 1; i < n; ++i) {
    const double rate = (report.masses[i] - report.masses[i - 1]) / (radii[i] - radii[i - 1]);
    if (rate > 0.0) {
      du.push_back(0.5 * (std::log(radii[i]) + std::log(radii[i - 1])));
      dy.push_back(std::log(rate));
    }
  }
  if (!(last > report.masses[n - 2])) {
    report.tail_decay_exponent = std::numeric_limits<double>::infinity();
  } else if (du.size() >= 2) {
    report.tail_decay_exponent = -least_squares_slope(du, dy);
  } else {
    report.tail_decay_exponent = 0.0;
  }

  const bool flat = report.relative_increment < kConvergentIncrement && report.fitted_exponent < kConvergentSlope;
  const bool fast_tail = report.tail_decay_exponent > kConvergentDecayExponent;
  report.verdict = (flat || fast_tail) ? Verdict::Convergent : Verdict::Divergent;
  report.borderline = report.verdict == Verdict::Divergent &&
                      (report.fitted_exponent < 0.3 ||
                       (report.tail_decay_exponent >= 0.75 && report.tail_decay_exponent <= kConvergentDecayExponent));
  return report;
}

GrowthReport growth_scan(const TFArray& field, const WeightSpec& w, std::span<const double> radii) {
  return growth_scan([&](double R) { return weighted_mass(field, w, R); }, radii);
}

GrowthReport growth_scan(const SampledSignal& f, const SampledSignal& f_hat, const WeightSpec& w,
                         std::span<const double> radii) {
  return growth_scan([&](double R) { return pair_weighted_mass(f, f_hat, w, R); }, radii);
}

double decay_fit(const SampledSignal& s, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction < 0.5)) throw Error("decay_fit: tail_fraction must lie in (0, 0.5)");
  const std::size_t n = s.count();
  const auto per_side = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n) / 2.0)));

  std::vector<double> u;
  std::vector<double> y;
  auto take = [&](std::size_t k) {
    const double mag = std::abs(s[k]);
    if (mag > kDecayFloor) {
      u.push_back(s.time(k) * s.time(k));
      y.push_back(-std::log(mag) / kPi);
    }
  };
  for (std::size_t k = 0; k < per_side; ++k) take(k);
  for (std::size_t k = n - per_side; k < n; ++k) take(k);
  if (u.size() < 3) throw Error("decay_fit: tail underflow");
  return least_squares_slope(u, y);
}

}  // namespace tfu::weights
