#include "tfu/support.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tfu/stft.hpp"

namespace tfu::support {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::string format_p(double p) {
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

std::string to_string(SupportVariant v) {
  switch (v) {
    case SupportVariant::L1Fraction: return "l1_fraction";
    case SupportVariant::LpVsL1p: return "lp_vs_l1p";
    case SupportVariant::LpVsEnergy: return "lp_vs_energy";
  }
  return "unknown";
}

SupportVariant parse_variant(const std::string& name) {
  for (SupportVariant v : {SupportVariant::L1Fraction, SupportVariant::LpVsL1p, SupportVariant::LpVsEnergy}) {
    if (to_string(v) == name) return v;
  }
  throw Error("unknown support mode '" + name + "'");
}

void SupportMode::validate() const {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error("support: epsilon must lie in [0, 1)");
  if (!std::isfinite(p)) throw Error("support: p must be finite");
  switch (variant) {
    case SupportVariant::L1Fraction:
      if (!(p >= 2.0)) throw Error("p out of range for l1_fraction bound (requires p >= 2), got " + format_p(p));
      break;
    case SupportVariant::LpVsL1p:
      if (!(p >= 1.0 && p < 2.0)) {
        throw Error("p out of range for lp_vs_l1p bound (requires 1 <= p < 2), got " + format_p(p));
      }
      break;
    case SupportVariant::LpVsEnergy:
      if (!(p >= 1.0)) throw Error("p out of range for lp_vs_energy bound (requires p >= 1), got " + format_p(p));
      break;
  }
}

double lieb_ratio(const TFArray& V, double p, double f_norm, double g_norm) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error("lieb_ratio: p must be finite and >= 1");
  if (!(f_norm > 0.0) || !(g_norm > 0.0)) throw Error("lieb_ratio: zero norm");
  const double mass = quadrature_sum(V, [p](complex z) { return std::pow(std::abs(z), p); });
  constexpr int d = 1;
  return mass / (std::pow(2.0 / p, d) * std::pow(f_norm * g_norm, p));
}

double lower_bound(const SupportMode& mode, int d) {
  mode.validate();
  if (d < 1) throw Error("lower_bound: dimension must be >= 1");
  const double p = mode.p;
  const double keep = 1.0 - mode.epsilon;
  const double dim = static_cast<double>(d);
  switch (mode.variant) {
    case SupportVariant::L1Fraction: return std::pow(keep, p / (p - 1.0)) * std::pow(p / 2.0, dim / (p - 1.0));
    case SupportVariant::LpVsL1p: return std::pow(2.0, 2.0 * p * dim / (2.0 - p)) * std::pow(keep, 2.0 / (2.0 - p));
    case SupportVariant::LpVsEnergy: return keep;
  }
  return 0.0;
}

std::vector<std::size_t> greedy_order(const TFArray& V) {
  std::vector<double> mag(V.values().size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(V.values()[i]);
  std::vector<std::size_t> order(mag.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return mag[a] > mag[b] || (mag[a] == mag[b] && a < b);
  });
  return order;
}

std::vector<double> prefix_masses(const TFArray& V, double q) {
  const double cell = V.grid().cell_measure();
  std::vector<double> out;
  out.reserve(V.values().size());
  CompensatedSum acc;
  for (std::size_t i : greedy_order(V)) {
    const double m = std::abs(V.values()[i]);
    acc.add(cell * (q == 1.0 ? m : std::pow(m, q)));
    out.push_back(acc.value());
  }
  return out;
}

SupportReport greedy_essential_support(const TFArray& V, const SupportMode& mode, double f_norm, double g_norm) {
  mode.validate();
  if (!(f_norm > 0.0) || !(g_norm > 0.0)) throw Error("greedy_essential_support: zero norm");
  if (V.max_abs() == 0.0) throw Error("greedy_essential_support: field vanishes identically");

  SupportReport report;
  report.mode = mode;
  report.lower_bound = lower_bound(mode, 1);

  const double keep = 1.0 - mode.epsilon;
  const double q = mode.variant == SupportVariant::L1Fraction ? 1.0 : mode.p;
  const std::vector<double> prefix = prefix_masses(V, q);
  report.total_mass = prefix.back();
  switch (mode.variant) {
    case SupportVariant::L1Fraction: report.threshold = keep * f_norm * g_norm; break;
    case SupportVariant::LpVsL1p: {
      const double l1 = q == 1.0 ? report.total_mass : prefix_masses(V, 1.0).back();
      report.threshold = keep * std::pow(l1, mode.p);
      break;
    }
    case SupportVariant::LpVsEnergy: report.threshold = keep * std::pow(f_norm * g_norm, mode.p); break;
  }

  if (report.total_mass < report.threshold) {
    report.satisfiable = false;
    return report;
  }
  const auto hit = std::find_if(prefix.begin(), prefix.end(), [&](double m) { return m >= report.threshold; });
  report.satisfiable = true;
  report.cells = static_cast<std::size_t>(hit - prefix.begin()) + 1;
  const double cell = V.grid().cell_measure();
  report.measured_area = static_cast<double>(report.cells) * cell;
  report.bound_holds = *report.measured_area >= report.lower_bound;
  report.resolution_limited = report.bound_holds && *report.measured_area - report.lower_bound < cell;
  return report;
}

std::vector<SupportReport> bound_sweep(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid,
                                       const std::vector<SupportMode>& modes) {
  std::vector<SupportReport> out;
  if (modes.empty()) return out;
  const TFArray V = compute_stft(f, g, grid);
  const double fn = l2_norm(f);
  const double gn = l2_norm(g);
  for (const SupportMode& mode : modes) {
    try {
      out.push_back(greedy_essential_support(V, mode, fn, gn));
    } catch (const Error& e) {
      SupportReport failed;
      failed.mode = mode;
      failed.error = e.what();
      out.push_back(failed);
    }
  }
  return out;
}

}  // namespace tfu::support
