#pragma once

// Closed-form test functions and oracles.
//
// Every AnalyticFunction has the shape
//     f(t) = e^{2 pi i w t} B(t - z),   B(s) = P(s) e^{-a pi s^2}
// with P a complex polynomial. Its Fourier transform and the STFT of any pair
// of them are again closed forms, which lets tests compare the numeric engine
// against exact values, including far tails where FFT roundoff dominates.

#include <optional>
#include <variant>
#include <vector>

#include "tfu/core.hpp"

namespace tfu::reference {

inline constexpr int kMaxHermiteOrder = 8;

struct Gaussian {
  double a = 1.0;
  complex amplitude{1.0, 0.0};
};

/// Orthonormal Hermite function 2^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2 pi) t) e^{-pi t^2}.
struct Hermite {
  int n = 0;
};

/// P(s) e^{-a pi s^2}; coefficients ascend in powers of s.
struct PolyGaussian {
  std::vector<complex> coeffs;
  double a = 1.0;
};

struct AnalyticFunction {
  std::variant<Gaussian, Hermite, PolyGaussian> kind;
  double modulation = 0.0;   // w, frequency units
  double translation = 0.0;  // z, time units

  /// Gaussian e^{-a pi t^2} with amplitude (2a)^{1/4} unless given, which has unit L2 norm.
  static AnalyticFunction gaussian(double a, std::optional<complex> amplitude = std::nullopt);
  static AnalyticFunction hermite(int n);
  static AnalyticFunction poly_gaussian(std::vector<complex> coeffs, double a);

  /// M_zeta T_z applied on top of the current modulation and translation.
  AnalyticFunction translated_modulated(double z, double zeta) const;

  void validate() const;
  complex operator()(double t) const;
};

/// (2a)^{1/4}: the amplitude giving a Gaussian of width a unit L2 norm.
double unit_gaussian_amplitude(double a);

/// Value of the orthonormal Hermite function of order n.
double hermite_function(int n, double t);

/// Physicists' Hermite polynomial coefficients, H_n(u) = sum_k c_k u^k.
std::vector<double> hermite_polynomial_coefficients(int n);

SampledSignal sample(const AnalyticFunction& fn, const SignalLayout& layout);

/// M_zeta T_z s, with z required on the sample lattice. Shifted-in samples are zero.
SampledSignal translate_modulate(const SampledSignal& s, double z, double zeta);

/// e^{-pi i x xi} e^{-pi (x^2 + xi^2)/2}: STFT of f = g = 2^{1/4} e^{-pi t^2}.
complex gaussian_stft_closed_form(double x, double xi);

/// (-i)^n for 0 <= n <= 8.
complex hermite_fourier_eigenvalue(int n);

/// Closed-form Fourier transform, expressed as another AnalyticFunction.
AnalyticFunction analytic_fourier(const AnalyticFunction& fn);

/// f(lambda t) as an AnalyticFunction.
AnalyticFunction dilate(const AnalyticFunction& fn, double lambda);

/// Exact V_g f(x, xi).
complex analytic_stft(const AnalyticFunction& f, const AnalyticFunction& g, double x, double xi);

/// Exact V_g f sampled at every node of grid.
TFArray analytic_stft(const AnalyticFunction& f, const AnalyticFunction& g, const TFGrid& grid);

}  // namespace tfu::reference
