#include "tfu/reference.hpp"

#include <cmath>
#include <sstream>

namespace tfu::reference {

namespace {

using Poly = std::vector<complex>;

struct PolyForm {
  Poly p;
  double a;
};

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

complex horner(const Poly& p, complex s) {
  complex acc{0.0, 0.0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc;
}

// Q(s) = P(s + delta)
Poly shift(const Poly& p, double delta) {
  Poly q(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    double power = 1.0;  // delta^{k-j}, built from j = k downwards
    for (std::size_t j = k + 1; j-- > 0;) {
      q[j] += p[k] * binomial(k, j) * power;
      power *= delta;
    }
  }
  return q;
}

Poly multiply(const Poly& p, const Poly& q) {
  if (p.empty() || q.empty()) return {};
  Poly r(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

Poly conjugated(Poly p) {
  for (complex& c : p) c = std::conj(c);
  return p;
}

// Integral of u^j e^{-a pi u^2} over the real line.
double gaussian_moment(std::size_t j, double a) {
  if (j % 2 == 1) return 0.0;
  double double_factorial = 1.0;  // (j-1)!!
  for (std::size_t i = j; i > 1; i -= 2) double_factorial *= static_cast<double>(i - 1);
  return double_factorial / std::pow(2.0 * kPi * a, static_cast<double>(j) / 2.0) / std::sqrt(a);
}

// Fourier transform of P(s) e^{-a pi s^2} is Q(xi) e^{-pi xi^2 / a}; returns Q.
Poly gaussian_fourier(const Poly& p, double a) {
  Poly q(p.size());
  const complex step{0.0, -1.0 / a};
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (std::size_t j = 0; j <= k; j += 2) {
      q[k - j] += p[k] * binomial(k, j) * std::pow(step, static_cast<int>(k - j)) * gaussian_moment(j, a);
    }
  }
  return q;
}

double hermite_norm(int n) {
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  return std::pow(2.0, 0.25) / std::sqrt(std::ldexp(factorial, n));
}

PolyForm poly_form(const AnalyticFunction& fn) {
  return std::visit(
      [](const auto& kind) -> PolyForm {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return {{kind.amplitude}, kind.a};
        } else if constexpr (std::is_same_v<T, Hermite>) {
          const std::vector<double> c = hermite_polynomial_coefficients(kind.n);
          const double norm = hermite_norm(kind.n);
          const double root = std::sqrt(2.0 * kPi);
          Poly p(c.size());
          for (std::size_t k = 0; k < c.size(); ++k) p[k] = norm * c[k] * std::pow(root, static_cast<int>(k));
          return {p, 1.0};
        } else {
          return {kind.coeffs, kind.a};
        }
      },
      fn.kind);
}

complex base_value(const AnalyticFunction& fn, double s) {
  if (const auto* h = std::get_if<Hermite>(&fn.kind)) return hermite_function(h->n, s);
  const PolyForm form = poly_form(fn);
  return horner(form.p, s) * std::exp(-form.a * kPi * s * s);
}

complex unit_phase(double cycles) { return std::polar(1.0, 2.0 * kPi * cycles); }

}  // namespace

AnalyticFunction AnalyticFunction::gaussian(double a, std::optional<complex> amplitude) {
  AnalyticFunction fn{Gaussian{a, amplitude.value_or(complex{a > 0.0 ? unit_gaussian_amplitude(a) : 0.0, 0.0})}};
  fn.validate();
  return fn;
}

AnalyticFunction AnalyticFunction::hermite(int n) {
  AnalyticFunction fn{Hermite{n}};
  fn.validate();
  return fn;
}

AnalyticFunction AnalyticFunction::poly_gaussian(std::vector<complex> coeffs, double a) {
  AnalyticFunction fn{PolyGaussian{std::move(coeffs), a}};
  fn.validate();
  return fn;
}

AnalyticFunction AnalyticFunction::translated_modulated(double z, double zeta) const {
  // M_zeta T_z M_w T_y B = e^{-2 pi i w z} M_{w+zeta} T_{y+z} B
  AnalyticFunction out = *this;
  const complex phase = unit_phase(-modulation * z);
  if (phase != complex{1.0, 0.0}) {
    PolyForm form = poly_form(*this);
    for (complex& c : form.p) c *= phase;
    out.kind = PolyGaussian{std::move(form.p), form.a};
  }
  out.modulation = modulation + zeta;
  out.translation = translation + z;
  return out;
}

void AnalyticFunction::validate() const {
  std::visit(
      [](const auto& kind) {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Hermite>) {
          if (kind.n < 0 || kind.n > kMaxHermiteOrder) {
            throw Error("hermite order " + std::to_string(kind.n) + " outside [0, 8]");
          }
        } else {
          if (!(kind.a > 0.0) || !std::isfinite(kind.a)) throw Error("gaussian width a must be finite and > 0");
        }
        if constexpr (std::is_same_v<T, PolyGaussian>) {
          if (kind.coeffs.empty()) throw Error("poly-gaussian needs at least one coefficient");
        }
      },
      kind);
  if (!std::isfinite(modulation) || !std::isfinite(translation)) throw Error("non-finite modulation or translation");
}

complex AnalyticFunction::operator()(double t) const {
  return unit_phase(modulation * t) * base_value(*this, t - translation);
}

double unit_gaussian_amplitude(double a) { return std::pow(2.0 * a, 0.25); }

std::vector<double> hermite_polynomial_coefficients(int n) {
  if (n < 0 || n > kMaxHermiteOrder) throw Error("hermite order " + std::to_string(n) + " outside [0, 8]");
  // H_{k+1} = 2u H_k - 2k H_{k-1}
  std::vector<double> prev{1.0};
  if (n == 0) return prev;
  std::vector<double> cur{0.0, 2.0};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += 2.0 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 2.0 * k * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

double hermite_function(int n, double t) {
  if (n < 0 || n > kMaxHermiteOrder) throw Error("hermite order " + std::to_string(n) + " outside [0, 8]");
  const double u = std::sqrt(2.0 * kPi) * t;
  double prev = 1.0;
  double cur = 2.0 * u;
  if (n == 0) {
    cur = 1.0;
  } else {
    for (int k = 1; k < n; ++k) {
      const double next = 2.0 * u * cur - 2.0 * k * prev;
      prev = cur;
      cur = next;
    }
  }
  return hermite_norm(n) * cur * std::exp(-kPi * t * t);
}

SampledSignal sample(const AnalyticFunction& fn, const SignalLayout& layout) {
  layout.validate();
  fn.validate();
  std::vector<complex> out(layout.count);
  for (std::size_t k = 0; k < layout.count; ++k) out[k] = fn(layout.time(k));
  return SampledSignal(layout, std::move(out));
}

SampledSignal translate_modulate(const SampledSignal& s, double z, double zeta) {
  const double lattice = z / s.step();
  const double shift = std::round(lattice);
  if (std::abs(lattice - shift) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "translate_modulate: z = " << z << " is not a multiple of the step " << s.step();
    throw Error(os.str());
  }
  const auto offset = static_cast<std::ptrdiff_t>(shift);
  const auto n = static_cast<std::ptrdiff_t>(s.count());
  std::vector<complex> out(s.count());
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::ptrdiff_t src = k - offset;
    if (src < 0 || src >= n) continue;
    out[static_cast<std::size_t>(k)] =
        unit_phase(zeta * s.time(static_cast<std::size_t>(k))) * s[static_cast<std::size_t>(src)];
  }
  return SampledSignal(s.layout(), std::move(out));
}

complex gaussian_stft_closed_form(double x, double xi) {
  return std::polar(std::exp(-kPi * (x * x + xi * xi) / 2.0), -kPi * x * xi);
}

complex hermite_fourier_eigenvalue(int n) {
  if (n < 0 || n > kMaxHermiteOrder) throw Error("hermite order " + std::to_string(n) + " outside [0, 8]");
  static constexpr double re[] = {1.0, 0.0, -1.0, 0.0};
  static constexpr double im[] = {0.0, -1.0, 0.0, 1.0};
  return {re[n % 4], im[n % 4]};
}

AnalyticFunction analytic_fourier(const AnalyticFunction& fn) {
  fn.validate();
  // FT(M_w T_z B) = e^{2 pi i w z} M_{-z} T_w FT(B)
  const complex phase = unit_phase(fn.modulation * fn.translation);
  AnalyticFunction out;
  if (const auto* g = std::get_if<Gaussian>(&fn.kind)) {
    out.kind = Gaussian{1.0 / g->a, g->amplitude * phase / std::sqrt(g->a)};
  } else {
    const PolyForm form = poly_form(fn);
    Poly q = gaussian_fourier(form.p, form.a);
    for (complex& c : q) c *= phase;
    out.kind = PolyGaussian{std::move(q), 1.0 / form.a};
  }
  out.modulation = -fn.translation;
  out.translation = fn.modulation;
  return out;
}

AnalyticFunction dilate(const AnalyticFunction& fn, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("dilate: lambda must be finite and > 0");
  fn.validate();
  AnalyticFunction out;
  if (const auto* g = std::get_if<Gaussian>(&fn.kind)) {
    out.kind = Gaussian{g->a * lambda * lambda, g->amplitude};
  } else {
    PolyForm form = poly_form(fn);
    double power = 1.0;
    for (complex& c : form.p) {
      c *= power;
      power *= lambda;
    }
    out.kind = PolyGaussian{std::move(form.p), form.a * lambda * lambda};
  }
  out.modulation = fn.modulation * lambda;
  out.translation = fn.translation / lambda;
  return out;
}

namespace {

// For fixed x, f(t) conj(g(t - x)) = K e^{2 pi i dw t} R(t - m) e^{-A pi (t - m)^2};
// its transform at xi is K e^{-2 pi i (xi - dw) m} Q(xi - dw) e^{-pi (xi - dw)^2 / A}.
struct StftColumn {
  Poly q;
  double width;       // A
  double centre;      // m
  double dw;          // w_f - w_g
  double log_mag;     // -pi * kappa, exponent of |K|
  double phase_x;     // cycles of K's phase: w_g x
};

StftColumn stft_column(const PolyForm& f, double wf, double zf, const Poly& g_conj, double ag, double wg, double zg,
                       double x) {
  const double centre_g = x + zg;
  const double width = f.a + ag;
  const double centre = (f.a * zf + ag * centre_g) / width;
  const double gap = zf - centre_g;
  Poly r = multiply(shift(f.p, centre - zf), shift(g_conj, centre - centre_g));
  return {gaussian_fourier(r, width), width, centre, wf - wg, -kPi * (f.a * ag / width) * gap * gap, wg * x};
}

complex evaluate_column(const StftColumn& c, double xi) {
  const double eta = xi - c.dw;
  const double mag = std::exp(c.log_mag - kPi * eta * eta / c.width);
  return mag * unit_phase(c.phase_x - eta * c.centre) * horner(c.q, eta);
}

}  // namespace

complex analytic_stft(const AnalyticFunction& f, const AnalyticFunction& g, double x, double xi) {
  f.validate();
  g.validate();
  const PolyForm ff = poly_form(f);
  const PolyForm gf = poly_form(g);
  const StftColumn col =
      stft_column(ff, f.modulation, f.translation, conjugated(gf.p), gf.a, g.modulation, g.translation, x);
  return evaluate_column(col, xi);
}

TFArray analytic_stft(const AnalyticFunction& f, const AnalyticFunction& g, const TFGrid& grid) {
  f.validate();
  g.validate();
  const PolyForm ff = poly_form(f);
  const PolyForm gf = poly_form(g);
  const Poly g_conj = conjugated(gf.p);
  std::vector<complex> values(grid.size());
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    const StftColumn col =
        stft_column(ff, f.modulation, f.translation, g_conj, gf.a, g.modulation, g.translation, grid.x(j));
    for (std::size_t k = 0; k < grid.xi_count(); ++k) values[j * grid.xi_count() + k] = evaluate_column(col, grid.xi(k));
  }
  return TFArray(grid, std::move(values));
}

}  // namespace tfu::reference
