#include "tfu/identity.hpp"

#include <algorithm>
#include <cmath>

#include "tfu/reference.hpp"
#include "tfu/stft.hpp"

namespace tfu::identity {

namespace {

std::size_t mirror(std::size_t i, std::size_t n) { return (n - i) % n; }

void require_square(const TFGrid& grid, const char* what) {
  if (grid.x_count() != grid.xi_count() || grid.x_step() != grid.xi_step()) {
    throw Error(std::string(what) + ": rotation needs equal x and xi lattices");
  }
}

void require_self_dual(const TFGrid& grid, const char* what) {
  require_square(grid, what);
  if (!grid.self_dual()) throw Error(std::string(what) + ": grid must be self-dual (step^2 * count == 1)");
}

double max_difference(const TFArray& a, const TFArray& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TFArray rotate_quarter(const TFArray& a) {
  const TFGrid& grid = a.grid();
  require_square(grid, "rotate_quarter");
  const std::size_t n = grid.x_count();
  std::vector<complex> out(grid.size());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) out[a.index(j, k)] = a(mirror(k, n), j);
  return TFArray(grid, std::move(out));
}

TFArray reflect(const TFArray& a) {
  const TFGrid& grid = a.grid();
  std::vector<complex> out(grid.size());
  for (std::size_t j = 0; j < grid.x_count(); ++j)
    for (std::size_t k = 0; k < grid.xi_count(); ++k)
      out[a.index(j, k)] = a(mirror(j, grid.x_count()), mirror(k, grid.xi_count()));
  return TFArray(grid, std::move(out));
}

AuxiliaryField build_auxiliary(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid, double z,
                               double zeta) {
  const SampledSignal shifted = reference::translate_modulate(f, z, zeta);
  const TFArray v = compute_stft(shifted, g, grid);
  const TFArray v_reflected = reflect(v);
  std::vector<complex> out(grid.size());
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    for (std::size_t k = 0; k < grid.xi_count(); ++k) {
      const complex chirp = std::polar(1.0, 2.0 * kPi * grid.x(j) * grid.xi(k));
      out[v.index(j, k)] = chirp * v(j, k) * v_reflected(j, k);
    }
  }
  return {TFArray(grid, std::move(out)), z, zeta};
}

double rotation_invariance_defect(const AuxiliaryField& a) {
  require_self_dual(a.base.grid(), "rotation_invariance_defect");
  const double peak = a.base.max_abs();
  if (peak == 0.0) return 0.0;
  const TFArray transformed = fourier_2d(a.base);
  return max_difference(transformed, rotate_quarter(a.base)) / peak;
}

double fundamental_identity_defect(const SampledSignal& f1, const SampledSignal& f2, const SampledSignal& g1,
                                   const SampledSignal& g2, const TFGrid& grid) {
  require_self_dual(grid, "fundamental_identity_defect");
  const TFArray v11 = compute_stft(f1, g1, grid);
  const TFArray v22 = compute_stft(f2, g2, grid);
  std::vector<complex> product(grid.size());
  for (std::size_t i = 0; i < product.size(); ++i) product[i] = v11.values()[i] * std::conj(v22.values()[i]);
  const TFArray left = fourier_2d(TFArray(grid, std::move(product)));

  const TFArray w1 = compute_stft(f1, f2, grid);
  const TFArray w2 = compute_stft(g1, g2, grid);
  std::vector<complex> rhs(grid.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = w1.values()[i] * std::conj(w2.values()[i]);
  const TFArray right = rotate_quarter(TFArray(grid, std::move(rhs)));

  const double scale = std::max(left.max_abs(), right.max_abs());
  if (scale == 0.0) return 0.0;
  return max_difference(left, right) / scale;
}

}  // namespace tfu::identity
