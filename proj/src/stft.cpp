#include "tfu/stft.hpp"

#include <cmath>
#include <sstream>

#include "tfu/parallel.hpp"

namespace tfu {

TFGrid stft_grid(const SignalLayout& layout) {
  layout.validate();
  return TFGrid(layout.step, layout.count, layout.dual_step(), layout.count);
}

TFArray compute_stft(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid) {
  if (!(f.layout() == g.layout())) throw Error("compute_stft: f and g use different layouts");
  const SignalLayout& layout = f.layout();
  const std::size_t n = layout.count;

  if (std::abs(grid.xi_step() - layout.dual_step()) > 1e-12 * layout.dual_step()) {
    std::ostringstream os;
    os.precision(17);
    os << "compute_stft: xi step " << grid.xi_step() << " differs from the dual step " << layout.dual_step()
       << " of the signal layout";
    throw Error(os.str());
  }
  if (grid.xi_count() > n) throw Error("compute_stft: xi_count exceeds the signal sample count");

  std::vector<std::ptrdiff_t> shifts(grid.x_count());
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    const double lattice = grid.x(j) / layout.step;
    const double rounded = std::round(lattice);
    if (std::abs(lattice - rounded) > 1e-9) {
      std::ostringstream os;
      os.precision(17);
      os << "compute_stft: x node " << grid.x(j) << " is off the signal lattice";
      throw Error(os.str());
    }
    shifts[j] = static_cast<std::ptrdiff_t>(rounded);
  }
  if (!boundary_sound(f) || !boundary_sound(g)) throw Error("compute_stft: truncation unsound");

  const std::size_t first = (n - grid.xi_count()) / 2;
  std::vector<complex> values(grid.size());
  parallel_for(grid.x_count(), [&](std::size_t j) {
    std::vector<complex> line(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      const std::ptrdiff_t src = k - shifts[j];
      if (src < 0 || src >= count) continue;
      line[static_cast<std::size_t>(k)] =
          f[static_cast<std::size_t>(k)] * std::conj(g[static_cast<std::size_t>(src)]);
    }
    detail::centered_transform(line, layout.step);
    for (std::size_t k = 0; k < grid.xi_count(); ++k) values[j * grid.xi_count() + k] = line[first + k];
  });
  return TFArray(grid, std::move(values));
}

double isometry_defect(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid) {
  const double energy = std::pow(l2_norm(f) * l2_norm(g), 2);
  if (energy == 0.0) throw Error("isometry_defect: degenerate pair");
  const TFArray v = compute_stft(f, g, grid);
  const double mass = quadrature_sum(v, [](complex z) { return std::norm(z); });
  return std::abs(mass - energy) / energy;
}

}  // namespace tfu
