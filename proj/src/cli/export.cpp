#include "tfu/cli/export.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tfu/cli/config.hpp"
#include "tfu/cli/runner.hpp"

namespace tfu::cli {

std::string format_tfarray_csv(const TFArray& V) {
  const TFGrid& grid = V.grid();
  std::string out = "x,xi,re,im,abs\n";
  out.reserve(out.size() + grid.size() * 100);
  char line[160];
  for (std::size_t j = 0; j < grid.x_count(); ++j) {
    for (std::size_t k = 0; k < grid.xi_count(); ++k) {
      const complex v = V(j, k);
      const int n = std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", grid.x(j), grid.xi(k),
                                  v.real(), v.imag(), std::abs(v));
      out.append(line, static_cast<std::size_t>(n));
    }
  }
  return out;
}

void export_tfarray(const TFArray& V, const std::filesystem::path& path) {
  write_atomically(path, format_tfarray_csv(V));
}

TFArray import_tfarray(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != "x,xi,re,im,abs") throw Error(path.string() + ": bad header");

  std::vector<double> xs;
  std::vector<double> xis;
  std::vector<complex> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    const std::string what = path.string() + ":" + std::to_string(row);
    if (cols.size() != 5) throw Error(what + ": expected 5 columns");
    xs.push_back(parse_double(cols[0], what));
    xis.push_back(parse_double(cols[1], what));
    values.emplace_back(parse_double(cols[2], what), parse_double(cols[3], what));
  }
  if (values.size() < 4) throw Error(path.string() + ": too few rows");

  std::size_t xi_count = 1;
  while (xi_count < xs.size() && xs[xi_count] == xs[0]) ++xi_count;
  if (values.size() % xi_count != 0) throw Error(path.string() + ": rows do not form a grid");
  const std::size_t x_count = values.size() / xi_count;
  const double xi_step = xis[1] - xis[0];
  const double x_step = x_count > 1 ? xs[xi_count] - xs[0] : xi_step;
  const TFGrid grid(x_step, x_count, xi_step, xi_count);
  for (std::size_t j = 0; j < x_count; ++j) {
    for (std::size_t k = 0; k < xi_count; ++k) {
      const std::size_t i = j * xi_count + k;
      if (std::abs(xs[i] - grid.x(j)) > 1e-12 * (1.0 + std::abs(xs[i])) ||
          std::abs(xis[i] - grid.xi(k)) > 1e-12 * (1.0 + std::abs(xis[i]))) {
        throw Error(path.string() + ": row " + std::to_string(i + 2) + " is off the reconstructed grid");
      }
    }
  }
  return TFArray(grid, std::move(values));
}

}  // namespace tfu::cli
