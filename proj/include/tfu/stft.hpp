#pragma once

#include "tfu/core.hpp"

namespace tfu {

/// Full STFT lattice of a layout: x on the sample lattice, xi on the dual lattice.
TFGrid stft_grid(const SignalLayout& layout);

/// V_g f(x, xi) = integral f(t) conj(g(t - x)) e^{-2 pi i xi t} dt, evaluated per
/// x node as the Fourier transform of f * T_x conj(g).
///
/// Requirements: f and g share a layout and are boundary-sound; every x node is
/// a multiple of the sample step; xi_step equals the layout's dual step and
/// xi_count does not exceed the sample count (a centred slice is returned).
TFArray compute_stft(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid);

/// |quadrature(|V_g f|^2) - |f|^2 |g|^2| / (|f|^2 |g|^2).
double isometry_defect(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid);

}  // namespace tfu
