#pragma once

// Numerical checks of the two fundamental STFT identities:
//   FT(V_{g1}f1 conj(V_{g2}f2))(x, xi) = (V_{f2}f1 conj(V_{g2}g1))(-xi, x)
// and the Fourier invariance of the auxiliary field
//   F_Z(x, xi) = e^{2 pi i x xi} V_g(M_zeta T_z f)(x, xi) V_g(M_zeta T_z f)(-x, -xi),
//   FT(F_Z)(x, xi) = F_Z(-xi, x).
//
// Both reflections use the index map j -> (n - j) mod n; the lone unmatched
// edge node pairs with itself, which is harmless because compared fields are
// boundary-sound.

#include "tfu/core.hpp"

namespace tfu::identity {

struct AuxiliaryField {
  TFArray base;
  double z = 0.0;
  double zeta = 0.0;
};

AuxiliaryField build_auxiliary(const SampledSignal& f, const SampledSignal& g, const TFGrid& grid, double z,
                               double zeta);

/// max |FT(F) - F o rotation| / max |F|, on a square self-dual grid.
double rotation_invariance_defect(const AuxiliaryField& a);

/// Normalised max difference between the two sides of the four-function identity.
double fundamental_identity_defect(const SampledSignal& f1, const SampledSignal& f2, const SampledSignal& g1,
                                   const SampledSignal& g2, const TFGrid& grid);

/// G(j, k) = F(-xi_k, x_j).
TFArray rotate_quarter(const TFArray& a);

/// G(j, k) = F(-x_j, -xi_k).
TFArray reflect(const TFArray& a);

}  // namespace tfu::identity
