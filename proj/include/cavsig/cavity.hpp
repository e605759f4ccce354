#pragma once

#include <vector>

#include "cavsig/exp_poly.hpp"

// Cavity geometry, detector parameters and the per-mode factorized two-point
// function of a massless scalar field with Dirichlet walls. Natural units
// (hbar = c = 1); mode frequencies are omega_j = j pi / L.

namespace cavsig {

struct CavityConfig {
  double length = 1.0;  // L
  int cutoff = 1;       // N_C, number of retained modes
};

/// A pointlike two-level detector at rest, resonant with cavity mode
/// `resonance_mode` (gap Omega = n pi / L), switched on sharply over [0, T].
struct DetectorParams {
  double position = 0.5;   // x, strictly inside (0, L)
  int resonance_mode = 1;  // n >= 1
  double coupling = 0.0;   // lambda >= 0
};

void validate(const CavityConfig& cavity);
void validate(const CavityConfig& cavity, const DetectorParams& detector);
void validate_switching_time(double T);

/// sin(j pi x / L) / sqrt(omega_j L); the coefficient of mode j on a detector
/// worldline at x.
double mode_amplitude(const CavityConfig& cavity, int mode, double position);

/// One mode of <phi(x,t) phi(x',t')> = sum_j coeff_j e^{-i omega_j t} e^{+i omega_j t'}.
/// The factorization per time argument is what lets every nested time
/// integral split into products of one-dimensional window integrals.
struct TwoPointEntry {
  double coeff = 0.0;
  LatticeFreq freq_first{};   // multiplies t  (equals -j)
  LatticeFreq freq_second{};  // multiplies t' (equals +j)
};

struct TwoPointExpansion {
  std::vector<TwoPointEntry> entries;
  double length = 1.0;
};

TwoPointExpansion wightman(const CavityConfig& cavity, double x, double x_prime);

/// Direct evaluation of the truncated mode sum at (t, t').
Complex eval(const TwoPointExpansion& w, double t, double t_prime);

/// Antisymmetric part <[phi(x,t), phi(x',t')]>, a purely imaginary c-number.
Complex commutator(const TwoPointExpansion& w, double t, double t_prime);

}  // namespace cavsig
