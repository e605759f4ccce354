#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "cavsig/cavity.hpp"
#include "cavsig/coefficient.hpp"
#include "cavsig/exp_poly.hpp"

// Closed-form second-order channel coefficients. The noise terms P2, Q2, R2,
// S2 depend on the receiving detector only; the signal terms C2, D2 couple
// the sender's coherence to the receiver through the field commutator. G2,
// H2, I2, J2 follow from (C2, D2) by exact relations; an unsimplified
// assembly of the same Dyson terms is kept alongside as a cross-check route.

namespace cavsig {

/// Full parameter snapshot carried with every computed coefficient bundle.
struct ParameterSnapshot {
  CavityConfig cavity;
  DetectorParams detector_a;
  DetectorParams detector_b;
  double switching_time = 0.0;
};

struct NoiseCoeffs {
  double p2 = 0.0;  // >= 0
  double q2 = 0.0;  // <= 0
  Complex r2{};
  Complex s2{};
};

struct SignalCoeffs {
  Complex c2{};
  Complex d2{};
  Complex g2{};  // = -c2
  Complex h2{};  // = -d2
  Complex i2{};  // = d2
  Complex j2{};  // = c2
};

struct SecondOrderCoeffs {
  NoiseCoeffs noise;
  SignalCoeffs signal;
  ParameterSnapshot provenance;
};

/// Mode-j contribution to the noise terms; summing over j <= N_C gives the
/// coefficients. Exposed so cutoff scans can reuse one pass.
NoiseCoeffs noise_mode_term(double length, const DetectorParams& detector_b, double T, int mode);
SignalCoeffs signal_mode_term(double length, const DetectorParams& detector_a,
                              const DetectorParams& detector_b, double T, int mode);

NoiseCoeffs compute_noise(const CavityConfig& cavity, const DetectorParams& detector_b, double T);
SignalCoeffs compute_signal(const CavityConfig& cavity, const DetectorParams& detector_a,
                            const DetectorParams& detector_b, double T);
SecondOrderCoeffs compute_second_order(const CavityConfig& cavity,
                                       const DetectorParams& detector_a,
                                       const DetectorParams& detector_b, double T);

/// Coefficient summed over modes j <= cutoffs[i] for each entry of the
/// strictly increasing cutoff list, in a single fixed-order compensated pass.
/// `which` must be one of the second-order selectors.
std::vector<Complex> second_order_by_cutoff(Coefficient which, double length,
                                            const DetectorParams& detector_a,
                                            const DetectorParams& detector_b, double T,
                                            std::span<const int> cutoffs);

/// Density-matrix entries treated as independent scalars (the conjugate slots
/// are NOT tied together), so individual channel constants can be extracted
/// by evaluating at basis inputs.
struct TwoLevelEntries {
  Complex ee{}, eg{}, ge{}, gg{};
};

/// Unsimplified second-order correction to Bob's state: the Dyson terms
/// transcribed before any combination of integrals, with unit couplings.
/// Slow reference path used to cross-check the combined coefficient formulas.
Eigen::Matrix2cd second_order_raw_correction(const CavityConfig& cavity,
                                             const DetectorParams& detector_a,
                                             const DetectorParams& detector_b, double T,
                                             const TwoLevelEntries& rho_a,
                                             const TwoLevelEntries& rho_b);

/// All ten second-order constants extracted from the raw assembly.
struct RawSecondOrder {
  double p2 = 0.0, q2 = 0.0;
  Complex r2{}, s2{}, c2{}, d2{}, g2{}, h2{}, i2{}, j2{};
};
RawSecondOrder second_order_from_raw(const CavityConfig& cavity, const DetectorParams& detector_a,
                                     const DetectorParams& detector_b, double T);

}  // namespace cavsig
