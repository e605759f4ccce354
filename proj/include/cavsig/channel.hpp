#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "cavsig/fourth_order.hpp"
#include "cavsig/second_order.hpp"

// Builds the receiving detector's output state from the channel coefficients
// and exposes the two observables the signalling protocols use: the
// energy-eigenstate (amplitude-coded) excitation probabilities and the
// phase-coded |+> detection probability.

namespace cavsig {

/// A 2x2 density matrix in the (excited, ground) basis: row/column 0 is the
/// excited state.
class DensityMatrix2 {
 public:
  static DensityMatrix2 ground();
  static DensityMatrix2 excited();
  static DensityMatrix2 plus();   // (|g> + |e>)/sqrt(2)
  static DensityMatrix2 minus();  // (|g> - |e>)/sqrt(2)

  /// Validates unit trace, hermiticity and positive semidefiniteness.
  static DensityMatrix2 from_entries(Complex ee, Complex eg, Complex ge, Complex gg);

  /// Wraps an already-computed matrix without positivity checks (channel
  /// outputs may carry small negative eigenvalues at finite truncation).
  static DensityMatrix2 unchecked(const Eigen::Matrix2cd& m);

  const Eigen::Matrix2cd& matrix() const { return m_; }
  double excited_population() const { return m_(0, 0).real(); }
  double ground_population() const { return m_(1, 1).real(); }
  Complex coherence() const { return m_(0, 1); }  // <e| rho |g>

  double min_eigenvalue() const;
  bool is_ground(double tol = 1e-12) const;

 private:
  explicit DensityMatrix2(const Eigen::Matrix2cd& m) : m_(m) {}
  Eigen::Matrix2cd m_;
};

struct ChannelCoefficients {
  SecondOrderCoeffs second;
  std::optional<FourthOrderCoeffs> fourth;  // only valid for a ground-state receiver
  double lambda_a = 0.0;
  double lambda_b = 0.0;
};

ChannelCoefficients compute_channel(const CavityConfig& cavity, const DetectorParams& detector_a,
                                    const DetectorParams& detector_b, double T,
                                    bool with_fourth_order);

/// Output state per the second-order channel map for arbitrary inputs; when
/// fourth-order coefficients are present (ground-state receiver only) the
/// diagonal picks up the noise correction and the sender-population terms.
/// The correction block is traceless, so the output trace equals the input
/// trace exactly.
DensityMatrix2 apply_channel(const DensityMatrix2& rho_a, const DensityMatrix2& rho_b,
                             const ChannelCoefficients& coeffs);

/// A probability that is reported raw; `flagged` marks values outside [0, 1]
/// (perturbative truncation artifacts stay visible).
struct Probability {
  double value = 0.0;
  bool flagged = false;
};

enum class FermiInput { kGround, kExcited };

/// Excitation probability of the receiver when the sender starts in an
/// energy eigenstate. Requires fourth-order coefficients.
Probability fermi_probability(FermiInput which, const ChannelCoefficients& coeffs);

/// Probability of finding the receiver in |+> when its projector is read out
/// at time t >= T, for a ground-state receiver.
double plus_probability_at(const DensityMatrix2& rho_a, const ChannelCoefficients& coeffs,
                           double measurement_time);

enum class PmSign { kPlus, kMinus };

/// Detection probability at the optimal measurement time for |+>/|-> coded
/// inputs: 1/2 +- lambda_a lambda_b |C2 + conj(D2)|.
Probability optimal_pm_probability(PmSign sign, const ChannelCoefficients& coeffs);

/// Set when the fourth-order sender terms exceed 10% of the second-order
/// noise, signalling departure from the perturbative regime.
std::optional<std::string> regime_warning(const ChannelCoefficients& coeffs);

}  // namespace cavsig
