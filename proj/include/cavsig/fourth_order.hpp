#pragma once

#include <array>
#include <span>
#include <vector>

#include "cavsig/cavity.hpp"
#include "cavsig/coefficient.hpp"
#include "cavsig/second_order.hpp"

// Fourth-order channel coefficients A4, B4, P4. The vacuum 4-point function
// splits into three Wick pairings of per-mode 2-point factors, so every time
// variable carries a single lattice phase and the printed 4-dimensional
// domains reduce to products of nested window integrals, summed over mode
// pairs (j, l).

namespace cavsig {

struct FourthOrderCoeffs {
  double a4 = 0.0;
  double b4 = 0.0;
  double p4 = 0.0;  // <= 0
  double imag_residual = 0.0;  // max |Im| discarded across the three sums
  ParameterSnapshot provenance;
};

/// One Wick pairing of a 4-point function: two 2-point factors bound to slot
/// indices (operator positions 0..3).
struct FourPointContraction {
  TwoPointExpansion first;
  std::array<int, 2> first_slots;
  TwoPointExpansion second;
  std::array<int, 2> second_slots;
};

/// <phi_1 phi_2 phi_3 phi_4> = W12 W34 + W13 W24 + W14 W23, assembled from
/// the pairwise two-point expansions (argument order (12),(13),(14),(23),(24),(34)).
std::array<FourPointContraction, 3> wick_four_point(
    const TwoPointExpansion& w12, const TwoPointExpansion& w13, const TwoPointExpansion& w14,
    const TwoPointExpansion& w23, const TwoPointExpansion& w24, const TwoPointExpansion& w34);

Complex eval(const FourPointContraction& contraction, const std::array<double, 4>& times);
Complex eval_four_point(const std::array<FourPointContraction, 3>& contractions,
                        const std::array<double, 4>& times);

double compute_a4(const CavityConfig& cavity, const DetectorParams& detector_a,
                  const DetectorParams& detector_b, double T);
/// Identical pipeline with the sender gap negated.
double compute_b4(const CavityConfig& cavity, const DetectorParams& detector_a,
                  const DetectorParams& detector_b, double T);
double compute_p4(const CavityConfig& cavity, const DetectorParams& detector_b, double T);

FourthOrderCoeffs compute_fourth_order(const CavityConfig& cavity,
                                       const DetectorParams& detector_a,
                                       const DetectorParams& detector_b, double T);

/// Coefficient at every cutoff of the strictly increasing list, evaluated in
/// one pass over mode-pair shells with a fixed-order compensated reduction.
/// Entry i equals the direct computation at cutoff[i] bit for bit.
std::vector<double> fourth_order_by_cutoff(Coefficient which, double length,
                                           const DetectorParams& detector_a,
                                           const DetectorParams& detector_b, double T,
                                           std::span<const int> cutoffs);

}  // namespace cavsig
