#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "cavsig/channel.hpp"
#include "cavsig/coefficient.hpp"

// Two independent verification engines for the analytic coefficients: nested
// Gauss-Legendre quadrature of the printed time integrals, and a
// non-perturbative time evolution of the full interaction Hamiltonian on a
// truncated Fock space. Both are deliberately written against the raw
// integrand/Hamiltonian definitions rather than reusing the closed-form
// machinery they certify.

namespace cavsig {

/// Thrown when a request exceeds the desk-scale cost guards.
struct cost_guard_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

/// Direct numerical evaluation of the selected coefficient over its printed
/// integration domain. Cost guards: cutoff <= 10 for the second-order (2D)
/// selectors; cutoff <= 3 and nodes_per_dim <= 64 for the fourth-order (4D)
/// ones.
Complex quad_coefficient(Coefficient which, const CavityConfig& cavity,
                         const DetectorParams& detector_a, const DetectorParams& detector_b,
                         double T, int nodes_per_dim);

/// Field Fock space truncated to `modes` modes and at most `photon_cap` total
/// quanta; occupation vectors are enumerated lexicographically. The composite
/// space is detector_A x detector_B x field.
class FockBasis {
 public:
  FockBasis(int modes, int photon_cap);  // modes <= 4, photon_cap <= 3

  int modes() const { return modes_; }
  int photon_cap() const { return photon_cap_; }
  int field_dimension() const { return static_cast<int>(occupations_.size()); }
  int dimension() const { return 4 * field_dimension(); }
  const std::vector<std::vector<int>>& occupations() const { return occupations_; }

  /// Field-space annihilation operator for `mode` (1-based).
  Eigen::MatrixXd lowering(int mode) const;

 private:
  int modes_;
  int photon_cap_;
  std::vector<std::vector<int>> occupations_;
};

struct EvolutionResult {
  Eigen::MatrixXcd u;
  double unitarity_defect = 0.0;
  double step = 0.0;
};

/// Integrates dU/dt = -i H_I(t) U from the identity over [0, T] with a
/// classical 4th-order one-step method. Both detectors couple with their own
/// lambda; mode frequencies and amplitudes come from `cavity` geometry (the
/// cavity cutoff is ignored, the basis fixes the retained modes).
EvolutionResult evolve_operator(const CavityConfig& cavity, const DetectorParams& detector_a,
                                const DetectorParams& detector_b, double T,
                                const FockBasis& basis, int steps);

/// Bob's reduced state from a computed evolution operator and product inputs
/// (field starts in the vacuum).
DensityMatrix2 bob_state(const EvolutionResult& evolution, const FockBasis& basis,
                         const DensityMatrix2& rho_a, const DensityMatrix2& rho_b);

/// Full pipeline with guards: stability bound ||H_I|| T <= 10, unitarity
/// defect <= 1e-8, and a step-halving consistency check below 1e-9.
DensityMatrix2 evolve_nonperturbative(const DensityMatrix2& rho_a, const DensityMatrix2& rho_b,
                                      const CavityConfig& cavity,
                                      const DetectorParams& detector_a,
                                      const DetectorParams& detector_b, double T,
                                      const FockBasis& basis, int steps);

/// |Tr rho_T^(order)| assembled from the Dyson operators U^(k), k <= order;
/// vanishes identically for the exact operators.
double dyson_trace_check(const CavityConfig& cavity, const DetectorParams& detector_a,
                         const DetectorParams& detector_b, double T, const FockBasis& basis,
                         int order, const DensityMatrix2& rho_a, const DensityMatrix2& rho_b,
                         int steps);

}  // namespace cavsig
