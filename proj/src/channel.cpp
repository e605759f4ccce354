#include "cavsig/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cavsig {

namespace {

constexpr double kDensityTol = 1e-12;

}  // namespace

DensityMatrix2 DensityMatrix2::ground() {
  return DensityMatrix2((Eigen::Matrix2cd() << 0, 0, 0, 1).finished());
}

DensityMatrix2 DensityMatrix2::excited() {
  return DensityMatrix2((Eigen::Matrix2cd() << 1, 0, 0, 0).finished());
}

DensityMatrix2 DensityMatrix2::plus() {
  return DensityMatrix2((Eigen::Matrix2cd() << 0.5, 0.5, 0.5, 0.5).finished());
}

DensityMatrix2 DensityMatrix2::minus() {
  return DensityMatrix2((Eigen::Matrix2cd() << 0.5, -0.5, -0.5, 0.5).finished());
}

DensityMatrix2 DensityMatrix2::from_entries(Complex ee, Complex eg, Complex ge, Complex gg) {
  if (std::abs(ee.imag()) > 1e-14 || std::abs(gg.imag()) > 1e-14) {
    throw std::invalid_argument("density matrix: diagonal entries must be real");
  }
  if (std::abs(ee + gg - 1.0) > 1e-14) {
    throw std::invalid_argument("density matrix: trace must equal 1");
  }
  if (std::abs(eg - std::conj(ge)) > 1e-14) {
    throw std::invalid_argument("density matrix: must be Hermitian");
  }
  if (std::norm(eg) > ee.real() * gg.real() + 1e-14) {
    throw std::invalid_argument("density matrix: must be positive semidefinite");
  }
  Eigen::Matrix2cd m;
  m << ee, eg, ge, gg;
  return DensityMatrix2(m);
}

DensityMatrix2 DensityMatrix2::unchecked(const Eigen::Matrix2cd& m) { return DensityMatrix2(m); }

double DensityMatrix2::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix2::is_ground(double tol) const {
  return std::abs(m_(0, 0)) <= tol && std::abs(m_(0, 1)) <= tol && std::abs(m_(1, 1) - 1.0) <= tol;
}

ChannelCoefficients compute_channel(const CavityConfig& cavity, const DetectorParams& a,
                                    const DetectorParams& b, double T, bool with_fourth_order) {
  ChannelCoefficients coeffs;
  coeffs.second = compute_second_order(cavity, a, b, T);
  if (with_fourth_order) coeffs.fourth = compute_fourth_order(cavity, a, b, T);
  coeffs.lambda_a = a.coupling;
  coeffs.lambda_b = b.coupling;
  return coeffs;
}

DensityMatrix2 apply_channel(const DensityMatrix2& rho_a, const DensityMatrix2& rho_b,
                             const ChannelCoefficients& coeffs) {
  if (coeffs.lambda_a < 0.0 || coeffs.lambda_b < 0.0) {
    throw std::invalid_argument("apply_channel: couplings must be non-negative");
  }
  const double la = coeffs.lambda_a;
  const double lb = coeffs.lambda_b;
  const double theta = rho_a.excited_population();
  const double beta = rho_a.ground_population();
  const Complex gamma = rho_a.coherence();
  const double phi = rho_b.excited_population();
  const double kappa = rho_b.ground_population();
  const Complex delta = rho_b.coherence();

  const NoiseCoeffs& n = coeffs.second.noise;
  const SignalCoeffs& s = coeffs.second.signal;

  // Excited-population shift; real by construction.
  double d_diag = lb * lb * (kappa * n.p2 + phi * n.q2) +
                  la * lb * 2.0 *
                      (gamma * (delta * s.d2 + std::conj(delta) * s.c2)).real();
  Complex d_offdiag = lb * lb * (delta * n.r2 + std::conj(delta) * std::conj(n.s2)) +
                      la * lb * (kappa - phi) * (gamma * s.c2 + std::conj(gamma) * std::conj(s.d2));

  if (coeffs.fourth.has_value()) {
    if (!rho_b.is_ground()) {
      throw std::invalid_argument(
          "apply_channel: fourth-order coefficients only apply to a ground-state receiver");
    }
    const FourthOrderCoeffs& f = *coeffs.fourth;
    d_diag += lb * lb * lb * lb * f.p4 + la * la * lb * lb * (theta * f.a4 + beta * f.b4);
  }

  Eigen::Matrix2cd out;
  out(0, 0) = phi + d_diag;
  out(1, 1) = kappa - d_diag;
  out(0, 1) = delta + d_offdiag;
  out(1, 0) = std::conj(out(0, 1));
  return DensityMatrix2::unchecked(out);
}

Probability fermi_probability(FermiInput which, const ChannelCoefficients& coeffs) {
  if (!coeffs.fourth.has_value()) {
    throw std::invalid_argument("fermi_probability: fourth-order coefficients required");
  }
  const double lb2 = coeffs.lambda_b * coeffs.lambda_b;
  const double la2 = coeffs.lambda_a * coeffs.lambda_a;
  const double noise = lb2 * coeffs.second.noise.p2 + lb2 * lb2 * coeffs.fourth->p4;
  const double sender =
      la2 * lb2 * (which == FermiInput::kExcited ? coeffs.fourth->a4 : coeffs.fourth->b4);
  const double p = noise + sender;
  return Probability{p, p < 0.0 || p > 1.0};
}

double plus_probability_at(const DensityMatrix2& rho_a, const ChannelCoefficients& coeffs,
                           double measurement_time) {
  const ParameterSnapshot& snap = coeffs.second.provenance;
  if (measurement_time < snap.switching_time) {
    throw std::invalid_argument("plus_probability_at: measurement must happen after switch-off");
  }
  const Complex gamma = rho_a.coherence();
  const double ll = coeffs.lambda_a * coeffs.lambda_b;
  const Complex c = ll * coeffs.second.signal.c2;
  const Complex d = ll * coeffs.second.signal.d2;
  const double omega_b =
      snap.detector_b.resonance_mode * std::numbers::pi / snap.cavity.length;
  const Complex phase = std::polar(1.0, -omega_b * measurement_time);
  return 0.5 + ((gamma * c + std::conj(gamma) * std::conj(d)) * phase).real();
}

Probability optimal_pm_probability(PmSign sign, const ChannelCoefficients& coeffs) {
  const double ll = coeffs.lambda_a * coeffs.lambda_b;
  const double swing =
      ll * std::abs(coeffs.second.signal.c2 + std::conj(coeffs.second.signal.d2));
  const double p = sign == PmSign::kPlus ? 0.5 + swing : 0.5 - swing;
  return Probability{p, p < 0.0 || p > 1.0};
}

std::optional<std::string> regime_warning(const ChannelCoefficients& coeffs) {
  if (!coeffs.fourth.has_value()) return std::nullopt;
  const double la2 = coeffs.lambda_a * coeffs.lambda_a;
  const double lb2 = coeffs.lambda_b * coeffs.lambda_b;
  const double sender = la2 * lb2 * std::max(std::abs(coeffs.fourth->a4),
                                             std::abs(coeffs.fourth->b4));
  const double noise = lb2 * coeffs.second.noise.p2;
  if (sender > 0.1 * noise) {
    std::ostringstream msg;
    msg << "sender terms (" << sender << ") exceed 10% of the second-order noise (" << noise
        << "); couplings are outside the perturbative regime";
    return msg.str();
  }
  return std::nullopt;
}

}  // namespace cavsig
