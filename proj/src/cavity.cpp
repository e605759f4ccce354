#include "cavsig/cavity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cavsig {

void validate(const CavityConfig& cavity) {
  if (!(cavity.length > 0.0)) {
    throw std::invalid_argument("cavity: length must be positive");
  }
  if (cavity.cutoff < 1) {
    throw std::invalid_argument("cavity: mode cutoff must be at least 1");
  }
}

void validate(const CavityConfig& cavity, const DetectorParams& detector) {
  validate(cavity);
  if (!(detector.position > 0.0) || !(detector.position < cavity.length)) {
    // A detector on a wall sits on a node of every mode and couples to nothing.
    throw std::invalid_argument("detector: position must lie strictly inside (0, L)");
  }
  if (detector.resonance_mode < 1) {
    throw std::invalid_argument("detector: resonance mode number must be >= 1");
  }
  if (!(detector.coupling >= 0.0)) {
    throw std::invalid_argument("detector: coupling must be non-negative");
  }
}

void validate_switching_time(double T) {
  if (!(T >= 0.0)) throw std::invalid_argument("switching time must be non-negative");
}

double mode_amplitude(const CavityConfig& cavity, int mode, double position) {
  validate(cavity);
  if (mode < 1 || mode > cavity.cutoff) {
    throw std::invalid_argument("mode_amplitude: mode index out of range, got " +
                                std::to_string(mode));
  }
  if (position < 0.0 || position > cavity.length) {
    throw std::invalid_argument("mode_amplitude: position outside [0, L]");
  }
  // omega_j L = j pi, so the normalization is L-independent.
  const double phase = mode * std::numbers::pi * position / cavity.length;
  return std::sin(phase) / std::sqrt(mode * std::numbers::pi);
}

TwoPointExpansion wightman(const CavityConfig& cavity, double x, double x_prime) {
  validate(cavity);
  TwoPointExpansion w;
  w.length = cavity.length;
  w.entries.reserve(cavity.cutoff);
  for (int j = 1; j <= cavity.cutoff; ++j) {
    w.entries.push_back(TwoPointEntry{
        mode_amplitude(cavity, j, x) * mode_amplitude(cavity, j, x_prime),
        LatticeFreq{-j}, LatticeFreq{+j}});
  }
  return w;
}

Complex eval(const TwoPointExpansion& w, double t, double t_prime) {
  const double base = std::numbers::pi / w.length;
  Complex sum{0.0, 0.0};
  for (const TwoPointEntry& e : w.entries) {
    sum += e.coeff * std::polar(1.0, e.freq_first.k * base * t + e.freq_second.k * base * t_prime);
  }
  return sum;
}

Complex commutator(const TwoPointExpansion& w, double t, double t_prime) {
  const Complex forward = eval(w, t, t_prime);
  // <phi(x',t') phi(x,t)> has the mode phases conjugated.
  return forward - std::conj(forward);
}

}  // namespace cavsig
