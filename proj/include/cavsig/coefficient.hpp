#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cavsig {

/// Channel coefficient selectors used by sweeps, the quadrature oracle and
/// the CLI. CD stands for the combined signal amplitude C2 + conj(D2) that
/// sets the phase-coded detection probability.
enum class Coefficient { kP2, kQ2, kR2, kS2, kC2, kD2, kCD, kA4, kB4, kP4 };

constexpr bool is_fourth_order(Coefficient c) {
  return c == Coefficient::kA4 || c == Coefficient::kB4 || c == Coefficient::kP4;
}

constexpr bool needs_detector_a(Coefficient c) {
  switch (c) {
    case Coefficient::kC2:
    case Coefficient::kD2:
    case Coefficient::kCD:
    case Coefficient::kA4:
    case Coefficient::kB4:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(Coefficient c);
std::optional<Coefficient> parse_coefficient(std::string_view name);

}  // namespace cavsig
