#include "cavsig/coefficient.hpp"

namespace cavsig {

std::string_view to_string(Coefficient c) {
  switch (c) {
    case Coefficient::kP2: return "P2";
    case Coefficient::kQ2: return "Q2";
    case Coefficient::kR2: return "R2";
    case Coefficient::kS2: return "S2";
    case Coefficient::kC2: return "C2";
    case Coefficient::kD2: return "D2";
    case Coefficient::kCD: return "CD";
    case Coefficient::kA4: return "A4";
    case Coefficient::kB4: return "B4";
    case Coefficient::kP4: return "P4";
  }
  return "?";
}

std::optional<Coefficient> parse_coefficient(std::string_view name) {
  if (name == "P2") return Coefficient::kP2;
  if (name == "Q2") return Coefficient::kQ2;
  if (name == "R2") return Coefficient::kR2;
  if (name == "S2") return Coefficient::kS2;
  if (name == "C2") return Coefficient::kC2;
  if (name == "D2") return Coefficient::kD2;
  if (name == "CD" || name == "C2+D2*") return Coefficient::kCD;
  if (name == "A4") return Coefficient::kA4;
  if (name == "B4") return Coefficient::kB4;
  if (name == "P4") return Coefficient::kP4;
  return std::nullopt;
}

}  // namespace cavsig
