#include "cavsig/fourth_order.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavsig/numeric.hpp"

namespace cavsig {

namespace {

double mode_coeff(double length, double position, int mode) {
  return std::sin(mode * std::numbers::pi * position / length) /
         std::sqrt(mode * std::numbers::pi);
}

Complex window1(double L, double T, int k) {
  return nested_window_integral(L, T, {LatticeFreq{k}});
}
Complex window2(double L, double T, int k1, int k2) {
  return nested_window_integral(L, T, {LatticeFreq{k1}, LatticeFreq{k2}});
}
Complex window3(double L, double T, int k1, int k2, int k3) {
  return nested_window_integral(L, T, {LatticeFreq{k1}, LatticeFreq{k2}, LatticeFreq{k3}});
}

// Domain of one printed term. kPairOrdered integrates variables
// (t1 > t2) x (s1 > s2) with variable order [t1, t2, s1, s2]; kLineSimplex
// integrates s over [0, T] and (t1 > t2 > t3), variable order [s, t1, t2, t3].
enum class Domain { kPairOrdered, kLineSimplex };

struct FourPointTerm {
  Domain domain;
  std::array<int, 4> phase;                    // lattice phase per variable
  std::array<std::pair<char, int>, 4> slots;   // operator order: (detector, variable)
  bool add_conjugate;
  double sign;
};

// The six terms of the sender-receiver coefficient, for a signed sender gap
// index ga (negating ga yields the ground-state-sender coefficient).
std::vector<FourPointTerm> sender_receiver_terms(int ga, int nb) {
  return {
      // (t1>t2) x (s1>s2) block
      {Domain::kPairOrdered, {-ga, +nb, -nb, +ga},
       {{{'A', 3}, {'B', 2}, {'A', 0}, {'B', 1}}}, true, +1.0},
      {Domain::kPairOrdered, {-ga, +nb, +ga, -nb},
       {{{'B', 3}, {'A', 2}, {'A', 0}, {'B', 1}}}, false, +1.0},
      {Domain::kPairOrdered, {+nb, -ga, -nb, +ga},
       {{{'A', 3}, {'B', 2}, {'B', 0}, {'A', 1}}}, false, +1.0},
      // s x (t1>t2>t3) block
      {Domain::kLineSimplex, {-nb, +ga, -ga, +nb},
       {{{'B', 0}, {'A', 1}, {'A', 2}, {'B', 3}}}, true, -1.0},
      {Domain::kLineSimplex, {-nb, +ga, +nb, -ga},
       {{{'B', 0}, {'A', 1}, {'B', 2}, {'A', 3}}}, true, -1.0},
      {Domain::kLineSimplex, {-nb, +nb, +ga, -ga},
       {{{'B', 0}, {'B', 1}, {'A', 2}, {'A', 3}}}, true, -1.0},
  };
}

std::vector<FourPointTerm> single_detector_terms(int nb) {
  return {
      {Domain::kLineSimplex, {-nb, +nb, -nb, +nb},
       {{{'B', 0}, {'B', 1}, {'B', 2}, {'B', 3}}}, true, -1.0},
  };
}

constexpr std::array<std::array<int, 4>, 3> kPairings = {{
    {0, 1, 2, 3},  // (12)(34)
    {0, 2, 1, 3},  // (13)(24)
    {0, 3, 1, 2},  // (14)(23)
}};

struct PairEvaluator {
  double length;
  double T;
  std::vector<FourPointTerm> terms;
  std::vector<double> amp_a;  // amp_a[j], 1-based
  std::vector<double> amp_b;

  double amp(char det, int j) const { return det == 'A' ? amp_a[j] : amp_b[j]; }

  // Contribution of the ordered mode pair (j, l): j feeds the first Wick
  // factor, l the second.
  Complex contribution(int j, int l) const {
    Complex total{0.0, 0.0};
    for (const FourPointTerm& term : terms) {
      Complex term_value{0.0, 0.0};
      for (const auto& pairing : kPairings) {
        const auto& s0 = term.slots[pairing[0]];
        const auto& s1 = term.slots[pairing[1]];
        const auto& s2 = term.slots[pairing[2]];
        const auto& s3 = term.slots[pairing[3]];
        std::array<int, 4> freq = term.phase;
        freq[s0.second] -= j;
        freq[s1.second] += j;
        freq[s2.second] -= l;
        freq[s3.second] += l;
        const double coeff = amp(s0.first, j) * amp(s1.first, j) *
                             amp(s2.first, l) * amp(s3.first, l);
        if (coeff == 0.0) continue;
        Complex integral;
        if (term.domain == Domain::kPairOrdered) {
          integral = window2(length, T, freq[0], freq[1]) *
                     window2(length, T, freq[2], freq[3]);
        } else {
          integral = window1(length, T, freq[0]) *
                     window3(length, T, freq[1], freq[2], freq[3]);
        }
        term_value += coeff * integral;
      }
      if (term.add_conjugate) term_value += std::conj(term_value);
      total += term.sign * term_value;
    }
    return total;
  }
};

PairEvaluator make_evaluator(Coefficient which, double length, const DetectorParams& a,
                             const DetectorParams& b, double T, int max_mode) {
  PairEvaluator ev;
  ev.length = length;
  ev.T = T;
  switch (which) {
    case Coefficient::kA4:
      ev.terms = sender_receiver_terms(+a.resonance_mode, b.resonance_mode);
      break;
    case Coefficient::kB4:
      ev.terms = sender_receiver_terms(-a.resonance_mode, b.resonance_mode);
      break;
    case Coefficient::kP4:
      ev.terms = single_detector_terms(b.resonance_mode);
      break;
    default:
      throw std::invalid_argument("fourth_order: selector is not fourth order");
  }
  ev.amp_a.resize(max_mode + 1, 0.0);
  ev.amp_b.resize(max_mode + 1, 0.0);
  for (int j = 1; j <= max_mode; ++j) {
    if (which != Coefficient::kP4) ev.amp_a[j] = mode_coeff(length, a.position, j);
    ev.amp_b[j] = mode_coeff(length, b.position, j);
  }
  return ev;
}

std::vector<Complex> complex_by_cutoff(Coefficient which, double length, const DetectorParams& a,
                                       const DetectorParams& b, double T,
                                       std::span<const int> cutoffs) {
  if (cutoffs.empty()) throw std::invalid_argument("fourth_order_by_cutoff: empty cutoff list");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
      throw std::invalid_argument("fourth_order_by_cutoff: cutoffs must be >= 1 and increasing");
    }
  }
  validate(CavityConfig{length, cutoffs.back()}, b);
  if (which != Coefficient::kP4) validate(CavityConfig{length, cutoffs.back()}, a);
  validate_switching_time(T);

  const PairEvaluator ev = make_evaluator(which, length, a, b, T, cutoffs.back());
  std::vector<Complex> values;
  values.reserve(cutoffs.size());
  KahanSum<Complex> sum;
  std::size_t next = 0;
  // Shell N collects all mode pairs with max(j, l) == N, so the running sum
  // after shell N equals the full double sum at cutoff N.
  for (int shell = 1; shell <= cutoffs.back(); ++shell) {
    for (int j = 1; j < shell; ++j) {
      sum.add(ev.contribution(j, shell));
      sum.add(ev.contribution(shell, j));
    }
    sum.add(ev.contribution(shell, shell));
    while (next < cutoffs.size() && cutoffs[next] == shell) {
      values.push_back(sum.value());
      ++next;
    }
  }
  return values;
}

double real_with_residual_check(Complex value, double* residual) {
  const double imag = std::abs(value.imag());
  if (residual) *residual = std::max(*residual, imag);
  if (imag > 1e-9 * std::max(1.0, std::abs(value.real()))) {
    throw std::logic_error("fourth_order: assembled sum has a non-negligible imaginary part");
  }
  return value.real();
}

double compute_single(Coefficient which, const CavityConfig& cavity, const DetectorParams& a,
                      const DetectorParams& b, double T, double* residual = nullptr) {
  const std::array<int, 1> cut = {cavity.cutoff};
  const auto values = complex_by_cutoff(which, cavity.length, a, b, T, cut);
  return real_with_residual_check(values.front(), residual);
}

}  // namespace

std::array<FourPointContraction, 3> wick_four_point(
    const TwoPointExpansion& w12, const TwoPointExpansion& w13, const TwoPointExpansion& w14,
    const TwoPointExpansion& w23, const TwoPointExpansion& w24, const TwoPointExpansion& w34) {
  for (const TwoPointExpansion* w : {&w13, &w14, &w23, &w24, &w34}) {
    if (w->length != w12.length || w->entries.size() != w12.entries.size()) {
      throw std::invalid_argument("wick_four_point: expansions built from different cavities");
    }
  }
  return {FourPointContraction{w12, {0, 1}, w34, {2, 3}},
          FourPointContraction{w13, {0, 2}, w24, {1, 3}},
          FourPointContraction{w14, {0, 3}, w23, {1, 2}}};
}

Complex eval(const FourPointContraction& c, const std::array<double, 4>& times) {
  return eval(c.first, times[c.first_slots[0]], times[c.first_slots[1]]) *
         eval(c.second, times[c.second_slots[0]], times[c.second_slots[1]]);
}

Complex eval_four_point(const std::array<FourPointContraction, 3>& contractions,
                        const std::array<double, 4>& times) {
  Complex sum{0.0, 0.0};
  for (const FourPointContraction& c : contractions) sum += eval(c, times);
  return sum;
}

double compute_a4(const CavityConfig& cavity, const DetectorParams& a, const DetectorParams& b,
                  double T) {
  return compute_single(Coefficient::kA4, cavity, a, b, T);
}

double compute_b4(const CavityConfig& cavity, const DetectorParams& a, const DetectorParams& b,
                  double T) {
  return compute_single(Coefficient::kB4, cavity, a, b, T);
}

double compute_p4(const CavityConfig& cavity, const DetectorParams& b, double T) {
  return compute_single(Coefficient::kP4, cavity, b, b, T);
}

FourthOrderCoeffs compute_fourth_order(const CavityConfig& cavity, const DetectorParams& a,
                                       const DetectorParams& b, double T) {
  FourthOrderCoeffs out;
  out.a4 = compute_single(Coefficient::kA4, cavity, a, b, T, &out.imag_residual);
  out.b4 = compute_single(Coefficient::kB4, cavity, a, b, T, &out.imag_residual);
  out.p4 = compute_single(Coefficient::kP4, cavity, b, b, T, &out.imag_residual);
  if (out.p4 > 1e-12 * std::max(1.0, std::abs(out.p4))) {
    throw std::logic_error("fourth_order: single-detector correction must be non-positive");
  }
  out.provenance = ParameterSnapshot{cavity, a, b, T};
  return out;
}

std::vector<double> fourth_order_by_cutoff(Coefficient which, double length,
                                           const DetectorParams& a, const DetectorParams& b,
                                           double T, std::span<const int> cutoffs) {
  const auto complex_values = complex_by_cutoff(which, length, a, b, T, cutoffs);
  std::vector<double> values;
  values.reserve(complex_values.size());
  for (const Complex& v : complex_values) values.push_back(real_with_residual_check(v, nullptr));
  return values;
}

}  // namespace cavsig
