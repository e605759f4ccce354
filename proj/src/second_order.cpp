#include "cavsig/second_order.hpp"

#include <array>
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

// int_0^T dt1 e^{i k1 pi t1/L} int_0^{t1} dt2 e^{i k2 pi t2/L}
Complex window2(double L, double T, int k1, int k2) {
  return nested_window_integral(L, T, {LatticeFreq{k1}, LatticeFreq{k2}});
}

}  // namespace

NoiseCoeffs noise_mode_term(double length, const DetectorParams& b, double T, int mode) {
  const int n = b.resonance_mode;
  const double sj = mode_coeff(length, b.position, mode);
  const double weight = sj * sj;
  NoiseCoeffs term;
  term.p2 = weight * std::norm(window1(length, T, n + mode));
  term.q2 = -weight * std::norm(window1(length, T, mode - n));
  term.r2 = -weight * (window2(length, T, n - mode, mode - n) +
                       window2(length, T, n + mode, -n - mode));
  term.s2 = weight * window1(length, T, mode - n) * window1(length, T, -mode - n);
  return term;
}

SignalCoeffs signal_mode_term(double length, const DetectorParams& a, const DetectorParams& b,
                              double T, int mode) {
  const int na = a.resonance_mode;
  const int nb = b.resonance_mode;
  const double weight =
      mode_coeff(length, a.position, mode) * mode_coeff(length, b.position, mode);
  SignalCoeffs term;
  // Commutator [phi_A(t2), phi_B(t1)] splits per mode into two phase products.
  term.c2 = weight * (window2(length, T, nb + mode, -na - mode) -
                      window2(length, T, nb - mode, mode - na));
  term.d2 = weight * (window2(length, T, -nb - mode, mode - na) -
                      window2(length, T, -nb + mode, -na - mode));
  term.g2 = -term.c2;
  term.h2 = -term.d2;
  term.i2 = term.d2;
  term.j2 = term.c2;
  return term;
}

NoiseCoeffs compute_noise(const CavityConfig& cavity, const DetectorParams& b, double T) {
  validate(cavity, b);
  validate_switching_time(T);
  KahanSum<double> p2, q2;
  KahanSum<Complex> r2, s2;
  for (int j = 1; j <= cavity.cutoff; ++j) {
    const NoiseCoeffs term = noise_mode_term(cavity.length, b, T, j);
    p2.add(term.p2);
    q2.add(term.q2);
    r2.add(term.r2);
    s2.add(term.s2);
  }
  return NoiseCoeffs{p2.value(), q2.value(), r2.value(), s2.value()};
}

SignalCoeffs compute_signal(const CavityConfig& cavity, const DetectorParams& a,
                            const DetectorParams& b, double T) {
  validate(cavity, a);
  validate(cavity, b);
  validate_switching_time(T);
  KahanSum<Complex> c2, d2;
  for (int j = 1; j <= cavity.cutoff; ++j) {
    const SignalCoeffs term = signal_mode_term(cavity.length, a, b, T, j);
    c2.add(term.c2);
    d2.add(term.d2);
  }
  SignalCoeffs out;
  out.c2 = c2.value();
  out.d2 = d2.value();
  out.g2 = -out.c2;
  out.h2 = -out.d2;
  out.i2 = out.d2;
  out.j2 = out.c2;
  return out;
}

SecondOrderCoeffs compute_second_order(const CavityConfig& cavity, const DetectorParams& a,
                                       const DetectorParams& b, double T) {
  SecondOrderCoeffs out;
  out.noise = compute_noise(cavity, b, T);
  out.signal = compute_signal(cavity, a, b, T);
  out.provenance = ParameterSnapshot{cavity, a, b, T};
  return out;
}

std::vector<Complex> second_order_by_cutoff(Coefficient which, double length,
                                            const DetectorParams& a, const DetectorParams& b,
                                            double T, std::span<const int> cutoffs) {
  if (is_fourth_order(which)) {
    throw std::invalid_argument("second_order_by_cutoff: fourth-order selector");
  }
  if (cutoffs.empty()) throw std::invalid_argument("second_order_by_cutoff: empty cutoff list");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 1 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
      throw std::invalid_argument("second_order_by_cutoff: cutoffs must be >= 1 and increasing");
    }
  }
  validate(CavityConfig{length, cutoffs.back()}, b);
  if (needs_detector_a(which)) validate(CavityConfig{length, cutoffs.back()}, a);
  validate_switching_time(T);

  std::vector<Complex> values;
  values.reserve(cutoffs.size());
  KahanSum<Complex> sum;
  std::size_t next = 0;
  for (int j = 1; j <= cutoffs.back(); ++j) {
    Complex term;
    switch (which) {
      case Coefficient::kP2: term = noise_mode_term(length, b, T, j).p2; break;
      case Coefficient::kQ2: term = noise_mode_term(length, b, T, j).q2; break;
      case Coefficient::kR2: term = noise_mode_term(length, b, T, j).r2; break;
      case Coefficient::kS2: term = noise_mode_term(length, b, T, j).s2; break;
      case Coefficient::kC2: term = signal_mode_term(length, a, b, T, j).c2; break;
      case Coefficient::kD2: term = signal_mode_term(length, a, b, T, j).d2; break;
      case Coefficient::kCD: {
        const SignalCoeffs s = signal_mode_term(length, a, b, T, j);
        term = s.c2 + std::conj(s.d2);
        break;
      }
      default: throw std::invalid_argument("second_order_by_cutoff: bad selector");
    }
    sum.add(term);
    while (next < cutoffs.size() && cutoffs[next] == j) {
      values.push_back(sum.value());
      ++next;
    }
  }
  return values;
}

namespace {

// One Dyson term of the unsimplified second-order assembly: a two-point
// factor, an optional sender trace factor Gamma_A on one time variable, and a
// 2x2 matrix of receiver entries with per-variable phases. Vars are (t1, t2);
// `ordered` integrates t2 over [0, t1], otherwise over the full square.
struct RawEntry {
  Complex scalar;  // rho_B entry
  int k1 = 0;      // Omega_B phase on t1, in units of n_B
  int k2 = 0;      // and on t2
};

struct RawTerm {
  bool ordered = true;
  double sign = -1.0;
  bool with_gamma = false;  // lambda_A lambda_B class
  int gamma_var = 0;        // 0 -> t1, 1 -> t2
  bool w_first_is_t1 = true;  // W(. t1; . t2) if true, W(. t2; . t1) otherwise
  char det_first = 'B';     // detectors inside the two-point factor,
  char det_second = 'B';    // in operator order
  std::array<std::array<RawEntry, 2>, 2> m;
};

}  // namespace

Eigen::Matrix2cd second_order_raw_correction(const CavityConfig& cavity, const DetectorParams& a,
                                             const DetectorParams& b, double T,
                                             const TwoLevelEntries& rho_a,
                                             const TwoLevelEntries& rho_b) {
  validate(cavity, a);
  validate(cavity, b);
  validate_switching_time(T);
  const double L = cavity.length;
  const int na = a.resonance_mode;
  const int nb = b.resonance_mode;

  const Complex ee = rho_b.ee, eg = rho_b.eg, ge = rho_b.ge, gg = rho_b.gg;

  // Matrix layouts that recur among the terms (phases in units of n_B).
  const auto m_type1 = [&](int var) {  // [[d* e^{+}, k e^{+}], [f e^{-}, d e^{-}]]
    std::array<std::array<RawEntry, 2>, 2> m{};
    const int k1 = var == 0 ? nb : 0;
    const int k2 = var == 1 ? nb : 0;
    m[0][0] = {ge, k1, k2};
    m[0][1] = {gg, k1, k2};
    m[1][0] = {ee, -k1, -k2};
    m[1][1] = {eg, -k1, -k2};
    return m;
  };
  const auto m_type2 = [&](int var) {  // [[d e^{-}, f e^{+}], [k e^{-}, d* e^{+}]]
    std::array<std::array<RawEntry, 2>, 2> m{};
    const int k1 = var == 0 ? nb : 0;
    const int k2 = var == 1 ? nb : 0;
    m[0][0] = {eg, -k1, -k2};
    m[0][1] = {ee, k1, k2};
    m[1][0] = {gg, -k1, -k2};
    m[1][1] = {ge, k1, k2};
    return m;
  };

  std::vector<RawTerm> terms;
  // Time-ordered block, sender-receiver cross terms.
  terms.push_back({true, -1.0, true, 0, true, 'A', 'B', m_type1(1)});
  terms.push_back({true, -1.0, true, 1, true, 'B', 'A', m_type1(0)});
  terms.push_back({true, -1.0, true, 1, false, 'A', 'B', m_type2(0)});
  terms.push_back({true, -1.0, true, 0, false, 'B', 'A', m_type2(1)});
  // Time-ordered block, receiver-only terms.
  {
    RawTerm t{true, -1.0, false, 0, true, 'B', 'B', {}};
    t.m[0][0] = {ee, nb, -nb};
    t.m[0][1] = {eg, nb, -nb};
    t.m[1][0] = {ge, -nb, nb};
    t.m[1][1] = {gg, -nb, nb};
    terms.push_back(t);
    RawTerm u{true, -1.0, false, 0, false, 'B', 'B', {}};
    u.m[0][0] = {ee, -nb, nb};
    u.m[0][1] = {eg, nb, -nb};
    u.m[1][0] = {ge, -nb, nb};
    u.m[1][1] = {gg, nb, -nb};
    terms.push_back(u);
  }
  // Full-square block from U1 rho U1^dagger.
  terms.push_back({false, +1.0, true, 0, false, 'B', 'A', m_type2(1)});
  terms.push_back({false, +1.0, true, 1, false, 'A', 'B', m_type1(0)});
  {
    RawTerm t{false, +1.0, false, 0, false, 'B', 'B', {}};
    t.m[0][0] = {gg, nb, -nb};
    t.m[0][1] = {ge, nb, nb};
    t.m[1][0] = {eg, -nb, -nb};
    t.m[1][1] = {ee, -nb, nb};
    terms.push_back(t);
  }

  const auto amp = [&](char det, int j) {
    return det == 'A' ? mode_coeff(L, a.position, j) : mode_coeff(L, b.position, j);
  };

  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (const RawTerm& term : terms) {
    for (int j = 1; j <= cavity.cutoff; ++j) {
      const double w = amp(term.det_first, j) * amp(term.det_second, j);
      const int kw1 = term.w_first_is_t1 ? -j : +j;
      const int kw2 = -kw1;
      // Gamma_A(t) = gamma e^{-i Omega_A t} + gamma* e^{+i Omega_A t}, or 1.
      const std::array<std::pair<Complex, int>, 2> gamma_pieces =
          term.with_gamma
              ? std::array<std::pair<Complex, int>, 2>{{{rho_a.eg, -na}, {rho_a.ge, +na}}}
              : std::array<std::pair<Complex, int>, 2>{{{Complex{1.0, 0.0}, 0},
                                                        {Complex{0.0, 0.0}, 0}}};
      for (const auto& [gamma_scalar, gamma_k] : gamma_pieces) {
        if (gamma_scalar == Complex{0.0, 0.0}) continue;
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            const RawEntry& entry = term.m[r][c];
            if (entry.scalar == Complex{0.0, 0.0}) continue;
            int k1 = kw1 + entry.k1;
            int k2 = kw2 + entry.k2;
            if (term.gamma_var == 0) k1 += gamma_k; else k2 += gamma_k;
            const Complex integral =
                term.ordered ? window2(L, T, k1, k2)
                             : window1(L, T, k1) * window1(L, T, k2);
            out(r, c) += term.sign * w * gamma_scalar * entry.scalar * integral;
          }
        }
      }
    }
  }
  return out;
}

RawSecondOrder second_order_from_raw(const CavityConfig& cavity, const DetectorParams& a,
                                     const DetectorParams& b, double T) {
  const TwoLevelEntries zero{};
  TwoLevelEntries theta = zero;   theta.ee = 1.0;
  TwoLevelEntries gamma = zero;   gamma.eg = 1.0;
  TwoLevelEntries b_ground = zero; b_ground.gg = 1.0;
  TwoLevelEntries b_excited = zero; b_excited.ee = 1.0;
  TwoLevelEntries b_delta = zero;  b_delta.eg = 1.0;
  TwoLevelEntries b_delta_conj = zero; b_delta_conj.ge = 1.0;

  RawSecondOrder out;
  const auto raw = [&](const TwoLevelEntries& ra, const TwoLevelEntries& rb) {
    return second_order_raw_correction(cavity, a, b, T, ra, rb);
  };
  out.p2 = raw(theta, b_ground)(0, 0).real();
  out.q2 = raw(theta, b_excited)(0, 0).real();
  out.r2 = raw(theta, b_delta)(0, 1);
  out.s2 = raw(theta, b_delta)(1, 0);
  const Eigen::Matrix2cd kappa_block = raw(gamma, b_ground);
  out.c2 = kappa_block(0, 1);
  out.d2 = kappa_block(1, 0);
  const Eigen::Matrix2cd phi_block = raw(gamma, b_excited);
  out.g2 = phi_block(0, 1);
  out.h2 = phi_block(1, 0);
  out.i2 = raw(gamma, b_delta)(0, 0);
  out.j2 = raw(gamma, b_delta_conj)(0, 0);
  return out;
}

}  // namespace cavsig
