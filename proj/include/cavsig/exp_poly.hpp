#pragma once

#include <complex>
#include <span>
#include <vector>

// Exact algebra of exponential polynomials
//
//     p(t) = sum_i  c_i * t^m_i * exp(i k_i pi t / L),
//
// closed under multiplication and integration from 0. All frequencies live on
// the integer lattice k*pi/L, so the resonant case is detected by exact
// integer comparison (k == 0) and every iterated time integral that appears
// in the channel coefficients evaluates in closed form.

namespace cavsig {

using Complex = std::complex<double>;

/// Angular frequency k*pi/L, stored as the integer lattice index k.
struct LatticeFreq {
  int k = 0;

  bool resonant() const { return k == 0; }
  double angular(double length) const;

  friend auto operator<=>(const LatticeFreq&, const LatticeFreq&) = default;
  friend LatticeFreq operator+(LatticeFreq a, LatticeFreq b) { return {a.k + b.k}; }
  friend LatticeFreq operator-(LatticeFreq a) { return {-a.k}; }
};

/// One term c * t^power * exp(i freq t), freq on the lattice.
struct ExpTerm {
  Complex coeff{0.0, 0.0};
  int power = 0;
  LatticeFreq freq{};
};

// Powers above this bound indicate a runaway integration depth; the channel
// integrals never exceed 4.
inline constexpr int kMaxPower = 8;

class ExpPoly {
 public:
  explicit ExpPoly(double cavity_length) : length_(cavity_length) {}

  /// Builds a canonical polynomial from an arbitrary term list.
  static ExpPoly from_terms(double cavity_length, std::vector<ExpTerm> terms);
  /// c * t^power * exp(i k pi t / L).
  static ExpPoly harmonic(double cavity_length, LatticeFreq freq,
                          Complex coeff = {1.0, 0.0}, int power = 0);
  static ExpPoly constant(double cavity_length, Complex coeff);

  double cavity_length() const { return length_; }
  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Multiplies every term by c * exp(i k pi t / L) in place (stays canonical).
  ExpPoly& shift(LatticeFreq freq, Complex coeff = {1.0, 0.0});

  friend ExpPoly operator+(const ExpPoly& p, const ExpPoly& q);
  friend ExpPoly operator*(const ExpPoly& p, const ExpPoly& q);
  friend ExpPoly operator*(Complex c, const ExpPoly& p);

 private:
  std::vector<ExpTerm> terms_;  // sorted by (freq, power), merged, no zeros
  double length_;

  void canonicalize();
};

/// Pointwise product. Throws std::invalid_argument on mismatched L.
ExpPoly mul(const ExpPoly& p, const ExpPoly& q);

/// q(t) = integral of p over [0, t], exact; q(0) = 0.
ExpPoly integrate_from_zero(const ExpPoly& p);

Complex eval(const ExpPoly& p, double t);

/// Iterated ordered integral of a product of pure phases,
///
///   int_0^T dt1 e^{i f1 t1} int_0^{t1} dt2 e^{i f2 t2} ... int_0^{t_(d-1)} dt_d e^{i f_d t_d},
///
/// with the lattice frequencies listed outermost first. This is the one
/// integral shape every channel coefficient reduces to per mode.
Complex nested_window_integral(double cavity_length, double upper_time,
                               std::span<const LatticeFreq> freqs);

inline Complex nested_window_integral(double cavity_length, double upper_time,
                                      std::initializer_list<LatticeFreq> freqs) {
  return nested_window_integral(cavity_length, upper_time,
                                std::span<const LatticeFreq>(freqs.begin(), freqs.size()));
}

}  // namespace cavsig
