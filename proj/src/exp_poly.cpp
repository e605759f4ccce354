#include "cavsig/exp_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavsig {

namespace {

constexpr double kCoeffUnderflow = 1e-300;  // underflow guard, not a tolerance

void require_same_length(const ExpPoly& p, const ExpPoly& q) {
  if (p.cavity_length() != q.cavity_length()) {
    throw std::invalid_argument("exp_poly: operands built for different cavity lengths");
  }
}

}  // namespace

double LatticeFreq::angular(double length) const {
  return static_cast<double>(k) * std::numbers::pi / length;
}

void ExpPoly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const ExpTerm& a, const ExpTerm& b) {
    if (a.freq != b.freq) return a.freq < b.freq;
    return a.power < b.power;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    ExpTerm merged = terms_[i];
    std::size_t j = i + 1;
    while (j < terms_.size() && terms_[j].freq == merged.freq && terms_[j].power == merged.power) {
      merged.coeff += terms_[j].coeff;
      ++j;
    }
    if (merged.power > kMaxPower) {
      throw std::logic_error("exp_poly: time power exceeds supported integration depth");
    }
    if (std::abs(merged.coeff) >= kCoeffUnderflow) {
      terms_[out++] = merged;
    }
    i = j;
  }
  terms_.resize(out);
}

ExpPoly ExpPoly::from_terms(double cavity_length, std::vector<ExpTerm> terms) {
  if (!(cavity_length > 0.0)) {
    throw std::invalid_argument("exp_poly: cavity length must be positive");
  }
  ExpPoly p(cavity_length);
  p.terms_ = std::move(terms);
  p.canonicalize();
  return p;
}

ExpPoly ExpPoly::harmonic(double cavity_length, LatticeFreq freq, Complex coeff, int power) {
  return from_terms(cavity_length, {ExpTerm{coeff, power, freq}});
}

ExpPoly ExpPoly::constant(double cavity_length, Complex coeff) {
  return harmonic(cavity_length, LatticeFreq{0}, coeff, 0);
}

ExpPoly& ExpPoly::shift(LatticeFreq freq, Complex coeff) {
  for (ExpTerm& term : terms_) {
    term.freq = term.freq + freq;
    term.coeff *= coeff;
  }
  // A uniform frequency shift preserves the (freq, power) order; only the
  // zero-coefficient sweep could change term count.
  if (std::abs(coeff) < kCoeffUnderflow) terms_.clear();
  return *this;
}

ExpPoly operator+(const ExpPoly& p, const ExpPoly& q) {
  require_same_length(p, q);
  std::vector<ExpTerm> terms = p.terms_;
  terms.insert(terms.end(), q.terms_.begin(), q.terms_.end());
  return ExpPoly::from_terms(p.cavity_length(), std::move(terms));
}

ExpPoly operator*(const ExpPoly& p, const ExpPoly& q) { return mul(p, q); }

ExpPoly operator*(Complex c, const ExpPoly& p) {
  std::vector<ExpTerm> terms = p.terms();
  for (ExpTerm& term : terms) term.coeff *= c;
  return ExpPoly::from_terms(p.cavity_length(), std::move(terms));
}

ExpPoly mul(const ExpPoly& p, const ExpPoly& q) {
  require_same_length(p, q);
  std::vector<ExpTerm> terms;
  terms.reserve(p.terms().size() * q.terms().size());
  for (const ExpTerm& a : p.terms()) {
    for (const ExpTerm& b : q.terms()) {
      terms.push_back(ExpTerm{a.coeff * b.coeff, a.power + b.power, a.freq + b.freq});
    }
  }
  return ExpPoly::from_terms(p.cavity_length(), std::move(terms));
}

ExpPoly integrate_from_zero(const ExpPoly& p) {
  std::vector<ExpTerm> terms;
  terms.reserve(2 * p.terms().size() + 2);
  for (const ExpTerm& term : p.terms()) {
    if (term.freq.resonant()) {
      // c t^m -> c t^(m+1)/(m+1)
      terms.push_back(ExpTerm{term.coeff / double(term.power + 1), term.power + 1, term.freq});
      continue;
    }
    // c t^m e^{at} (a = i k pi / L) integrates by parts into
    //   e^{at} sum_{r=0..m} (-1)^r c m!/(m-r)! / a^(r+1) t^(m-r)
    // minus its value at t = 0, which lands on the zero-frequency lattice point.
    const Complex alpha{0.0, term.freq.angular(p.cavity_length())};
    Complex c = term.coeff / alpha;
    for (int r = 0; r <= term.power; ++r) {
      terms.push_back(ExpTerm{c, term.power - r, term.freq});
      if (r < term.power) c *= -double(term.power - r) / alpha;
    }
    terms.push_back(ExpTerm{-c, 0, LatticeFreq{0}});  // lower-limit contribution
  }
  return ExpPoly::from_terms(p.cavity_length(), std::move(terms));
}

Complex eval(const ExpPoly& p, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("exp_poly: eval at non-finite time");
  const double base_angle = std::numbers::pi * t / p.cavity_length();
  Complex sum{0.0, 0.0};
  for (const ExpTerm& term : p.terms()) {
    double tm = 1.0;
    for (int r = 0; r < term.power; ++r) tm *= t;
    sum += term.coeff * tm * std::polar(1.0, term.freq.k * base_angle);
  }
  return sum;
}

Complex nested_window_integral(double cavity_length, double upper_time,
                               std::span<const LatticeFreq> freqs) {
  if (freqs.empty()) throw std::invalid_argument("nested_window_integral: no integrand");
  ExpPoly acc = ExpPoly::harmonic(cavity_length, freqs.back());
  for (auto it = freqs.rbegin(); it != freqs.rend(); ++it) {
    if (it != freqs.rbegin()) acc.shift(*it);
    acc = integrate_from_zero(acc);
  }
  return eval(acc, upper_time);
}

}  // namespace cavsig
