#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cavsig/exp_poly.hpp"
#include "cavsig/oracle.hpp"
#include "helpers.hpp"

using namespace cavsig;
using testutil::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

ExpPoly random_poly(std::mt19937_64& gen, double length) {
  const int terms = testutil::uniform_int(gen, 1, 6);
  std::vector<ExpTerm> list;
  for (int i = 0; i < terms; ++i) {
    list.push_back(ExpTerm{{testutil::uniform(gen, -2.0, 2.0), testutil::uniform(gen, -2.0, 2.0)},
                           testutil::uniform_int(gen, 0, 3),
                           LatticeFreq{testutil::uniform_int(gen, -50, 50)}});
  }
  return ExpPoly::from_terms(length, std::move(list));
}

// Gauss-Legendre quadrature of p over [0, T]; the independent reference for
// every closed-form integral below.
Complex quadrature(const ExpPoly& p, double T, int nodes = 200) {
  const QuadratureRule rule = gauss_legendre(nodes);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * eval(p, T / 2.0 * (rule.nodes[i] + 1.0));
  }
  return T / 2.0 * sum;
}

bool same_terms(const ExpPoly& p, const ExpPoly& q) {
  if (p.terms().size() != q.terms().size()) return false;
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    const ExpTerm& a = p.terms()[i];
    const ExpTerm& b = q.terms()[i];
    if (a.freq != b.freq || a.power != b.power) return false;
    if (std::abs(a.coeff - b.coeff) > 1e-14 * (1.0 + std::abs(a.coeff))) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("exp_poly") {

TEST_CASE("inverse phases cancel to a constant") {
  const ExpPoly p = ExpPoly::harmonic(2.0, LatticeFreq{3});
  const ExpPoly q = ExpPoly::harmonic(2.0, LatticeFreq{-3});
  const ExpPoly prod = mul(p, q);
  REQUIRE(prod.terms().size() == 1);
  CHECK(prod.terms()[0].freq.k == 0);
  CHECK(prod.terms()[0].power == 0);
  CHECK(prod.terms()[0].coeff == Complex{1.0, 0.0});
}

TEST_CASE("powers add under multiplication") {
  const ExpPoly p = ExpPoly::harmonic(1.5, LatticeFreq{2}, {1.0, 0.0}, 1);  // t e^{iat}
  const ExpPoly q = ExpPoly::harmonic(1.5, LatticeFreq{0}, {1.0, 0.0}, 1);  // t
  const ExpPoly prod = mul(p, q);
  REQUIRE(prod.terms().size() == 1);
  CHECK(prod.terms()[0].power == 2);
  CHECK(prod.terms()[0].freq.k == 2);
}

TEST_CASE("binomial expansion merges terms") {
  const ExpPoly s =
      ExpPoly::harmonic(1.0, LatticeFreq{1}) + ExpPoly::harmonic(1.0, LatticeFreq{-1});
  const ExpPoly sq = mul(s, s);
  REQUIRE(sq.terms().size() == 3);
  CHECK(sq.terms()[0].freq.k == -2);
  CHECK(sq.terms()[1].freq.k == 0);
  CHECK(sq.terms()[1].coeff == Complex{2.0, 0.0});
  CHECK(sq.terms()[2].freq.k == 2);
}

TEST_CASE("constant integrates to t") {
  const ExpPoly one = ExpPoly::constant(1.0, {1.0, 0.0});
  const ExpPoly t = integrate_from_zero(one);
  REQUIRE(t.terms().size() == 1);
  CHECK(t.terms()[0].power == 1);
  CHECK(t.terms()[0].freq.k == 0);
  CHECK(eval(t, 3.5) == Complex{3.5, 0.0});
}

TEST_CASE("pure phase integrates with lower-limit term") {
  const double L = 2.0;
  const ExpPoly p = ExpPoly::harmonic(L, LatticeFreq{1});
  const ExpPoly q = integrate_from_zero(p);
  const double a = kPi / L;
  for (double t : {0.3, 1.0, 2.7}) {
    const Complex expected = (std::polar(1.0, a * t) - 1.0) / Complex{0.0, a};
    CHECK(std::abs(eval(q, t) - expected) < 1e-14);
  }
}

TEST_CASE("t e^{iat} matches quadrature at the endpoint") {
  const ExpPoly p = ExpPoly::harmonic(1.0, LatticeFreq{1}, {1.0, 0.0}, 1);
  const double T = 1.7;
  CHECK(rel_diff(eval(integrate_from_zero(p), T), quadrature(p, T)) < 1e-12);
}

TEST_CASE("eval basics") {
  const ExpPoly t2 = ExpPoly::harmonic(1.0, LatticeFreq{0}, {1.0, 0.0}, 2);
  CHECK(eval(t2, 3.0) == Complex{9.0, 0.0});
  const double L = 10.0;
  const ExpPoly phase = ExpPoly::harmonic(L, LatticeFreq{1});
  CHECK(std::abs(eval(phase, L) - Complex{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("closed-form integrals match quadrature on random polynomials") {
  auto gen = testutil::rng(0x5eed01);
  for (int trial = 0; trial < 100; ++trial) {
    const double L = testutil::uniform(gen, 0.5, 10.0);
    const ExpPoly p = random_poly(gen, L);
    const ExpPoly ip = integrate_from_zero(p);
    const double T = testutil::uniform(gen, 0.1, 3.0);
    CHECK(rel_diff(eval(ip, T), quadrature(p, T), 1e-9) < 1e-10);
  }
}

TEST_CASE("integral vanishes at zero exactly") {
  auto gen = testutil::rng(0x5eed02);
  for (int trial = 0; trial < 20; ++trial) {
    const ExpPoly p = random_poly(gen, 3.0);
    CHECK(eval(integrate_from_zero(p), 0.0) == Complex{0.0, 0.0});
  }
}

TEST_CASE("derivative of the integral reproduces the integrand") {
  // Central differences with Richardson extrapolation: O(h^4) residual.
  auto gen = testutil::rng(0x5eed03);
  for (int trial = 0; trial < 10; ++trial) {
    const ExpPoly p = random_poly(gen, 2.0);
    const ExpPoly ip = integrate_from_zero(p);
    const double t = testutil::uniform(gen, 0.2, 1.5);
    const auto diff = [&](double h) { return (eval(ip, t + h) - eval(ip, t - h)) / (2.0 * h); };
    const double h = 1e-3;
    const Complex richardson = (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
    double scale = 0.0;
    for (const ExpTerm& term : p.terms()) scale += std::abs(term.coeff);
    CHECK(std::abs(richardson - eval(p, t)) < 1e-8 * std::max(1.0, scale));
  }
}

TEST_CASE("multiplication is commutative and associative") {
  auto gen = testutil::rng(0x5eed04);
  for (int trial = 0; trial < 20; ++trial) {
    const ExpPoly p = random_poly(gen, 4.0);
    const ExpPoly q = random_poly(gen, 4.0);
    const ExpPoly r = random_poly(gen, 4.0);
    CHECK(same_terms(mul(p, q), mul(q, p)));
    CHECK(same_terms(mul(mul(p, q), r), mul(p, mul(q, r))));
  }
}

TEST_CASE("integration is linear") {
  auto gen = testutil::rng(0x5eed05);
  const ExpPoly p = random_poly(gen, 2.5);
  const ExpPoly q = random_poly(gen, 2.5);
  const Complex alpha{0.7, -0.2}, beta{-1.1, 0.4};
  const ExpPoly lhs = integrate_from_zero(alpha * p + beta * q);
  const ExpPoly rhs = alpha * integrate_from_zero(p) + beta * integrate_from_zero(q);
  for (double t : {0.0, 0.4, 1.9}) {
    CHECK(std::abs(eval(lhs, t) - eval(rhs, t)) < 1e-12);
  }
}

TEST_CASE("canonicalization is idempotent") {
  auto gen = testutil::rng(0x5eed06);
  const ExpPoly p = random_poly(gen, 1.0);
  const ExpPoly again = ExpPoly::from_terms(p.cavity_length(), p.terms());
  CHECK(same_terms(p, again));
}

TEST_CASE("mismatched cavity lengths are a configuration error") {
  const ExpPoly p = ExpPoly::constant(1.0, {1.0, 0.0});
  const ExpPoly q = ExpPoly::constant(2.0, {1.0, 0.0});
  CHECK_THROWS_AS(mul(p, q), std::invalid_argument);
  CHECK_THROWS_AS(p + q, std::invalid_argument);
}

TEST_CASE("runaway powers are rejected") {
  const ExpPoly t4 = ExpPoly::harmonic(1.0, LatticeFreq{0}, {1.0, 0.0}, 4);
  const ExpPoly t5 = ExpPoly::harmonic(1.0, LatticeFreq{0}, {1.0, 0.0}, 5);
  CHECK_THROWS_AS(mul(t4, t5), std::logic_error);
}

TEST_CASE("nested window integral reduces to known forms") {
  const double L = kPi;
  const double T = 1.3;
  // d = 1, resonant: T itself.
  CHECK(std::abs(nested_window_integral(L, T, {LatticeFreq{0}}) - Complex{T, 0.0}) < 1e-15);
  // d = 2, both resonant: T^2/2.
  CHECK(std::abs(nested_window_integral(L, T, {LatticeFreq{0}, LatticeFreq{0}}) -
                 Complex{T * T / 2.0, 0.0}) < 1e-14);
  // d = 3 against iterated quadrature on a lattice triple.
  const QuadratureRule rule = gauss_legendre(48);
  const auto phase = [&](int k, double t) { return std::polar(1.0, k * kPi * t / L); };
  Complex ref{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t1 = T / 2.0 * (rule.nodes[i] + 1.0);
    Complex mid{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t2 = t1 / 2.0 * (rule.nodes[j] + 1.0);
      Complex inner{0.0, 0.0};
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t3 = t2 / 2.0 * (rule.nodes[k] + 1.0);
        inner += rule.weights[k] * phase(-1, t3);
      }
      mid += rule.weights[j] * (t2 / 2.0) * inner * phase(3, t2);
    }
    ref += rule.weights[i] * (t1 / 2.0) * mid * phase(2, t1);
  }
  ref *= T / 2.0;
  const Complex closed =
      nested_window_integral(L, T, {LatticeFreq{2}, LatticeFreq{3}, LatticeFreq{-1}});
  CHECK(rel_diff(closed, ref) < 1e-12);
}

}  // TEST_SUITE
