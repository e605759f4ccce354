#include "cavsig/oracle.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace cavsig {

namespace {

using Eigen::MatrixXcd;

constexpr Complex kImagUnit{0.0, 1.0};

double detector_gap(const CavityConfig& cavity, const DetectorParams& d) {
  return d.resonance_mode * std::numbers::pi / cavity.length;
}

// ---------------------------------------------------------------- quadrature

Complex quad_square(const QuadratureRule& rule, double T,
                    const std::function<Complex(double, double)>& f) {
  const double half = T / 2.0;
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t1 = half * (rule.nodes[i] + 1.0);
    Complex inner{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t2 = half * (rule.nodes[j] + 1.0);
      inner += rule.weights[j] * f(t1, t2);
    }
    sum += rule.weights[i] * half * inner;
  }
  return half * sum;
}

// Triangle t1 in [0, T], t2 in [0, t1]; the inner nodes are remapped per
// slice so the rule keeps its spectral accuracy on smooth integrands.
Complex quad_ordered(const QuadratureRule& rule, double T,
                     const std::function<Complex(double, double)>& f) {
  const double half = T / 2.0;
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t1 = half * (rule.nodes[i] + 1.0);
    const double inner_half = t1 / 2.0;
    Complex inner{0.0, 0.0};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t2 = inner_half * (rule.nodes[j] + 1.0);
      inner += rule.weights[j] * f(t1, t2);
    }
    sum += rule.weights[i] * inner_half * inner;
  }
  return half * sum;
}

// (t1 > t2) x (s1 > s2).
Complex quad_pair_ordered(const QuadratureRule& rule, double T,
                          const std::function<Complex(double, double, double, double)>& f) {
  return quad_ordered(rule, T, [&](double t1, double t2) {
    return quad_ordered(rule, T, [&](double s1, double s2) { return f(t1, t2, s1, s2); });
  });
}

// s in [0, T] x (t1 > t2 > t3).
Complex quad_line_simplex(const QuadratureRule& rule, double T,
                          const std::function<Complex(double, double, double, double)>& f) {
  const double half = T / 2.0;
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = half * (rule.nodes[i] + 1.0);
    const Complex inner = quad_ordered(rule, T, [&](double t1, double t2) {
      const double h3 = t2 / 2.0;
      Complex innermost{0.0, 0.0};
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t3 = h3 * (rule.nodes[k] + 1.0);
        innermost += rule.weights[k] * f(s, t1, t2, t3);
      }
      return h3 * innermost;
    });
    sum += rule.weights[i] * inner;
  }
  return half * sum;
}

struct QuadContext {
  double omega_a;
  double omega_b;
  TwoPointExpansion w_aa;
  TwoPointExpansion w_ab;
  TwoPointExpansion w_bb;

  Complex pair(char d1, double t1, char d2, double t2) const {
    if (d1 == 'A' && d2 == 'A') return eval(w_aa, t1, t2);
    if (d1 == 'B' && d2 == 'B') return eval(w_bb, t1, t2);
    return eval(w_ab, t1, t2);
  }

  // Vacuum 4-point via the three Wick pairings, operator order as listed.
  Complex four(char d1, double t1, char d2, double t2, char d3, double t3, char d4,
               double t4) const {
    return pair(d1, t1, d2, t2) * pair(d3, t3, d4, t4) +
           pair(d1, t1, d3, t3) * pair(d2, t2, d4, t4) +
           pair(d1, t1, d4, t4) * pair(d2, t2, d3, t3);
  }
};

Complex quad_fourth(Coefficient which, const QuadContext& ctx, const QuadratureRule& rule,
                    double T) {
  const double wa = which == Coefficient::kB4 ? -ctx.omega_a : ctx.omega_a;
  const double wb = ctx.omega_b;
  const auto phase = [](double arg) { return std::polar(1.0, arg); };

  if (which == Coefficient::kP4) {
    const Complex block =
        quad_line_simplex(rule, T, [&](double s, double t1, double t2, double t3) {
          const Complex v = phase(wb * (t1 - t2 + t3 - s)) *
                            ctx.four('B', s, 'B', t1, 'B', t2, 'B', t3);
          return v + std::conj(v);
        });
    return -block;
  }

  const Complex block1 =
      quad_pair_ordered(rule, T, [&](double t1, double t2, double s1, double s2) {
        const Complex v1 = phase(wb * (t2 - s1) - wa * (t1 - s2)) *
                           ctx.four('A', s2, 'B', s1, 'A', t1, 'B', t2);
        const Complex v2 = phase(wb * (t2 - s2) - wa * (t1 - s1)) *
                           ctx.four('B', s2, 'A', s1, 'A', t1, 'B', t2);
        const Complex v3 = phase(wb * (t1 - s1) - wa * (t2 - s2)) *
                           ctx.four('A', s2, 'B', s1, 'B', t1, 'A', t2);
        return v1 + std::conj(v1) + v2 + v3;
      });
  const Complex block2 =
      quad_line_simplex(rule, T, [&](double s, double t1, double t2, double t3) {
        const Complex v4 = phase(wb * (t3 - s) + wa * (t1 - t2)) *
                           ctx.four('B', s, 'A', t1, 'A', t2, 'B', t3);
        const Complex v5 = phase(wb * (t2 - s) + wa * (t1 - t3)) *
                           ctx.four('B', s, 'A', t1, 'B', t2, 'A', t3);
        const Complex v6 = phase(wb * (t1 - s) + wa * (t2 - t3)) *
                           ctx.four('B', s, 'B', t1, 'A', t2, 'A', t3);
        return v4 + std::conj(v4) + v5 + std::conj(v5) + v6 + std::conj(v6);
      });
  return block1 - block2;
}

// ------------------------------------------------------------ fock evolution

Eigen::MatrixXcd kron3(const Eigen::Matrix2cd& qa, const Eigen::Matrix2cd& qb,
                       const Eigen::MatrixXcd& field) {
  const int f = static_cast<int>(field.rows());
  Eigen::MatrixXcd out(4 * f, 4 * f);
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          out.block((a1 * 2 + b1) * f, (a2 * 2 + b2) * f, f, f) = qa(a1, a2) * qb(b1, b2) * field;
  return out;
}

struct InteractionHamiltonian {
  std::vector<MatrixXcd> parts;
  std::vector<double> freqs;
  double norm_bound = 0.0;
  int dim = 0;

  void assemble(double t, MatrixXcd& h) const {
    h.setZero(dim, dim);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      h += std::polar(1.0, freqs[i] * t) * parts[i];
    }
  }
};

InteractionHamiltonian build_hamiltonian(const CavityConfig& cavity, const DetectorParams& da,
                                         const DetectorParams& db, const FockBasis& basis) {
  InteractionHamiltonian ham;
  ham.dim = basis.dimension();
  Eigen::Matrix2cd sigma_plus;
  sigma_plus << 0, 1, 0, 0;  // |e><g| in the (e, g) basis
  const Eigen::Matrix2cd sigma_minus = sigma_plus.adjoint();
  const Eigen::Matrix2cd id2 = Eigen::Matrix2cd::Identity();

  const double sqrt_cap = std::sqrt(static_cast<double>(basis.photon_cap()));
  for (int which = 0; which < 2; ++which) {
    const DetectorParams& det = which == 0 ? da : db;
    const double gap = detector_gap(cavity, det);
    double amp_sum = 0.0;
    for (int j = 1; j <= basis.modes(); ++j) {
      const double omega = j * std::numbers::pi / cavity.length;
      const double amp = std::sin(j * std::numbers::pi * det.position / cavity.length) /
                         std::sqrt(omega * cavity.length);
      amp_sum += std::abs(amp);
      const Eigen::MatrixXcd raise_field = basis.lowering(j).transpose().cast<Complex>();
      const Eigen::MatrixXcd lower_field = basis.lowering(j).cast<Complex>();
      const auto add = [&](const Eigen::Matrix2cd& qubit_op, const Eigen::MatrixXcd& field_op,
                           double freq) {
        Eigen::MatrixXcd part =
            which == 0 ? kron3(qubit_op, id2, field_op) : kron3(id2, qubit_op, field_op);
        ham.parts.push_back(det.coupling * amp * part);
        ham.freqs.push_back(freq);
      };
      add(sigma_plus, raise_field, gap + omega);
      add(sigma_plus, lower_field, gap - omega);
      add(sigma_minus, raise_field, -gap + omega);
      add(sigma_minus, lower_field, -gap - omega);
    }
    // ||mu (x) phi_j|| <= 2 sqrt(cap) per mode
    ham.norm_bound += det.coupling * amp_sum * 2.0 * sqrt_cap;
  }
  return ham;
}

Eigen::MatrixXcd product_initial_state(const FockBasis& basis, const DensityMatrix2& rho_a,
                                       const DensityMatrix2& rho_b) {
  const int f = basis.field_dimension();
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(f, f);
  vac(0, 0) = 1.0;  // all-zero occupation is lexicographically first
  return kron3(rho_a.matrix(), rho_b.matrix(), vac);
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: need at least 2 nodes");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

Complex quad_coefficient(Coefficient which, const CavityConfig& cavity, const DetectorParams& da,
                         const DetectorParams& db, double T, int nodes_per_dim) {
  validate(cavity, db);
  if (needs_detector_a(which)) validate(cavity, da);
  validate_switching_time(T);
  if (is_fourth_order(which)) {
    if (cavity.cutoff > 3 || nodes_per_dim > 64) {
      throw cost_guard_error("quad_coefficient: 4D request exceeds cost guard");
    }
  } else if (cavity.cutoff > 10) {
    throw cost_guard_error("quad_coefficient: 2D request exceeds cost guard");
  }
  if (T == 0.0) return Complex{0.0, 0.0};

  const QuadratureRule rule = gauss_legendre(nodes_per_dim);
  // Noise selectors never touch the sender; keep them usable with a
  // default-constructed detector A.
  const DetectorParams& a_or_b = needs_detector_a(which) ? da : db;
  QuadContext ctx{detector_gap(cavity, a_or_b), detector_gap(cavity, db),
                  wightman(cavity, a_or_b.position, a_or_b.position),
                  wightman(cavity, a_or_b.position, db.position),
                  wightman(cavity, db.position, db.position)};
  const auto phase = [](double arg) { return std::polar(1.0, arg); };

  switch (which) {
    case Coefficient::kP2:
      return quad_square(rule, T, [&](double t1, double t2) {
        return phase(ctx.omega_b * (t1 - t2)) * eval(ctx.w_bb, t2, t1);
      });
    case Coefficient::kQ2:
      return -quad_square(rule, T, [&](double t1, double t2) {
        return phase(-ctx.omega_b * (t1 - t2)) * eval(ctx.w_bb, t2, t1);
      });
    case Coefficient::kR2:
      return -quad_ordered(rule, T, [&](double t1, double t2) {
        return phase(ctx.omega_b * (t1 - t2)) *
               (eval(ctx.w_bb, t1, t2) + eval(ctx.w_bb, t2, t1));
      });
    case Coefficient::kS2:
      return quad_square(rule, T, [&](double t1, double t2) {
        return phase(-ctx.omega_b * (t1 + t2)) * eval(ctx.w_bb, t2, t1);
      });
    case Coefficient::kC2:
      return quad_ordered(rule, T, [&](double t1, double t2) {
        return phase(ctx.omega_b * t1 - ctx.omega_a * t2) * commutator(ctx.w_ab, t2, t1);
      });
    case Coefficient::kD2:
      return quad_ordered(rule, T, [&](double t1, double t2) {
        return phase(-(ctx.omega_b * t1 + ctx.omega_a * t2)) * (-commutator(ctx.w_ab, t2, t1));
      });
    case Coefficient::kCD: {
      const Complex c2 = quad_coefficient(Coefficient::kC2, cavity, da, db, T, nodes_per_dim);
      const Complex d2 = quad_coefficient(Coefficient::kD2, cavity, da, db, T, nodes_per_dim);
      return c2 + std::conj(d2);
    }
    case Coefficient::kA4:
    case Coefficient::kB4:
    case Coefficient::kP4:
      return quad_fourth(which, ctx, rule, T);
  }
  throw std::invalid_argument("quad_coefficient: unknown selector");
}

FockBasis::FockBasis(int modes, int photon_cap) : modes_(modes), photon_cap_(photon_cap) {
  if (modes < 1 || modes > 4) throw cost_guard_error("fock basis: modes must be in [1, 4]");
  if (photon_cap < 0 || photon_cap > 3) {
    throw cost_guard_error("fock basis: photon cap must be in [0, 3]");
  }
  std::vector<int> occ(modes, 0);
  // lexicographic enumeration of all occupation vectors with sum <= cap
  const auto total = [&occ] { int s = 0; for (int m : occ) s += m; return s; };
  while (true) {
    occupations_.push_back(occ);
    int pos = modes - 1;
    while (pos >= 0) {
      ++occ[pos];
      if (total() <= photon_cap) break;
      occ[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

Eigen::MatrixXd FockBasis::lowering(int mode) const {
  if (mode < 1 || mode > modes_) throw std::invalid_argument("fock basis: mode out of range");
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < occupations_.size(); ++i) {
    index[occupations_[i]] = static_cast<int>(i);
  }
  const int f = field_dimension();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(f, f);
  for (int col = 0; col < f; ++col) {
    std::vector<int> occ = occupations_[col];
    const int quanta = occ[mode - 1];
    if (quanta == 0) continue;
    occ[mode - 1] -= 1;
    a(index.at(occ), col) = std::sqrt(static_cast<double>(quanta));
  }
  return a;
}

EvolutionResult evolve_operator(const CavityConfig& cavity, const DetectorParams& da,
                                const DetectorParams& db, double T, const FockBasis& basis,
                                int steps) {
  validate(cavity, da);
  validate(cavity, db);
  validate_switching_time(T);
  if (steps < 1) throw std::invalid_argument("evolve_operator: need at least one step");

  const InteractionHamiltonian ham = build_hamiltonian(cavity, da, db, basis);
  const int dim = ham.dim;
  const double h = T / steps;

  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  MatrixXcd h_t(dim, dim), h_mid(dim, dim), h_next(dim, dim);
  MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim);
  ham.assemble(0.0, h_t);
  for (int step = 0; step < steps; ++step) {
    const double t = step * h;
    ham.assemble(t + 0.5 * h, h_mid);
    ham.assemble(t + h, h_next);
    k1.noalias() = -kImagUnit * (h_t * u);
    k2.noalias() = -kImagUnit * (h_mid * (u + (0.5 * h) * k1));
    k3.noalias() = -kImagUnit * (h_mid * (u + (0.5 * h) * k2));
    k4.noalias() = -kImagUnit * (h_next * (u + h * k3));
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    h_t.swap(h_next);
  }

  EvolutionResult result;
  result.unitarity_defect = (u.adjoint() * u - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  result.u = std::move(u);
  result.step = h;
  return result;
}

DensityMatrix2 bob_state(const EvolutionResult& evolution, const FockBasis& basis,
                         const DensityMatrix2& rho_a, const DensityMatrix2& rho_b) {
  const int f = basis.field_dimension();
  // The field starts in the vacuum, so only the four vacuum columns of U
  // enter rho_T = U rho_0 U^dagger.
  Eigen::Matrix2cd reduced = Eigen::Matrix2cd::Zero();
  for (int a1 = 0; a1 < 2; ++a1)
    for (int b1 = 0; b1 < 2; ++b1)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          const Complex weight = rho_a.matrix()(a1, a2) * rho_b.matrix()(b1, b2);
          if (weight == Complex{0.0, 0.0}) continue;
          const auto col_p = evolution.u.col((a1 * 2 + b1) * f);
          const auto col_q = evolution.u.col((a2 * 2 + b2) * f);
          for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib)
              for (int ibp = 0; ibp < 2; ++ibp) {
                Complex acc{0.0, 0.0};
                const int row_base = (ia * 2 + ib) * f;
                const int row_base_p = (ia * 2 + ibp) * f;
                for (int ff = 0; ff < f; ++ff) {
                  acc += col_p(row_base + ff) * std::conj(col_q(row_base_p + ff));
                }
                reduced(ib, ibp) += weight * acc;
              }
        }
  return DensityMatrix2::unchecked(reduced);
}

DensityMatrix2 evolve_nonperturbative(const DensityMatrix2& rho_a, const DensityMatrix2& rho_b,
                                      const CavityConfig& cavity, const DetectorParams& da,
                                      const DetectorParams& db, double T, const FockBasis& basis,
                                      int steps) {
  const InteractionHamiltonian ham = build_hamiltonian(cavity, da, db, basis);
  if (ham.norm_bound * T > 10.0) {
    throw std::invalid_argument("evolve_nonperturbative: ||H_I|| T exceeds the stability guard");
  }
  const EvolutionResult coarse = evolve_operator(cavity, da, db, T, basis, steps);
  const EvolutionResult fine = evolve_operator(cavity, da, db, T, basis, 2 * steps);
  if (coarse.unitarity_defect > 1e-8 || fine.unitarity_defect > 1e-8) {
    throw std::runtime_error("evolve_nonperturbative: unitarity defect above 1e-8");
  }
  const DensityMatrix2 rho_coarse = bob_state(coarse, basis, rho_a, rho_b);
  const DensityMatrix2 rho_fine = bob_state(fine, basis, rho_a, rho_b);
  const double defect =
      (rho_coarse.matrix() - rho_fine.matrix()).cwiseAbs().maxCoeff();
  if (defect > 1e-9) {
    throw std::runtime_error("evolve_nonperturbative: step-halving check failed");
  }
  return rho_fine;
}

double dyson_trace_check(const CavityConfig& cavity, const DetectorParams& da,
                         const DetectorParams& db, double T, const FockBasis& basis, int order,
                         const DensityMatrix2& rho_a, const DensityMatrix2& rho_b, int steps) {
  if (order < 1 || order > 4) {
    throw cost_guard_error("dyson_trace_check: order must be in [1, 4]");
  }
  validate(cavity, da);
  validate(cavity, db);
  validate_switching_time(T);

  const InteractionHamiltonian ham = build_hamiltonian(cavity, da, db, basis);
  const int dim = ham.dim;
  const double h = T / steps;

  // v[k] approximates the k-th Dyson operator; v[0] stays the identity.
  std::vector<MatrixXcd> v(order + 1, MatrixXcd::Zero(dim, dim));
  v[0] = MatrixXcd::Identity(dim, dim);
  std::vector<MatrixXcd> k1(order + 1), k2(order + 1), k3(order + 1), k4(order + 1);
  MatrixXcd h_t(dim, dim), h_mid(dim, dim), h_next(dim, dim);
  ham.assemble(0.0, h_t);
  for (int step = 0; step < steps; ++step) {
    const double t = step * h;
    ham.assemble(t + 0.5 * h, h_mid);
    ham.assemble(t + h, h_next);
    for (int k = 1; k <= order; ++k) k1[k].noalias() = -kImagUnit * (h_t * v[k - 1]);
    for (int k = 1; k <= order; ++k) {
      const MatrixXcd stage = k == 1 ? v[0] : MatrixXcd(v[k - 1] + (0.5 * h) * k1[k - 1]);
      k2[k].noalias() = -kImagUnit * (h_mid * stage);
    }
    for (int k = 1; k <= order; ++k) {
      const MatrixXcd stage = k == 1 ? v[0] : MatrixXcd(v[k - 1] + (0.5 * h) * k2[k - 1]);
      k3[k].noalias() = -kImagUnit * (h_mid * stage);
    }
    for (int k = 1; k <= order; ++k) {
      const MatrixXcd stage = k == 1 ? v[0] : MatrixXcd(v[k - 1] + h * k3[k - 1]);
      k4[k].noalias() = -kImagUnit * (h_next * stage);
    }
    for (int k = 1; k <= order; ++k) {
      v[k] += (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    }
    h_t.swap(h_next);
  }

  const Eigen::MatrixXcd rho0 = product_initial_state(basis, rho_a, rho_b);
  Complex trace{0.0, 0.0};
  for (int k = 0; k <= order; ++k) {
    trace += (v[order - k] * rho0 * v[k].adjoint()).trace();
  }
  return std::abs(trace);
}

}  // namespace cavsig
