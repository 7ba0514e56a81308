#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trion/am_algebra.hpp"
#include "trion/basis.hpp"
#include "trion/errors.hpp"
#include "trion/labels.hpp"
#include "trion/potentials.hpp"

namespace trion {

inline constexpr double kMassR = 0.5;
inline constexpr double kMassBigR = 2.0 / 3.0;

struct GammaSearch {
  double lower = 0.2;
  double upper = 5.0;
  int grid_points = 11;
  double relative_width = 1e-4;
};

struct SolverOptions {
  int n_max = 20;
  std::optional<double> fixed_gamma;  ///< skip the search and use this width scale
  GammaSearch search;
  SymmetrizeOptions symmetrize;
  RadialQuadratureOptions quadrature;
};

/// One eigenstate of an (L, parity, statistics) series. `coefficients` are
/// over the raw coupled labels of `basis`; `reduced` over its orthonormal set.
struct Eigenstate {
  int L = 0;
  Parity parity = Parity::Even;
  Statistics statistics = Statistics::Boson;
  int index = 1;
  double energy = 0.0;
  double gamma = 1.0;
  bool gamma_at_boundary = false;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd reduced;
  std::shared_ptr<const SymmetrizedBasisSet> basis;

  const std::vector<BasisLabel>& labels() const { return basis->labels; }
  std::string name() const { return std::to_string(L) + parity_char(parity); }
};

/// H_int over the raw labels: h(1/2, r) + h(2/3, R) + 3 V(r), with basis
/// widths gamma/2 and 2 gamma/3. The pair potential only touches r, so its
/// block is diagonal in (l_a, n_b, l_b).
inline Eigen::SparseMatrix<double> raw_hamiltonian(const std::vector<BasisLabel>& labels, const InteractionModel& model,
                                                   double gamma, const RadialQuadratureOptions& quad = {}) {
  const int dim = static_cast<int>(labels.size());
  std::unordered_map<BasisLabel, int, BasisLabelHash> index;
  int la_max = 0, na_max = 0;
  for (int i = 0; i < dim; ++i) {
    index.emplace(labels[i], i);
    la_max = std::max(la_max, labels[i].la);
    na_max = std::max(na_max, labels[i].na);
  }
  const RadialIntegralTable v = radial_matrix_elements(model, kMassR * gamma, la_max, na_max, quad);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < dim; ++col) {
    const BasisLabel& k = labels[col];
    for (int na = 0; na <= na_max; ++na) {
      const auto it = index.find({na, k.la, k.nb, k.lb});
      if (it == index.end()) continue;
      double value = 3.0 * v.at(k.la, na, k.na);
      if (std::abs(na - k.na) <= 1) value += ho_onebody_matrix(na, k.na, k.la, kMassR, gamma);
      if (na == k.na) value += ho_onebody_matrix(k.nb, k.nb, k.lb, kMassBigR, gamma);
      triplets.emplace_back(it->second, col, value);
    }
    for (int nb : {k.nb - 1, k.nb + 1}) {
      if (nb < 0) continue;
      const auto it = index.find({k.na, k.la, nb, k.lb});
      if (it == index.end()) continue;
      triplets.emplace_back(it->second, col, ho_onebody_matrix(nb, k.nb, k.lb, kMassBigR, gamma));
    }
  }
  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

/// H in the orthonormal symmetrized set: C H_raw C^T.
inline Eigen::MatrixXd assemble_hamiltonian(const SymmetrizedBasisSet& set, const InteractionModel& model, double gamma,
                                            const RadialQuadratureOptions& quad = {}) {
  if (set.nonexistent()) throw NonexistentStateError("assemble_hamiltonian: empty symmetrized basis");
  const Eigen::SparseMatrix<double> h = raw_hamiltonian(set.labels, model, gamma, quad);
  const Eigen::MatrixXd hc = h * set.coeffs.transpose();
  Eigen::MatrixXd out = set.coeffs * hc;
  // Symmetrize away round-off so downstream checks see an exactly symmetric matrix.
  out = 0.5 * (out + out.transpose()).eval();
  return out;
}

struct Diagonalization {
  Eigen::VectorXd energies;  ///< ascending
  Eigen::MatrixXd vectors;   ///< columns
};

inline void require_finite(const Eigen::MatrixXd& h) {
  if (!h.allFinite()) throw NumericalError("Hamiltonian has non-finite entries");
}

inline Diagonalization diagonalize(const Eigen::MatrixXd& h) {
  require_finite(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

inline double lowest_energy(const SymmetrizedBasisSet& set, const InteractionModel& model, double gamma,
                            const RadialQuadratureOptions& quad = {}) {
  const Eigen::MatrixXd h = assemble_hamiltonian(set, model, gamma, quad);
  require_finite(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  return es.eigenvalues()(0);
}

struct GammaOptimum {
  double gamma = 1.0;
  double energy = 0.0;
  bool at_boundary = false;
  std::vector<std::pair<double, double>> grid;  ///< coarse (gamma, energy) samples
};

/// Log-spaced coarse scan, then golden section in log(gamma) around the best
/// grid point until the bracket's relative width drops below the target.
inline GammaOptimum optimize_gamma(const SymmetrizedBasisSet& set, const InteractionModel& model,
                                   const GammaSearch& search = {}, const RadialQuadratureOptions& quad = {}) {
  if (!(search.lower > 0.0) || !(search.upper > search.lower) || search.grid_points < 3)
    throw ConfigError("gamma search needs 0 < lower < upper and at least 3 grid points");
  auto energy_at = [&](double log_gamma) { return lowest_energy(set, model, std::exp(log_gamma), quad); };

  GammaOptimum out;
  const double lo = std::log(search.lower), hi = std::log(search.upper);
  const int n = search.grid_points;
  std::vector<double> xs(n), es(n);
  int best = 0;
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    es[i] = energy_at(xs[i]);
    out.grid.emplace_back(std::exp(xs[i]), es[i]);
    if (es[i] < es[best]) best = i;
  }

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, n - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = energy_at(c), fd = energy_at(d);
  while (b - a > search.relative_width) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = energy_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = energy_at(d);
    }
  }
  double x_star = fc < fd ? c : d;
  double e_star = std::min(fc, fd);
  if (es[best] < e_star) {
    x_star = xs[best];
    e_star = es[best];
  }
  out.gamma = std::exp(x_star);
  out.energy = e_star;
  const double edge = search.relative_width;
  out.at_boundary = (x_star - lo) < edge || (hi - x_star) < edge;
  return out;
}

namespace detail {

/// Sign fixed so the largest raw coefficient is positive.
inline void fix_sign(Eigenstate& s) {
  Eigen::Index i = 0;
  s.coefficients.cwiseAbs().maxCoeff(&i);
  if (s.coefficients(i) < 0.0) {
    s.coefficients = -s.coefficients;
    s.reduced = -s.reduced;
  }
}

}  // namespace detail

/// The lowest `count` states of a series at fixed gamma.
inline std::vector<Eigenstate> solve_series(const std::shared_ptr<const SymmetrizedBasisSet>& set,
                                            const InteractionModel& model, double gamma, int count,
                                            const RadialQuadratureOptions& quad = {}) {
  if (set->nonexistent())
    throw NonexistentStateError("series " + std::to_string(set->L) + parity_char(set->parity) + " (" +
                                to_string(set->statistics) + ") has no allowed basis functions");
  const Diagonalization diag = diagonalize(assemble_hamiltonian(*set, model, gamma, quad));
  std::vector<Eigenstate> out;
  const int available = static_cast<int>(diag.energies.size());
  for (int i = 0; i < std::min(count, available); ++i) {
    Eigenstate s;
    s.L = set->L;
    s.parity = set->parity;
    s.statistics = set->statistics;
    s.index = i + 1;
    s.energy = diag.energies(i);
    s.gamma = gamma;
    s.reduced = diag.vectors.col(i);
    s.coefficients = set->coeffs.transpose() * s.reduced;
    detail::fix_sign(s);
    s.basis = set;
    out.push_back(std::move(s));
  }
  return out;
}

/// States 1..count of the series, with gamma optimized on the first state
/// (or fixed by the options) and shared by the higher ones.
inline std::vector<Eigenstate> solve_states(Statistics statistics, int L, Parity parity, int count,
                                            const InteractionModel& model, const SolverOptions& opt = {}) {
  const auto set = BasisCache::global().get(statistics, L, parity, opt.n_max, opt.symmetrize);
  if (set->nonexistent())
    throw NonexistentStateError("series " + std::to_string(L) + parity_char(parity) + " (" + to_string(statistics) +
                                ") has no allowed basis functions");
  double gamma = 1.0;
  bool boundary = false;
  if (opt.fixed_gamma) {
    if (!(*opt.fixed_gamma > 0.0)) throw ConfigError("fixed gamma must be positive");
    gamma = *opt.fixed_gamma;
  } else {
    const GammaOptimum g = optimize_gamma(*set, model, opt.search, opt.quadrature);
    gamma = g.gamma;
    boundary = g.at_boundary;
  }
  auto states = solve_series(set, model, gamma, count, opt.quadrature);
  for (auto& s : states) s.gamma_at_boundary = boundary;
  return states;
}

/// The i-th (1-based) state of a series.
inline Eigenstate solve_state(Statistics statistics, int L, Parity parity, int i, const InteractionModel& model,
                              const SolverOptions& opt = {}) {
  if (i < 1) throw ConfigError("state index must be >= 1");
  auto states = solve_states(statistics, L, parity, i, model, opt);
  if (static_cast<int>(states.size()) < i)
    throw NonexistentStateError("series " + std::to_string(L) + parity_char(parity) + " has only " +
                                std::to_string(states.size()) + " states at this truncation");
  return states[i - 1];
}

}  // namespace trion
