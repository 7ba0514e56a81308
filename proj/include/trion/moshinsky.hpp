#pragma once

// Oscillator brackets for orthogonal transformations of the mass-weighted
// Jacobi pair (xi, eta) = (sqrt(1/2) r, sqrt(2/3) R).
//
// In mass-weighted coordinates both Jacobi oscillators share the width gamma,
// so a relabeling of the particles is an O(2) transformation of (xi, eta)
// and the coupled product functions of one oscillator shell N = 2(n_a+n_b)+l_a+l_b
// mix only among themselves. A proper rotation by angle alpha,
//
//   (xi', eta') = (cos a xi - sin a eta, sin a xi + cos a eta),
//
// acts on functions as exp(alpha D) with the shell-diagonal generator
//
//   D = xi . grad_eta - eta . grad_xi = a_xi^+ . a_eta - a_eta^+ . a_xi .
//
// The bracket matrix of a shell is obtained by exponentiating D exactly
// through the spectral decomposition of the Hermitian matrix iD.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trion/am_algebra.hpp"
#include "trion/labels.hpp"

namespace trion {

/// Relabeling of three particles: new particle i is old particle image[i-1]
/// (labels are 1-based), i.e. r'_i = r_{image[i-1]}.
struct Permutation {
  std::array<int, 3> image{1, 2, 3};

  static Permutation identity() { return {}; }

  /// The six elements of S3; identity first, then transpositions, then cycles.
  static std::array<Permutation, 6> all() {
    return {Permutation{{1, 2, 3}}, Permutation{{2, 1, 3}}, Permutation{{3, 2, 1}},
            Permutation{{1, 3, 2}}, Permutation{{2, 3, 1}}, Permutation{{3, 1, 2}}};
  }

  int sign() const noexcept {
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (image[i] > image[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
  }

  int operator()(int label) const { return image.at(label - 1); }

  /// (this o other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const {
    Permutation out;
    for (int i = 0; i < 3; ++i) out.image[i] = image[other.image[i] - 1];
    return out;
  }

  Permutation inverse() const {
    Permutation out;
    for (int i = 0; i < 3; ++i) out.image[image[i] - 1] = i + 1;
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

/// 2x2 orthogonal map on (xi, eta), row-major.
struct JacobiRotation {
  std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

  static JacobiRotation rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return JacobiRotation{{{{c, -s}, {s, c}}}};
  }

  double determinant() const noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

  /// Max deviation of M M^T from the identity.
  double orthogonality_defect() const noexcept {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double v = m[i][0] * m[j][0] + m[i][1] * m[j][1] - (i == j ? 1.0 : 0.0);
        worst = std::max(worst, std::abs(v));
      }
    return worst;
  }

  bool proper() const noexcept { return determinant() > 0.0; }

  /// Rotation angle of a proper map.
  double angle() const { return std::atan2(m[1][0], m[0][0]); }

  JacobiRotation operator*(const JacobiRotation& o) const {
    JacobiRotation out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j];
    return out;
  }
};

/// Permutation action factored as full = proper * (xi -> -xi)^{xi_inversion}.
/// The inversion contributes the phase (-1)^{l_a} on the expanded functions.
struct PermutationTransform {
  JacobiRotation full;
  JacobiRotation proper;
  double angle = 0.0;
  int xi_inversion = 0;
};

inline PermutationTransform permutation_rotation(const Permutation& perm) {
  // Particle positions relative to the c.m. as coefficients of (r, R).
  constexpr std::array<std::array<double, 2>, 3> pos{{{-0.5, -1.0 / 3.0}, {0.5, -1.0 / 3.0}, {0.0, 2.0 / 3.0}}};
  auto p = [&](int label) { return pos[perm(label) - 1]; };
  const auto p1 = p(1);
  const auto p2 = p(2);
  const auto p3 = p(3);
  const std::array<double, 2> r_new{p2[0] - p1[0], p2[1] - p1[1]};
  const std::array<double, 2> big_r_new{p3[0] - 0.5 * (p1[0] + p2[0]), p3[1] - 0.5 * (p1[1] + p2[1])};

  const double a = std::sqrt(0.5);        // xi = a r
  const double b = std::sqrt(2.0 / 3.0);  // eta = b R
  PermutationTransform t;
  t.full.m = {{{r_new[0], a / b * r_new[1]}, {b / a * big_r_new[0], big_r_new[1]}}};
  if (t.full.determinant() < 0.0) {
    t.xi_inversion = 1;
    t.proper.m = {{{-t.full.m[0][0], t.full.m[0][1]}, {-t.full.m[1][0], t.full.m[1][1]}}};
  } else {
    t.proper = t.full;
  }
  t.angle = t.proper.angle();
  return t;
}

namespace detail {

/// <n' l' m+mu| (a^+)_mu |n l m> for the unit-width 3D oscillator.
inline double creation_element(int np, int lp, int n, int l, int m, int mu) {
  if (np == n && lp == l + 1)
    return std::sqrt((l + 1.0) * (2.0 * n + 2.0 * l + 3.0) / (2.0 * l + 3.0)) *
           clebsch_gordan(l, m, 1, mu, l + 1, m + mu);
  if (np == n + 1 && lp == l - 1 && l >= 1)
    return std::sqrt(2.0 * l * (n + 1.0) / (2.0 * l - 1.0)) * clebsch_gordan(l, m, 1, mu, l - 1, m + mu);
  return 0.0;
}

/// <n' l' m+mu| (a)_mu |n l m> for the unit-width 3D oscillator.
inline double annihilation_element(int np, int lp, int n, int l, int m, int mu) {
  if (np == n - 1 && lp == l + 1 && n >= 1)
    return -std::sqrt(2.0 * n * (l + 1.0) / (2.0 * l + 3.0)) * clebsch_gordan(l, m, 1, mu, l + 1, m + mu);
  if (np == n && lp == l - 1 && l >= 1)
    return -std::sqrt(l * (2.0 * n + 2.0 * l + 1.0) / (2.0 * l - 1.0)) *
           clebsch_gordan(l, m, 1, mu, l - 1, m + mu);
  return 0.0;
}

}  // namespace detail

/// Matrix of a_xi^+ . a_eta - a_eta^+ . a_xi within one (N, L) shell, evaluated
/// through the M-projection `projection` (the result is M-independent).
inline Eigen::MatrixXd rotation_generator(int quanta, int L, int projection = 0) {
  if (std::abs(projection) > L) throw std::invalid_argument("rotation_generator: |M| > L");
  const auto labels = shell_labels(quanta, L);
  const int dim = static_cast<int>(labels.size());
  std::unordered_map<BasisLabel, int, BasisLabelHash> index;
  for (int i = 0; i < dim; ++i) index.emplace(labels[i], i);

  // X = a_xi^+ . a_eta = sum_mu (-1)^mu (a_xi^+)_mu (a_eta)_{-mu}
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
  const int M = projection;
  for (int col = 0; col < dim; ++col) {
    const BasisLabel& k = labels[col];
    const std::array<std::pair<int, int>, 2> xi_targets{{{k.na, k.la + 1}, {k.na + 1, k.la - 1}}};
    const std::array<std::pair<int, int>, 2> eta_targets{{{k.nb - 1, k.lb + 1}, {k.nb, k.lb - 1}}};
    for (const auto& [na_p, la_p] : xi_targets) {
      if (la_p < 0) continue;
      for (const auto& [nb_p, lb_p] : eta_targets) {
        if (nb_p < 0 || lb_p < 0 || !triangle(la_p, lb_p, L)) continue;
        const auto it = index.find(BasisLabel{na_p, la_p, nb_p, lb_p});
        if (it == index.end()) continue;
        double value = 0.0;
        for (int ma = -k.la; ma <= k.la; ++ma) {
          const int mb = M - ma;
          if (std::abs(mb) > k.lb) continue;
          const double ket_cg = clebsch_gordan(k.la, ma, k.lb, mb, L, M);
          if (ket_cg == 0.0) continue;
          for (int mu = -1; mu <= 1; ++mu) {
            const int ma_p = ma + mu;
            const int mb_p = mb - mu;
            if (std::abs(ma_p) > la_p || std::abs(mb_p) > lb_p) continue;
            const double bra_cg = clebsch_gordan(la_p, ma_p, lb_p, mb_p, L, M);
            if (bra_cg == 0.0) continue;
            const double phase = (mu % 2 == 0) ? 1.0 : -1.0;
            value += phase * bra_cg * ket_cg * detail::creation_element(na_p, la_p, k.na, k.la, ma, mu) *
                     detail::annihilation_element(nb_p, lb_p, k.nb, k.lb, mb, -mu);
          }
        }
        x(it->second, col) += value;
      }
    }
  }
  return x - x.transpose();
}

/// Spectral form of one shell's rotation generator; yields the bracket
/// matrix for any rotation angle.
class ShellBrackets {
 public:
  ShellBrackets(int quanta, int L) : quanta_(quanta), L_(L), labels_(shell_labels(quanta, L)) {
    const int dim = static_cast<int>(labels_.size());
    index_.reserve(dim);
    for (int i = 0; i < dim; ++i) index_.emplace(labels_[i], i);
    if (dim == 0) return;
    const Eigen::MatrixXd d = rotation_generator(quanta, L);
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * d.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("ShellBrackets: eigensolver failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  int quanta() const noexcept { return quanta_; }
  int L() const noexcept { return L_; }
  const std::vector<BasisLabel>& labels() const noexcept { return labels_; }
  int dimension() const noexcept { return static_cast<int>(labels_.size()); }

  int index_of(const BasisLabel& k) const {
    const auto it = index_.find(k);
    return it == index_.end() ? -1 : it->second;
  }

  /// B with Phi_k(rotated coordinates) = sum_k' B(k', k) Phi_k'.
  Eigen::MatrixXd rotation(double angle) const {
    const int dim = dimension();
    if (dim == 0) return {};
    Eigen::VectorXcd phases(dim);
    for (int i = 0; i < dim; ++i) phases(i) = std::polar(1.0, -angle * eigenvalues_(i));
    const Eigen::MatrixXcd b = eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
    return b.real();
  }

 private:
  int quanta_;
  int L_;
  std::vector<BasisLabel> labels_;
  std::unordered_map<BasisLabel, int, BasisLabelHash> index_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
};

/// In-memory cache of shell generators keyed by (N, L). Safe for concurrent use.
class BracketCache {
 public:
  std::shared_ptr<const ShellBrackets> shell(int quanta, int L) {
    const std::lock_guard<std::mutex> lock(mutex_);
    auto& slot = shells_[{quanta, L}];
    if (!slot) slot = std::make_shared<const ShellBrackets>(quanta, L);
    return slot;
  }

  /// Process-wide instance.
  static BracketCache& global() {
    static BracketCache cache;
    return cache;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const ShellBrackets>> shells_;
};

/// Coefficient of Phi_{k'} in the expansion of Phi_k evaluated on rotated
/// coordinates. Requires a proper rotation; zero unless N, parity and the
/// L-triangles agree.
inline double bracket(const JacobiRotation& rotation, const BasisLabel& k, const BasisLabel& k_prime, int L,
                      BracketCache& cache = BracketCache::global()) {
  if (!rotation.proper()) throw std::invalid_argument("bracket: rotation must be proper (det = +1)");
  if (k.oscillator_quanta() != k_prime.oscillator_quanta()) return 0.0;
  if (k.parity() != k_prime.parity()) return 0.0;
  if (!triangle(k.la, k.lb, L) || !triangle(k_prime.la, k_prime.lb, L)) return 0.0;
  const auto shell = cache.shell(k.oscillator_quanta(), L);
  const int col = shell->index_of(k);
  const int row = shell->index_of(k_prime);
  if (col < 0 || row < 0) return 0.0;
  return shell->rotation(rotation.angle())(row, col);
}

/// Matrix P(perm) over `labels` with (P f)_k = sum_k' P(k', k): the function
/// Phi_k evaluated on the permuted Jacobi set expands as sum_k' P(k',k) Phi_k'.
/// P(s) P(t) = P(s o t). The label list must consist of complete shells.
inline Eigen::MatrixXd permutation_matrix(const Permutation& perm, const std::vector<BasisLabel>& labels, int L,
                                          BracketCache& cache = BracketCache::global()) {
  const int dim = static_cast<int>(labels.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  const PermutationTransform t = permutation_rotation(perm);

  std::map<int, std::vector<int>> by_shell;
  for (int i = 0; i < dim; ++i) by_shell[labels[i].oscillator_quanta()].push_back(i);

  for (const auto& [quanta, members] : by_shell) {
    const auto shell = cache.shell(quanta, L);
    if (static_cast<int>(members.size()) != shell->dimension())
      throw std::invalid_argument("permutation_matrix: labels do not form complete oscillator shells");
    std::vector<int> local(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
      local[i] = shell->index_of(labels[members[i]]);
      if (local[i] < 0) throw std::invalid_argument("permutation_matrix: label does not couple to L");
    }
    const Eigen::MatrixXd b = shell->rotation(t.angle);
    for (std::size_t c = 0; c < members.size(); ++c) {
      for (std::size_t r = 0; r < members.size(); ++r) {
        double v = b(local[r], local[c]);
        if (t.xi_inversion != 0 && labels[members[r]].la % 2 != 0) v = -v;
        out(members[r], members[c]) = v;
      }
    }
  }
  return out;
}

/// Dense permutation matrix over the canonical (L, parity, N_max) block.
inline Eigen::MatrixXd expand_permutation(const Permutation& perm, Parity parity, int L, int n_max,
                                          BracketCache& cache = BracketCache::global()) {
  return permutation_matrix(perm, enumerate_labels(L, parity, n_max), L, cache);
}

}  // namespace trion
