#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "trion/errors.hpp"
#include "trion/labels.hpp"
#include "trion/moshinsky.hpp"

namespace trion {

struct SymmetrizeOptions {
  double threshold = 1e-8;  ///< discard Gram eigenvalues below threshold * largest
};

/// Orthonormal (anti)symmetrized functions of one (L, parity) block, expanded
/// over the raw coupled basis: chi_i = sum_k coeffs(i, k) Phi_k(123).
struct SymmetrizedBasisSet {
  int L = 0;
  Parity parity = Parity::Even;
  Statistics statistics = Statistics::Boson;
  int n_max = 0;
  double threshold = 1e-8;
  std::vector<BasisLabel> labels;
  Eigen::MatrixXd coeffs;     ///< rank x dim
  Eigen::MatrixXd transform;  ///< rank x dim, T with T G T^T = I for the Gram matrix G of the projected functions

  int rank() const noexcept { return static_cast<int>(coeffs.rows()); }
  int dimension() const noexcept { return static_cast<int>(labels.size()); }
  bool nonexistent() const noexcept { return rank() == 0; }
};

inline int permutation_phase(const Permutation& p, Statistics s) {
  return s == Statistics::Boson ? 1 : p.sign();
}

/// S = (1/6) sum_p eps(p) P(p) over `labels` (complete shells, any order).
inline Eigen::MatrixXd symmetrizer(const std::vector<BasisLabel>& labels, Statistics statistics, int L,
                                   BracketCache& cache = BracketCache::global()) {
  const int dim = static_cast<int>(labels.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& p : Permutation::all())
    s += static_cast<double>(permutation_phase(p, statistics)) * permutation_matrix(p, labels, L, cache);
  return s / 6.0;
}

/// Projects every raw function onto the (anti)symmetric subspace and
/// orthonormalizes canonically. Permutations conserve N_ab, so the Gram
/// matrix is block diagonal and each shell is treated separately; the
/// discard threshold is relative to the largest eigenvalue of the whole block.
inline SymmetrizedBasisSet symmetrize(const std::vector<BasisLabel>& labels, Statistics statistics, int L,
                                      Parity parity, const SymmetrizeOptions& opt = {},
                                      BracketCache& cache = BracketCache::global()) {
  SymmetrizedBasisSet out;
  out.L = L;
  out.parity = parity;
  out.statistics = statistics;
  out.threshold = opt.threshold;
  out.labels = labels;
  for (const auto& k : labels) {
    if (k.parity() != parity) throw std::invalid_argument("symmetrize: label parity does not match the block");
    out.n_max = std::max(out.n_max, k.oscillator_quanta());
  }
  const int dim = static_cast<int>(labels.size());
  if (dim == 0) {
    out.coeffs.resize(0, 0);
    out.transform.resize(0, 0);
    return out;
  }

  std::map<int, std::vector<int>> by_shell;
  for (int i = 0; i < dim; ++i) by_shell[labels[i].oscillator_quanta()].push_back(i);

  struct ShellSpectrum {
    std::vector<int> members;
    Eigen::MatrixXd s;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  std::vector<ShellSpectrum> shells;
  double largest = 0.0;
  for (auto& [quanta, members] : by_shell) {
    std::vector<BasisLabel> local;
    for (int i : members) local.push_back(labels[i]);
    ShellSpectrum sh;
    sh.members = members;
    sh.s = symmetrizer(local, statistics, L, cache);
    // Gram matrix of Phi~_k = 6 sum_k' S(k', k) Phi_k' is 36 S^T S = 36 S.
    const Eigen::MatrixXd gram = 36.0 * sh.s.transpose() * sh.s;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) throw NumericalError("symmetrize: Gram eigensolver failed");
    sh.values = es.eigenvalues();
    sh.vectors = es.eigenvectors();
    if (sh.values.size() > 0) largest = std::max(largest, sh.values.maxCoeff());
    shells.push_back(std::move(sh));
  }

  const double cut = opt.threshold * largest;
  int rank = 0;
  for (const auto& sh : shells)
    for (int j = 0; j < sh.values.size(); ++j)
      if (sh.values(j) > cut) ++rank;

  out.coeffs = Eigen::MatrixXd::Zero(rank, dim);
  out.transform = Eigen::MatrixXd::Zero(rank, dim);
  int row = 0;
  for (const auto& sh : shells) {
    const int m = static_cast<int>(sh.members.size());
    // Largest eigenvalues first so the retained rows are ordered by shell, then by weight.
    for (int j = static_cast<int>(sh.values.size()) - 1; j >= 0; --j) {
      if (sh.values(j) <= cut) continue;
      const Eigen::VectorXd t = sh.vectors.col(j) / std::sqrt(sh.values(j));
      const Eigen::VectorXd c = 6.0 * sh.s * t;
      for (int a = 0; a < m; ++a) {
        out.transform(row, sh.members[a]) = t(a);
        out.coeffs(row, sh.members[a]) = c(a);
      }
      ++row;
    }
  }
  return out;
}

inline SymmetrizedBasisSet symmetrize(Statistics statistics, int L, Parity parity, int n_max,
                                      const SymmetrizeOptions& opt = {}) {
  return symmetrize(enumerate_labels(L, parity, n_max), statistics, L, parity, opt);
}

/// Finished sets keyed by (L, parity, statistics, N_max, threshold).
class BasisCache {
 public:
  std::shared_ptr<const SymmetrizedBasisSet> get(Statistics statistics, int L, Parity parity, int n_max,
                                                 const SymmetrizeOptions& opt = {}) {
    const Key key{L, sign(parity), static_cast<int>(statistics), n_max, opt.threshold};
    {
      const std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = sets_.find(key); it != sets_.end()) return it->second;
    }
    auto built = std::make_shared<const SymmetrizedBasisSet>(symmetrize(statistics, L, parity, n_max, opt));
    const std::lock_guard<std::mutex> lock(mutex_);
    return sets_.emplace(key, std::move(built)).first->second;
  }

  static BasisCache& global() {
    static BasisCache cache;
    return cache;
  }

 private:
  using Key = std::tuple<int, int, int, int, double>;
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const SymmetrizedBasisSet>> sets_;
};

}  // namespace trion
