#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace trion {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  void append(const QuadratureRule& other) {
    nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  }
};

/// n-point Gauss-Legendre rule on [a, b], nodes ascending.
/// Newton iteration on P_n from the Chebyshev-like initial guess.
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (b + a);
  const double half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z_old = z;
      z = z_old - p1 / dp;
      if (std::abs(z - z_old) < 1e-15) break;
    }
    // recompute derivative at the converged root
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Composite Gauss-Legendre over consecutive segments [b0,b1], [b1,b2], ...
inline QuadratureRule composite_gauss_legendre(const std::vector<double>& breakpoints,
                                               int nodes_per_segment) {
  QuadratureRule rule;
  for (std::size_t s = 0; s + 1 < breakpoints.size(); ++s) {
    if (breakpoints[s + 1] <= breakpoints[s]) continue;
    rule.append(gauss_legendre(nodes_per_segment, breakpoints[s], breakpoints[s + 1]));
  }
  return rule;
}

}  // namespace trion
