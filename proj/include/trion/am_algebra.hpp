#pragma once

// Angular-momentum coupling and 3D oscillator special functions.
//
// Conventions (shared by every other header):
//   * Condon-Shortley phase for Y_lm.
//   * Radial oscillator functions R_nl(r) = N x^l exp(-x^2/2) L_n^{l+1/2}(x^2),
//     x = sqrt(width) r, N > 0, so that R_nl is positive near the origin.
//   * "width" is the oscillator parameter nu in exp(-nu r^2 / 2); for the
//     eigenfunctions of h(mu, r) at frequency gamma it is mu * gamma.

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace trion {

inline constexpr int kMaxAngularMomentum = 60;

namespace detail {

inline constexpr int kLogFactorialSize = 4 * kMaxAngularMomentum + 8;

inline const std::array<double, kLogFactorialSize>& log_factorial_table() {
  static const std::array<double, kLogFactorialSize> table = [] {
    std::array<double, kLogFactorialSize> t{};
    t[0] = 0.0;
    for (int i = 1; i < kLogFactorialSize; ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  return table;
}

}  // namespace detail

inline double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial of negative argument");
  if (n < detail::kLogFactorialSize) return detail::log_factorial_table()[n];
  return std::lgamma(n + 1.0);
}

struct AngularPair {
  int l = 0;
  int m = 0;

  bool valid() const noexcept { return l >= 0 && std::abs(m) <= l; }
};

/// <l1 m1 l2 m2 | L M> by the Racah finite sum. Returns 0 outside the
/// physical domain (|m| > l, triangle violated, M != m1 + m2).
inline double clebsch_gordan(int l1, int m1, int l2, int m2, int L, int M) {
  if (l1 < 0 || l2 < 0 || L < 0) return 0.0;
  if (std::abs(m1) > l1 || std::abs(m2) > l2 || std::abs(M) > L) return 0.0;
  if (m1 + m2 != M) return 0.0;
  if (L < std::abs(l1 - l2) || L > l1 + l2) return 0.0;

  const double log_delta = 0.5 * (std::log(2.0 * L + 1.0) + log_factorial(L + l1 - l2) +
                                  log_factorial(L - l1 + l2) + log_factorial(l1 + l2 - L) -
                                  log_factorial(l1 + l2 + L + 1));
  const double log_m = 0.5 * (log_factorial(L + M) + log_factorial(L - M) + log_factorial(l1 - m1) +
                              log_factorial(l1 + m1) + log_factorial(l2 - m2) +
                              log_factorial(l2 + m2));

  const int k_min = std::max({0, l2 - L - m1, l1 - L + m2});
  const int k_max = std::min({l1 + l2 - L, l1 - m1, l2 + m2});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_den = log_factorial(k) + log_factorial(l1 + l2 - L - k) +
                           log_factorial(l1 - m1 - k) + log_factorial(l2 + m2 - k) +
                           log_factorial(L - l2 + m1 + k) + log_factorial(L - l1 - m2 + k);
    const double term = std::exp(log_delta + log_m - log_den);
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

/// Fully normalized associated Legendre function including the
/// Condon-Shortley phase, i.e. Y_lm(theta, 0) for m >= 0.
inline double normalized_legendre(int l, int m, double x) {
  if (m < 0 || m > l) throw std::domain_error("normalized_legendre requires 0 <= m <= l");
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double pmm = std::sqrt(1.0 / (4.0 * std::numbers::pi));
  for (int k = 1; k <= m; ++k) pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  if (l == m) return pmm;
  double pm1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return pm1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll * ll) - m * m));
    const double b = std::sqrt((static_cast<double>((ll - 1) * (ll - 1)) - m * m) /
                               (4.0 * (ll - 1) * (ll - 1) - 1.0));
    pll = a * (x * pm1 - b * pmm);
    pmm = pm1;
    pm1 = pll;
  }
  return pll;
}

inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic requires |m| <= l");
  const int am = std::abs(m);
  const double p = normalized_legendre(l, am, std::cos(theta));
  std::complex<double> y = std::polar(p, am * phi);
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 != 0) y = -y;
  }
  return y;
}

struct RadialOrbital {
  int n = 0;
  int l = 0;
  double width = 1.0;
};

/// log of the radial normalization sqrt(2 n! / Gamma(n + l + 3/2)).
inline double ho_log_norm(int n, int l) {
  return 0.5 * (std::log(2.0) + log_factorial(n) - std::lgamma(n + l + 1.5));
}

/// Generalized Laguerre L_k^alpha(t) for k = 0..n_max by upward recurrence.
inline void laguerre_sequence(int n_max, double alpha, double t, double* out) {
  out[0] = 1.0;
  if (n_max >= 1) out[1] = 1.0 + alpha - t;
  for (int k = 1; k < n_max; ++k)
    out[k + 1] = ((2.0 * k + 1.0 + alpha - t) * out[k] - (k + alpha) * out[k - 1]) / (k + 1.0);
}

/// R_{n l}(r) for n = 0..n_max at one radius, written into out[0..n_max].
inline void ho_radial_sequence(int n_max, int l, double width, double r, double* out) {
  const double x = std::sqrt(width) * r;
  const double t = x * x;
  laguerre_sequence(n_max, l + 0.5, t, out);
  double log_common = 0.75 * std::log(width) - 0.5 * t;
  if (l > 0) {
    if (x <= 0.0) {
      for (int n = 0; n <= n_max; ++n) out[n] = 0.0;
      return;
    }
    log_common += l * std::log(x);
  }
  for (int n = 0; n <= n_max; ++n) out[n] *= std::exp(log_common + ho_log_norm(n, l));
}

inline double ho_radial(const RadialOrbital& orbital, double r) {
  if (orbital.width <= 0.0) throw std::domain_error("ho_radial: width must be positive");
  if (r < 0.0) throw std::domain_error("ho_radial: r must be non-negative");
  std::vector<double> seq(orbital.n + 1);
  ho_radial_sequence(orbital.n, orbital.l, orbital.width, r, seq.data());
  return seq[orbital.n];
}

/// Dimensionless <n1 l| x^2 |n2 l> in the width-1 oscillator basis.
/// Multiply by 1/width for the physical r^2.
inline double ho_x2_matrix(int n1, int n2, int l) {
  if (n1 == n2) return 2.0 * n1 + l + 1.5;
  const int lo = std::min(n1, n2);
  if (std::abs(n1 - n2) == 1) return -std::sqrt((lo + 1.0) * (lo + l + 1.5));
  return 0.0;
}

/// <n1 l| h(mu, r) |n2 l> for h(mu, r) = -nabla^2/(2 mu) + mu r^2 / 2 in the
/// basis of width mu * gamma. The mass drops out once the width is tied to it.
inline double ho_onebody_matrix(int n1, int n2, int l, double mass, double gamma) {
  if (gamma <= 0.0 || mass <= 0.0) throw std::domain_error("ho_onebody_matrix: mass and gamma must be positive");
  if (n1 == n2) return 0.5 * (2.0 * n1 + l + 1.5) * (gamma + 1.0 / gamma);
  if (std::abs(n1 - n2) == 1) return 0.5 * (1.0 / gamma - gamma) * ho_x2_matrix(n1, n2, l);
  return 0.0;
}

}  // namespace trion
