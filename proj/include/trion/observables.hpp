#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <unordered_map>
#include <numbers>
#include <vector>

#include "trion/am_algebra.hpp"
#include "trion/errors.hpp"
#include "trion/quadrature.hpp"
#include "trion/solver.hpp"

namespace trion {

inline constexpr double kPi = std::numbers::pi;

inline double degrees(double radians) { return radians * 180.0 / kPi; }
inline double radians(double degrees) { return degrees * kPi / 180.0; }

// ---------------------------------------------------------------------------
// Sizes

/// <h^2> with h^2 = r^2/2 + 2R^2/3; in oscillator units of the basis both
/// terms are x^2 / gamma, so only the tridiagonal x^2 matrix is needed.
inline double mean_square_hyperradius(const Eigenstate& s) {
  const auto& labels = s.labels();
  const int dim = static_cast<int>(labels.size());
  std::unordered_map<BasisLabel, int, BasisLabelHash> index;
  for (int i = 0; i < dim; ++i) index.emplace(labels[i], i);
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    const auto& k = labels[i];
    const double ci = s.coefficients(i);
    if (ci == 0.0) continue;
    for (int d = -1; d <= 1; ++d) {
      if (const auto it = index.find({k.na + d, k.la, k.nb, k.lb}); it != index.end())
        acc += ci * s.coefficients(it->second) * ho_x2_matrix(k.na + d, k.na, k.la);
      if (const auto it = index.find({k.na, k.la, k.nb + d, k.lb}); it != index.end())
        acc += ci * s.coefficients(it->second) * ho_x2_matrix(k.nb + d, k.nb, k.lb);
    }
  }
  return acc / s.gamma;
}

/// Root-mean-square distance of a particle from the centre of mass.
inline double rms_radius(const Eigenstate& s) { return std::sqrt(mean_square_hyperradius(s) / 3.0); }

// ---------------------------------------------------------------------------
// Body-frame amplitudes

/// Evaluates Psi_{LQ}(r, R, theta) in the body frame: R along j', r in the
/// i'-j' plane at angle theta from R, k' normal to the plane. The amplitude
/// is the lab-frame function with M = Q at that reference orientation.
class AmplitudeEvaluator {
 public:
  explicit AmplitudeEvaluator(const Eigenstate& s) : L_(s.L), gamma_(s.gamma) {
    const auto& labels = s.labels();
    std::map<std::pair<int, int>, int> group_of;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& k = labels[i];
      la_max_ = std::max(la_max_, k.la);
      lb_max_ = std::max(lb_max_, k.lb);
      na_max_ = std::max(na_max_, k.na);
      nb_max_ = std::max(nb_max_, k.nb);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& k = labels[i];
      auto [it, fresh] = group_of.emplace(std::make_pair(k.la, k.lb), static_cast<int>(groups_.size()));
      if (fresh) {
        Group g;
        g.la = k.la;
        g.lb = k.lb;
        g.c = Eigen::MatrixXd::Zero(na_max_ + 1, nb_max_ + 1);
        g.angular.resize(2 * L_ + 1);
        for (int q = -L_; q <= L_; ++q) {
          for (int ma = -k.la; ma <= k.la; ++ma) {
            const int mb = q - ma;
            if (std::abs(mb) > k.lb) continue;
            const double cg = clebsch_gordan(k.la, ma, k.lb, mb, L_, q);
            const double ya = spherical_harmonic(k.la, ma, kPi / 2.0, 0.0).real();
            const double yb = spherical_harmonic(k.lb, mb, kPi / 2.0, 0.0).real();
            const double v = cg * ya * yb;
            if (v != 0.0) g.angular[q + L_].push_back({ma, v});
          }
        }
        groups_.push_back(std::move(g));
      }
      groups_[it->second].c(k.na, k.nb) += s.coefficients(i);
    }
  }

  int L() const noexcept { return L_; }
  double gamma() const noexcept { return gamma_; }
  std::size_t group_count() const noexcept { return groups_.size(); }

  /// Psi_{LQ} for Q = -L..L at one configuration.
  std::vector<std::complex<double>> all(double r, double R, double theta) const {
    const auto f = radial_products(r, R);
    std::vector<std::complex<double>> out(2 * L_ + 1);
    for (int q = -L_; q <= L_; ++q) {
      std::complex<double> acc = 0.0;
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (f[g] == 0.0) continue;
        acc += f[g] * angular(g, q, theta);
      }
      out[q + L_] = phase(q) * acc;
    }
    return out;
  }

  std::complex<double> operator()(int q, double r, double R, double theta) const {
    if (std::abs(q) > L_) throw std::invalid_argument("body-frame amplitude: |Q| > L");
    const auto f = radial_products(r, R);
    std::complex<double> acc = 0.0;
    for (std::size_t g = 0; g < groups_.size(); ++g) acc += f[g] * angular(g, q, theta);
    return phase(q) * acc;
  }

  /// sum_Q |Psi_{LQ}|^2
  double density(double r, double R, double theta) const {
    double s = 0.0;
    for (const auto& a : all(r, R, theta)) s += std::norm(a);
    return s;
  }

  /// Body-frame weights W_Q, Q = -L..L. The radial integrals use Gauss-Legendre
  /// on [0, extent / sqrt(width)]; the theta integral is done in closed form
  /// since each amplitude is a finite Fourier sum in theta.
  std::vector<double> weights(int radial_points, double extent) const {
    const auto rule_r = gauss_legendre(radial_points, 0.0, extent / std::sqrt(kMassR * gamma_));
    const auto rule_R = gauss_legendre(radial_points, 0.0, extent / std::sqrt(kMassBigR * gamma_));
    const int G = static_cast<int>(groups_.size());
    const Eigen::MatrixXd fa = radial_table(rule_r, kMassR * gamma_, la_max_, na_max_);
    const Eigen::MatrixXd fb = radial_table(rule_R, kMassBigR * gamma_, lb_max_, nb_max_);
    // F_g(r_i, R_j) sqrt(w_i w_j) r_i R_j, flattened over (i, j).
    const int nr = static_cast<int>(rule_r.size()), nR = static_cast<int>(rule_R.size());
    Eigen::MatrixXd f(G, nr * nR);
    for (int g = 0; g < G; ++g) {
      const auto& grp = groups_[g];
      const Eigen::MatrixXd a = fa.middleRows(grp.la * (na_max_ + 1), na_max_ + 1);
      const Eigen::MatrixXd b = fb.middleRows(grp.lb * (nb_max_ + 1), nb_max_ + 1);
      const Eigen::MatrixXd prod = a.transpose() * grp.c * b;  // nr x nR
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nR; ++j)
          f(g, i * nR + j) = prod(i, j) * std::sqrt(rule_r.weights[i] * rule_R.weights[j]) * rule_r.nodes[i] *
                             rule_R.nodes[j];
    }
    const Eigen::MatrixXd overlap = f * f.transpose();

    std::vector<double> out(2 * L_ + 1, 0.0);
    const double norm = 8.0 * kPi * kPi / (2.0 * L_ + 1.0);
    for (int q = -L_; q <= L_; ++q) {
      double acc = 0.0;
      for (int g = 0; g < G; ++g)
        for (int h = 0; h < G; ++h) {
          if (overlap(g, h) == 0.0) continue;
          std::complex<double> ang = 0.0;
          for (const auto& [ma, a] : groups_[g].angular[q + L_])
            for (const auto& [mb, b] : groups_[h].angular[q + L_]) ang += a * b * sin_fourier(ma - mb);
          acc += overlap(g, h) * ang.real();
        }
      out[q + L_] = norm * acc;
    }
    return out;
  }

 private:
  struct Term {
    int ma;
    double value;
  };
  struct Group {
    int la = 0;
    int lb = 0;
    Eigen::MatrixXd c;                     ///< (n_a, n_b) coefficients
    std::vector<std::vector<Term>> angular;  ///< per Q: CG * Y_la,ma(pi/2,0) * Y_lb,Q-ma(pi/2,0)
  };

  /// int_0^pi sin(t) e^{ikt} dt
  static std::complex<double> sin_fourier(int k) {
    if (k == 1) return {0.0, kPi / 2.0};
    if (k == -1) return {0.0, -kPi / 2.0};
    return {(k % 2 == 0) ? 2.0 / (1.0 - static_cast<double>(k) * k) : 0.0, 0.0};
  }

  /// Y_{lm}(pi/2, pi/2 - theta) Y_{l'm'}(pi/2, pi/2) carries e^{i Q pi/2} e^{-i m theta}.
  static std::complex<double> phase(int q) { return std::polar(1.0, q * kPi / 2.0); }

  std::complex<double> angular(std::size_t g, int q, double theta) const {
    std::complex<double> acc = 0.0;
    for (const auto& [ma, v] : groups_[g].angular[q + L_]) acc += v * std::polar(1.0, -ma * theta);
    return acc;
  }

  std::vector<double> radial_products(double r, double R) const {
    std::vector<double> ra((la_max_ + 1) * (na_max_ + 1)), rb((lb_max_ + 1) * (nb_max_ + 1));
    for (int l = 0; l <= la_max_; ++l) ho_radial_sequence(na_max_, l, kMassR * gamma_, r, &ra[l * (na_max_ + 1)]);
    for (int l = 0; l <= lb_max_; ++l)
      ho_radial_sequence(nb_max_, l, kMassBigR * gamma_, R, &rb[l * (nb_max_ + 1)]);
    std::vector<double> f(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const auto& grp = groups_[g];
      const Eigen::Map<const Eigen::VectorXd> a(&ra[grp.la * (na_max_ + 1)], na_max_ + 1);
      const Eigen::Map<const Eigen::VectorXd> b(&rb[grp.lb * (nb_max_ + 1)], nb_max_ + 1);
      f[g] = a.dot(grp.c * b);
    }
    return f;
  }

  /// Rows (l, n), columns quadrature nodes.
  static Eigen::MatrixXd radial_table(const QuadratureRule& rule, double width, int l_max, int n_max) {
    Eigen::MatrixXd out((l_max + 1) * (n_max + 1), rule.size());
    std::vector<double> seq(n_max + 1);
    for (int l = 0; l <= l_max; ++l)
      for (std::size_t i = 0; i < rule.size(); ++i) {
        ho_radial_sequence(n_max, l, width, rule.nodes[i], seq.data());
        for (int n = 0; n <= n_max; ++n) out(l * (n_max + 1) + n, static_cast<Eigen::Index>(i)) = seq[n];
      }
    return out;
  }

  int L_;
  double gamma_;
  int la_max_ = 0, lb_max_ = 0, na_max_ = 0, nb_max_ = 0;
  std::vector<Group> groups_;
};

inline std::complex<double> body_frame_amplitude(const Eigenstate& s, int q, double r, double R, double theta) {
  return AmplitudeEvaluator(s)(q, r, R, theta);
}

// ---------------------------------------------------------------------------
// Q weights

struct WeightOptions {
  int radial_points = 48;
  double extent = 10.0;  ///< radial range is [0, extent / sqrt(gamma mu)]
  double sum_tolerance = 1e-4;
};

struct WeightVector {
  int L = 0;
  std::vector<double> raw;     ///< W_Q for Q = -L..L
  std::vector<double> folded;  ///< Wbar_Q for Q = 0..L: W_0, then 2 W_Q

  double sum() const {
    double s = 0.0;
    for (double w : folded) s += w;
    return s;
  }
};

inline WeightVector q_weights(const Eigenstate& s, const WeightOptions& opt = {}) {
  const AmplitudeEvaluator eval(s);
  WeightVector out;
  out.L = s.L;
  out.raw = eval.weights(opt.radial_points, opt.extent);
  out.folded.assign(s.L + 1, 0.0);
  for (int q = 0; q <= s.L; ++q)
    out.folded[q] = (q == 0) ? out.raw[s.L] : out.raw[s.L + q] + out.raw[s.L - q];
  if (std::abs(out.sum() - 1.0) > opt.sum_tolerance)
    throw NumericalError("Q weights of " + s.name() + " sum to " + std::to_string(out.sum()) +
                         "; quadrature failed");
  return out;
}

// ---------------------------------------------------------------------------
// One-body density

/// rho_1(r3, theta3) of the M = L member: the r integral is done with the
/// orthonormality of phi_{na la}(r), leaving a sum of squares over (na, la, ma).
class OneBodyDensity {
 public:
  explicit OneBodyDensity(const Eigenstate& s) : L_(s.L), width_(kMassBigR * s.gamma) {
    const auto& labels = s.labels();
    std::map<std::tuple<int, int, int>, int> channel_of;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& k = labels[i];
      lb_max_ = std::max(lb_max_, k.lb);
      nb_max_ = std::max(nb_max_, k.nb);
      for (int ma = -k.la; ma <= k.la; ++ma) {
        const int mb = L_ - ma;
        if (std::abs(mb) > k.lb) continue;
        const double cg = clebsch_gordan(k.la, ma, k.lb, mb, L_, L_);
        if (cg == 0.0 || s.coefficients(i) == 0.0) continue;
        auto [it, fresh] = channel_of.emplace(std::make_tuple(k.na, k.la, ma), static_cast<int>(channels_.size()));
        if (fresh) channels_.push_back({ma, {}});
        channels_[it->second].terms.push_back({k.nb, k.lb, s.coefficients(i) * cg});
      }
    }
  }

  double operator()(double r3, double theta3) const {
    const double R = 1.5 * r3;
    std::vector<double> rb((lb_max_ + 1) * (nb_max_ + 1));
    for (int l = 0; l <= lb_max_; ++l) ho_radial_sequence(nb_max_, l, width_, R, &rb[l * (nb_max_ + 1)]);
    double total = 0.0;
    for (const auto& ch : channels_) {
      double acc = 0.0;
      for (const auto& t : ch.terms) {
        const double y = spherical_harmonic(t.lb, L_ - ch.ma, theta3, 0.0).real();
        acc += t.value * rb[t.lb * (nb_max_ + 1) + t.nb] * y;
      }
      total += acc * acc;
    }
    return 27.0 / 8.0 * total;
  }

  /// Azimuthal variation at one point; the density is real-symmetric in phi3
  /// because every channel carries a single m_b.
  double azimuth_spread(double r3, double theta3, int samples = 8) const {
    const double R = 1.5 * r3;
    std::vector<double> rb((lb_max_ + 1) * (nb_max_ + 1));
    for (int l = 0; l <= lb_max_; ++l) ho_radial_sequence(nb_max_, l, width_, R, &rb[l * (nb_max_ + 1)]);
    double lo = 1e300, hi = -1e300;
    for (int k = 0; k < samples; ++k) {
      const double phi = 2.0 * kPi * k / samples;
      double total = 0.0;
      for (const auto& ch : channels_) {
        std::complex<double> acc = 0.0;
        for (const auto& t : ch.terms)
          acc += t.value * rb[t.lb * (nb_max_ + 1) + t.nb] * spherical_harmonic(t.lb, L_ - ch.ma, theta3, phi);
        total += std::norm(acc);
      }
      lo = std::min(lo, total);
      hi = std::max(hi, total);
    }
    return 27.0 / 8.0 * (hi - lo);
  }

  /// int rho_1 d^3 r3 by Gauss-Legendre quadrature.
  double normalization(int radial_points = 64, int angular_points = 48, double extent = 10.0) const {
    const auto rr = gauss_legendre(radial_points, 0.0, extent / std::sqrt(width_) / 1.5);
    const auto rt = gauss_legendre(angular_points, 0.0, kPi);
    double s = 0.0;
    for (std::size_t i = 0; i < rr.size(); ++i)
      for (std::size_t j = 0; j < rt.size(); ++j)
        s += rr.weights[i] * rt.weights[j] * rr.nodes[i] * rr.nodes[i] * std::sin(rt.nodes[j]) *
             (*this)(rr.nodes[i], rt.nodes[j]);
    return 2.0 * kPi * s;
  }

 private:
  struct Term {
    int nb;
    int lb;
    double value;
  };
  struct Channel {
    int ma;
    std::vector<Term> terms;
  };
  int L_;
  double width_;
  int lb_max_ = 0, nb_max_ = 0;
  std::vector<Channel> channels_;
};

inline double one_body_density(const Eigenstate& s, double r3, double theta3) { return OneBodyDensity(s)(r3, theta3); }

struct DensityGrid {
  std::vector<double> r3;
  std::vector<double> theta3;  ///< radians
  std::vector<double> values;  ///< row-major over (r3, theta3)
};

inline DensityGrid one_body_density_grid(const Eigenstate& s, const std::vector<double>& r3,
                                         const std::vector<double>& theta3) {
  const OneBodyDensity rho(s);
  DensityGrid out{r3, theta3, {}};
  out.values.reserve(r3.size() * theta3.size());
  for (double r : r3)
    for (double t : theta3) out.values.push_back(rho(r, t));
  return out;
}

namespace detail {

/// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
inline double parabolic_offset(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

}  // namespace detail

struct AnglePeak {
  double theta = 0.0;  ///< radians, in [0, pi/2]
  double value = 0.0;
};

/// Peak of rho_1(r3, .) over [0, 90 deg] with parabolic refinement. The
/// density is even about 0 and about 90 deg, which supplies the neighbours
/// at the ends.
inline AnglePeak one_body_peak(const OneBodyDensity& rho, double r3, int samples = 361) {
  std::vector<double> v(samples);
  const double step = (kPi / 2.0) / (samples - 1);
  for (int i = 0; i < samples; ++i) v[i] = rho(r3, i * step);
  const int best = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  const double left = best > 0 ? v[best - 1] : v[1];
  const double right = best < samples - 1 ? v[best + 1] : v[samples - 2];
  double theta = (best + detail::parabolic_offset(left, v[best], right)) * step;
  theta = std::clamp(theta, 0.0, kPi / 2.0);
  return {theta, rho(r3, theta)};
}

// ---------------------------------------------------------------------------
// Shape density and geometry

/// Body-frame configuration of a shape point (phi, R/r) at hyper-radius h.
struct ShapePoint {
  double r = 0.0;
  double R = 0.0;
  double theta = 0.0;
};

inline ShapePoint shape_point(double hyper_radius, double phi, double ratio) {
  const double beta = std::atan2(2.0 * ratio, std::sqrt(3.0));  // tan(beta) = (2/sqrt3) R/r
  return {std::sqrt(2.0) * hyper_radius * std::cos(beta), std::sqrt(1.5) * hyper_radius * std::sin(beta),
          kPi / 2.0 - phi};
}

inline double shape_density_at(const AmplitudeEvaluator& eval, double hyper_radius, double phi, double ratio) {
  const ShapePoint p = shape_point(hyper_radius, phi, ratio);
  const int L = eval.L();
  return 8.0 * kPi * kPi / (2.0 * L + 1.0) * std::pow(hyper_radius, 5) * eval.density(p.r, p.R, p.theta);
}

struct ShapeGridSpec {
  int phi_points = 181;
  int ratio_points = 121;
  double ratio_max = 2.2;
};

struct ShapePeak {
  double phi = 0.0;  ///< radians
  double ratio = 0.0;
  double value = 0.0;
};

struct ShapeGrid {
  double hyper_radius = 0.0;
  std::vector<double> phi;    ///< radians, [-pi/2, pi/2]
  std::vector<double> ratio;  ///< R/r
  std::vector<double> values;  ///< row-major over (phi, ratio)
  ShapePeak grid_max;
  ShapePeak refined_max;

  double at(std::size_t i, std::size_t j) const { return values[i * ratio.size() + j]; }
  /// Arithmetic contour levels from the maximum down to zero.
  std::vector<double> contour_levels(int count = 10) const {
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(grid_max.value * (count - k) / count);
    return out;
  }
};

/// Coordinate-wise parabolic ascent from a grid maximum with shrinking steps.
inline ShapePeak refine_shape_peak(const AmplitudeEvaluator& eval, double hyper_radius, ShapePeak start,
                                   double phi_step, double ratio_step, int rounds = 8) {
  auto f = [&](double phi, double ratio) {
    return shape_density_at(eval, hyper_radius, std::clamp(phi, -kPi / 2.0, kPi / 2.0), std::max(ratio, 0.0));
  };
  ShapePeak p = start;
  for (int round = 0; round < rounds; ++round) {
    for (int axis = 0; axis < 2; ++axis) {
      const double h = axis == 0 ? phi_step : ratio_step;
      auto at = [&](double d) { return axis == 0 ? f(p.phi + d, p.ratio) : f(p.phi, p.ratio + d); };
      double a = at(-h), b = at(0.0), c = at(h);
      // Densities are even about phi = +-90 deg (mirror of the plane) and R/r = 0.
      if (axis == 0 && p.phi + h > kPi / 2.0) c = at(-h + 2.0 * (kPi / 2.0 - p.phi));
      if (axis == 0 && p.phi - h < -kPi / 2.0) a = at(h - 2.0 * (kPi / 2.0 + p.phi));
      if (axis == 1 && p.ratio - h < 0.0) a = f(p.phi, h - p.ratio);
      const double t = detail::parabolic_offset(a, b, c);
      const double candidate = at(t * h);
      if (candidate > b) {
        if (axis == 0)
          p.phi = std::clamp(p.phi + t * h, -kPi / 2.0, kPi / 2.0);
        else
          p.ratio = std::max(p.ratio + t * h, 0.0);
        p.value = candidate;
      } else {
        p.value = b;
      }
    }
    phi_step *= 0.5;
    ratio_step *= 0.5;
  }
  return p;
}

inline ShapeGrid shape_density(const Eigenstate& s, double hyper_radius, const ShapeGridSpec& spec = {}) {
  if (!(hyper_radius > 0.0)) throw std::domain_error("shape_density: hyper-radius must be positive");
  const AmplitudeEvaluator eval(s);
  ShapeGrid out;
  out.hyper_radius = hyper_radius;
  for (int i = 0; i < spec.phi_points; ++i) out.phi.push_back(-kPi / 2.0 + kPi * i / (spec.phi_points - 1));
  for (int j = 0; j < spec.ratio_points; ++j) out.ratio.push_back(spec.ratio_max * j / (spec.ratio_points - 1));
  out.values.reserve(out.phi.size() * out.ratio.size());
  std::size_t best = 0;
  for (double phi : out.phi)
    for (double ratio : out.ratio) {
      out.values.push_back(shape_density_at(eval, hyper_radius, phi, ratio));
      if (out.values.back() > out.values[best]) best = out.values.size() - 1;
    }
  const std::size_t bi = best / out.ratio.size(), bj = best % out.ratio.size();
  out.grid_max = {out.phi[bi], out.ratio[bj], out.values[best]};
  out.refined_max = refine_shape_peak(eval, hyper_radius, out.grid_max, kPi / (spec.phi_points - 1),
                                      spec.ratio_max / (spec.ratio_points - 1));
  return out;
}

/// Particle positions relative to the centre of mass in the body frame.
inline std::array<std::array<double, 3>, 3> particle_positions(double r, double R, double phi) {
  const std::array<double, 3> rv{r * std::cos(phi), r * std::sin(phi), 0.0};
  const std::array<double, 3> Rv{0.0, R, 0.0};
  std::array<std::array<double, 3>, 3> p{};
  for (int d = 0; d < 3; ++d) {
    p[0][d] = -rv[d] / 2.0 - Rv[d] / 3.0;
    p[1][d] = rv[d] / 2.0 - Rv[d] / 3.0;
    p[2][d] = 2.0 * Rv[d] / 3.0;
  }
  return p;
}

struct TriangleShape {
  std::array<double, 3> sides{};  ///< d23, d13, d12 (side opposite particle i)
  int apex = 0;                   ///< 0-based particle between the two most nearly equal sides
  double apex_angle = 0.0;        ///< radians
};

inline TriangleShape triangle_shape(double phi, double ratio) {
  const auto p = particle_positions(1.0, ratio, phi);
  auto dist = [&](int a, int b) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += (p[a][d] - p[b][d]) * (p[a][d] - p[b][d]);
    return std::sqrt(s);
  };
  TriangleShape t;
  t.sides = {dist(1, 2), dist(0, 2), dist(0, 1)};
  double best = 1e300;
  for (int apex = 0; apex < 3; ++apex) {
    const double a = t.sides[(apex + 1) % 3], b = t.sides[(apex + 2) % 3];
    const double mismatch = std::abs(a - b) / std::max(a + b, 1e-300);
    if (mismatch < best) {
      best = mismatch;
      t.apex = apex;
    }
  }
  const double a = t.sides[(t.apex + 1) % 3], b = t.sides[(t.apex + 2) % 3], c = t.sides[t.apex];
  t.apex_angle = std::acos(std::clamp((a * a + b * b - c * c) / (2.0 * a * b), -1.0, 1.0));
  return t;
}

/// Reference curves of the (phi, R/r) plane.
struct GeometryCurves {
  std::vector<double> phi;          ///< radians
  std::vector<double> ist_plus;     ///< R/r on the IST branch with +sqrt in F
  std::vector<double> ist_minus;    ///< R/r on the IST branch with -sqrt in F
  double rt_phi = 0.0;
  double rt_ratio = std::sqrt(3.0) / 2.0;
  double col_phi = kPi / 2.0;       ///< COL lines at +-col_phi
  double symmetric_col_ratio = 1.5; ///< points B, B' at (+-90 deg, 1.5); plus the line R/r = 0
  double overlap_col_ratio = 0.5;   ///< points C, C' at (+-90 deg, 0.5)
};

inline double ist_branch(double phi, int branch) {
  const double s2 = std::sin(phi) * std::sin(phi);
  const double f = 0.5 * (std::cos(phi) * std::cos(phi) + branch * std::sqrt((3.0 + s2) * s2));
  return 0.5 * std::sqrt(std::max(5.0 - 4.0 * f, 0.0));
}

inline GeometryCurves geometry_curves(const std::vector<double>& phi) {
  GeometryCurves out;
  out.phi = phi;
  for (double p : phi) {
    if (p < -kPi / 2.0 - 1e-12 || p > kPi / 2.0 + 1e-12) throw std::domain_error("geometry_curves: phi out of range");
    out.ist_plus.push_back(ist_branch(p, +1));
    out.ist_minus.push_back(ist_branch(p, -1));
  }
  return out;
}

/// int rho_sha dh dS over the full (h, beta, theta) domain.
inline double shape_normalization(const Eigenstate& s, int points = 48, double extent = 10.0) {
  const AmplitudeEvaluator eval(s);
  const double h_max = extent / std::sqrt(s.gamma);
  const auto rh = gauss_legendre(points, 0.0, h_max);
  const auto rb = gauss_legendre(points, 0.0, kPi / 2.0);
  const auto rt = gauss_legendre(points, 0.0, kPi);
  const double norm = 8.0 * kPi * kPi / (2.0 * s.L + 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rh.size(); ++i) {
    const double h = rh.nodes[i];
    for (std::size_t j = 0; j < rb.size(); ++j) {
      const double beta = rb.nodes[j];
      const double cb = std::cos(beta), sb = std::sin(beta);
      const double r = std::sqrt(2.0) * h * cb, R = std::sqrt(1.5) * h * sb;
      const double ds = 3.0 * std::sqrt(3.0) * cb * cb * sb * sb;
      for (std::size_t k = 0; k < rt.size(); ++k) {
        const double theta = rt.nodes[k];
        total += rh.weights[i] * rb.weights[j] * rt.weights[k] * ds * std::sin(theta) * norm * std::pow(h, 5) *
                 eval.density(r, R, theta);
      }
    }
  }
  return total;
}

}  // namespace trion
