#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "trion/am_algebra.hpp"
#include "trion/errors.hpp"
#include "trion/quadrature.hpp"

namespace trion {

enum class InteractionKind { A, B, C, Tabulated };

/// Pair potential V(r) in trap units. Kinds A, B, C are the built-in
/// Gaussian, van der Waals and hard-core shapes; Tabulated interpolates
/// (r, V) samples linearly and holds the end values outside the table.
class InteractionModel {
 public:
  static InteractionModel gaussian() { return InteractionModel(InteractionKind::A, "A"); }
  static InteractionModel van_der_waals() { return InteractionModel(InteractionKind::B, "B"); }
  static InteractionModel hard_core() { return InteractionModel(InteractionKind::C, "C"); }

  static InteractionModel tabulated(std::vector<double> r, std::vector<double> v, std::string name = "tabulated") {
    if (r.size() != v.size() || r.size() < 2)
      throw ConfigError("tabulated potential needs at least two (r, V) samples");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(v[i])) throw ConfigError("tabulated potential has non-finite entries");
      if (r[i] < 0.0) throw ConfigError("tabulated potential has negative r");
      if (i > 0 && r[i] <= r[i - 1]) throw ConfigError("tabulated potential r values must be strictly increasing");
    }
    InteractionModel m(InteractionKind::Tabulated, std::move(name));
    m.r_ = std::move(r);
    m.v_ = std::move(v);
    return m;
  }

  /// V(r) = value everywhere.
  static InteractionModel constant(double value) {
    return tabulated({0.0, 1.0}, {value, value}, "constant(" + std::to_string(value) + ")");
  }

  /// "A", "B", "C", or a path to a two-column (r, V) text file.
  static InteractionModel from_spec(const std::string& spec);

  InteractionKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& table_r() const noexcept { return r_; }
  const std::vector<double>& table_v() const noexcept { return v_; }

  /// Radii where V or its derivative is not smooth.
  std::vector<double> breakpoints() const {
    switch (kind_) {
      case InteractionKind::B: return {kVdwCore};
      case InteractionKind::C: return {kHardCoreRadius};
      case InteractionKind::Tabulated: return r_;
      default: return {};
    }
  }

  static constexpr double kVdwCore = 1.2;
  static constexpr double kHardCoreRadius = 1.0;
  static constexpr double kHardCoreHeight = 15.0;

 private:
  InteractionModel(InteractionKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  InteractionKind kind_;
  std::string name_;
  std::vector<double> r_;
  std::vector<double> v_;
};

struct PotentialSample {
  double value = 0.0;
  bool extrapolated = false;
};

namespace detail {

inline double van_der_waals_tail(double r) { return 1000.0 * std::exp(-3.0 * r) - 40.0 / std::pow(r, 6); }

}  // namespace detail

inline PotentialSample sample(const InteractionModel& model, double r) {
  switch (model.kind()) {
    case InteractionKind::A:
      return {10.0 * (2.0 * std::exp(-std::pow(r / 1.428, 2)) - std::exp(-std::pow(r / 2.105, 2))), false};
    case InteractionKind::B:
      return {detail::van_der_waals_tail(std::max(r, InteractionModel::kVdwCore)), false};
    case InteractionKind::C:
      return {r < InteractionModel::kHardCoreRadius ? InteractionModel::kHardCoreHeight : 0.0, false};
    case InteractionKind::Tabulated: {
      const auto& xs = model.table_r();
      const auto& vs = model.table_v();
      if (r <= xs.front()) return {vs.front(), r < xs.front()};
      if (r >= xs.back()) return {vs.back(), r > xs.back()};
      const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), r) - xs.begin());
      const std::size_t lo = hi - 1;
      const double t = (r - xs[lo]) / (xs[hi] - xs[lo]);
      return {vs[lo] + t * (vs[hi] - vs[lo]), false};
    }
  }
  return {};
}

inline double evaluate(const InteractionModel& model, double r) { return sample(model, r).value; }

/// Two whitespace-separated columns (r, V); '#' starts a comment.
inline InteractionModel load_tabulated_potential(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("interaction file not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open interaction file: " + path.string());
  std::vector<double> r, v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double a = 0.0, b = 0.0;
    if (!(fields >> a)) continue;
    if (!(fields >> b)) throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected two columns");
    r.push_back(a);
    v.push_back(b);
  }
  return InteractionModel::tabulated(std::move(r), std::move(v), path.filename().string());
}

inline InteractionModel InteractionModel::from_spec(const std::string& spec) {
  if (spec == "A" || spec == "a") return gaussian();
  if (spec == "B" || spec == "b") return van_der_waals();
  if (spec == "C" || spec == "c") return hard_core();
  return load_tabulated_potential(spec);
}

struct RadialQuadratureOptions {
  int nodes_per_segment = 64;
  int subdivisions = 4;        ///< uniform pieces of [0, r_max] before breakpoints are inserted
  double extent = 12.0;        ///< r_max = extent / sqrt(width)
  bool split_at_breakpoints = true;
  double tolerance = 1e-8;
  int max_refinements = 3;     ///< 0 disables the convergence check
};

/// I^l_{n'n} = int R_{n'l} V R_{nl} r^2 dr at one oscillator width.
class RadialIntegralTable {
 public:
  RadialIntegralTable() = default;
  RadialIntegralTable(double width, int l_max, int n_max)
      : width_(width), l_max_(l_max), n_max_(n_max),
        values_(static_cast<std::size_t>(l_max + 1) * (n_max + 1) * (n_max + 1), 0.0) {}

  double width() const noexcept { return width_; }
  int l_max() const noexcept { return l_max_; }
  int n_max() const noexcept { return n_max_; }
  bool covers(int l, int n) const noexcept { return l >= 0 && n >= 0 && l <= l_max_ && n <= n_max_; }

  double at(int l, int n, int n_prime) const {
    if (!covers(l, n) || !covers(l, n_prime))
      throw std::out_of_range("missing radial integral l=" + std::to_string(l) + " n=" + std::to_string(n) +
                              " n'=" + std::to_string(n_prime) + " (table has l<=" + std::to_string(l_max_) +
                              ", n<=" + std::to_string(n_max_) + ")");
    return values_[offset(l, n, n_prime)];
  }

  void set(int l, int n, int n_prime, double v) {
    values_[offset(l, n, n_prime)] = v;
    values_[offset(l, n_prime, n)] = v;
  }

  /// Number of quadrature nodes that fell outside a tabulated potential's range.
  int extrapolated_nodes = 0;
  double error_estimate = 0.0;

 private:
  std::size_t offset(int l, int n, int np) const {
    return (static_cast<std::size_t>(l) * (n_max_ + 1) + n) * (n_max_ + 1) + np;
  }

  double width_ = 1.0;
  int l_max_ = -1;
  int n_max_ = -1;
  std::vector<double> values_;
};

namespace detail {

inline QuadratureRule radial_rule(const InteractionModel& model, double width, const RadialQuadratureOptions& opt,
                                  int level) {
  const double r_max = opt.extent / std::sqrt(width);
  const int pieces = opt.subdivisions << level;
  std::vector<double> cuts;
  for (int i = 0; i <= pieces; ++i) cuts.push_back(r_max * i / pieces);
  if (opt.split_at_breakpoints)
    for (double b : model.breakpoints())
      if (b > 0.0 && b < r_max) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());
  return composite_gauss_legendre(cuts, opt.nodes_per_segment);
}

inline RadialIntegralTable integrate_table(const InteractionModel& model, double width, int l_max, int n_max,
                                           const QuadratureRule& rule) {
  RadialIntegralTable table(width, l_max, n_max);
  const std::size_t nodes = rule.size();
  std::vector<double> weighted(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const PotentialSample s = sample(model, rule.nodes[i]);
    if (s.extrapolated) ++table.extrapolated_nodes;
    weighted[i] = rule.weights[i] * s.value * rule.nodes[i] * rule.nodes[i];
  }
  std::vector<double> radial(static_cast<std::size_t>(n_max + 1) * nodes);
  std::vector<double> seq(n_max + 1);
  for (int l = 0; l <= l_max; ++l) {
    for (std::size_t i = 0; i < nodes; ++i) {
      ho_radial_sequence(n_max, l, width, rule.nodes[i], seq.data());
      for (int n = 0; n <= n_max; ++n) radial[n * nodes + i] = seq[n];
    }
    for (int n = 0; n <= n_max; ++n)
      for (int np = 0; np <= n; ++np) {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) s += weighted[i] * radial[n * nodes + i] * radial[np * nodes + i];
        table.set(l, n, np, s);
      }
  }
  return table;
}

}  // namespace detail

/// Composite Gauss-Legendre radial integrals, refined by doubling the number
/// of segments until two successive rules agree to `tolerance`.
inline RadialIntegralTable radial_matrix_elements(const InteractionModel& model, double width, int l_max, int n_max,
                                                  const RadialQuadratureOptions& opt = {}) {
  if (width <= 0.0) throw std::domain_error("radial_matrix_elements: width must be positive");
  RadialIntegralTable coarse = detail::integrate_table(model, width, l_max, n_max, detail::radial_rule(model, width, opt, 0));
  if (opt.max_refinements <= 0) return coarse;

  double worst = 0.0;
  int worst_l = 0, worst_n = 0, worst_np = 0;
  for (int level = 1; level <= opt.max_refinements; ++level) {
    RadialIntegralTable fine =
        detail::integrate_table(model, width, l_max, n_max, detail::radial_rule(model, width, opt, level));
    worst = 0.0;
    for (int l = 0; l <= l_max; ++l)
      for (int n = 0; n <= n_max; ++n)
        for (int np = 0; np <= n; ++np) {
          const double d = std::abs(fine.at(l, n, np) - coarse.at(l, n, np));
          if (!(d <= worst)) {
            worst = d;
            worst_l = l;
            worst_n = n;
            worst_np = np;
          }
        }
    fine.error_estimate = worst;
    if (worst <= opt.tolerance) return fine;
    coarse = std::move(fine);
  }
  throw QuadratureError(worst_l, worst_n, worst_np, worst);
}

}  // namespace trion
