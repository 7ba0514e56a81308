#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "trion/observables.hpp"
#include "trion/symmetry.hpp"

namespace trion {

/// Largest density found where the symmetry rules demand a node, relative to
/// the shape-density maximum. Loci the rules leave open are not measured.
struct NodalCheck {
  double rule1_leak = 0.0;  ///< largest Wbar_Q over Q forbidden by parity
  std::optional<double> rt;
  std::optional<double> ist;
  std::optional<double> col;
  std::optional<double> symmetric_col;

  double worst() const {
    double w = rule1_leak;
    for (const auto& v : {rt, ist, col, symmetric_col})
      if (v) w = std::max(w, *v);
    return w;
  }
  bool holds(double tolerance = 1e-6) const { return worst() < tolerance; }
};

struct NodalCheckOptions {
  int samples = 37;  ///< points along each locus
  ShapeGridSpec reference{37, 23, 2.2};
  WeightOptions weights;
};

inline NodalCheck check_nodal_rules(const Eigenstate& s, const NodalCheckOptions& opt = {}) {
  const StateSymmetryProfile p = classify(s.L, s.parity, s.statistics);
  NodalCheck out;
  const WeightVector w = q_weights(s, opt.weights);
  for (int q = 0; q <= s.L; ++q)
    if (parity_sign_of_l(q) != sign(s.parity)) out.rule1_leak = std::max(out.rule1_leak, w.folded[q]);

  const double h = std::sqrt(3.0) * rms_radius(s);
  const double peak = shape_density(s, h, opt.reference).refined_max.value;
  const AmplitudeEvaluator eval(s);
  auto worst_on = [&](const std::vector<std::pair<double, double>>& points) {
    double m = 0.0;
    for (auto [phi, ratio] : points) m = std::max(m, shape_density_at(eval, h, phi, ratio));
    return m / peak;
  };

  const int n = opt.samples;
  std::vector<std::pair<double, double>> ist, col, symcol;
  for (int k = 0; k < n; ++k) {
    const double phi = -kPi / 2.0 + kPi * k / (n - 1);
    ist.emplace_back(phi, ist_branch(phi, +1));
    ist.emplace_back(phi, ist_branch(phi, -1));
    ist.emplace_back(0.0, opt.reference.ratio_max * k / (n - 1));
    symcol.emplace_back(phi, 0.0);
    col.emplace_back(kPi / 2.0, opt.reference.ratio_max * k / (n - 1));
    col.emplace_back(-kPi / 2.0, opt.reference.ratio_max * k / (n - 1));
  }
  symcol.emplace_back(kPi / 2.0, 1.5);
  symcol.emplace_back(-kPi / 2.0, 1.5);

  if (!p.rt_accessible) out.rt = worst_on({{0.0, std::sqrt(3.0) / 2.0}});
  if (!p.ist_accessible) out.ist = worst_on(ist);
  if (!p.col_accessible) out.col = worst_on(col);
  if (!p.symcol_accessible) out.symmetric_col = worst_on(symcol);
  return out;
}

}  // namespace trion
