// Ground state and first excitations of three bosons with the Gaussian pair
// potential, then the Q-weights and density peaks of the 3- state.

#include <cmath>
#include <cstdio>

#include "trion/trion.hpp"

using namespace trion;

int main() {
  const auto model = InteractionModel::gaussian();
  SolverOptions opt;
  opt.n_max = 16;

  const SpectrumTable table = spectrum(model, Statistics::Boson, opt.n_max, 4, 1, opt);
  for (const auto& s : table.entries)
    std::printf("%d%c  E = %8.5f  r_rms = %.4f  group %d\n", s.L, parity_char(s.parity), s.energy, s.r_rms,
                *classify(s.L, s.parity, Statistics::Boson).group);
  for (const auto& m : table.nonexistent) std::printf("%d%c  %s\n", m.L, parity_char(m.parity), m.reason.c_str());

  const Eigenstate s = solve_state(Statistics::Boson, 3, Parity::Odd, 1, model, opt);
  const WeightVector w = q_weights(s);
  std::printf("\n3- weights:");
  for (int q = 0; q <= 3; ++q) std::printf("  W%d = %.4f", q, w.folded[q]);

  const double r = rms_radius(s);
  const AnglePeak peak = one_body_peak(OneBodyDensity(s), r);
  std::printf("\n3- one-body density at r3 = %.3f peaks at %.1f deg\n", r, degrees(peak.theta));

  const ShapeGrid g = shape_density(s, std::sqrt(3.0) * r, {91, 61, 2.2});
  std::printf("3- shape density peaks at phi = %.1f deg, R/r = %.3f\n", degrees(g.refined_max.phi), g.refined_max.ratio);
}
