#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "trion/observables.hpp"
#include "trion/solver.hpp"
#include "trion/symmetry.hpp"

namespace trion {

struct SpectrumEntry {
  int L = 0;
  Parity parity = Parity::Even;
  int i = 1;
  double energy = 0.0;
  double gamma = 1.0;
  double r_rms = 0.0;
  bool gamma_at_boundary = false;
};

struct MissingSeries {
  int L = 0;
  Parity parity = Parity::Even;
  std::string reason;
};

struct SpectrumTable {
  std::string interaction;
  Statistics statistics = Statistics::Boson;
  int n_max = 0;
  std::vector<SpectrumEntry> entries;
  std::vector<MissingSeries> nonexistent;

  /// Lowest energy in the table; the reference for a shifted view.
  double ground() const {
    double e = std::numeric_limits<double>::infinity();
    for (const auto& s : entries) e = std::min(e, s.energy);
    return e;
  }

  const SpectrumEntry* find(int L, Parity parity, int i = 1) const {
    for (const auto& s : entries)
      if (s.L == L && s.parity == parity && s.i == i) return &s;
    return nullptr;
  }
};

inline std::string missing_series_reason(int L, Parity parity, Statistics statistics, int n_max) {
  if (auto why = nonexistence_reason(L, parity); !why.empty()) return why;
  return "no " + std::string(statistics == Statistics::Boson ? "symmetric" : "antisymmetric") +
         " basis functions with N_ab <= " + std::to_string(n_max);
}

/// States 1..per_series of every (L <= L_max, parity) series, L ascending,
/// positive parity first. gamma is optimized on each first state.
inline SpectrumTable spectrum(const InteractionModel& model, Statistics statistics, int n_max, int l_max,
                              int per_series = 1, SolverOptions opt = {}) {
  if (l_max < 0) throw ConfigError("L_max must be non-negative");
  if (per_series < 1) throw ConfigError("states per series must be >= 1");
  opt.n_max = n_max;
  SpectrumTable out;
  out.interaction = model.name();
  out.statistics = statistics;
  out.n_max = n_max;
  for (int L = 0; L <= l_max; ++L)
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      const auto set = BasisCache::global().get(statistics, L, parity, n_max, opt.symmetrize);
      if (set->nonexistent()) {
        out.nonexistent.push_back({L, parity, missing_series_reason(L, parity, statistics, n_max)});
        continue;
      }
      for (const auto& s : solve_states(statistics, L, parity, per_series, model, opt))
        out.entries.push_back({s.L, s.parity, s.index, s.energy, s.gamma, rms_radius(s), s.gamma_at_boundary});
    }
  return out;
}

}  // namespace trion
