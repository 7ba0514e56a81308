#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trion/labels.hpp"

namespace trion {

/// Symbolic consequences of the point-group and permutation constraints on
/// the body-frame components Psi_{LQ} of an (L, parity) state.
struct StateSymmetryProfile {
  int L = 0;
  Parity parity = Parity::Even;
  Statistics statistics = Statistics::Boson;
  std::vector<int> allowed_q;
  bool rt_accessible = false;
  bool ist_accessible = false;
  bool col_accessible = false;
  bool symcol_accessible = false;
  std::optional<int> group;  ///< empty when the series does not exist

  bool exists() const noexcept { return !allowed_q.empty(); }
};

/// +1 for bosons, -1 for spatially antisymmetric fermions.
inline int exchange_sign(Statistics s) noexcept { return s == Statistics::Boson ? 1 : -1; }

inline int parity_sign_of_l(int L) noexcept { return (L % 2 == 0) ? 1 : -1; }

/// Inversion acts on a planar configuration as a rotation by pi about k',
/// so only Q with (-1)^Q = parity survive.
inline std::vector<int> rule1_allowed_q(int L, Parity parity) {
  std::vector<int> out;
  for (int q = -L; q <= L; ++q)
    if (parity_sign_of_l(q < 0 ? -q : q) == sign(parity)) out.push_back(q);
  return out;
}

/// Q = 0 survives an IST reflection only if (-1)^L equals the exchange sign.
inline bool q0_survives_ist(int L, Statistics statistics) noexcept {
  return parity_sign_of_l(L) == exchange_sign(statistics);
}

/// Some allowed Q is a multiple of 3 (cyclic permutation at a regular
/// triangle); Q = 0 must also survive the IST reflection, since a regular
/// triangle is an isosceles one.
inline bool rt_accessible(int L, Parity parity, Statistics statistics) {
  for (int q : rule1_allowed_q(L, parity)) {
    if (q % 3 != 0) continue;
    if (q != 0 || q0_survives_ist(L, statistics)) return true;
  }
  return false;
}

/// Nonzero Q pair up under the IST reflection and always leave a surviving
/// combination; Q = 0 needs the sign condition.
inline bool ist_accessible(int L, Parity parity, Statistics statistics) {
  for (int q : rule1_allowed_q(L, parity)) {
    if (q != 0) return true;
    if (q0_survives_ist(L, statistics)) return true;
  }
  return false;
}

struct ColAccess {
  bool col = false;
  bool symmetric_col = false;
};

/// Collinear shapes need (-1)^L = parity; the symmetric one (a particle at the
/// midpoint) additionally needs parity = exchange sign.
inline ColAccess col_accessible(int L, Parity parity, Statistics statistics) {
  ColAccess out;
  out.col = parity_sign_of_l(L) == sign(parity);
  out.symmetric_col = out.col && sign(parity) == exchange_sign(statistics);
  return out;
}

inline StateSymmetryProfile classify(int L, Parity parity, Statistics statistics) {
  if (L < 0) throw std::invalid_argument("classify: L must be non-negative");
  StateSymmetryProfile p;
  p.L = L;
  p.parity = parity;
  p.statistics = statistics;
  p.allowed_q = rule1_allowed_q(L, parity);
  if (p.allowed_q.empty()) return p;
  p.rt_accessible = rt_accessible(L, parity, statistics);
  p.ist_accessible = ist_accessible(L, parity, statistics);
  const ColAccess c = col_accessible(L, parity, statistics);
  p.col_accessible = c.col;
  p.symcol_accessible = c.symmetric_col;
  p.group = p.rt_accessible ? 1 : (p.ist_accessible ? 2 : 3);
  return p;
}

/// Why a series has no states, or an empty string if it exists.
inline std::string nonexistence_reason(int L, Parity parity) {
  if (rule1_allowed_q(L, parity).empty())
    return "Rule 1 forbids all Q: no |Q| <= " + std::to_string(L) + " with (-1)^Q = " +
           (parity == Parity::Even ? "+1" : "-1");
  return {};
}

}  // namespace trion
