#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trion {

enum class Parity : int { Even = 1, Odd = -1 };

inline int sign(Parity p) noexcept { return static_cast<int>(p); }
inline char parity_char(Parity p) noexcept { return p == Parity::Even ? '+' : '-'; }
inline Parity parity_of(int l_sum) noexcept { return (l_sum % 2 == 0) ? Parity::Even : Parity::Odd; }

enum class Statistics { Boson, Fermion };

inline std::string to_string(Statistics s) { return s == Statistics::Boson ? "boson" : "fermion"; }

inline Statistics statistics_from_string(const std::string& s) {
  if (s == "boson" || s == "bosons") return Statistics::Boson;
  if (s == "fermion" || s == "fermions") return Statistics::Fermion;
  throw std::invalid_argument("unknown statistics '" + s + "'");
}

/// Quantum numbers of one coupled product function
/// (phi_{n_a l_a}(r) phi_{n_b l_b}(R))_{LM}; L and parity belong to the block.
struct BasisLabel {
  int na = 0;
  int la = 0;
  int nb = 0;
  int lb = 0;

  int oscillator_quanta() const noexcept { return 2 * (na + nb) + la + lb; }
  Parity parity() const noexcept { return parity_of(la + lb); }

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Canonical order: (N_ab, l_a, l_b, n_a).
inline bool canonical_less(const BasisLabel& a, const BasisLabel& b) noexcept {
  const int na = a.oscillator_quanta();
  const int nb = b.oscillator_quanta();
  if (na != nb) return na < nb;
  if (a.la != b.la) return a.la < b.la;
  if (a.lb != b.lb) return a.lb < b.lb;
  return a.na < b.na;
}

inline bool triangle(int l1, int l2, int L) noexcept {
  return L >= (l1 > l2 ? l1 - l2 : l2 - l1) && L <= l1 + l2;
}

/// All labels with N_ab == quanta that couple to L, canonical order.
inline std::vector<BasisLabel> shell_labels(int quanta, int L) {
  std::vector<BasisLabel> out;
  for (int la = 0; la <= quanta; ++la) {
    for (int lb = 0; la + lb <= quanta; ++lb) {
      if ((quanta - la - lb) % 2 != 0 || !triangle(la, lb, L)) continue;
      const int radial = (quanta - la - lb) / 2;
      for (int na = 0; na <= radial; ++na) out.push_back({na, la, radial - na, lb});
    }
  }
  return out;
}

/// Every label of an (L, parity) block with N_ab <= n_max, canonical order.
/// L = 0 with odd parity is empty (l_a = l_b forces even parity).
inline std::vector<BasisLabel> enumerate_labels(int L, Parity parity, int n_max) {
  if (L < 0 || n_max < 0) throw std::invalid_argument("enumerate_labels: L and N_max must be non-negative");
  std::vector<BasisLabel> out;
  const int first = (parity == Parity::Even) ? 0 : 1;
  for (int quanta = first; quanta <= n_max; quanta += 2) {
    auto shell = shell_labels(quanta, L);
    out.insert(out.end(), shell.begin(), shell.end());
  }
  return out;
}

struct BasisLabelHash {
  std::size_t operator()(const BasisLabel& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.na);
    h = h * 131 + static_cast<std::uint64_t>(k.la);
    h = h * 131 + static_cast<std::uint64_t>(k.nb);
    h = h * 131 + static_cast<std::uint64_t>(k.lb);
    return std::hash<std::uint64_t>{}(h);
  }
};

}  // namespace trion
