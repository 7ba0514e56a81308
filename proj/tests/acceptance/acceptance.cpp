// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "trion/trion.hpp"

using namespace trion;

namespace {

struct Series {
  int L;
  Parity parity;
};

const std::array<Series, 9> kFirstStates = {{{0, Parity::Even},
                                             {1, Parity::Even},
                                             {1, Parity::Odd},
                                             {2, Parity::Even},
                                             {2, Parity::Odd},
                                             {3, Parity::Even},
                                             {3, Parity::Odd},
                                             {4, Parity::Even},
                                             {4, Parity::Odd}}};

std::string label(int L, Parity p) { return std::to_string(L) + parity_char(p); }

/// First states of one interaction and statistics at N_max = 20, solved once.
class StateBook {
 public:
  const Eigenstate& get(const std::string& interaction, Statistics st, int L, Parity p, int i = 1) {
    const auto key = std::make_tuple(interaction, static_cast<int>(st), L, sign(p), i);
    if (auto it = states_.find(key); it != states_.end()) return it->second;
    SolverOptions opt;
    opt.n_max = 20;
    return states_.emplace(key, solve_state(st, L, p, i, InteractionModel::from_spec(interaction), opt))
        .first->second;
  }

 private:
  std::map<std::tuple<std::string, int, int, int, int>, Eigenstate> states_;
};

class Report {
 public:
  void line(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  %-46s %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures_ += ok ? 0 : 1;
  }
  void run(const std::string& name, const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail << "exception: " << e.what();
    }
    line(name, ok, detail.str());
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// ---------------------------------------------------------------------------

bool ground_state_energy(std::ostringstream& d) {
  const std::array<std::pair<int, double>, 3> expected = {{{16, 2.06561}, {18, 2.06558}, {20, 2.06557}}};
  bool ok = true;
  double previous = 1e300;
  for (auto [n, e_ref] : expected) {
    SolverOptions opt;
    opt.n_max = n;
    const double e = solve_state(Statistics::Boson, 0, Parity::Even, 1, InteractionModel::gaussian(), opt).energy;
    ok = ok && near(e, e_ref, 5e-4) && e <= previous;
    previous = e;
    d << "N=" << n << ":" << std::fixed;
    d.precision(6);
    d << e << " ";
  }
  return ok;
}

bool weight_table(StateBook& book, std::ostringstream& d) {
  // Blank table entries are zeros.
  const std::map<std::string, std::vector<double>> expected = {
      {"0+", {1}},
      {"1+", {1, 0}},
      {"2+", {0.862, 0, 0.138}},
      {"3+", {0.001, 0, 0.999, 0}},
      {"4+", {0.529, 0, 0.305, 0, 0.166}},
      {"1-", {0, 1}},
      {"2-", {0, 1, 0}},
      {"3-", {0, 0.016, 0, 0.984}},
  };
  bool ok = true;
  double worst = 0.0;
  for (const auto& [L, p] : kFirstStates) {
    const WeightVector w = q_weights(book.get("A", Statistics::Boson, L, p));
    const std::string name = label(L, p);
    if (name == "4-") {
      const bool row = w.folded[3] >= 0.9 && near(w.sum(), 1.0, 1e-6);
      ok = ok && row;
      d << "4-: Wbar3=" << w.folded[3] << " sum=" << w.sum() << (row ? "" : " (bad)") << "; ";
      continue;
    }
    const auto& ref = expected.at(name);
    for (int q = 0; q <= L; ++q) {
      const double diff = std::abs(w.folded[q] - ref[q]);
      worst = std::max(worst, diff);
      if (diff > 0.01) {
        ok = false;
        d << name << " Wbar" << q << "=" << w.folded[q] << " vs " << ref[q] << "; ";
      }
    }
  }
  d << "max |dW| over tabulated rows " << worst;
  return ok;
}

bool cross_interaction_weight(StateBook& book, std::ostringstream& d) {
  const std::array<std::pair<const char*, double>, 3> expected = {{{"A", 0.984}, {"B", 0.991}, {"C", 0.972}}};
  bool ok = true;
  for (auto [v, ref] : expected) {
    const double w3 = q_weights(book.get(v, Statistics::Boson, 3, Parity::Odd)).folded[3];
    ok = ok && near(w3, ref, 0.01);
    d << "V_" << v << ":" << w3 << " ";
  }
  return ok;
}

double peak_angle(const Eigenstate& s) { return degrees(one_body_peak(OneBodyDensity(s), rms_radius(s)).theta); }

bool density_peaks(StateBook& book, std::ostringstream& d) {
  struct Case {
    const char* v;
    int L;
    Parity p;
    double deg;
    double tol;
  };
  const std::vector<Case> cases = {
      {"A", 4, Parity::Odd, 63, 2},  {"B", 4, Parity::Odd, 63, 2},  {"C", 4, Parity::Odd, 66, 2},
      {"A", 3, Parity::Even, 50, 2}, {"B", 3, Parity::Even, 49, 2}, {"C", 3, Parity::Even, 49, 2},
      {"A", 3, Parity::Odd, 90, 1},  {"A", 2, Parity::Even, 0, 2},
  };
  bool ok = true;
  d.precision(4);
  for (const auto& c : cases) {
    const double a = peak_angle(book.get(c.v, Statistics::Boson, c.L, c.p));
    ok = ok && near(a, c.deg, c.tol);
    d << label(c.L, c.p) << "/" << c.v << ":" << a << " ";
  }
  return ok;
}

bool shape_structure(StateBook& book, std::ostringstream& d) {
  bool ok = true;
  d.precision(4);
  const ShapeGridSpec spec;
  const double dphi = 180.0 / (spec.phi_points - 1), dratio = spec.ratio_max / (spec.ratio_points - 1);
  auto grid_of = [&](const Eigenstate& s) { return shape_density(s, std::sqrt(3.0) * rms_radius(s), spec); };

  for (auto [L, p] : {std::pair{0, Parity::Even}, {2, Parity::Even}, {3, Parity::Odd}}) {
    const ShapeGrid g = grid_of(book.get("A", Statistics::Boson, L, p));
    const bool at_rt =
        std::abs(degrees(g.grid_max.phi)) <= dphi && std::abs(g.grid_max.ratio - std::sqrt(3.0) / 2.0) <= dratio;
    ok = ok && at_rt;
    d << label(L, p) << " max(" << degrees(g.grid_max.phi) << "," << g.grid_max.ratio << ") ";
  }

  const std::array<std::tuple<int, Parity, double>, 3> ist = {
      {{3, Parity::Even, 94.0}, {1, Parity::Odd, 101.0}, {2, Parity::Odd, 105.0}}};
  for (auto [L, p, top] : ist) {
    const Eigenstate& s = book.get("A", Statistics::Boson, L, p);
    const double h = std::sqrt(3.0) * rms_radius(s);
    const ShapeGrid g = grid_of(s);
    const double rt = shape_density_at(AmplitudeEvaluator(s), h, 0.0, std::sqrt(3.0) / 2.0);
    const ShapePeak& m = g.refined_max;
    const double off_ist = std::min({std::abs(m.ratio - ist_branch(m.phi, +1)), std::abs(m.ratio - ist_branch(m.phi, -1)),
                                     std::abs(degrees(m.phi)) < 1e-6 ? 0.0 : 1e300});
    const double angle = degrees(triangle_shape(m.phi, m.ratio).apex_angle);
    ok = ok && rt < 1e-6 * m.value && off_ist < 2.0 * dratio && near(angle, top, 3.0);
    d << label(L, p) << " RT/max=" << rt / m.value << " top=" << angle << " ";
  }

  const ShapeGrid g = grid_of(book.get("A", Statistics::Boson, 4, Parity::Even, 2));
  const double phi = degrees(g.grid_max.phi), ratio = g.grid_max.ratio;
  const bool on_line = ratio <= dratio;
  const bool at_b = std::abs(std::abs(phi) - 90.0) <= dphi && std::abs(ratio - 1.5) <= dratio;
  ok = ok && (on_line || at_b);
  d << "4+_2 max(" << phi << "," << ratio << ")";
  return ok;
}

bool spectral_grouping(StateBook& book, std::ostringstream& d) {
  bool ok = true;
  d.precision(5);
  auto energy = [&](const std::string& v, Statistics st, int L, Parity p) { return book.get(v, st, L, p).energy; };
  const std::vector<std::pair<std::string, Statistics>> runs = {
      {"A", Statistics::Boson}, {"B", Statistics::Boson}, {"C", Statistics::Boson}, {"A", Statistics::Fermion}};
  for (const auto& [v, st] : runs) {
    double top1 = -1e300, bottom3 = 1e300, highest = -1e300;
    std::string highest_name;
    for (auto [L, p] : kFirstStates) {
      const double e = energy(v, st, L, p);
      const int group = *classify(L, p, st).group;
      if (group == 1) top1 = std::max(top1, e);
      if (group == 3) bottom3 = std::min(bottom3, e);
      if (e > highest) {
        highest = e;
        highest_name = label(L, p);
      }
    }
    const bool separated = top1 < bottom3;
    ok = ok && separated;
    d << v << "/" << to_string(st) << (separated ? " ok" : " overlap");
    if (st == Statistics::Boson) {
      ok = ok && highest_name == "1+";
      d << " top=" << highest_name;
    }
    d << "; ";
  }
  const bool c_exception = energy("C", Statistics::Boson, 4, Parity::Odd) > energy("C", Statistics::Boson, 4, Parity::Even);
  const bool f_3 = energy("A", Statistics::Fermion, 3, Parity::Odd) < energy("A", Statistics::Fermion, 3, Parity::Even);
  const bool f_2 = energy("A", Statistics::Fermion, 2, Parity::Even) < energy("A", Statistics::Fermion, 2, Parity::Odd);
  d << "C:E(4-)>E(4+) " << c_exception << " fermion E(3-)<E(3+) " << f_3 << " E(2+)<E(2-) " << f_2;
  return ok && c_exception && f_3 && f_2;
}

bool size_ordering(StateBook& book, std::ostringstream& d) {
  bool ok = true;
  d.precision(4);
  for (const char* v : {"A", "B", "C"}) {
    std::vector<std::pair<double, std::string>> sizes;
    for (auto [L, p] : kFirstStates) sizes.emplace_back(rms_radius(book.get(v, Statistics::Boson, L, p)), label(L, p));
    std::sort(sizes.begin(), sizes.end());
    std::vector<std::string> small = {sizes[0].second, sizes[1].second, sizes[2].second};
    std::sort(small.begin(), small.end());
    const bool row = sizes.back().second == "1+" && small == std::vector<std::string>{"0+", "2+", "3-"};
    ok = ok && row;
    d << v << ": max " << sizes.back().second << " min {" << small[0] << "," << small[1] << "," << small[2] << "} ";
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Property suites

bool cg_orthogonality(std::ostringstream& d) {
  double worst = 0.0;
  for (int l1 = 0; l1 <= 6; ++l1)
    for (int l2 = 0; l2 <= 6; ++l2)
      for (int L = std::abs(l1 - l2); L <= l1 + l2; ++L)
        for (int Lp = std::abs(l1 - l2); Lp <= l1 + l2; ++Lp)
          for (int M = -std::min(L, Lp); M <= std::min(L, Lp); ++M) {
            double s = 0.0;
            for (int m1 = -l1; m1 <= l1; ++m1)
              s += clebsch_gordan(l1, m1, l2, M - m1, L, M) * clebsch_gordan(l1, m1, l2, M - m1, Lp, M);
            worst = std::max(worst, std::abs(s - (L == Lp ? 1.0 : 0.0)));
          }
  d << "max defect " << worst;
  return worst < 1e-10;
}

bool bracket_group(std::ostringstream& d) {
  double orth = 0.0, hom = 0.0;
  const auto perms = Permutation::all();
  for (int L = 0; L <= 4; ++L)
    for (Parity p : {Parity::Even, Parity::Odd}) {
      std::vector<Eigen::MatrixXd> m;
      for (const auto& perm : perms) m.push_back(expand_permutation(perm, p, L, 10));
      if (m[0].size() == 0) continue;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m[0].rows(), m[0].cols());
      for (std::size_t i = 0; i < perms.size(); ++i) {
        orth = std::max(orth, (m[i] * m[i].transpose() - id).cwiseAbs().maxCoeff());
        for (std::size_t j = 0; j < perms.size(); ++j) {
          const auto c = perms[i].compose(perms[j]);
          std::size_t k = 0;
          while (!(perms[k] == c)) ++k;
          hom = std::max(hom, (m[i] * m[j] - m[k]).cwiseAbs().maxCoeff());
        }
      }
    }
  d << "orthogonality " << orth << " homomorphism " << hom;
  return orth < 1e-10 && hom < 1e-10;
}

bool symmetrizer_idempotence(std::ostringstream& d) {
  double worst = 0.0;
  for (Statistics st : {Statistics::Boson, Statistics::Fermion})
    for (int L = 0; L <= 4; ++L)
      for (Parity p : {Parity::Even, Parity::Odd}) {
        const auto labels = enumerate_labels(L, p, 12);
        if (labels.empty()) continue;
        const Eigen::MatrixXd s = symmetrizer(labels, st, L);
        worst = std::max(worst, (s * s - s).cwiseAbs().maxCoeff());
      }
  d << "max |S^2 - S| " << worst;
  return worst < 1e-9;
}

bool hermiticity(std::ostringstream& d) {
  double worst = 0.0;
  for (const char* v : {"A", "B", "C"})
    for (auto [L, p] : kFirstStates) {
      const auto set = BasisCache::global().get(Statistics::Boson, L, p, 20);
      const Eigen::MatrixXd raw = raw_hamiltonian(set->labels, InteractionModel::from_spec(v), 1.8);
      const Eigen::MatrixXd h = set->coeffs * raw * set->coeffs.transpose();
      worst = std::max(worst, (h - h.transpose()).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff());
    }
  d << "max relative asymmetry before symmetrization " << worst;
  return worst < 1e-12;
}

bool weight_sums(StateBook& book, std::ostringstream& d) {
  double worst = 0.0;
  for (const char* v : {"A", "B", "C"})
    for (auto [L, p] : kFirstStates) worst = std::max(worst, std::abs(q_weights(book.get(v, Statistics::Boson, L, p)).sum() - 1.0));
  for (auto [L, p] : kFirstStates)
    worst = std::max(worst, std::abs(q_weights(book.get("A", Statistics::Fermion, L, p)).sum() - 1.0));
  d << "max |sum - 1| " << worst;
  return worst < 1e-6;
}

bool nodal_rules(StateBook& book, std::ostringstream& d) {
  double worst = 0.0;
  std::string where;
  int count = 0;
  auto check = [&](const std::string& v, Statistics st, int L, Parity p, int i) {
    const NodalCheck n = check_nodal_rules(book.get(v, st, L, p, i));
    ++count;
    if (n.worst() > worst) {
      worst = n.worst();
      where = v + "/" + to_string(st) + "/" + label(L, p);
    }
  };
  for (const char* v : {"A", "B", "C"})
    for (auto [L, p] : kFirstStates) check(v, Statistics::Boson, L, p, 1);
  for (auto [L, p] : kFirstStates) check("A", Statistics::Fermion, L, p, 1);
  check("A", Statistics::Boson, 4, Parity::Even, 2);
  d << count << " states, worst relative density on a forbidden locus " << worst;
  if (!where.empty()) d << " (" << where << ")";
  return worst < 1e-6;
}

// Symmetric kinetic form with fourth-order finite differences.
double onebody_oracle(int n1, int n2, int l, double mu, double gamma) {
  const double width = mu * gamma;
  const double rmax = 14.0 / std::sqrt(width);
  const auto rule = composite_gauss_legendre({0.0, rmax / 4, rmax / 2, 3 * rmax / 4, rmax}, 64);
  auto f = [&](int n, double r) { return ho_radial({n, l, width}, r); };
  auto df = [&](int n, double r) {
    const double h = std::min(1e-3 / std::sqrt(width), r / 3.0);
    return (-f(n, r + 2 * h) + 8 * f(n, r + h) - 8 * f(n, r - h) + f(n, r - 2 * h)) / (12 * h);
  };
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    const double kin = (df(n1, r) * df(n2, r) + l * (l + 1.0) * f(n1, r) * f(n2, r) / (r * r)) / (2 * mu);
    s += rule.weights[i] * (kin + 0.5 * mu * r * r * f(n1, r) * f(n2, r)) * r * r;
  }
  return s;
}

bool oscillator_elements(std::ostringstream& d) {
  double worst = 0.0;
  for (double mu : {kMassR, kMassBigR})
    for (double gamma : {0.6, 1.9})
      for (int l = 0; l <= 4; ++l)
        for (int n1 = 0; n1 <= 8; ++n1)
          for (int n2 = std::max(0, n1 - 2); n2 <= std::min(8, n1 + 2); ++n2)
            worst = std::max(worst, std::abs(ho_onebody_matrix(n1, n2, l, mu, gamma) - onebody_oracle(n1, n2, l, mu, gamma)));
  d << "max deviation from quadrature " << worst;
  return worst < 1e-8;
}

bool free_energies(std::ostringstream& d) {
  SolverOptions opt;
  opt.n_max = 12;
  const double e = solve_state(Statistics::Boson, 0, Parity::Even, 1, InteractionModel::constant(0.0), opt).energy;
  d.precision(12);
  d << "E(0+) = " << e;
  return near(e, 3.0, 1e-9);
}

}  // namespace

int main() {
  StateBook book;
  Report r;
  r.run("ground-state energy vs N_max", ground_state_energy);
  r.run("Q weights of the nine first states (V_A)", [&](auto& d) { return weight_table(book, d); });
  r.run("3- Wbar_3 across interactions", [&](auto& d) { return cross_interaction_weight(book, d); });
  r.run("one-body density peaks", [&](auto& d) { return density_peaks(book, d); });
  r.run("shape-density structure (V_A bosons)", [&](auto& d) { return shape_structure(book, d); });
  r.run("spectral grouping", [&](auto& d) { return spectral_grouping(book, d); });
  r.run("size ordering", [&](auto& d) { return size_ordering(book, d); });
  r.run("property: CG orthogonality", cg_orthogonality);
  r.run("property: bracket orthogonality and S3 table", bracket_group);
  r.run("property: symmetrizer idempotence", symmetrizer_idempotence);
  r.run("property: Hamiltonian Hermiticity", hermiticity);
  r.run("property: weight sums", [&](auto& d) { return weight_sums(book, d); });
  r.run("property: symmetry-rule nodes", [&](auto& d) { return nodal_rules(book, d); });
  r.run("property: oscillator elements vs quadrature", oscillator_elements);
  r.run("property: free-oscillator ground energy", free_energies);
  std::printf("%d failure(s)\n", r.failures());
  return r.failures() == 0 ? 0 : 1;
}
