#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "trion/trion.hpp"

namespace fs = std::filesystem;
using namespace trion;
using namespace trion::cli;

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNonexistent = 3, kNumerical = 4 };

// ---------------------------------------------------------------------------
// Config file merging

using Setter = std::function<void(RunConfig&, const Json&)>;

template <class T>
Setter member(T RunConfig::*m) {
  return [m](RunConfig& c, const Json& j) { c.*m = j.get<T>(); };
}

Setter numeric_string(std::string RunConfig::*m) {
  return [m](RunConfig& c, const Json& j) {
    if (j.is_string()) {
      c.*m = j.get<std::string>();
    } else if (j.is_number_integer()) {
      c.*m = std::to_string(j.get<long long>());
    } else if (j.is_number()) {
      c.*m = format_double(j.get<double>());
    } else {
      throw ConfigError("expected a string or number");
    }
  };
}

const std::map<std::string, Setter>& config_fields() {
  static const std::map<std::string, Setter> fields = {
      {"interaction", member(&RunConfig::interaction)},
      {"statistics", member(&RunConfig::statistics)},
      {"nmax", member(&RunConfig::nmax)},
      {"lmax", member(&RunConfig::lmax)},
      {"gamma", numeric_string(&RunConfig::gamma)},
      {"gamma_min", member(&RunConfig::gamma_min)},
      {"gamma_max", member(&RunConfig::gamma_max)},
      {"gamma_points", member(&RunConfig::gamma_points)},
      {"gamma_tolerance", member(&RunConfig::gamma_tolerance)},
      {"threshold", member(&RunConfig::threshold)},
      {"radial_nodes", member(&RunConfig::radial_nodes)},
      {"radial_subdivisions", member(&RunConfig::radial_subdivisions)},
      {"radial_extent", member(&RunConfig::radial_extent)},
      {"radial_tolerance", member(&RunConfig::radial_tolerance)},
      {"radial_refinements", member(&RunConfig::radial_refinements)},
      {"weight_points", member(&RunConfig::weight_points)},
      {"weight_extent", member(&RunConfig::weight_extent)},
      {"count", member(&RunConfig::count)},
      {"state", member(&RunConfig::state)},
      {"nmax_list",
       [](RunConfig& c, const Json& j) {
         if (j.is_array()) {
           std::string s;
           for (const auto& v : j) s += (s.empty() ? "" : ",") + std::to_string(v.get<int>());
           c.nmax_list = s;
         } else {
           numeric_string(&RunConfig::nmax_list)(c, j);
         }
       }},
      {"phi_points", member(&RunConfig::phi_points)},
      {"ratio_points", member(&RunConfig::ratio_points)},
      {"ratio_max", member(&RunConfig::ratio_max)},
      {"hyper_radius", member(&RunConfig::hyper_radius)},
      {"r3_points", member(&RunConfig::r3_points)},
      {"theta_points", member(&RunConfig::theta_points)},
      {"r3", member(&RunConfig::r3)},
      {"r3_max", member(&RunConfig::r3_max)},
      {"shift_ground", member(&RunConfig::shift_ground)},
      {"verify", member(&RunConfig::verify)},
      {"out", member(&RunConfig::out)},
  };
  return fields;
}

/// Fills every field named in the file unless the same field came from a flag.
void merge_config_file(RunConfig& cfg, const fs::path& path, const std::set<std::string>& from_flags,
                       bool nmax_is_list) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  std::ifstream in(path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse config file " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = it.key();
    if (nmax_is_list && key == "nmax") key = "nmax_list";
    const auto field = config_fields().find(key);
    if (field == config_fields().end()) throw ConfigError("unknown config key '" + it.key() + "'");
    if (from_flags.count(key)) continue;
    try {
      field->second(cfg, it.value());
    } catch (const ConfigError& e) {
      throw ConfigError("config key '" + it.key() + "': " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + it.key() + "': " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Subcommand option sets

class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& description, RunConfig& cfg)
      : sub_(app.add_subcommand(name, description)), cfg_(cfg) {
    sub_->add_option("--config", config_path_, "JSON config file; flags override its entries");
    bind("--out", "out", cfg.out, "output directory");
  }

  template <class T>
  Command& bind(const std::string& flag, const std::string& key, T& field, const std::string& help) {
    keys_.emplace_back(sub_->add_option(flag, field, help)->capture_default_str(), key);
    return *this;
  }

  Command& toggle(const std::string& flag, const std::string& key, bool& field, const std::string& help) {
    keys_.emplace_back(sub_->add_flag(flag, field, help), key);
    return *this;
  }

  Command& physics() {
    bind("--interaction", "interaction", cfg_.interaction, "A, B, C, or a two-column (r, V) file");
    bind("--statistics", "statistics", cfg_.statistics, "boson or fermion");
    bind("--gamma", "gamma", cfg_.gamma, "'optimize' or a fixed width scale");
    bind("--gamma-min", "gamma_min", cfg_.gamma_min, "lower end of the gamma search");
    bind("--gamma-max", "gamma_max", cfg_.gamma_max, "upper end of the gamma search");
    bind("--gamma-points", "gamma_points", cfg_.gamma_points, "coarse gamma grid size");
    bind("--gamma-tolerance", "gamma_tolerance", cfg_.gamma_tolerance, "bracket width in log(gamma)");
    bind("--threshold", "threshold", cfg_.threshold, "relative Gram eigenvalue cut in symmetrization");
    bind("--radial-nodes", "radial_nodes", cfg_.radial_nodes, "Gauss-Legendre nodes per radial segment");
    bind("--radial-subdivisions", "radial_subdivisions", cfg_.radial_subdivisions, "initial radial segments");
    bind("--radial-extent", "radial_extent", cfg_.radial_extent, "radial cutoff in oscillator lengths");
    bind("--radial-tolerance", "radial_tolerance", cfg_.radial_tolerance, "radial refinement tolerance");
    bind("--radial-refinements", "radial_refinements", cfg_.radial_refinements, "max segment doublings");
    return *this;
  }

  Command& single_state() {
    bind("--nmax", "nmax", cfg_.nmax, "oscillator quanta cutoff");
    bind("--state", "state", cfg_.state, "state selector, e.g. 3- or 4+_2");
    return *this;
  }

  CLI::App* app() const { return sub_; }
  bool parsed() const { return sub_->parsed(); }

  std::set<std::string> given() const {
    std::set<std::string> out;
    for (const auto& [opt, key] : keys_)
      if (opt->count() > 0) out.insert(key);
    return out;
  }

  void finish(bool nmax_is_list = false) const {
    if (!config_path_.empty()) merge_config_file(cfg_, config_path_, given(), nmax_is_list);
    validate(cfg_);
  }

 private:
  CLI::App* sub_;
  RunConfig& cfg_;
  std::string config_path_;
  std::vector<std::pair<CLI::Option*, std::string>> keys_;
};

// ---------------------------------------------------------------------------
// Shared helpers

Statistics statistics_of(const RunConfig& c) { return statistics_from_string(c.statistics); }

fs::path output_dir(const RunConfig& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string state_name(int L, Parity p, int i) { return std::to_string(L) + parity_char(p) + "_" + std::to_string(i); }

Json state_json(int L, Parity p, int i) {
  Json j;
  j["L"] = L;
  j["parity"] = std::string(1, parity_char(p));
  j["i"] = i;
  j["name"] = state_name(L, p, i);
  return j;
}

Eigenstate solve_selected(const RunConfig& c, const InteractionModel& model, const StateSelector& sel, int n_max) {
  const Statistics stat = statistics_of(c);
  if (auto why = nonexistence_reason(sel.L, sel.parity); !why.empty()) throw NonexistentStateError(why);
  const SolverOptions opt = solver_options(c, n_max);
  const auto set = BasisCache::global().get(stat, sel.L, sel.parity, n_max, opt.symmetrize);
  if (set->nonexistent()) throw NonexistentStateError(missing_series_reason(sel.L, sel.parity, stat, n_max));
  return solve_state(stat, sel.L, sel.parity, sel.i, model, opt);
}

Json solved_header(const std::string& hash, const RunConfig& c, const Eigenstate& s) {
  Json j;
  j["config_hash"] = hash;
  j["units"] = "hbar_omega";
  j["interaction"] = c.interaction;
  j["statistics"] = c.statistics;
  j["n_max"] = c.nmax;
  j["state"] = state_json(s.L, s.parity, s.index);
  j["energy"] = s.energy;
  j["gamma"] = s.gamma;
  j["gamma_at_boundary"] = s.gamma_at_boundary;
  j["r_rms"] = rms_radius(s);
  return j;
}

void warn_boundary(const Eigenstate& s) {
  if (s.gamma_at_boundary)
    std::cerr << "trion: warning: optimal gamma for " << s.name() << " sits at the search boundary (" << s.gamma
              << ")\n";
}

WeightOptions weight_options(const RunConfig& c) {
  WeightOptions o;
  o.radial_points = c.weight_points;
  o.extent = c.weight_extent;
  return o;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_spectrum(const RunConfig& c) {
  const std::string hash = config_hash(c, "spectrum");
  const InteractionModel model = InteractionModel::from_spec(c.interaction);
  const SpectrumTable t = spectrum(model, statistics_of(c), c.nmax, c.lmax, c.count, solver_options(c, c.nmax));
  const double ground = t.ground();

  Json j;
  j["config_hash"] = hash;
  j["units"] = "hbar_omega";
  j["interaction"] = c.interaction;
  j["statistics"] = c.statistics;
  j["n_max"] = c.nmax;
  j["l_max"] = c.lmax;
  if (c.shift_ground) j["ground_energy"] = ground;
  j["states"] = Json::array();
  Json warnings = Json::array();
  std::string csv = "# config_hash=" + hash + "\n# units=hbar_omega\nL,parity,i,energy,gamma,r_rms" +
                    (c.shift_ground ? ",energy_shifted" : "") + "\n";
  for (const auto& e : t.entries) {
    Json row;
    row["L"] = e.L;
    row["parity"] = std::string(1, parity_char(e.parity));
    row["i"] = e.i;
    row["energy"] = e.energy;
    row["gamma"] = e.gamma;
    row["r_rms"] = e.r_rms;
    if (c.shift_ground) row["energy_shifted"] = e.energy - ground;
    j["states"].push_back(row);
    if (e.gamma_at_boundary) warnings.push_back("gamma at search boundary for " + state_name(e.L, e.parity, e.i));
    csv += std::to_string(e.L) + "," + parity_char(e.parity) + "," + std::to_string(e.i) + "," +
           format_double(e.energy) + "," + format_double(e.gamma) + "," + format_double(e.r_rms);
    if (c.shift_ground) csv += "," + format_double(e.energy - ground);
    csv += "\n";
    std::printf("%2d%c_%d  E = %.6f  gamma = %.4f  r_rms = %.4f\n", e.L, parity_char(e.parity), e.i, e.energy,
                e.gamma, e.r_rms);
  }
  j["nonexistent"] = Json::array();
  for (const auto& m : t.nonexistent) {
    Json row;
    row["L"] = m.L;
    row["parity"] = std::string(1, parity_char(m.parity));
    row["reason"] = m.reason;
    j["nonexistent"].push_back(row);
  }
  j["warnings"] = warnings;
  for (const auto& w : warnings) std::cerr << "trion: warning: " << w.get<std::string>() << "\n";

  const fs::path dir = output_dir(c);
  write_text(dir / "spectrum.json", render(j));
  write_text(dir / "spectrum.csv", csv);
  return kOk;
}

int cmd_weights(const RunConfig& c) {
  const std::string hash = config_hash(c, "weights");
  const InteractionModel model = InteractionModel::from_spec(c.interaction);
  const Eigenstate s = solve_selected(c, model, parse_state(c.state), c.nmax);
  warn_boundary(s);
  const WeightVector w = q_weights(s, weight_options(c));

  Json j = solved_header(hash, c, s);
  Json q = Json::array(), raw_q = Json::array();
  for (int k = 0; k <= s.L; ++k) q.push_back(k);
  for (int k = -s.L; k <= s.L; ++k) raw_q.push_back(k);
  j["allowed_q"] = rule1_allowed_q(s.L, s.parity);
  j["Q"] = q;
  j["wbar"] = w.folded;
  j["raw_Q"] = raw_q;
  j["raw"] = w.raw;
  j["sum"] = w.sum();
  const fs::path dir = output_dir(c);
  write_text(dir / "weights.json", render(j));

  std::printf("%s  E = %.6f\n", s.name().c_str(), s.energy);
  for (int k = 0; k <= s.L; ++k) std::printf("  Wbar_%d = %.4f\n", k, w.folded[k]);
  return kOk;
}

int cmd_density1(const RunConfig& c) {
  const std::string hash = config_hash(c, "density1");
  const InteractionModel model = InteractionModel::from_spec(c.interaction);
  const StateSelector sel = parse_state(c.state);
  const Eigenstate s = solve_selected(c, model, sel, c.nmax);
  warn_boundary(s);
  const OneBodyDensity rho(s);
  const double r_rms = rms_radius(s);
  const double r_cut = c.r3 > 0.0 ? c.r3 : r_rms;
  const double r_max = c.r3_max > 0.0 ? c.r3_max : 3.0 * r_rms;
  const AnglePeak peak = one_body_peak(rho, r_cut);

  std::vector<double> r3, theta;
  for (int i = 0; i < c.r3_points; ++i) r3.push_back(r_max * i / (c.r3_points - 1));
  for (int k = 0; k < c.theta_points; ++k) theta.push_back(kPi * k / (c.theta_points - 1));
  const DensityGrid g = one_body_density_grid(s, r3, theta);

  const std::string name = state_name(s.L, s.parity, s.index);
  GridCsv header{"r3 (trap length)", "theta3 (deg)", "rho1", name, hash, {"units=hbar_omega"}};
  std::string csv = header.header();
  for (std::size_t i = 0; i < r3.size(); ++i)
    for (std::size_t k = 0; k < theta.size(); ++k)
      csv += csv_row({r3[i], degrees(theta[k]), g.values[i * theta.size() + k]});

  Json j = solved_header(hash, c, s);
  j["cut_radius"] = r_cut;
  j["peak"] = {{"theta3_deg", degrees(peak.theta)}, {"value", peak.value}};
  j["grid"] = {{"file", "density1.csv"}, {"r3_points", c.r3_points}, {"theta_points", c.theta_points},
               {"r3_max", r_max}};
  const fs::path dir = output_dir(c);
  write_text(dir / "density1.json", render(j));
  write_text(dir / "density1.csv", csv);
  std::printf("%s  rho1 peak at theta3 = %.2f deg (r3 = %.4f)\n", s.name().c_str(), degrees(peak.theta), r_cut);
  return kOk;
}

Json shape_peak_json(const ShapePeak& p) {
  const TriangleShape t = triangle_shape(p.phi, p.ratio);
  Json j;
  j["phi_deg"] = degrees(p.phi);
  j["ratio"] = p.ratio;
  j["value"] = p.value;
  j["apex"] = t.apex + 1;
  j["apex_angle_deg"] = degrees(t.apex_angle);
  return j;
}

int cmd_shape(const RunConfig& c) {
  const std::string hash = config_hash(c, "shape");
  const InteractionModel model = InteractionModel::from_spec(c.interaction);
  const Eigenstate s = solve_selected(c, model, parse_state(c.state), c.nmax);
  warn_boundary(s);
  const double r_rms = rms_radius(s);
  const double h = c.hyper_radius > 0.0 ? c.hyper_radius : std::sqrt(3.0) * r_rms;
  const ShapeGrid g = shape_density(s, h, {c.phi_points, c.ratio_points, c.ratio_max});
  const AmplitudeEvaluator eval(s);
  const double rt = shape_density_at(eval, h, 0.0, std::sqrt(3.0) / 2.0);

  const std::string name = state_name(s.L, s.parity, s.index);
  GridCsv header{"phi (deg)", "R/r", "rho_sha", name, hash, {"hyper_radius=" + format_double(h)}};
  std::string csv = header.header();
  for (std::size_t i = 0; i < g.phi.size(); ++i)
    for (std::size_t k = 0; k < g.ratio.size(); ++k) csv += csv_row({degrees(g.phi[i]), g.ratio[k], g.at(i, k)});

  Json j = solved_header(hash, c, s);
  j["hyper_radius"] = h;
  j["grid_max"] = shape_peak_json(g.grid_max);
  j["refined_max"] = shape_peak_json(g.refined_max);
  j["rt_value"] = rt;
  j["rt_relative"] = g.refined_max.value > 0.0 ? rt / g.refined_max.value : 0.0;
  j["contour_levels"] = g.contour_levels(10);
  j["grid"] = {{"file", "shape.csv"}, {"phi_points", c.phi_points}, {"ratio_points", c.ratio_points},
               {"ratio_max", c.ratio_max}};
  const fs::path dir = output_dir(c);
  write_text(dir / "shape.json", render(j));
  write_text(dir / "shape.csv", csv);
  std::printf("%s  shape max at phi = %.2f deg, R/r = %.4f (apex angle %.2f deg)\n", s.name().c_str(),
              degrees(g.refined_max.phi), g.refined_max.ratio, degrees(triangle_shape(g.refined_max.phi, g.refined_max.ratio).apex_angle));
  return kOk;
}

Json verify_profile(const RunConfig& c, const InteractionModel& model, const StateSymmetryProfile& p, bool& ok) {
  const Eigenstate s = solve_selected(c, model, {p.L, p.parity, 1}, c.nmax);
  NodalCheckOptions opt;
  opt.weights = weight_options(c);
  const NodalCheck n = check_nodal_rules(s, opt);
  ok = ok && n.holds();
  Json j;
  j["rule1_leak"] = n.rule1_leak;
  if (n.rt) j["rt_relative"] = *n.rt;
  if (n.ist) j["ist_relative"] = *n.ist;
  if (n.col) j["col_relative"] = *n.col;
  if (n.symmetric_col) j["symmetric_col_relative"] = *n.symmetric_col;
  return j;
}

int cmd_classify(const RunConfig& c) {
  const std::string hash = config_hash(c, "classify");
  const Statistics stat = statistics_of(c);
  std::optional<InteractionModel> model;
  if (c.verify) model = InteractionModel::from_spec(c.interaction);

  Json j;
  j["config_hash"] = hash;
  j["statistics"] = c.statistics;
  j["l_max"] = c.lmax;
  j["states"] = Json::array();
  bool consistent = true;
  for (int L = 0; L <= c.lmax; ++L)
    for (Parity parity : {Parity::Even, Parity::Odd}) {
      const StateSymmetryProfile p = classify(L, parity, stat);
      Json row;
      row["L"] = L;
      row["parity"] = std::string(1, parity_char(parity));
      row["exists"] = p.exists();
      if (!p.exists()) {
        row["reason"] = nonexistence_reason(L, parity);
        j["states"].push_back(row);
        std::printf("%2d%c  -  %s\n", L, parity_char(parity), nonexistence_reason(L, parity).c_str());
        continue;
      }
      row["allowed_q"] = p.allowed_q;
      row["rt"] = p.rt_accessible;
      row["ist"] = p.ist_accessible;
      row["col"] = p.col_accessible;
      row["symmetric_col"] = p.symcol_accessible;
      row["group"] = *p.group;
      if (model) row["check"] = verify_profile(c, *model, p, consistent);
      j["states"].push_back(row);
      std::printf("%2d%c  group %d  RT %s  IST %s  COL %s  symCOL %s\n", L, parity_char(parity), *p.group,
                  p.rt_accessible ? "yes" : "no", p.ist_accessible ? "yes" : "no", p.col_accessible ? "yes" : "no",
                  p.symcol_accessible ? "yes" : "no");
    }
  if (model) j["consistent"] = consistent;
  const fs::path dir = output_dir(c);
  write_text(dir / "classify.json", render(j));
  if (!consistent) {
    std::cerr << "trion: computed densities contradict the symbolic classification (see classify.json)\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_geometry(const RunConfig& c) {
  const std::string hash = config_hash(c, "geometry");
  std::vector<double> phi;
  for (int i = 0; i < c.phi_points; ++i) phi.push_back(-kPi / 2.0 + kPi * i / (c.phi_points - 1));
  const GeometryCurves g = geometry_curves(phi);

  GridCsv header{"phi (deg)", "IST branch (+1 or -1)", "R/r", "", hash, {}};
  std::string csv = header.header();
  for (std::size_t i = 0; i < phi.size(); ++i) csv += csv_row({degrees(phi[i]), 1.0, g.ist_plus[i]});
  for (std::size_t i = 0; i < phi.size(); ++i) csv += csv_row({degrees(phi[i]), -1.0, g.ist_minus[i]});

  Json j;
  j["config_hash"] = hash;
  j["rt"] = {{"phi_deg", degrees(g.rt_phi)}, {"ratio", g.rt_ratio}};
  j["col_phi_deg"] = {-degrees(g.col_phi), degrees(g.col_phi)};
  j["symmetric_col"] = {{"points_ratio", g.symmetric_col_ratio}, {"line_ratio", 0.0}};
  j["overlap_col_ratio"] = g.overlap_col_ratio;
  j["ist"] = {{"file", "geometry.csv"}, {"phi_points", c.phi_points}};
  const fs::path dir = output_dir(c);
  write_text(dir / "geometry.json", render(j));
  write_text(dir / "geometry.csv", csv);
  return kOk;
}

int cmd_convergence(const RunConfig& c) {
  const std::string hash = config_hash(c, "convergence");
  const InteractionModel model = InteractionModel::from_spec(c.interaction);
  const StateSelector sel = parse_state(c.state);
  const std::vector<int> list = parse_int_list(c.nmax_list.empty() ? std::to_string(c.nmax) : c.nmax_list);
  for (int n : list)
    if (n < 0) throw ConfigError("nmax must be >= 0");

  Json j;
  j["config_hash"] = hash;
  j["units"] = "hbar_omega";
  j["interaction"] = c.interaction;
  j["statistics"] = c.statistics;
  j["state"] = state_json(sel.L, sel.parity, sel.i);
  j["rows"] = Json::array();
  std::string csv = "# config_hash=" + hash + "\n# state=" + state_name(sel.L, sel.parity, sel.i) +
                    "\n# units=hbar_omega\nn_max,energy,gamma,rank\n";
  bool monotone = true;
  double previous = 0.0;
  int last_n = -1;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Eigenstate s = solve_selected(c, model, sel, list[k]);
    warn_boundary(s);
    if (k > 0 && list[k] > last_n && s.energy > previous + 1e-12) monotone = false;
    previous = s.energy;
    last_n = list[k];
    Json row;
    row["n_max"] = list[k];
    row["energy"] = s.energy;
    row["gamma"] = s.gamma;
    row["rank"] = s.basis->rank();
    j["rows"].push_back(row);
    csv += std::to_string(list[k]) + "," + format_double(s.energy) + "," + format_double(s.gamma) + "," +
           std::to_string(s.basis->rank()) + "\n";
    std::printf("N_max = %2d  E = %.6f  gamma = %.4f  rank = %d\n", list[k], s.energy, s.gamma, s.basis->rank());
  }
  j["monotone_nonincreasing"] = monotone;
  const fs::path dir = output_dir(c);
  write_text(dir / "convergence.json", render(j));
  write_text(dir / "convergence.csv", csv);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three identical trapped particles in a symmetrized oscillator basis"};
  app.require_subcommand(1);
  RunConfig cfg;

  Command spectrum_cmd(app, "spectrum", "first states of every (L, parity) series", cfg);
  spectrum_cmd.physics()
      .bind("--nmax", "nmax", cfg.nmax, "oscillator quanta cutoff")
      .bind("--lmax", "lmax", cfg.lmax, "largest total angular momentum")
      .bind("--count", "count", cfg.count, "states per series")
      .toggle("--shift-ground", "shift_ground", cfg.shift_ground, "also report energies relative to the ground state");

  Command weights_cmd(app, "weights", "body-frame Q weights of one state", cfg);
  weights_cmd.physics().single_state();
  weights_cmd.bind("--weight-points", "weight_points", cfg.weight_points, "radial Gauss-Legendre points")
      .bind("--weight-extent", "weight_extent", cfg.weight_extent, "radial cutoff in oscillator lengths");

  Command density_cmd(app, "density1", "one-body density of one state", cfg);
  density_cmd.physics().single_state();
  density_cmd.bind("--r3", "r3", cfg.r3, "radius of the angular cut (0: r_rms)")
      .bind("--r3-max", "r3_max", cfg.r3_max, "outer radius of the grid (0: 3 r_rms)")
      .bind("--r3-points", "r3_points", cfg.r3_points, "radial grid points")
      .bind("--theta-points", "theta_points", cfg.theta_points, "polar grid points over [0, 180] deg");

  Command shape_cmd(app, "shape", "shape density of one state", cfg);
  shape_cmd.physics().single_state();
  shape_cmd.bind("--hyper-radius", "hyper_radius", cfg.hyper_radius, "hyper-radius (0: sqrt(3) r_rms)")
      .bind("--phi-points", "phi_points", cfg.phi_points, "grid points over [-90, 90] deg")
      .bind("--ratio-points", "ratio_points", cfg.ratio_points, "grid points in R/r")
      .bind("--ratio-max", "ratio_max", cfg.ratio_max, "largest R/r");

  Command classify_cmd(app, "classify", "symmetry-rule classification of the (L, parity) series", cfg);
  classify_cmd.physics()
      .bind("--nmax", "nmax", cfg.nmax, "oscillator quanta cutoff for --verify")
      .bind("--lmax", "lmax", cfg.lmax, "largest total angular momentum")
      .toggle("--verify", "verify", cfg.verify, "check the nodal predictions on computed first states");

  Command geometry_cmd(app, "geometry", "reference curves of the (phi, R/r) plane", cfg);
  geometry_cmd.bind("--phi-points", "phi_points", cfg.phi_points, "samples over [-90, 90] deg");

  Command convergence_cmd(app, "convergence", "energy of one state against N_max", cfg);
  convergence_cmd.physics()
      .bind("--nmax", "nmax_list", cfg.nmax_list, "comma-separated N_max values")
      .bind("--state", "state", cfg.state, "state selector, e.g. 0+");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::vector<std::pair<Command*, std::function<int(const RunConfig&)>>> commands = {
      {&spectrum_cmd, cmd_spectrum}, {&weights_cmd, cmd_weights},   {&density_cmd, cmd_density1},
      {&shape_cmd, cmd_shape},       {&classify_cmd, cmd_classify}, {&geometry_cmd, cmd_geometry},
      {&convergence_cmd, cmd_convergence}};
  try {
    for (const auto& [command, run] : commands) {
      if (!command->parsed()) continue;
      command->finish(command == &convergence_cmd);
      return run(cfg);
    }
  } catch (const ConfigError& e) {
    std::cerr << "trion: error: " << e.what() << "\n";
    return kConfig;
  } catch (const NonexistentStateError& e) {
    std::cerr << "trion: nonexistent state: " << e.what() << "\n";
    return kNonexistent;
  } catch (const NumericalError& e) {
    std::cerr << "trion: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "trion: error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "trion: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kConfig;
}
