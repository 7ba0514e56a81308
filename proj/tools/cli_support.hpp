#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trion/errors.hpp"
#include "trion/labels.hpp"
#include "trion/observables.hpp"
#include "trion/potentials.hpp"
#include "trion/solver.hpp"

namespace trion::cli {

using Json = nlohmann::ordered_json;

/// Everything that changes a result, plus the output directory.
struct RunConfig {
  std::string interaction = "A";
  std::string statistics = "boson";
  int nmax = 20;
  int lmax = 4;
  std::string gamma = "optimize";
  double gamma_min = 0.2;
  double gamma_max = 5.0;
  int gamma_points = 11;
  double gamma_tolerance = 1e-4;
  double threshold = 1e-8;
  int radial_nodes = 64;
  int radial_subdivisions = 4;
  double radial_extent = 12.0;
  double radial_tolerance = 1e-8;
  int radial_refinements = 3;
  int weight_points = 48;
  double weight_extent = 10.0;
  int count = 1;
  std::string state = "0+";
  std::string nmax_list;
  int phi_points = 181;
  int ratio_points = 121;
  double ratio_max = 2.2;
  double hyper_radius = 0.0;  ///< 0: sqrt(3) r_rms of the state
  int r3_points = 81;
  int theta_points = 181;
  double r3 = 0.0;      ///< radius of the angular cut, 0: r_rms
  double r3_max = 0.0;  ///< outer edge of the density grid, 0: 3 r_rms
  bool shift_ground = false;
  bool verify = false;
  std::string out = ".";
};

struct StateSelector {
  int L = 0;
  Parity parity = Parity::Even;
  int i = 1;
};

/// "3-", "4+2", "4+_2", "4+:2".
inline StateSelector parse_state(const std::string& text) {
  static const std::regex pattern(R"(^(\d+)([+-])(?:[_:]?(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ConfigError("bad state selector '" + text + "' (expected e.g. 3- or 4+_2)");
  StateSelector s;
  s.L = std::stoi(m[1].str());
  s.parity = m[2].str() == "+" ? Parity::Even : Parity::Odd;
  s.i = m[3].matched ? std::stoi(m[3].str()) : 1;
  if (s.i < 1) throw ConfigError("state index must be >= 1");
  return s;
}

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad integer '" + item + "' in list '" + text + "'");
    }
    if (used != item.size()) throw ConfigError("bad integer '" + item + "' in list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

inline void validate(const RunConfig& c) {
  if (c.nmax < 0) throw ConfigError("nmax must be >= 0");
  if (c.lmax < 0) throw ConfigError("lmax must be >= 0");
  if (c.statistics != "boson" && c.statistics != "fermion")
    throw ConfigError("statistics must be boson or fermion, got '" + c.statistics + "'");
  if (c.count < 1) throw ConfigError("count must be >= 1");
  if (c.phi_points < 3 || c.ratio_points < 3 || c.r3_points < 2 || c.theta_points < 3)
    throw ConfigError("grid sizes are too small");
  if (!(c.ratio_max > 0.0)) throw ConfigError("ratio-max must be positive");
  if (c.hyper_radius < 0.0 || c.r3 < 0.0 || c.r3_max < 0.0) throw ConfigError("radii must be non-negative");
  if (c.radial_nodes < 2 || c.radial_subdivisions < 1 || c.weight_points < 2)
    throw ConfigError("quadrature sizes are too small");
}

inline std::optional<double> fixed_gamma(const RunConfig& c) {
  if (c.gamma == "optimize") return std::nullopt;
  std::size_t used = 0;
  double g = 0.0;
  try {
    g = std::stod(c.gamma, &used);
  } catch (const std::exception&) {
    throw ConfigError("gamma must be 'optimize' or a positive number, got '" + c.gamma + "'");
  }
  if (used != c.gamma.size() || !(g > 0.0) || !std::isfinite(g))
    throw ConfigError("gamma must be 'optimize' or a positive number, got '" + c.gamma + "'");
  return g;
}

inline SolverOptions solver_options(const RunConfig& c, int n_max) {
  SolverOptions o;
  o.n_max = n_max;
  o.fixed_gamma = fixed_gamma(c);
  o.search = {c.gamma_min, c.gamma_max, c.gamma_points, c.gamma_tolerance};
  o.symmetrize.threshold = c.threshold;
  o.quadrature.nodes_per_segment = c.radial_nodes;
  o.quadrature.subdivisions = c.radial_subdivisions;
  o.quadrature.extent = c.radial_extent;
  o.quadrature.tolerance = c.radial_tolerance;
  o.quadrature.max_refinements = c.radial_refinements;
  return o;
}

inline std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

/// JSON text with a fixed layout: two-space indent, keys in insertion order,
/// every float as %.9e. Non-finite floats become null.
inline void render(const Json& j, std::string& out, int depth = 0) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        render(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          render(j[i], out, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        render(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string render(const Json& j) {
  std::string out;
  render(j, out);
  out += "\n";
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
  if (!f) throw ConfigError("failed writing " + path.string());
}

/// Canonical form of the result-relevant settings; the output directory and
/// presentation flags are left out. A tabulated interaction contributes the
/// digest of its file contents, so renaming the file keeps the hash.
inline Json canonical_config(const RunConfig& c, const std::string& command) {
  Json j;
  j["command"] = command;
  if (c.interaction == "A" || c.interaction == "B" || c.interaction == "C") {
    j["interaction"] = c.interaction;
  } else {
    std::ifstream f(c.interaction, std::ios::binary);
    const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    j["interaction"] = "table:" + hex64(fnv1a(bytes));
  }
  j["statistics"] = c.statistics;
  j["nmax"] = c.nmax;
  j["lmax"] = c.lmax;
  j["gamma"] = c.gamma;
  j["gamma_search"] = {format_double(c.gamma_min), format_double(c.gamma_max), c.gamma_points,
                       format_double(c.gamma_tolerance)};
  j["threshold"] = format_double(c.threshold);
  j["radial"] = {c.radial_nodes, c.radial_subdivisions, format_double(c.radial_extent),
                 format_double(c.radial_tolerance), c.radial_refinements};
  j["weights"] = {c.weight_points, format_double(c.weight_extent)};
  j["count"] = c.count;
  j["state"] = c.state;
  j["nmax_list"] = c.nmax_list;
  j["shape_grid"] = {c.phi_points, c.ratio_points, format_double(c.ratio_max), format_double(c.hyper_radius)};
  j["density_grid"] = {c.r3_points, c.theta_points, format_double(c.r3), format_double(c.r3_max)};
  return j;
}

inline std::string config_hash(const RunConfig& c, const std::string& command) {
  return hex64(fnv1a(canonical_config(c, command).dump()));
}

/// Self-describing grid: comment header, then x,y,value rows.
struct GridCsv {
  std::string axis1;
  std::string axis2;
  std::string value;
  std::string state;
  std::string hash;
  std::vector<std::string> extra;  ///< further "# key=value" lines

  std::string header() const {
    std::string out = "# axis1=" + axis1 + "\n# axis2=" + axis2 + "\n# value=" + value + "\n";
    if (!state.empty()) out += "# state=" + state + "\n";
    out += "# config_hash=" + hash + "\n";
    for (const auto& e : extra) out += "# " + e + "\n";
    return out;
  }
};

inline std::string csv_row(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ",";
    out += format_double(v);
  }
  return out + "\n";
}

}  // namespace trion::cli
