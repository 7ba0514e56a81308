#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("trion_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string(TRION_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  Json json(const std::string& name) const { return Json::parse(slurp(dir_ / name)); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

// <R_00| exp(-r^2/a^2) |R_00> at oscillator width w is (w / (w + 1/a^2))^(3/2).
double gaussian_pair_integral(double w) {
  auto term = [w](double a) { return std::pow(w / (w + 1.0 / (a * a)), 1.5); };
  return 10.0 * (2.0 * term(1.428) - term(2.105));
}

TEST_F(Cli, SpectrumListsEveryExistingSeriesOnce) {
  const Outcome r = run("spectrum --interaction A --nmax 6 --lmax 4 --out " + path("s"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("s/spectrum.json");
  EXPECT_EQ(j["units"], "hbar_omega");
  EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
  ASSERT_EQ(j["states"].size(), 9u);
  for (const auto& s : j["states"]) {
    EXPECT_FALSE(s["L"] == 0 && s["parity"] == "-");
    EXPECT_EQ(s["i"], 1);
    for (const char* key : {"energy", "gamma", "r_rms"}) EXPECT_TRUE(s[key].is_number_float()) << key;
  }
  ASSERT_EQ(j["nonexistent"].size(), 1u);
  EXPECT_EQ(j["nonexistent"][0]["L"], 0);
  EXPECT_NE(j["nonexistent"][0]["reason"].get<std::string>().find("Rule 1 forbids all Q"), std::string::npos);

  const std::string csv = slurp(dir_ / "s/spectrum.csv");
  EXPECT_EQ(csv.rfind("# config_hash=" + j["config_hash"].get<std::string>() + "\n", 0), 0u);
}

TEST_F(Cli, SingleFunctionBasisAtFixedGamma) {
  const double gamma = 1.3;
  const Outcome r = run("spectrum --nmax 0 --lmax 0 --gamma 1.3 --out " + path("s"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("s/spectrum.json");
  ASSERT_EQ(j["states"].size(), 1u);
  const double expected = 1.5 * (gamma + 1.0 / gamma) + 3.0 * gaussian_pair_integral(gamma / 2.0);
  EXPECT_NEAR(j["states"][0]["energy"].get<double>(), expected, 1e-8);
}

TEST_F(Cli, SingleFunctionBasisMinimizedOverGamma) {
  const Outcome r = run("spectrum --nmax 0 --lmax 0 --out " + path("s"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("s/spectrum.json");
  double best = 1e300;
  for (int k = 0; k <= 20000; ++k) {
    const double g = 0.2 * std::pow(25.0, k / 20000.0);
    best = std::min(best, 1.5 * (g + 1.0 / g) + 3.0 * gaussian_pair_integral(g / 2.0));
  }
  EXPECT_NEAR(j["states"][0]["energy"].get<double>(), best, 1e-7);
}

TEST_F(Cli, MissingInteractionFileIsConfigError) {
  const Outcome r = run("spectrum --interaction " + path("missing.dat") + " --out " + path("s"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("interaction file not found"), std::string::npos) << r.err;
}

TEST_F(Cli, BadFlagsAreConfigErrors) {
  EXPECT_EQ(run("spectrum --nmax -1").code, 2);
  EXPECT_EQ(run("spectrum --statistics anyon").code, 2);
  EXPECT_EQ(run("spectrum --gamma 0").code, 2);
  EXPECT_EQ(run("weights --state 3").code, 2);
  EXPECT_EQ(run("weights --no-such-flag").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(Cli, NonexistentStateReportsRule) {
  const Outcome r = run("weights --state 0- --out " + path("w"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("Rule 1 forbids all Q"), std::string::npos) << r.err;
  const Outcome missing_index = run("weights --state 0+_500 --nmax 2 --out " + path("w"));
  EXPECT_EQ(missing_index.code, 3);
}

TEST_F(Cli, UnconvergedQuadratureIsNumericalFailure) {
  const Outcome r = run("spectrum --lmax 0 --nmax 2 --radial-nodes 3 --radial-subdivisions 1 --out " + path("s"));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("did not converge"), std::string::npos) << r.err;
}

TEST_F(Cli, OutputIsByteIdentical) {
  ASSERT_EQ(run("spectrum --nmax 6 --lmax 2 --out " + path("a")).code, 0);
  ASSERT_EQ(run("spectrum --nmax 6 --lmax 2 --out " + path("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "a/spectrum.json"), slurp(dir_ / "b/spectrum.json"));
  EXPECT_EQ(slurp(dir_ / "a/spectrum.csv"), slurp(dir_ / "b/spectrum.csv"));
  ASSERT_EQ(run("shape --state 2+ --nmax 6 --phi-points 19 --ratio-points 13 --out " + path("c")).code, 0);
  ASSERT_EQ(run("shape --state 2+ --nmax 6 --phi-points 19 --ratio-points 13 --out " + path("d")).code, 0);
  EXPECT_EQ(slurp(dir_ / "c/shape.json"), slurp(dir_ / "d/shape.json"));
  EXPECT_EQ(slurp(dir_ / "c/shape.csv"), slurp(dir_ / "d/shape.csv"));
}

TEST_F(Cli, FloatsUseFixedExponentFormat) {
  ASSERT_EQ(run("spectrum --nmax 4 --lmax 0 --out " + path("s")).code, 0);
  const std::string text = slurp(dir_ / "s/spectrum.json");
  const auto at = text.find("\"energy\": ");
  ASSERT_NE(at, std::string::npos);
  const std::string value = text.substr(at + 10, text.find(',', at) - at - 10);
  EXPECT_EQ(value.size(), std::string("2.065574238e+00").size()) << value;
  EXPECT_NE(value.find("e+"), std::string::npos);
}

TEST_F(Cli, HashTracksResultRelevantSettingsOnly) {
  ASSERT_EQ(run("spectrum --nmax 2 --lmax 0 --out " + path("a")).code, 0);
  ASSERT_EQ(run("spectrum --nmax 2 --lmax 0 --out " + path("b")).code, 0);
  ASSERT_EQ(run("spectrum --nmax 4 --lmax 0 --out " + path("c")).code, 0);
  EXPECT_EQ(json("a/spectrum.json")["config_hash"], json("b/spectrum.json")["config_hash"]);
  EXPECT_NE(json("a/spectrum.json")["config_hash"], json("c/spectrum.json")["config_hash"]);
}

TEST_F(Cli, FlagsOverrideConfigFile) {
  {
    std::ofstream f(dir_ / "cfg.json");
    f << R"({"nmax": 4, "state": "2+", "interaction": "B", "out": ")" << path("w") << "\"}";
  }
  const Outcome r = run("weights --config " + path("cfg.json") + " --interaction A");
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("w/weights.json");
  EXPECT_EQ(j["interaction"], "A");
  EXPECT_EQ(j["n_max"], 4);
  EXPECT_EQ(j["state"]["name"], "2+_1");

  {
    std::ofstream f(dir_ / "bad.json");
    f << R"({"nmaxx": 4})";
  }
  EXPECT_EQ(run("weights --config " + path("bad.json")).code, 2);
  EXPECT_EQ(run("weights --config " + path("absent.json")).code, 2);
}

TEST_F(Cli, WeightsSumToOne) {
  const Outcome r = run("weights --state 3- --nmax 10 --out " + path("w"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("w/weights.json");
  ASSERT_EQ(j["wbar"].size(), 4u);
  double sum = 0.0;
  for (const auto& w : j["wbar"]) sum += w.get<double>();
  EXPECT_NEAR(sum, 1.0, 1e-6);
  EXPECT_LT(j["wbar"][0].get<double>(), 1e-8);
  EXPECT_LT(j["wbar"][2].get<double>(), 1e-8);
}

TEST_F(Cli, GridCsvIsSelfDescribing) {
  ASSERT_EQ(run("density1 --state 2+ --nmax 6 --r3-points 5 --theta-points 7 --out " + path("d")).code, 0);
  std::ifstream f(dir_ / "d/density1.csv");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line.rfind("# axis1=", 0), 0u);
  std::getline(f, line);
  EXPECT_EQ(line.rfind("# axis2=", 0), 0u);
  bool saw_state = false, saw_hash = false;
  int rows = 0;
  while (std::getline(f, line)) {
    if (line.rfind("# state=2+_1", 0) == 0) saw_state = true;
    if (line.rfind("# config_hash=", 0) == 0) saw_hash = true;
    if (line[0] == '#') continue;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2) << line;
    ++rows;
  }
  EXPECT_TRUE(saw_state);
  EXPECT_TRUE(saw_hash);
  EXPECT_EQ(rows, 35);
}

TEST_F(Cli, ConvergenceSweep) {
  const Outcome r = run("convergence --state 0+ --nmax 4,6,8 --out " + path("c"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("c/convergence.json");
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][2]["n_max"], 8);
  EXPECT_LE(j["rows"][1]["energy"].get<double>(), j["rows"][0]["energy"].get<double>() + 1e-12);
  EXPECT_LE(j["rows"][2]["energy"].get<double>(), j["rows"][1]["energy"].get<double>() + 1e-12);
  EXPECT_TRUE(j["monotone_nonincreasing"].get<bool>());
}

TEST_F(Cli, ClassifyFermions) {
  const Outcome r = run("classify --statistics fermion --lmax 4 --out " + path("k"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = json("k/classify.json");
  ASSERT_EQ(j["states"].size(), 10u);
  // Fermion 0+ cannot reach the regular triangle or any isosceles shape.
  EXPECT_EQ(j["states"][0]["group"], 3);
  EXPECT_EQ(j["states"][2]["L"], 1);
  EXPECT_EQ(j["states"][2]["group"], 1);
  EXPECT_FALSE(j["states"][1]["exists"].get<bool>());
}

TEST_F(Cli, ClassifyVerifyAgreesWithDensities) {
  const Outcome r = run("classify --lmax 3 --nmax 8 --verify --out " + path("k"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json("k/classify.json")["consistent"].get<bool>());
}

TEST_F(Cli, GeometryCurves) {
  ASSERT_EQ(run("geometry --phi-points 7 --out " + path("g")).code, 0);
  const Json j = json("g/geometry.json");
  EXPECT_NEAR(j["rt"]["ratio"].get<double>(), std::sqrt(3.0) / 2.0, 1e-9);
  const std::string csv = slurp(dir_ / "g/geometry.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4 + 14);
}

}  // namespace
