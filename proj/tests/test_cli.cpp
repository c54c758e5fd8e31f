// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "artifacts.hpp"
#include "commands.hpp"
#include "oracles.hpp"
#include "spn/errors.hpp"

namespace {

namespace fs = std::filesystem;
using namespace spn;
using namespace spn::cli;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("spn_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text, const std::string& name = "run.ini") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(const std::vector<std::string>& args) {
    std::ostringstream out;
    err_.str("");
    return run_cli(args, out, err_);
  }

  json read_json(const std::string& out, const std::string& name) {
    return json::parse(slurp(dir_ / out / name));
  }

  fs::path dir_;
  std::ostringstream err_;
};

constexpr const char* kBase =
    "[model]\n"
    "dimension = 1\n"
    "cells = 2\n"
    "grid = 16\n"
    "z = 2\n"
    "[dynamics]\n"
    "dt = 0.01\n"
    "duration = 1\n"
    "log_every = 10\n";

TEST(Config, DefaultsAndEcho) {
  const RunConfig c = parse_config("", false);
  EXPECT_EQ(c.model.dimension, 1);
  EXPECT_EQ(c.model.density, "perturbed_box");
  EXPECT_EQ(c.dynamics.method, Method::implicit_midpoint);
  EXPECT_EQ(c.stability.deltas, (std::vector<double>{1e-3, 1e-2}));
  EXPECT_EQ(c.resolved.at("dynamics.dt"), "0.001");
  EXPECT_TRUE(c.resolved.count("output.directory"));
}

TEST(Config, ParsesListsAndModes) {
  const RunConfig c = parse_config(
      "[model]\ndimension = 2\ncells = 2\ngrid = 8\nmodes = 1 0 : 0.1; 2 2 : -0.05\n"
      "[basis]\nmixture = 0 0, 1 0, 0 1; 0 0, -1 0, 0 -1\n"
      "[stability]\ndeltas = 0, 1e-3\ninclude_translation = no\n",
      false);
  ASSERT_EQ(c.model.modes.size(), 2u);
  EXPECT_EQ(c.model.modes[1].h, (FrequencyIndex{2, 2}));
  EXPECT_DOUBLE_EQ(c.model.modes[1].amplitude, -0.05);
  ASSERT_EQ(c.basis.mixture.size(), 2u);
  EXPECT_EQ(c.basis.mixture[0].size(), 3u);
  EXPECT_EQ(c.stability.deltas, (std::vector<double>{0.0, 1e-3}));
  EXPECT_FALSE(c.stability.include_translation);
}

TEST(Config, RejectsInvalidInput) {
  const std::vector<std::string> bad{
      "[model]\ncolour = red\n",
      "[nonsense]\nx = 1\n",
      "[model]\ndimension = 4\n",
      "[model]\ncells = 3\ngrid = 16\n",
      "[model]\nz = -1\n",
      "[model]\ndensity = blob\n",
      "[model]\ndensity = grid\n",
      "[model]\nmodes = 1 2 : 0.1\n",
      "[basis]\ncapacity = 0\n",
      "[basis]\nmixture = 0, 0\n",
      "[dynamics]\ndt = -0.1\n",
      "[dynamics]\nmethod = euler\n",
      "[dynamics]\nduration = 1s\n",
      "[stability]\ndeltas = 0.1, -1\n",
      "[stability]\ninclude_baseline = maybe\n",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(parse_config(text, false), ConfigError) << text;
  }
}

TEST(Config, EnvironmentOverridesFile) {
  ::setenv("SPN_DYNAMICS_DT", "0.125", 1);
  const RunConfig c = parse_config("[dynamics]\ndt = 0.5\n");
  ::unsetenv("SPN_DYNAMICS_DT");
  EXPECT_DOUBLE_EQ(c.dynamics.dt, 0.125);
  EXPECT_EQ(c.resolved.at("dynamics.dt"), "0.125");
  EXPECT_DOUBLE_EQ(parse_config("[dynamics]\ndt = 0.5\n").dynamics.dt, 0.5);
}

TEST(Artifacts, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(num(0.1), "0.10000000000000001");
  EXPECT_EQ(num(1.0), "1");
}

TEST_F(CliTest, DensityVerdicts) {
  const auto box = write_config(
      "[model]\ndimension = 3\ncells = 2\ngrid = 8\ndensity = box\nbox_order = 1\n", "box.ini");
  ASSERT_EQ(run({"density", "--config", box.string(), "--out", (dir_ / "box").string()}), 0);
  EXPECT_FALSE(read_json("box", "wiener_report.json")["wiener_holds"].get<bool>());
  EXPECT_EQ(read_json("box", "wiener_report.json")["dim_V"].get<int>(), 9);
  EXPECT_TRUE(read_json("box", "jellium.json")["holds"].get<bool>());

  const auto generic =
      write_config("[model]\ndimension = 3\ncells = 2\ngrid = 8\n", "generic.ini");
  ASSERT_EQ(run({"density", "--config", generic.string(), "--out", (dir_ / "gen").string()}), 0);
  EXPECT_TRUE(read_json("gen", "wiener_report.json")["wiener_holds"].get<bool>());
  const std::string csv = slurp(dir_ / "gen" / "wiener_spectra.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta_1,theta_2,theta_3,lambda_min,lambda_max,kernel_dim");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST_F(CliTest, GroundStateReport) {
  const auto cfg = write_config(kBase);
  ASSERT_EQ(run({"ground-state", "--config", cfg.string(), "--out", (dir_ / "o").string()}), 0);
  const json r = read_json("o", "ground_state.json");
  EXPECT_NEAR(r["omega0"].get<double>(), oracle::kPi * oracle::kPi / 2.0, 1e-14);
  EXPECT_NEAR(r["energy"].get<double>(), 2.0 * r["omega0"].get<double>(), 1e-12);
  EXPECT_LE(r["max_density_deviation"].get<double>(), 1e-12);
  EXPECT_TRUE(r["degenerate"].get<bool>());
}

TEST_F(CliTest, HessianPrediction) {
  const auto cfg = write_config(
      "[model]\ndimension = 2\ncells = 2\ngrid = 16\ndensity = box\nbox_order = 1\n"
      "[basis]\ncutoff = 49.348022005446793\n");
  ASSERT_EQ(run({"hessian", "--config", cfg.string(), "--out", (dir_ / "o").string()}), 0);
  const json r = read_json("o", "hessian_report.json");
  EXPECT_EQ(r["kernel_dim_full"].get<int>(), 4);
  EXPECT_EQ(r["predicted_kernel_dim"].get<int>(), 4);
  EXPECT_TRUE(r["prediction_matches"].get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "o" / "hessian_full.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "o" / "hessian_constrained.csv"));
}

TEST_F(CliTest, EvolveGroundStateConservesEnergy) {
  const auto cfg = write_config(kBase);
  ASSERT_EQ(run({"evolve", "--config", cfg.string(), "--out", (dir_ / "o").string()}), 0);
  const json r = read_json("o", "evolve_summary.json");
  EXPECT_LE(r["max_energy_drift"].get<double>(), 1e-9);
  EXPECT_LE(r["max_distance"].get<double>(), 1e-9);
  const std::string csv = slurp(dir_ / "o" / "trajectory.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,E,Q,energy_drift,charge_drift,distance");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

TEST_F(CliTest, StabilityDeterministicWithManifest) {
  const auto cfg = write_config(
      "[model]\nz = 2\n[dynamics]\ndt = 0.01\nduration = 0.3\nlog_every = 10\n"
      "[stability]\ndeltas = 0, 0.01\nperturbations = 2\n");
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(run({"stability", "--config", cfg.string(), "--out", (dir_ / out).string(), "--seed",
                   "9", "--workers", "1"}),
              0)
        << err_.str();
  }
  const json r = read_json("a", "stability.json");
  for (const char* key : {"omega0", "energy", "kernel_dim_full", "kernel_dim_constrained",
                          "lambda_min_constrained", "wiener_holds", "dim_V",
                          "sup_distance_per_delta"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_LE(r["sup_distance_per_delta"][0]["sup_distance"].get<double>(), 1e-9);
  EXPECT_LE(r["baseline_sup_distance"].get<double>(), 1e-9);

  const json manifest = read_json("a", "manifest.json");
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_EQ(manifest["config"]["model"]["z"], "2");
  std::size_t csvs = 0;
  for (const auto& f : manifest["files"]) {
    const std::string name = f["name"];
    const std::string a = slurp(dir_ / "a" / name);
    EXPECT_EQ(sha256_hex(a), f["sha256"].get<std::string>()) << name;
    EXPECT_EQ(a.size(), f["bytes"].get<std::size_t>());
    if (name.ends_with(".csv")) {
      ++csvs;
      EXPECT_EQ(a, slurp(dir_ / "b" / name)) << name;
    }
  }
  EXPECT_EQ(csvs, 1u + 2u * (1u + 2u));  // baseline, then translation + random per delta
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    EXPECT_NE(entry.path().extension(), ".tmp");
  }
}

TEST_F(CliTest, GridDensityFile) {
  const TorusSpec spec(1, 2, 16);
  const auto box = IonDensityModel::box(spec, 2, 2.0);
  std::ofstream f(dir_ / "sigma.txt");
  f << "1 2 16 2 1\n";
  for (std::size_t g = 0; g < spec.grid_size(); ++g) f << num(box.value(spec.grid_point(g))) << "\n";
  f.close();
  const auto cfg = write_config(std::string(kBase) + "density = grid\ndensity_file = " +
                                (dir_ / "sigma.txt").string() + "\n");
  // Keys after [dynamics] belong to it, so put the density block last.
  const auto good = write_config(
      "[model]\ncells = 2\ngrid = 16\nz = 2\ndensity = grid\ndensity_file = " +
          (dir_ / "sigma.txt").string() + "\n",
      "grid.ini");
  EXPECT_EQ(run({"density", "--config", cfg.string(), "--out", (dir_ / "x").string()}), 1);
  EXPECT_EQ(run({"ground-state", "--config", good.string(), "--out", (dir_ / "o").string()}), 0)
      << err_.str();

  std::ofstream(dir_ / "short.txt") << "1 2 16 2 1\n0.1 0.2\n";
  const auto truncated = write_config(
      "[model]\ncells = 2\ngrid = 16\nz = 2\ndensity = grid\ndensity_file = " +
          (dir_ / "short.txt").string() + "\n",
      "short.ini");
  EXPECT_EQ(run({"density", "--config", truncated.string(), "--out", (dir_ / "o").string()}), 2);
}

TEST_F(CliTest, ExitCodes) {
  const std::string out = (dir_ / "o").string();
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"density", "--bogus"}), 1);
  EXPECT_EQ(run({"density", "--config", (dir_ / "absent.ini").string()}), 1);
  EXPECT_EQ(run({"density", "--seed", "-3", "--out", out}), 1);

  const auto missing = write_config(
      "[model]\ndensity = grid\ndensity_file = " + (dir_ / "nope.txt").string() + "\n", "m.ini");
  EXPECT_EQ(run({"density", "--config", missing.string(), "--out", out}), 2);
  EXPECT_NE(err_.str().find("nope.txt"), std::string::npos);

  const auto refusal = write_config("[model]\ngrid = 16\nmodes = 2 : 0.05\n", "r.ini");
  EXPECT_EQ(run({"density", "--config", refusal.string(), "--out", out}), 0);
  EXPECT_FALSE(read_json("o", "jellium.json")["holds"].get<bool>());
  EXPECT_EQ(run({"ground-state", "--config", refusal.string(), "--out", out}), 3);
  EXPECT_EQ(read_json("o", "manifest.json")["exit_code"].get<int>(), 3);

  const auto adr = write_config("[model]\nz = 2\n[basis]\nmixture = -1, 0; 0, 1\n", "adr.ini");
  EXPECT_EQ(run({"ground-state", "--config", adr.string(), "--out", out}), 3);

  const auto capacity = write_config("[basis]\ncapacity = 3\n", "cap.ini");
  EXPECT_EQ(run({"hessian", "--config", capacity.string(), "--out", out}), 4);

  const auto integrator = write_config(
      "[dynamics]\ndt = 0.1\ntolerance = 1e-300\nmax_iterations = 1\nperturbation = 0.01\n",
      "int.ini");
  EXPECT_EQ(run({"evolve", "--config", integrator.string(), "--out", out}), 5);
  EXPECT_NE(err_.str().find("step 1"), std::string::npos);
}

}  // namespace
