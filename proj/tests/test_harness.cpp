// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "quantsel/errors.hpp"
#include "quantsel/experiment.hpp"
#include "quantsel/quantization.hpp"
#include "quantsel/rng.hpp"
#include "quantsel/verify.hpp"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_temp_config(const char* name, const std::string& body) {
  const std::string path = temp_path(name);
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

quantsel::ExperimentConfig tiny_ul_config() {
  quantsel::ExperimentConfig cfg;
  cfg.scenario = quantsel::Scenario::kUlRateVsPower;
  cfg.n_bs = 6;
  cfg.n_ms = 2;
  cfg.n_select = 3;
  cfg.bits = 2;
  cfg.trials = 4;
  cfg.seed = 11;
  cfg.power_grid = {0.0, 10.0};
  cfg.algorithms = {"exhaustive", "qfas", "fas", "nbs", "random"};
  cfg.unit_gains = true;
  return cfg;
}

bool tables_equal(const quantsel::ResultTable& a,
                  const quantsel::ResultTable& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].sweep != b.rows[i].sweep) return false;
    if (a.rows[i].algorithm != b.rows[i].algorithm) return false;
    if (a.rows[i].mean_rate != b.rows[i].mean_rate) return false;
    if (a.rows[i].std_error != b.rows[i].std_error) return false;
    if (a.rows[i].trials != b.rows[i].trials) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("scenario names round-trip") {
  using quantsel::Scenario;
  for (Scenario s : {Scenario::kDlRateVsNt, Scenario::kDlRateVsPower,
                     Scenario::kUlRateVsPower, Scenario::kUlRateVsBits,
                     Scenario::kUlRateVsNbs, Scenario::kUlRateVsNms,
                     Scenario::kUlOfdmRateVsPower,
                     Scenario::kUlOfdmRateVsNr}) {
    CHECK(quantsel::parse_scenario(quantsel::scenario_name(s)) == s);
  }
  CHECK(std::string(quantsel::scenario_name(Scenario::kDlRateVsNt)) ==
        "dl_rate_vs_nt");
  CHECK_THROWS_AS(quantsel::parse_scenario("ul_rate_vs_nothing"),
                  quantsel::ConfigError);
}

TEST_CASE("seed derivation separates substreams") {
  const std::uint64_t base = quantsel::derive_seed(1, 2, 3);
  CHECK(base == quantsel::derive_seed(1, 2, 3));
  CHECK(base != quantsel::derive_seed(1, 2, 4));
  CHECK(base != quantsel::derive_seed(1, 3, 3));
  CHECK(base != quantsel::derive_seed(2, 2, 3));
  CHECK(quantsel::mix64(1) != quantsel::mix64(2));
}

TEST_CASE("config files parse with comments and overrides") {
  const std::string path = write_temp_config("quantsel_parse.conf",
                                             "# experiment\n"
                                             "scenario = ul_rate_vs_bits\n"
                                             "\n"
                                             "n_bs = 16   # antennas\n"
                                             "n_ms=4\n"
                                             "n_select = 6\n"
                                             "bits = inf\n"
                                             "sweep_grid = 1, 2, 3\n"
                                             "algorithms = qfas , fas\n"
                                             "trials = 7\n"
                                             "seed = 99\n"
                                             "unit_gains = true\n"
                                             "mcmc_steps = 50\n"
                                             "mcmc_iterations = 20\n"
                                             "mcmc_tau = 0.5\n"
                                             "pathloss_exponent = 3.0\n");
  quantsel::ExperimentConfig cfg = quantsel::parse_config(path);
  CHECK(cfg.scenario == quantsel::Scenario::kUlRateVsBits);
  CHECK(cfg.n_bs == 16);
  CHECK(cfg.n_ms == 4);
  CHECK(cfg.n_select == 6);
  CHECK(cfg.bits == quantsel::QuantizerSpec::kInfiniteBits);
  CHECK(cfg.sweep_grid == std::vector<int>{1, 2, 3});
  CHECK(cfg.algorithms == std::vector<std::string>{"qfas", "fas"});
  CHECK(cfg.trials == 7);
  CHECK(cfg.seed == 99);
  CHECK(cfg.unit_gains);
  CHECK(cfg.mcmc.n_mcmc == 50);
  CHECK(cfg.mcmc.tau_stop == 20);
  CHECK(cfg.mcmc.tau_rate == 0.5);
  CHECK(cfg.large_scale.pathloss_exponent == 3.0);

  quantsel::apply_override(cfg, "trials=9");
  CHECK(cfg.trials == 9);
  quantsel::apply_override(cfg, "bits=3");
  CHECK(cfg.bits == 3);
  CHECK_THROWS_AS(quantsel::apply_override(cfg, "trials"),
                  quantsel::ConfigError);
  CHECK_THROWS_AS(quantsel::apply_override(cfg, "nope=1"),
                  quantsel::ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("config parsing reports the offending input") {
  CHECK_THROWS_AS(quantsel::parse_config(temp_path("quantsel_absent.conf")),
                  quantsel::ConfigError);
  const std::string bad_line =
      write_temp_config("quantsel_badline.conf", "scenario\n");
  CHECK_THROWS_AS(quantsel::parse_config(bad_line), quantsel::ConfigError);
  const std::string bad_int = write_temp_config(
      "quantsel_badint.conf", "scenario = ul_rate_vs_power\ntrials = soon\n");
  CHECK_THROWS_AS(quantsel::parse_config(bad_int), quantsel::ConfigError);
  const std::string bad_key = write_temp_config(
      "quantsel_badkey.conf", "scenario = ul_rate_vs_power\nants = 3\n");
  try {
    quantsel::parse_config(bad_key);
    FAIL("expected ConfigError");
  } catch (const quantsel::ConfigError& e) {
    CHECK(std::string(e.what()).find("ants") != std::string::npos);
  }
  std::filesystem::remove(bad_line);
  std::filesystem::remove(bad_int);
  std::filesystem::remove(bad_key);
}

TEST_CASE("validation rejects inconsistent configs") {
  quantsel::ExperimentConfig cfg = tiny_ul_config();
  cfg.n_select = 7;
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.algorithms = {"qfas", "qfas"};
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.algorithms = {"exhaustive", "gradient"};
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.power_grid = {0.0, 0.0};
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.power_grid.clear();
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.n_taps = 2;
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.scenario = quantsel::Scenario::kDlRateVsPower;
  cfg.algorithms = {"qfas"};
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.scenario = quantsel::Scenario::kDlRateVsPower;
  cfg.algorithms = {"exhaustive", "nbs", "random"};
  cfg.n_select = 1;
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);

  cfg = tiny_ul_config();
  cfg.mcmc.step_exponent = 0.4;
  CHECK_THROWS_AS(quantsel::validate_config(cfg), quantsel::ConfigError);
}

TEST_CASE("experiments aggregate trials per sweep point and algorithm") {
  const quantsel::ExperimentConfig cfg = tiny_ul_config();
  const quantsel::ResultTable table = quantsel::run_experiment(cfg);
  REQUIRE(table.rows.size() == 10);
  for (std::size_t pi = 0; pi < 2; ++pi) {
    for (std::size_t ai = 0; ai < 5; ++ai) {
      const quantsel::ResultRow& row = table.rows[pi * 5 + ai];
      CHECK(row.sweep == cfg.power_grid[pi]);
      CHECK(row.algorithm == cfg.algorithms[ai]);
      CHECK(row.trials == 4);
      CHECK(std::isfinite(row.mean_rate));
      CHECK(row.mean_rate > 0.0);
      CHECK(row.std_error >= 0.0);
    }
  }
  const double bound = 1.0 - 1.0 / std::exp(1.0);
  for (std::size_t pi = 0; pi < 2; ++pi) {
    const double exhaustive = table.rows[pi * 5 + 0].mean_rate;
    const double qfas = table.rows[pi * 5 + 1].mean_rate;
    const double fas = table.rows[pi * 5 + 2].mean_rate;
    const double nbs = table.rows[pi * 5 + 3].mean_rate;
    const double random = table.rows[pi * 5 + 4].mean_rate;
    CHECK(qfas <= exhaustive + 1e-12);
    CHECK(qfas >= bound * exhaustive - 1e-12);
    CHECK(fas <= exhaustive + 1e-12);
    CHECK(nbs <= exhaustive + 1e-12);
    CHECK(random <= exhaustive + 1e-12);
  }
}

TEST_CASE("experiments are invariant to the worker count") {
  quantsel::ExperimentConfig cfg = tiny_ul_config();
  cfg.algorithms = {"qfas", "qmcmc", "random"};
  cfg.threads = 1;
  const quantsel::ResultTable serial = quantsel::run_experiment(cfg);
  cfg.threads = 4;
  const quantsel::ResultTable parallel = quantsel::run_experiment(cfg);
  CHECK(tables_equal(serial, parallel));
  const quantsel::ResultTable again = quantsel::run_experiment(cfg);
  CHECK(tables_equal(parallel, again));
}

TEST_CASE("higher resolution never hurts the optimal uplink rate") {
  quantsel::ExperimentConfig cfg;
  cfg.scenario = quantsel::Scenario::kUlRateVsBits;
  cfg.n_bs = 6;
  cfg.n_ms = 2;
  cfg.n_select = 3;
  cfg.trials = 5;
  cfg.seed = 21;
  cfg.sweep_grid = {1, 2, 4, 12};
  cfg.algorithms = {"exhaustive"};
  cfg.unit_gains = true;
  const quantsel::ResultTable table = quantsel::run_experiment(cfg);
  REQUIRE(table.rows.size() == 4);
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].mean_rate > table.rows[i - 1].mean_rate);
  }
}

TEST_CASE("CSV output round-trips exactly") {
  const quantsel::ExperimentConfig cfg = tiny_ul_config();
  const quantsel::ResultTable table = quantsel::run_experiment(cfg);
  const std::string path = temp_path("quantsel_roundtrip.csv");
  quantsel::emit_csv(table, path);
  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "sweep,algorithm,mean_rate,std_error,trials");
  const quantsel::ResultTable parsed = quantsel::parse_csv(path);
  CHECK(tables_equal(table, parsed));
  std::filesystem::remove(path);
}

TEST_CASE("config echo round-trips through the parser") {
  quantsel::ExperimentConfig cfg = tiny_ul_config();
  cfg.bits = quantsel::QuantizerSpec::kInfiniteBits;
  cfg.mcmc.tau_rate = 0.25;
  const std::string path = temp_path("quantsel_echo.conf");
  quantsel::write_config(cfg, path);
  const quantsel::ExperimentConfig loaded = quantsel::parse_config(path);
  CHECK(loaded.scenario == cfg.scenario);
  CHECK(loaded.n_bs == cfg.n_bs);
  CHECK(loaded.n_ms == cfg.n_ms);
  CHECK(loaded.n_select == cfg.n_select);
  CHECK(loaded.bits == cfg.bits);
  CHECK(loaded.trials == cfg.trials);
  CHECK(loaded.seed == cfg.seed);
  CHECK(loaded.power_grid == cfg.power_grid);
  CHECK(loaded.algorithms == cfg.algorithms);
  CHECK(loaded.unit_gains == cfg.unit_gains);
  CHECK(loaded.mcmc.tau_rate == cfg.mcmc.tau_rate);
  std::filesystem::remove(path);
}

TEST_CASE("plot emission writes a data and script pair") {
  const quantsel::ExperimentConfig cfg = tiny_ul_config();
  const quantsel::ResultTable table = quantsel::run_experiment(cfg);
  const std::string stem = temp_path("quantsel_plot");
  quantsel::emit_plot(table, cfg, stem);
  CHECK(std::filesystem::exists(stem + ".dat"));
  CHECK(std::filesystem::exists(stem + ".gp"));
  std::ifstream in(stem + ".gp");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("yerrorlines") != std::string::npos);
  CHECK(text.find("qfas") != std::string::npos);
  std::filesystem::remove(stem + ".dat");
  std::filesystem::remove(stem + ".gp");
}

TEST_CASE("the verify battery passes on a small budget") {
  const quantsel::VerifyReport report = quantsel::verify_theorems(3, 4);
  REQUIRE(report.checks.size() == 8);
  for (const quantsel::VerifyCheck& check : report.checks) {
    CAPTURE(check.name);
    CHECK(check.pass);
    CHECK(check.count == 4);
  }
  CHECK(report.all_pass());
}
