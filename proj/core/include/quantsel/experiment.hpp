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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quantsel/channel.hpp"
#include "quantsel/uplink.hpp"

namespace quantsel {

// Experiment families. The *_vs_power scenarios sweep power_grid (dBm); the
// others sweep the integers in sweep_grid (selected antennas, ADC bits, BS
// antennas, or users).
enum class Scenario {
  kDlRateVsNt,
  kDlRateVsPower,
  kUlRateVsPower,
  kUlRateVsBits,
  kUlRateVsNbs,
  kUlRateVsNms,
  kUlOfdmRateVsPower,
  kUlOfdmRateVsNr,
};

const char* scenario_name(Scenario scenario);
Scenario parse_scenario(const std::string& name);

// One experiment description. Fields map one-to-one to config file keys and
// CLI overrides; see parse_config for the accepted spellings.
struct ExperimentConfig {
  Scenario scenario = Scenario::kUlRateVsPower;
  int n_bs = 32;
  int n_ms = 8;
  int n_select = 8;
  // ADC bits; QuantizerSpec::kInfiniteBits for perfect quantization.
  int bits = 3;
  int n_sc = 64;
  int n_taps = 1;
  int trials = 500;
  std::uint64_t seed = 1;
  // Fixed power for integer sweeps, in dBm relative to unit noise.
  double power_dbm = 20.0;
  // Swept powers for the *_vs_power scenarios, in dBm.
  std::vector<double> power_grid;
  // Swept integers for the remaining scenarios.
  std::vector<int> sweep_grid;
  std::vector<std::string> algorithms;
  LargeScaleParams large_scale;
  // Skip pathloss and shadowing; every user has unit gain.
  bool unit_gains = false;
  // Worker threads for the trial loop; 0 picks the hardware concurrency.
  int threads = 0;
  McmcConfig mcmc;
};

// One aggregated table row.
struct ResultRow {
  double sweep = 0.0;
  std::string algorithm;
  double mean_rate = 0.0;
  double std_error = 0.0;
  int trials = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

// Parses a key = value config file ('#' starts a comment). Throws
// ConfigError naming the offending key on any problem.
ExperimentConfig parse_config(const std::string& path);
// Applies one "key=value" override in place.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);
// Validates cross-field constraints; called by run_experiment.
void validate_config(const ExperimentConfig& cfg);
// Writes the fully resolved config back out in parseable form.
void write_config(const ExperimentConfig& cfg, const std::string& path);

// Runs the configured Monte-Carlo sweep. Every algorithm within a trial
// consumes the same channel draw, and trial substreams derive from
// (seed, trial) alone, so sweep points are paired and output is
// byte-identical across runs and worker counts.
ResultTable run_experiment(const ExperimentConfig& cfg);

// CSV with header "sweep,algorithm,mean_rate,std_error,trials" and
// locale-independent formatting.
void emit_csv(const ResultTable& table, const std::string& path);
// Round-trip parser for emitted CSV files.
ResultTable parse_csv(const std::string& path);

// Gnuplot data + script pair (<stem>.dat, <stem>.gp) with one line per
// algorithm and labeled axes.
void emit_plot(const ResultTable& table, const ExperimentConfig& cfg,
               const std::string& stem);

}  // namespace quantsel
