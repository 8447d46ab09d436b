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

// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "quantsel/channel.hpp"
#include "quantsel/downlink.hpp"
#include "quantsel/errors.hpp"
#include "quantsel/experiment.hpp"
#include "quantsel/quantization.hpp"
#include "quantsel/rng.hpp"
#include "quantsel/types.hpp"
#include "quantsel/uplink.hpp"
#include "quantsel/verify.hpp"

namespace {

constexpr std::uint64_t kSeed = 1;

using Clock = std::chrono::steady_clock;

struct Criterion {
  bool pass = false;
  std::string detail;
};

std::string format_value(double value) {
  std::ostringstream out;
  out.precision(4);
  out << value;
  return out.str();
}

Criterion from_check(const quantsel::VerifyCheck& check) {
  return {check.pass, check.note};
}

// Criterion 1: Lloyd-Max constants against the closed form and the
// high-resolution asymptote.
Criterion quantizer_constants() {
  Criterion c;
  constexpr double kOneBitTolerance = 1e-9;
  constexpr double kAsymptoteTolerance = 0.02;
  const double one_bit = quantsel::lloyd_max(1).distortion;
  const double one_bit_gap =
      std::abs(one_bit - (1.0 - 2.0 / std::numbers::pi));
  bool pass = one_bit_gap <= kOneBitTolerance;
  double worst = 0.0;
  int worst_bits = 0;
  for (int bits = 6; bits <= 12; ++bits) {
    const double solved = quantsel::lloyd_max(bits).distortion;
    const double approx = quantsel::beta_approximation(bits);
    const double rel = std::abs(solved - approx) / approx;
    if (rel > worst) {
      worst = rel;
      worst_bits = bits;
    }
    pass = pass && rel <= kAsymptoteTolerance;
  }
  c.pass = pass;
  c.detail = "one-bit gap " + format_value(one_bit_gap) +
             ", worst asymptote gap " + format_value(100.0 * worst) +
             "% at b = " + std::to_string(worst_bits) + " (tolerance 2%)";
  return c;
}

// Criterion 8: algorithm ordering at a 32/8/8, 3-bit, 20 dBm operating point.
Criterion algorithm_ordering() {
  Criterion c;
  constexpr int kNbs = 32;
  constexpr int kNms = 8;
  constexpr int kNr = 8;
  constexpr int kBits = 3;
  constexpr double kPowerDbm = 20.0;
  constexpr int kTrials = 500;

  quantsel::ExperimentConfig cfg;
  cfg.scenario = quantsel::Scenario::kUlRateVsPower;
  cfg.n_bs = kNbs;
  cfg.n_ms = kNms;
  cfg.n_select = kNr;
  cfg.bits = kBits;
  cfg.trials = kTrials;
  cfg.seed = kSeed;
  cfg.power_grid = {kPowerDbm};
  cfg.algorithms = {"qmcmc", "qfas", "fas", "random", "nbs"};
  const quantsel::ResultTable table = quantsel::run_experiment(cfg);
  double mean[5] = {};
  for (int i = 0; i < 5; ++i) mean[i] = table.rows[i].mean_rate;
  const bool ordered = mean[0] >= mean[1] && mean[1] > mean[2] &&
                       mean[2] > mean[3] && mean[3] > mean[4];

  const double rho = std::pow(10.0, (kPowerDbm - 30.0) / 10.0);
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(kBits);
  double gap_sum = 0.0;
  double gap_sq = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::mt19937_64 gen =
        quantsel::make_engine(quantsel::derive_seed(kSeed, trial, 101));
    const std::vector<double> dist =
        quantsel::sample_positions(kNms, cfg.large_scale, gen);
    Eigen::VectorXd gains(kNms);
    for (int u = 0; u < kNms; ++u) {
      gains(u) = quantsel::large_scale_gain(dist[u], cfg.large_scale, gen);
    }
    const quantsel::ChannelSet chan = quantsel::sample_channel(
        kNbs, kNms, 1, gains, quantsel::derive_seed(kSeed, trial, 102));
    const Eigen::MatrixXcd& h = chan.taps.front();
    const quantsel::AntennaSubset aware =
        quantsel::qfas(h, rho, spec, kNr).subset;
    const quantsel::AntennaSubset blind =
        quantsel::fas_baseline(h, rho, spec, kNr).subset;
    const double gap =
        quantsel::ul_capacity(quantsel::slice_rows(h, aware), rho, spec) -
        quantsel::ul_capacity(quantsel::slice_rows(h, blind), rho, spec);
    gap_sum += gap;
    gap_sq += gap * gap;
  }
  const double gap_mean = gap_sum / kTrials;
  const double gap_var =
      (gap_sq - kTrials * gap_mean * gap_mean) / (kTrials - 1);
  const double gap_se = std::sqrt(gap_var / kTrials);
  const bool separated = gap_mean > 3.0 * gap_se;

  c.pass = ordered && separated;
  c.detail = "means qmcmc " + format_value(mean[0]) + " / qfas " +
             format_value(mean[1]) + " / fas " + format_value(mean[2]) +
             " / random " + format_value(mean[3]) + " / nbs " +
             format_value(mean[4]) + ", paired qfas-fas gap " +
             format_value(gap_mean) + " at " +
             format_value(gap_se > 0.0 ? gap_mean / gap_se : 0.0) +
             " standard errors";
  return c;
}

// Criterion 9: quantization-aware greedy degenerates to the baseline at
// alpha = 1.
Criterion fas_degeneracy() {
  Criterion c;
  constexpr int kInstances = 100;
  constexpr int kNbs = 12;
  constexpr int kNms = 3;
  constexpr int kNr = 5;
  const quantsel::QuantizerSpec perfect = quantsel::QuantizerSpec::infinite();
  int matches = 0;
  for (int i = 0; i < kInstances; ++i) {
    std::mt19937_64 gen =
        quantsel::make_engine(quantsel::derive_seed(kSeed, 901, i));
    Eigen::MatrixXcd h(kNbs, kNms);
    for (int col = 0; col < kNms; ++col) {
      for (int row = 0; row < kNbs; ++row) {
        h(row, col) = quantsel::standard_cn(gen);
      }
    }
    const double rho = 0.2 * std::pow(10.0, 2.0 * quantsel::uniform01(gen));
    std::vector<int> aware_order;
    std::vector<int> blind_order;
    quantsel::qfas(h, rho, perfect, kNr,
                   [&](const quantsel::GreedyState& s) {
                     aware_order = s.selected;
                   });
    quantsel::fas_baseline(h, rho, perfect, kNr,
                           [&](const quantsel::GreedyState& s) {
                             blind_order = s.selected;
                           });
    if (!aware_order.empty() && aware_order == blind_order) ++matches;
  }
  c.pass = matches == kInstances;
  c.detail = std::to_string(matches) + " of " + std::to_string(kInstances) +
             " selection sequences identical at alpha = 1";
  return c;
}

// Criterion 10: MCMC never falls below its init and recovers the exhaustive
// optimum on nearly all small instances.
Criterion mcmc_best_seen() {
  Criterion c;
  constexpr int kInstances = 100;
  constexpr int kNbs = 8;
  constexpr int kNms = 2;
  constexpr int kNr = 3;
  constexpr int kBits = 3;
  constexpr double kRho = 10.0;
  constexpr double kMatchTolerance = 1e-9;
  constexpr double kRequiredFraction = 0.95;

  quantsel::McmcConfig cfg;
  cfg.n_mcmc = 60;
  cfg.tau_stop = 30;
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(kBits);
  const quantsel::AntennaSubset init =
      quantsel::AntennaSubset::of(std::vector<int>{0, 1, 2});

  int optima = 0;
  bool never_below = true;
  for (int i = 0; i < kInstances; ++i) {
    const quantsel::ChannelSet chan = quantsel::sample_channel(
        kNbs, kNms, 1, Eigen::VectorXd::Ones(kNms),
        quantsel::derive_seed(kSeed, 1001, i));
    const Eigen::MatrixXcd& h = chan.taps.front();
    const double init_rate = quantsel::ul_capacity(
        quantsel::slice_rows(h, init), kRho, spec);
    const quantsel::SelectionOutcome outcome = quantsel::qmcmc_as(
        h, kRho, spec, kNr, cfg, init, quantsel::derive_seed(kSeed, 1002, i));
    if (outcome.objective < init_rate) never_below = false;
    const double optimum =
        quantsel::exhaustive_ul_select(h, kRho, spec, kNr).objective;
    if (optimum - outcome.objective <= kMatchTolerance) ++optima;
  }
  const double fraction = static_cast<double>(optima) / kInstances;
  c.pass = never_below && fraction >= kRequiredFraction;
  c.detail = std::to_string(optima) + " of " + std::to_string(kInstances) +
             " instances reach the exhaustive optimum (need 95%), init " +
             std::string(never_below ? "never" : "sometimes") + " beaten down";
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Criterion 11: the CLI emits byte-identical CSV across repeat runs and
// worker counts.
Criterion cli_determinism() {
  Criterion c;
  const std::filesystem::path root =
      std::filesystem::temp_directory_path() / "quantsel_acceptance";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  const std::string config = (root / "sweep.conf").string();
  std::ofstream(config, std::ios::binary)
      << "scenario = ul_rate_vs_power\n"
         "n_bs = 16\n"
         "n_ms = 4\n"
         "n_select = 6\n"
         "bits = 3\n"
         "trials = 50\n"
         "seed = 3\n"
         "power_grid = 0, 10, 20\n"
         "algorithms = qfas, fas, nbs, random, qmcmc\n";

  const std::string cli = QUANTSEL_CLI_PATH;
  const char* overrides[] = {"", "", " --override threads=1",
                             " --override threads=4"};
  std::vector<std::string> outputs;
  for (int i = 0; i < 4; ++i) {
    const std::string out_dir = (root / ("run" + std::to_string(i))).string();
    const std::string command = "\"" + cli + "\" run --config \"" + config +
                                "\"" + overrides[i] + " --out \"" + out_dir +
                                "\" > /dev/null";
    if (std::system(command.c_str()) != 0) {
      c.pass = false;
      c.detail = "CLI run " + std::to_string(i) + " failed";
      return c;
    }
    outputs.push_back(read_file(out_dir + "/results.csv"));
  }
  bool identical = !outputs.front().empty();
  for (const std::string& text : outputs) {
    identical = identical && text == outputs.front();
  }
  c.pass = identical;
  c.detail = identical ? "4 runs (repeat, threads=1, threads=4) byte-identical"
                       : "CSV outputs differ across runs";
  std::filesystem::remove_all(root);
  return c;
}

}  // namespace

int main() {
  struct Entry {
    int index;
    const char* title;
    Criterion (*run)();
    double limit_s;
  };
  const Entry entries[] = {
      {1, "quantizer constants", quantizer_constants, 5.0},
      {2, "optimal DL rate monotonic in n_t",
       [] { return from_check(quantsel::check_dl_monotonic(kSeed, 50)); },
       30.0},
      {3, "rate-loss extremum closed form",
       [] { return from_check(quantsel::check_rate_loss_extremum(kSeed, 50)); },
       30.0},
      {4, "rate loss vanishes at high power",
       [] { return from_check(quantsel::check_rate_loss_vanishes(kSeed, 50)); },
       5.0},
      {5, "submodularity and greedy bound",
       [] {
         const quantsel::VerifyCheck sub =
             quantsel::check_submodularity(kSeed, 200);
         const quantsel::VerifyCheck greedy =
             quantsel::check_greedy_bound(kSeed, 200);
         return Criterion{sub.pass && greedy.pass,
                          sub.note + "; " + greedy.note};
       },
       120.0},
      {6, "rank-one updates exact",
       [] { return from_check(quantsel::check_rank_one_updates(kSeed, 100)); },
       60.0},
      {7, "block-circulant identities",
       [] { return from_check(quantsel::check_block_circulant(kSeed, 20)); },
       30.0},
      {8, "algorithm ordering at 20 dBm", algorithm_ordering, 300.0},
      {9, "FAS degeneracy at alpha = 1", fas_degeneracy, 30.0},
      {10, "QMCMC best-seen and optimum recovery", mcmc_best_seen, 120.0},
      {11, "CLI determinism", cli_determinism, 60.0},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    const Clock::time_point start = Clock::now();
    Criterion result;
    try {
      result = entry.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = elapsed < entry.limit_s;
    const bool pass = result.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.2f s, limit %.0f s]\n",
                pass ? "PASS" : "FAIL", entry.index, entry.title,
                result.detail.c_str(), elapsed, entry.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures;
}
