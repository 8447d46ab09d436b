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

#include "quantsel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <string_view>
#include <thread>
#include <utility>

#include "combinatorics.hpp"
#include "quantsel/downlink.hpp"
#include "quantsel/errors.hpp"
#include "quantsel/quantization.hpp"
#include "quantsel/rng.hpp"

namespace quantsel {
namespace {

constexpr std::uint64_t kPositionStream = 1;
constexpr std::uint64_t kChannelStream = 2;
constexpr std::uint64_t kRandomStream = 3;
constexpr std::uint64_t kMcmcStream = 4;

struct ScenarioName {
  Scenario scenario;
  const char* name;
};

constexpr ScenarioName kScenarioNames[] = {
    {Scenario::kDlRateVsNt, "dl_rate_vs_nt"},
    {Scenario::kDlRateVsPower, "dl_rate_vs_power"},
    {Scenario::kUlRateVsPower, "ul_rate_vs_power"},
    {Scenario::kUlRateVsBits, "ul_rate_vs_bits"},
    {Scenario::kUlRateVsNbs, "ul_rate_vs_nbs"},
    {Scenario::kUlRateVsNms, "ul_rate_vs_nms"},
    {Scenario::kUlOfdmRateVsPower, "ul_ofdm_rate_vs_power"},
    {Scenario::kUlOfdmRateVsNr, "ul_ofdm_rate_vs_nr"},
};

bool is_dl(Scenario s) {
  return s == Scenario::kDlRateVsNt || s == Scenario::kDlRateVsPower;
}

bool is_power_sweep(Scenario s) {
  return s == Scenario::kDlRateVsPower || s == Scenario::kUlRateVsPower ||
         s == Scenario::kUlOfdmRateVsPower;
}

bool is_ofdm_ul(Scenario s) {
  return s == Scenario::kUlOfdmRateVsPower || s == Scenario::kUlOfdmRateVsNr;
}

double dbm_to_linear(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const std::size_t comma = value.find(',', start);
    const std::size_t end = comma == std::string::npos ? value.size() : comma;
    const std::string item = trim(std::string_view(value).substr(
        start, end - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

double parse_double_value(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
  return out;
}

int parse_int_value(const std::string& key, const std::string& value) {
  int out = 0;
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_seed_value(const std::string& key,
                               const std::string& value) {
  std::uint64_t out = 0;
  const char* begin = value.data();
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(begin, end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + value +
                      "'");
  }
  return out;
}

bool parse_bool_value(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

int parse_bits_value(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "infinite") {
    return QuantizerSpec::kInfiniteBits;
  }
  return parse_int_value(key, value);
}

void set_key(ExperimentConfig& cfg, const std::string& key,
             const std::string& value) {
  if (key == "scenario") {
    cfg.scenario = parse_scenario(value);
  } else if (key == "n_bs") {
    cfg.n_bs = parse_int_value(key, value);
  } else if (key == "n_ms") {
    cfg.n_ms = parse_int_value(key, value);
  } else if (key == "n_select") {
    cfg.n_select = parse_int_value(key, value);
  } else if (key == "bits") {
    cfg.bits = parse_bits_value(key, value);
  } else if (key == "n_sc") {
    cfg.n_sc = parse_int_value(key, value);
  } else if (key == "n_taps") {
    cfg.n_taps = parse_int_value(key, value);
  } else if (key == "trials") {
    cfg.trials = parse_int_value(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_seed_value(key, value);
  } else if (key == "power_dbm") {
    cfg.power_dbm = parse_double_value(key, value);
  } else if (key == "power_grid") {
    cfg.power_grid.clear();
    for (const std::string& item : split_list(value)) {
      cfg.power_grid.push_back(parse_double_value(key, item));
    }
  } else if (key == "sweep_grid") {
    cfg.sweep_grid.clear();
    for (const std::string& item : split_list(value)) {
      cfg.sweep_grid.push_back(parse_int_value(key, item));
    }
  } else if (key == "algorithms") {
    cfg.algorithms = split_list(value);
  } else if (key == "unit_gains") {
    cfg.unit_gains = parse_bool_value(key, value);
  } else if (key == "threads") {
    cfg.threads = parse_int_value(key, value);
  } else if (key == "carrier_hz") {
    cfg.large_scale.carrier_hz = parse_double_value(key, value);
  } else if (key == "bandwidth_hz") {
    cfg.large_scale.bandwidth_hz = parse_double_value(key, value);
  } else if (key == "cell_radius_m") {
    cfg.large_scale.cell_radius_m = parse_double_value(key, value);
  } else if (key == "min_distance_m") {
    cfg.large_scale.min_distance_m = parse_double_value(key, value);
  } else if (key == "shadowing_std_db") {
    cfg.large_scale.shadowing_std_db = parse_double_value(key, value);
  } else if (key == "noise_figure_db") {
    cfg.large_scale.noise_figure_db = parse_double_value(key, value);
  } else if (key == "pathloss_exponent") {
    cfg.large_scale.pathloss_exponent = parse_double_value(key, value);
  } else if (key == "mcmc_steps") {
    cfg.mcmc.n_mcmc = parse_int_value(key, value);
  } else if (key == "mcmc_iterations") {
    cfg.mcmc.tau_stop = parse_int_value(key, value);
  } else if (key == "mcmc_tau") {
    cfg.mcmc.tau_rate = parse_double_value(key, value);
  } else if (key == "mcmc_step_exponent") {
    cfg.mcmc.step_exponent = parse_double_value(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

const std::set<std::string>& allowed_algorithms(Scenario s) {
  static const std::set<std::string> dl = {"exhaustive", "nbs", "random"};
  static const std::set<std::string> ul = {"qfas", "fas",    "nbs",
                                           "random", "qmcmc", "exhaustive"};
  return is_dl(s) ? dl : ul;
}

struct SweepPoint {
  double sweep_value = 0.0;
  int n_bs = 0;
  int n_ms = 0;
  int n_select = 0;
  int bits = 0;
  double rho = 0.0;
};

std::vector<SweepPoint> resolve_sweeps(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  SweepPoint base;
  base.n_bs = cfg.n_bs;
  base.n_ms = cfg.n_ms;
  base.n_select = cfg.n_select;
  base.bits = cfg.bits;
  base.rho = dbm_to_linear(cfg.power_dbm);
  if (is_power_sweep(cfg.scenario)) {
    for (double dbm : cfg.power_grid) {
      SweepPoint p = base;
      p.sweep_value = dbm;
      p.rho = dbm_to_linear(dbm);
      points.push_back(p);
    }
    return points;
  }
  for (int value : cfg.sweep_grid) {
    SweepPoint p = base;
    p.sweep_value = value;
    switch (cfg.scenario) {
      case Scenario::kDlRateVsNt:
      case Scenario::kUlOfdmRateVsNr:
        p.n_select = value;
        break;
      case Scenario::kUlRateVsBits:
        p.bits = value;
        break;
      case Scenario::kUlRateVsNbs:
        p.n_bs = value;
        break;
      case Scenario::kUlRateVsNms:
        p.n_ms = value;
        break;
      default:
        throw ConfigError("scenario: sweep grid resolution failed");
    }
    points.push_back(p);
  }
  return points;
}

Eigen::VectorXd trial_gains(const ExperimentConfig& cfg, int n_ms, int trial) {
  if (cfg.unit_gains) return Eigen::VectorXd::Ones(n_ms);
  std::mt19937_64 gen = make_engine(
      derive_seed(cfg.seed, static_cast<std::uint64_t>(trial),
                  kPositionStream));
  const std::vector<double> distances =
      sample_positions(n_ms, cfg.large_scale, gen);
  Eigen::VectorXd gains(n_ms);
  for (int u = 0; u < n_ms; ++u) {
    gains(u) = large_scale_gain(distances[static_cast<std::size_t>(u)],
                                cfg.large_scale, gen);
  }
  return gains;
}

double evaluate_dl(const ExperimentConfig& cfg, const SweepPoint& point,
                   const ChannelSet& chan, const std::string& algorithm,
                   int trial) {
  const QuantizerSpec spec = quantizer_spec(point.bits);
  const std::vector<Eigen::MatrixXcd> dl_taps = dl_channel(chan);
  const bool ofdm = cfg.n_taps > 1;
  const double total_power = point.rho;

  auto subset_rate = [&](const AntennaSubset& subset) {
    if (ofdm) {
      return dl_ofdm_sum_rate(dl_taps, subset, total_power, spec, cfg.n_sc);
    }
    return dl_sum_rate(slice_cols(dl_taps.front(), subset), total_power, spec)
        .sum_rate;
  };

  if (algorithm == "exhaustive") {
    if (!ofdm) {
      return exhaustive_dl_select(dl_taps.front(), point.n_select, total_power,
                                  spec)
          .objective;
    }
    internal::check_enumeration_budget(point.n_bs, point.n_select);
    double best = -std::numeric_limits<double>::infinity();
    internal::for_each_combination(
        point.n_bs, point.n_select, [&](const std::vector<int>& idx) {
          best = std::max(best, subset_rate(AntennaSubset::of(idx)));
        });
    return best;
  }
  if (algorithm == "nbs") {
    const Eigen::Index rows = dl_taps.front().rows();
    Eigen::MatrixXcd stacked(static_cast<Eigen::Index>(dl_taps.size()) * rows,
                             dl_taps.front().cols());
    for (std::size_t l = 0; l < dl_taps.size(); ++l) {
      stacked.middleRows(static_cast<Eigen::Index>(l) * rows, rows) =
          dl_taps[l];
    }
    return subset_rate(nbs_select(stacked, point.n_select));
  }
  if (algorithm == "random") {
    const AntennaSubset subset =
        random_select(point.n_bs, point.n_select,
                      derive_seed(cfg.seed, static_cast<std::uint64_t>(trial),
                                  kRandomStream))
            .subset;
    return subset_rate(subset);
  }
  throw ConfigError("algorithms: '" + algorithm +
                    "' is not available for downlink scenarios");
}

double evaluate_ul(const ExperimentConfig& cfg, const SweepPoint& point,
                   const ChannelSet& chan, const std::string& algorithm,
                   int trial) {
  const QuantizerSpec spec = quantizer_spec(point.bits);
  const double rho = point.rho;
  const bool ofdm = is_ofdm_ul(cfg.scenario);
  const double scale = ofdm ? 1.0 / cfg.n_sc : 1.0;

  auto subset_rate = [&](const AntennaSubset& subset) {
    if (ofdm) {
      return scale *
             ul_ofdm_capacity(chan.taps, subset, rho, spec, cfg.n_sc).sum;
    }
    return ul_capacity(slice_rows(chan.taps.front(), subset), rho, spec);
  };
  auto greedy_subset = [&](const QuantizerSpec& selection_spec) {
    if (ofdm) {
      return qfas_ofdm(chan.taps, rho, selection_spec, point.n_select,
                       cfg.n_sc)
          .subset;
    }
    return qfas(chan.taps.front(), rho, selection_spec, point.n_select).subset;
  };

  if (algorithm == "qfas") {
    return subset_rate(greedy_subset(spec));
  }
  if (algorithm == "fas") {
    return subset_rate(greedy_subset(QuantizerSpec::infinite()));
  }
  if (algorithm == "nbs") {
    const Eigen::Index cols = chan.taps.front().cols();
    Eigen::MatrixXcd stacked(
        chan.taps.front().rows(),
        static_cast<Eigen::Index>(chan.taps.size()) * cols);
    for (std::size_t l = 0; l < chan.taps.size(); ++l) {
      stacked.middleCols(static_cast<Eigen::Index>(l) * cols, cols) =
          chan.taps[l];
    }
    return subset_rate(nbs_ul(stacked, point.n_select).subset);
  }
  if (algorithm == "random") {
    return subset_rate(
        random_select(point.n_bs, point.n_select,
                      derive_seed(cfg.seed, static_cast<std::uint64_t>(trial),
                                  kRandomStream))
            .subset);
  }
  if (algorithm == "qmcmc") {
    const AntennaSubset init = greedy_subset(spec);
    const std::uint64_t mcmc_seed =
        derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), kMcmcStream);
    if (ofdm) {
      return scale * qmcmc_ofdm(chan.taps, rho, spec, point.n_select, cfg.n_sc,
                                cfg.mcmc, init, mcmc_seed)
                         .objective;
    }
    return qmcmc_as(chan.taps.front(), rho, spec, point.n_select, cfg.mcmc,
                    init, mcmc_seed)
        .objective;
  }
  if (algorithm == "exhaustive") {
    if (ofdm) {
      return scale * exhaustive_ul_ofdm_select(chan.taps, rho, spec,
                                               point.n_select, cfg.n_sc)
                         .objective;
    }
    return exhaustive_ul_select(chan.taps.front(), rho, spec, point.n_select)
        .objective;
  }
  throw ConfigError("algorithms: '" + algorithm +
                    "' is not available for uplink scenarios");
}

}  // namespace

const char* scenario_name(Scenario scenario) {
  for (const ScenarioName& entry : kScenarioNames) {
    if (entry.scenario == scenario) return entry.name;
  }
  throw Error("unknown scenario value");
}

Scenario parse_scenario(const std::string& name) {
  for (const ScenarioName& entry : kScenarioNames) {
    if (name == entry.name) return entry.scenario;
  }
  throw ConfigError("scenario: unknown scenario '" + name + "'");
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    set_key(cfg, key, value);
  }
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "' must be key=value");
  }
  const std::string key = trim(std::string_view(assignment).substr(0, eq));
  const std::string value = trim(std::string_view(assignment).substr(eq + 1));
  set_key(cfg, key, value);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_bs < 1) throw ConfigError("n_bs must be positive");
  if (cfg.n_ms < 1) throw ConfigError("n_ms must be positive");
  if (cfg.n_select < 1 || cfg.n_select > cfg.n_bs) {
    throw ConfigError("n_select must lie in [1, n_bs]");
  }
  if (cfg.bits < 1) throw ConfigError("bits must be at least 1");
  if (cfg.trials < 1) throw ConfigError("trials must be positive");
  if (cfg.n_taps < 1) throw ConfigError("n_taps must be positive");
  if (cfg.n_sc < cfg.n_taps) {
    throw ConfigError("n_sc must be at least n_taps");
  }
  if (cfg.threads < 0) throw ConfigError("threads must be nonnegative");
  if (!(cfg.large_scale.min_distance_m > 0.0) ||
      cfg.large_scale.cell_radius_m < cfg.large_scale.min_distance_m) {
    throw ConfigError("cell_radius_m must be at least min_distance_m");
  }
  if (cfg.mcmc.n_mcmc < 1) throw ConfigError("mcmc_steps must be positive");
  if (cfg.mcmc.tau_stop < 0) {
    throw ConfigError("mcmc_iterations must be nonnegative");
  }
  if (!(cfg.mcmc.tau_rate > 0.0)) {
    throw ConfigError("mcmc_tau must be positive");
  }
  if (!(cfg.mcmc.step_exponent > 0.5) || cfg.mcmc.step_exponent > 1.0) {
    throw ConfigError("mcmc_step_exponent must lie in (0.5, 1]");
  }

  const bool power_sweep = is_power_sweep(cfg.scenario);
  if (power_sweep) {
    if (cfg.power_grid.empty()) {
      throw ConfigError("power_grid must be non-empty for power sweeps");
    }
    std::set<double> unique(cfg.power_grid.begin(), cfg.power_grid.end());
    if (unique.size() != cfg.power_grid.size()) {
      throw ConfigError("power_grid has duplicate entries");
    }
  } else {
    if (cfg.sweep_grid.empty()) {
      throw ConfigError("sweep_grid must be non-empty for integer sweeps");
    }
    std::set<int> unique(cfg.sweep_grid.begin(), cfg.sweep_grid.end());
    if (unique.size() != cfg.sweep_grid.size()) {
      throw ConfigError("sweep_grid has duplicate entries");
    }
  }

  if (cfg.algorithms.empty()) {
    throw ConfigError("algorithms must list at least one algorithm");
  }
  std::set<std::string> seen;
  const std::set<std::string>& allowed = allowed_algorithms(cfg.scenario);
  for (const std::string& algorithm : cfg.algorithms) {
    if (!allowed.contains(algorithm)) {
      throw ConfigError("algorithms: '" + algorithm +
                        "' is not valid for scenario " +
                        scenario_name(cfg.scenario));
    }
    if (!seen.insert(algorithm).second) {
      throw ConfigError("algorithms: duplicate entry '" + algorithm + "'");
    }
  }

  const bool narrowband_ul =
      !is_dl(cfg.scenario) && !is_ofdm_ul(cfg.scenario);
  if (narrowband_ul && cfg.n_taps != 1) {
    throw ConfigError("n_taps must be 1 for narrowband uplink scenarios");
  }

  for (const SweepPoint& point : resolve_sweeps(cfg)) {
    if (point.n_select < 1 || point.n_select > point.n_bs) {
      throw ConfigError("sweep_grid: n_select must lie in [1, n_bs]");
    }
    if (point.bits < 1) throw ConfigError("sweep_grid: bits must be >= 1");
    if (point.n_ms < 1) throw ConfigError("sweep_grid: n_ms must be >= 1");
    if (is_dl(cfg.scenario) && point.n_select < point.n_ms) {
      throw ConfigError("n_select must be at least n_ms for DL ZF scenarios");
    }
  }
}

void write_config(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "scenario = " << scenario_name(cfg.scenario) << "\n";
  out << "n_bs = " << cfg.n_bs << "\n";
  out << "n_ms = " << cfg.n_ms << "\n";
  out << "n_select = " << cfg.n_select << "\n";
  if (cfg.bits == QuantizerSpec::kInfiniteBits) {
    out << "bits = inf\n";
  } else {
    out << "bits = " << cfg.bits << "\n";
  }
  out << "n_sc = " << cfg.n_sc << "\n";
  out << "n_taps = " << cfg.n_taps << "\n";
  out << "trials = " << cfg.trials << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "power_dbm = " << format_double(cfg.power_dbm) << "\n";
  out << "power_grid =";
  for (std::size_t i = 0; i < cfg.power_grid.size(); ++i) {
    out << (i == 0 ? " " : ", ") << format_double(cfg.power_grid[i]);
  }
  out << "\n";
  out << "sweep_grid =";
  for (std::size_t i = 0; i < cfg.sweep_grid.size(); ++i) {
    out << (i == 0 ? " " : ", ") << cfg.sweep_grid[i];
  }
  out << "\n";
  out << "algorithms =";
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
    out << (i == 0 ? " " : ", ") << cfg.algorithms[i];
  }
  out << "\n";
  out << "unit_gains = " << (cfg.unit_gains ? "true" : "false") << "\n";
  out << "threads = " << cfg.threads << "\n";
  out << "carrier_hz = " << format_double(cfg.large_scale.carrier_hz) << "\n";
  out << "bandwidth_hz = " << format_double(cfg.large_scale.bandwidth_hz)
      << "\n";
  out << "cell_radius_m = " << format_double(cfg.large_scale.cell_radius_m)
      << "\n";
  out << "min_distance_m = " << format_double(cfg.large_scale.min_distance_m)
      << "\n";
  out << "shadowing_std_db = "
      << format_double(cfg.large_scale.shadowing_std_db) << "\n";
  out << "noise_figure_db = " << format_double(cfg.large_scale.noise_figure_db)
      << "\n";
  out << "pathloss_exponent = "
      << format_double(cfg.large_scale.pathloss_exponent) << "\n";
  out << "mcmc_steps = " << cfg.mcmc.n_mcmc << "\n";
  out << "mcmc_iterations = " << cfg.mcmc.tau_stop << "\n";
  out << "mcmc_tau = " << format_double(cfg.mcmc.tau_rate) << "\n";
  out << "mcmc_step_exponent = " << format_double(cfg.mcmc.step_exponent)
      << "\n";
  if (!out.flush()) throw Error("failed to write " + path);
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const std::vector<SweepPoint> points = resolve_sweeps(cfg);
  const std::size_t n_points = points.size();
  const std::size_t n_algs = cfg.algorithms.size();

  std::vector<std::vector<std::vector<double>>> rates(
      n_points, std::vector<std::vector<double>>(
                    n_algs, std::vector<double>(
                                static_cast<std::size_t>(cfg.trials), 0.0)));

  const auto run_trial = [&](int trial) {
    for (std::size_t pi = 0; pi < n_points; ++pi) {
      const SweepPoint& point = points[pi];
      const Eigen::VectorXd gains = trial_gains(cfg, point.n_ms, trial);
      const ChannelSet chan = sample_channel(
          point.n_bs, point.n_ms, cfg.n_taps, gains,
          derive_seed(cfg.seed, static_cast<std::uint64_t>(trial),
                      kChannelStream));
      for (std::size_t ai = 0; ai < n_algs; ++ai) {
        const std::string& algorithm = cfg.algorithms[ai];
        const double rate =
            is_dl(cfg.scenario)
                ? evaluate_dl(cfg, point, chan, algorithm, trial)
                : evaluate_ul(cfg, point, chan, algorithm, trial);
        rates[pi][ai][static_cast<std::size_t>(trial)] = rate;
      }
    }
  };

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, cfg.trials);

  if (n_threads == 1) {
    for (int trial = 0; trial < cfg.trials; ++trial) run_trial(trial);
  } else {
    std::atomic<int> next_trial{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<bool> failed{false};
    auto worker = [&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int trial = next_trial.fetch_add(1);
        if (trial >= cfg.trials) break;
        try {
          run_trial(trial);
        } catch (...) {
          std::scoped_lock lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    };
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  ResultTable table;
  for (std::size_t pi = 0; pi < n_points; ++pi) {
    for (std::size_t ai = 0; ai < n_algs; ++ai) {
      const std::vector<double>& samples = rates[pi][ai];
      double mean = 0.0;
      for (double x : samples) mean += x;
      mean /= static_cast<double>(samples.size());
      double var = 0.0;
      for (double x : samples) var += (x - mean) * (x - mean);
      const double std_error =
          samples.size() > 1
              ? std::sqrt(var / (static_cast<double>(samples.size()) - 1.0) /
                          static_cast<double>(samples.size()))
              : 0.0;
      ResultRow row;
      row.sweep = points[pi].sweep_value;
      row.algorithm = cfg.algorithms[ai];
      row.mean_rate = mean;
      row.std_error = std_error;
      row.trials = cfg.trials;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

void emit_csv(const ResultTable& table, const std::string& path) {
  if (table.rows.empty()) throw Error("refusing to write an empty table");
  std::string text = "sweep,algorithm,mean_rate,std_error,trials\n";
  for (const ResultRow& row : table.rows) {
    text += format_double(row.sweep);
    text += ',';
    text += row.algorithm;
    text += ',';
    text += format_double(row.mean_rate);
    text += ',';
    text += format_double(row.std_error);
    text += ',';
    text += std::to_string(row.trials);
    text += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw Error("failed to write " + path);
}

ResultTable parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "sweep,algorithm,mean_rate,std_error,trials") {
    throw Error(path + ": missing CSV header");
  }
  ResultTable table;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (int i = 0; i < 4; ++i) {
      const std::size_t comma = stripped.find(',', start);
      if (comma == std::string::npos) {
        throw Error(path + ": malformed CSV row '" + stripped + "'");
      }
      fields.push_back(stripped.substr(start, comma - start));
      start = comma + 1;
    }
    fields.push_back(stripped.substr(start));
    ResultRow row;
    row.sweep = parse_double_value("sweep", fields[0]);
    row.algorithm = fields[1];
    row.mean_rate = parse_double_value("mean_rate", fields[2]);
    row.std_error = parse_double_value("std_error", fields[3]);
    row.trials = parse_int_value("trials", fields[4]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

void emit_plot(const ResultTable& table, const ExperimentConfig& cfg,
               const std::string& stem) {
  if (table.rows.empty()) throw Error("refusing to plot an empty table");
  std::vector<std::string> algorithms;
  for (const ResultRow& row : table.rows) {
    if (std::find(algorithms.begin(), algorithms.end(), row.algorithm) ==
        algorithms.end()) {
      algorithms.push_back(row.algorithm);
    }
  }

  std::ofstream dat(stem + ".dat", std::ios::binary);
  if (!dat) throw Error("cannot open " + stem + ".dat for writing");
  for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
    dat << "# algorithm: " << algorithms[ai] << "\n";
    dat << "# sweep mean_rate std_error\n";
    for (const ResultRow& row : table.rows) {
      if (row.algorithm != algorithms[ai]) continue;
      dat << format_double(row.sweep) << ' ' << format_double(row.mean_rate)
          << ' ' << format_double(row.std_error) << "\n";
    }
    if (ai + 1 < algorithms.size()) dat << "\n\n";
  }
  if (!dat.flush()) throw Error("failed to write " + stem + ".dat");

  const char* x_label = "Transmit power (dBm)";
  switch (cfg.scenario) {
    case Scenario::kDlRateVsNt:
    case Scenario::kUlOfdmRateVsNr:
      x_label = "Selected antennas";
      break;
    case Scenario::kUlRateVsBits:
      x_label = "ADC resolution (bits)";
      break;
    case Scenario::kUlRateVsNbs:
      x_label = "BS antennas";
      break;
    case Scenario::kUlRateVsNms:
      x_label = "Users";
      break;
    default:
      break;
  }

  std::ofstream gp(stem + ".gp", std::ios::binary);
  if (!gp) throw Error("cannot open " + stem + ".gp for writing");
  gp << "set terminal pngcairo size 900,600\n";
  gp << "set output '" << stem << ".png'\n";
  gp << "set xlabel '" << x_label << "'\n";
  gp << "set ylabel 'Average sum rate (bps/Hz)'\n";
  gp << "set key bottom right\n";
  gp << "set grid\n";
  gp << "plot";
  for (std::size_t ai = 0; ai < algorithms.size(); ++ai) {
    if (ai > 0) gp << ",";
    gp << " '" << stem << ".dat' index " << ai
       << " using 1:2:3 with yerrorlines title '" << algorithms[ai] << "'";
  }
  gp << "\n";
  if (!gp.flush()) throw Error("failed to write " + stem + ".gp");
}

}  // namespace quantsel
