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

#include "quantsel/channel.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "quantsel/errors.hpp"
#include "quantsel/rng.hpp"

namespace quantsel {
namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kNoiseTemperature = 290.0;

void append_double(std::string& out, double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw Error("channel file has a malformed number: " + std::string(token));
  }
  return value;
}

}  // namespace

std::vector<double> sample_positions(int n_ms, const LargeScaleParams& params,
                                     std::mt19937_64& gen) {
  if (n_ms < 1) throw Error("sample_positions needs at least one user");
  const double r0sq = params.min_distance_m * params.min_distance_m;
  const double rsq = params.cell_radius_m * params.cell_radius_m;
  std::vector<double> distances(static_cast<std::size_t>(n_ms));
  for (double& d : distances) {
    d = std::sqrt(r0sq + uniform01(gen) * (rsq - r0sq));
  }
  return distances;
}

std::vector<double> sample_positions(int n_ms, const LargeScaleParams& params,
                                     std::uint64_t seed) {
  std::mt19937_64 gen = make_engine(seed);
  return sample_positions(n_ms, params, gen);
}

double path_loss_db(double distance_m, const LargeScaleParams& params) {
  const double reference = 20.0 * std::log10(
      4.0 * std::numbers::pi * params.min_distance_m * params.carrier_hz /
      kSpeedOfLight);
  return reference + 10.0 * params.pathloss_exponent *
                         std::log10(distance_m / params.min_distance_m);
}

double large_scale_gain_db(double distance_m, const LargeScaleParams& params,
                           double shadowing_db) {
  return -(path_loss_db(distance_m, params) + shadowing_db) -
         params.noise_figure_db;
}

double noise_floor_dbw(const LargeScaleParams& params) {
  return 10.0 *
         std::log10(kBoltzmann * kNoiseTemperature * params.bandwidth_hz);
}

double large_scale_gain(double distance_m, const LargeScaleParams& params,
                        std::mt19937_64& gen) {
  const double shadowing = params.shadowing_std_db * standard_normal(gen);
  const double gain_db = large_scale_gain_db(distance_m, params, shadowing) -
                         noise_floor_dbw(params);
  return std::pow(10.0, gain_db / 10.0);
}

double large_scale_gain(double distance_m, const LargeScaleParams& params,
                        std::uint64_t seed) {
  std::mt19937_64 gen = make_engine(seed);
  return large_scale_gain(distance_m, params, gen);
}

ChannelSet sample_channel(int n_bs, int n_ms, int n_taps,
                          const Eigen::VectorXd& gains, std::uint64_t seed) {
  if (n_bs < 1 || n_ms < 1 || n_taps < 1) {
    throw Error("channel dimensions must be positive");
  }
  if (gains.size() != n_ms) {
    throw Error("one large-scale gain per user is required");
  }
  if ((gains.array() <= 0.0).any()) {
    throw Error("large-scale gains must be positive");
  }
  ChannelSet ch;
  ch.n_bs = n_bs;
  ch.n_ms = n_ms;
  ch.n_taps = n_taps;
  ch.seed = seed;
  ch.large_scale_gain = gains;
  std::mt19937_64 gen = make_engine(seed);
  const Eigen::VectorXd scale =
      (gains / static_cast<double>(n_taps)).cwiseSqrt();
  ch.taps.resize(static_cast<std::size_t>(n_taps));
  for (Eigen::MatrixXcd& tap : ch.taps) {
    tap.resize(n_bs, n_ms);
    for (int u = 0; u < n_ms; ++u) {
      for (int i = 0; i < n_bs; ++i) {
        tap(i, u) = scale(u) * standard_cn(gen);
      }
    }
  }
  return ch;
}

std::vector<Eigen::MatrixXcd> ul_submatrix(const ChannelSet& ch,
                                           const AntennaSubset& subset) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(ch.taps.size());
  for (const Eigen::MatrixXcd& tap : ch.taps) {
    out.push_back(slice_rows(tap, subset));
  }
  return out;
}

std::vector<Eigen::MatrixXcd> dl_channel(const ChannelSet& ch) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(ch.taps.size());
  for (const Eigen::MatrixXcd& tap : ch.taps) {
    out.push_back(tap.transpose());
  }
  return out;
}

Eigen::MatrixXcd freq_channel(const std::vector<Eigen::MatrixXcd>& taps, int n,
                              int n_sc) {
  if (taps.empty()) throw Error("freq_channel needs at least one tap");
  if (n < 1 || n > n_sc) {
    throw Error("subcarrier index out of range");
  }
  if (static_cast<int>(taps.size()) > n_sc) {
    throw Error("more taps than subcarriers");
  }
  Eigen::MatrixXcd g =
      Eigen::MatrixXcd::Zero(taps.front().rows(), taps.front().cols());
  for (std::size_t l = 0; l < taps.size(); ++l) {
    const double angle = -2.0 * std::numbers::pi * (n - 1) *
                         static_cast<double>(l) / n_sc;
    g += std::polar(1.0, angle) * taps[l];
  }
  return g;
}

Eigen::MatrixXcd slice_rows(const Eigen::MatrixXcd& m,
                            const AntennaSubset& subset) {
  Eigen::MatrixXcd out(subset.size(), m.cols());
  for (int i = 0; i < subset.size(); ++i) {
    const int row = subset.indices[static_cast<std::size_t>(i)];
    if (row >= m.rows()) throw Error("row index out of range");
    out.row(i) = m.row(row);
  }
  return out;
}

Eigen::MatrixXcd slice_cols(const Eigen::MatrixXcd& m,
                            const AntennaSubset& subset) {
  Eigen::MatrixXcd out(m.rows(), subset.size());
  for (int i = 0; i < subset.size(); ++i) {
    const int col = subset.indices[static_cast<std::size_t>(i)];
    if (col >= m.cols()) throw Error("column index out of range");
    out.col(i) = m.col(col);
  }
  return out;
}

void save_channel(const ChannelSet& ch, const std::string& path) {
  std::string text;
  text += "quantsel-channel 1\n";
  text += "n_bs " + std::to_string(ch.n_bs) + "\n";
  text += "n_ms " + std::to_string(ch.n_ms) + "\n";
  text += "n_taps " + std::to_string(ch.n_taps) + "\n";
  text += "seed " + std::to_string(ch.seed) + "\n";
  text += "gains";
  for (Eigen::Index u = 0; u < ch.large_scale_gain.size(); ++u) {
    text += ' ';
    append_double(text, ch.large_scale_gain(u));
  }
  text += '\n';
  for (int l = 0; l < ch.n_taps; ++l) {
    text += "tap " + std::to_string(l) + "\n";
    const Eigen::MatrixXcd& tap = ch.taps[static_cast<std::size_t>(l)];
    for (int i = 0; i < ch.n_bs; ++i) {
      for (int u = 0; u < ch.n_ms; ++u) {
        if (u > 0) text += ' ';
        append_double(text, tap(i, u).real());
        text += ' ';
        append_double(text, tap(i, u).imag());
      }
      text += '\n';
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw Error("failed to write " + path);
}

ChannelSet load_channel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::string word;
  auto expect = [&](std::string_view key) {
    if (!(in >> word) || word != key) {
      throw Error("channel file missing field: " + std::string(key));
    }
  };
  expect("quantsel-channel");
  expect("1");
  ChannelSet ch;
  expect("n_bs");
  in >> ch.n_bs;
  expect("n_ms");
  in >> ch.n_ms;
  expect("n_taps");
  in >> ch.n_taps;
  expect("seed");
  in >> ch.seed;
  if (!in || ch.n_bs < 1 || ch.n_ms < 1 || ch.n_taps < 1) {
    throw Error("channel file has an invalid header");
  }
  expect("gains");
  ch.large_scale_gain.resize(ch.n_ms);
  for (int u = 0; u < ch.n_ms; ++u) {
    if (!(in >> word)) throw Error("channel file truncated in gains");
    ch.large_scale_gain(u) = parse_double(word);
  }
  ch.taps.resize(static_cast<std::size_t>(ch.n_taps));
  for (int l = 0; l < ch.n_taps; ++l) {
    expect("tap");
    expect(std::to_string(l));
    Eigen::MatrixXcd& tap = ch.taps[static_cast<std::size_t>(l)];
    tap.resize(ch.n_bs, ch.n_ms);
    for (int i = 0; i < ch.n_bs; ++i) {
      for (int u = 0; u < ch.n_ms; ++u) {
        if (!(in >> word)) throw Error("channel file truncated in tap data");
        const double re = parse_double(word);
        if (!(in >> word)) throw Error("channel file truncated in tap data");
        tap(i, u) = std::complex<double>(re, parse_double(word));
      }
    }
  }
  return ch;
}

}  // namespace quantsel
