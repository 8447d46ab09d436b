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

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "quantsel/types.hpp"

namespace quantsel {

// Log-distance pathloss model parameters. The reference distance for the
// free-space term is min_distance_m.
struct LargeScaleParams {
  double carrier_hz = 2.4e9;
  double bandwidth_hz = 1e7;
  double cell_radius_m = 1000.0;
  double min_distance_m = 100.0;
  double shadowing_std_db = 8.7;
  double noise_figure_db = 12.0;
  double pathloss_exponent = 3.5;
};

// Narrowband (n_taps = 1) or L-tap wideband multiuser channel in uplink
// orientation: taps[l] is the n_bs x n_ms matrix of tap l. Large-scale gains
// are folded into the matrices at generation; the per-user vector is kept for
// inspection and serialization.
struct ChannelSet {
  std::vector<Eigen::MatrixXcd> taps;
  Eigen::VectorXd large_scale_gain;
  int n_bs = 0;
  int n_ms = 0;
  int n_taps = 0;
  // Seed used at generation, recorded in the serialized header.
  std::uint64_t seed = 0;
};

// Per-user BS-to-MS distances, uniform over the annulus area between
// min_distance_m and cell_radius_m.
std::vector<double> sample_positions(int n_ms, const LargeScaleParams& params,
                                     std::uint64_t seed);
std::vector<double> sample_positions(int n_ms, const LargeScaleParams& params,
                                     std::mt19937_64& gen);

// Pathloss in dB at the given distance: free space at the reference distance
// plus the log-distance slope.
double path_loss_db(double distance_m, const LargeScaleParams& params);

// Channel gain in dB before noise normalization,
// -(PL(d) + shadowing) - noise_figure.
double large_scale_gain_db(double distance_m, const LargeScaleParams& params,
                           double shadowing_db);

// Thermal noise power over the configured bandwidth at 290 K, in dBW.
double noise_floor_dbw(const LargeScaleParams& params);

// Linear large-scale gain with lognormal shadowing, normalized so that the
// receiver thermal-noise power over bandwidth_hz is unity. Rate formulas can
// then use unit-variance noise directly.
double large_scale_gain(double distance_m, const LargeScaleParams& params,
                        std::uint64_t seed);
double large_scale_gain(double distance_m, const LargeScaleParams& params,
                        std::mt19937_64& gen);

// Rayleigh channel draw: entry (i, u) of tap l is CN(0, gains[u] / n_taps),
// independent across entries, taps, and users (uniform power delay profile).
// Entries are drawn tap by tap, column by column, row by row.
ChannelSet sample_channel(int n_bs, int n_ms, int n_taps,
                          const Eigen::VectorXd& gains, std::uint64_t seed);

// Row (BS antenna) slice of every tap, in subset order.
std::vector<Eigen::MatrixXcd> ul_submatrix(const ChannelSet& ch,
                                           const AntennaSubset& subset);

// Downlink taps under the reciprocity convention: the transpose of each
// uplink tap.
std::vector<Eigen::MatrixXcd> dl_channel(const ChannelSet& ch);

// Frequency-domain channel at subcarrier n (1-based):
// G_n = sum_l taps[l] exp(-j 2 pi (n - 1) l / n_sc). Requires
// 1 <= n <= n_sc and taps.size() <= n_sc.
Eigen::MatrixXcd freq_channel(const std::vector<Eigen::MatrixXcd>& taps, int n,
                              int n_sc);

Eigen::MatrixXcd slice_rows(const Eigen::MatrixXcd& m,
                            const AntennaSubset& subset);
Eigen::MatrixXcd slice_cols(const Eigen::MatrixXcd& m,
                            const AntennaSubset& subset);

// Text serialization for cross-implementation comparison. The header records
// dimensions, tap count, and the generation seed; matrix entries round-trip
// exactly.
void save_channel(const ChannelSet& ch, const std::string& path);
ChannelSet load_channel(const std::string& path);

}  // namespace quantsel
