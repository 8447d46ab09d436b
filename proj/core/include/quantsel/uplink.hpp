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
#include <functional>
#include <vector>

#include "quantsel/quantization.hpp"
#include "quantsel/types.hpp"

namespace quantsel {

// Snapshot of the greedy engine after a selection stage. Narrowband runs
// carry one running inverse; OFDM runs carry one per subcarrier.
struct GreedyState {
  // Antennas in selection order.
  std::vector<int> selected;
  // Running inverses Q_t = (I + rho alpha H_K^H D_K^{-1} H_K)^{-1}.
  std::vector<Eigen::MatrixXcd> q_matrices;
  // Candidate gains c(j), one row per subcarrier. Columns of already
  // selected antennas are stale.
  Eigen::MatrixXd gains;
  // Quantization penalties d_j (the wideband variant for OFDM).
  Eigen::VectorXd penalties;
  // Cumulative selection-model capacity after each stage.
  std::vector<double> stage_rates;
};

// Called after every greedy stage; used by tests to audit the rank-one
// updates against direct recomputation.
using StageObserver = std::function<void(const GreedyState&)>;

// Uplink capacity of a selected-row channel h_k (n_r x n_ms) under AQNM,
// evaluated through the n_ms x n_ms dual determinant
// log2 |I + rho alpha H^H D^{-1} H| with D = diag(1 + rho (1 - alpha)
// ||f_i||^2). Returns 0 for an empty subset (zero-row matrix).
double ul_capacity(const Eigen::MatrixXcd& h_k, double rho,
                   const QuantizerSpec& spec);

// Per-subcarrier uplink OFDM capacities and their sum over subcarriers.
struct UlOfdmCapacity {
  Eigen::VectorXd per_subcarrier;
  double sum = 0.0;
};

// Capacity per subcarrier for the selected rows of an L-tap channel,
// log2 |I + rho alpha D^{-1} G_n G_n^H| with the subcarrier-independent
// wideband penalty D = diag(1 + rho (1 - alpha) sum_l ||row_i(H_l)||^2).
UlOfdmCapacity ul_ofdm_capacity(const std::vector<Eigen::MatrixXcd>& taps,
                                const AntennaSubset& subset, double rho,
                                const QuantizerSpec& spec, int n_sc);

// Quantization-aware greedy selection: each stage picks
// argmax_j c_t(j) / d_j (ties to the lowest index) and applies the rank-one
// update a = (c(J) + d_J / (rho alpha))^{-1/2} Q f_J, Q <- Q - a a^H,
// c(j) <- c(j) - |f_j^H a|^2. The outcome objective is the recomputed
// ul_capacity of the chosen subset.
SelectionOutcome qfas(const Eigen::MatrixXcd& h, double rho,
                      const QuantizerSpec& spec, int n_r,
                      const StageObserver& observer = {});

// Greedy baseline that ignores quantization while selecting (alpha treated
// as 1, unit penalties); the outcome objective is still evaluated with the
// given spec.
SelectionOutcome fas_baseline(const Eigen::MatrixXcd& h, double rho,
                              const QuantizerSpec& spec, int n_r,
                              const StageObserver& observer = {});

// Largest row norms, ties to the lowest index. The objective is left NaN.
SelectionOutcome nbs_ul(const Eigen::MatrixXcd& h, int n_r);

// Uniform subset without replacement, deterministic per seed. The objective
// is left NaN.
SelectionOutcome random_select(int n_bs, int n_r, std::uint64_t seed);

// Global optimum by lexicographic enumeration; throws BudgetExceededError
// beyond 1e6 subsets.
SelectionOutcome exhaustive_ul_select(const Eigen::MatrixXcd& h, double rho,
                                      const QuantizerSpec& spec, int n_r);

// Adaptive Metropolized independence sampler parameters. The step schedule
// r(t) = t^{-step_exponent} needs step_exponent in (0.5, 1] so that
// sum r(t) diverges while sum r(t)^2 converges.
struct McmcConfig {
  int n_mcmc = 60;
  int tau_stop = 30;
  double tau_rate = 1.0;
  double step_exponent = 0.7;
  // Testing seam: replace the Bernoulli proposal with a uniform draw over
  // fixed-size subsets, making the chain a plain Metropolis sampler of the
  // target distribution.
  bool uniform_proposal = false;
};

// MCMC selection over pi(w) proportional to exp(R(w) / tau_rate), proposing
// from a product of per-antenna Bernoulli distributions that adapts toward
// the target. Proposals are repaired to cardinality n_r before evaluation:
// excess antennas with the smallest selection probabilities are dropped,
// missing ones are added uniformly at random. Returns the best codeword seen
// including the init, so the objective never falls below the init's.
SelectionOutcome qmcmc_as(const Eigen::MatrixXcd& h, double rho,
                          const QuantizerSpec& spec, int n_r,
                          const McmcConfig& cfg, const AntennaSubset& init,
                          std::uint64_t seed);

// OFDM greedy: maximizes the summed per-subcarrier increment
// sum_n log2(1 + (rho alpha / d_j) c_{n,t}(j)) with one running inverse per
// subcarrier and the wideband penalty d_j.
SelectionOutcome qfas_ofdm(const std::vector<Eigen::MatrixXcd>& taps,
                           double rho, const QuantizerSpec& spec, int n_r,
                           int n_sc, const StageObserver& observer = {});

// OFDM variant of qmcmc_as with the summed-subcarrier objective.
SelectionOutcome qmcmc_ofdm(const std::vector<Eigen::MatrixXcd>& taps,
                            double rho, const QuantizerSpec& spec, int n_r,
                            int n_sc, const McmcConfig& cfg,
                            const AntennaSubset& init, std::uint64_t seed);

// Desk-scale OFDM oracle: global optimum of the summed-subcarrier capacity.
SelectionOutcome exhaustive_ul_ofdm_select(
    const std::vector<Eigen::MatrixXcd>& taps, double rho,
    const QuantizerSpec& spec, int n_r, int n_sc);

}  // namespace quantsel
