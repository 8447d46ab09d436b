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
#include <vector>

#include "quantsel/quantization.hpp"
#include "quantsel/types.hpp"

namespace quantsel {

// Downlink ZF evaluation of one antenna subset. The SINR is common across
// users, so sum_rate = n_ms * log2(1 + per_user_sinr).
struct DlEvaluation {
  AntennaSubset subset;
  double p_t = 0.0;
  double sum_rate = 0.0;
  double per_user_sinr = 0.0;
};

// Closed-form description of the rate loss between two nested subsets.
// tr_q and tr_k are the Gram inverse traces of the large and small subset.
struct RateLossProfile {
  AntennaSubset subset_small;
  AntennaSubset subset_large;
  double p_d_max = 0.0;
  double max_loss = 0.0;
  double tr_q = 0.0;
  double tr_k = 0.0;
};

// ZF precoder W = H^H (H H^H)^{-1} for the n_ms x n_t downlink channel of
// the selected antennas. Throws IllConditionedError if the Gram matrix
// condition number exceeds 1e12.
Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& h_t);

// Equal per-user power p_T = P / tr((H H^H)^{-1}) that meets the total
// transmit power constraint with equality.
double dl_power(const Eigen::MatrixXcd& h_t, double total_power);

// Downlink ZF sum rate under AQNM:
// n_ms * log2(1 + alpha p_T / (1 + (1 - alpha) p_T)).
DlEvaluation dl_sum_rate(const Eigen::MatrixXcd& h_t, double total_power,
                         const QuantizerSpec& spec);

// Sum rate difference between a subset pair; the caller guarantees that
// h_small selects a subset of h_large's antennas.
double dl_rate_loss(const Eigen::MatrixXcd& h_small,
                    const Eigen::MatrixXcd& h_large, double total_power,
                    const QuantizerSpec& spec);

// Power at which the rate loss peaks, sqrt(tr_q tr_k / (1 - alpha)). Throws
// UnboundedError for alpha = 1 where the loss is monotone in P.
double p_d_max(const Eigen::MatrixXcd& h_small, const Eigen::MatrixXcd& h_large,
               const QuantizerSpec& spec);

// The loss value at p_d_max in closed form.
double max_rate_loss(const Eigen::MatrixXcd& h_small,
                     const Eigen::MatrixXcd& h_large,
                     const QuantizerSpec& spec);

// Convenience bundle of the closed forms above.
RateLossProfile rate_loss_profile(const Eigen::MatrixXcd& h_small,
                                  const Eigen::MatrixXcd& h_large,
                                  AntennaSubset subset_small,
                                  AntennaSubset subset_large,
                                  const QuantizerSpec& spec);

// Norm-based selection: the n_t columns of the downlink channel with the
// largest Euclidean norm, ties broken by lowest index. Nested across n_t.
AntennaSubset nbs_select(const Eigen::MatrixXcd& h_dl, int n_t);

// Exhaustive transmit selection by lexicographic enumeration. The optimum
// minimizes the Gram inverse trace, which is independent of the quantizer
// spec; the reported objective is evaluated with the given spec. Throws
// BudgetExceededError beyond 1e6 subsets.
SelectionOutcome exhaustive_dl_select(const Eigen::MatrixXcd& h_dl, int n_t,
                                      double total_power,
                                      const QuantizerSpec& spec);

// OFDM bulk-selection power allocation over downlink taps (n_ms x n_bs each):
// p_T = P / sum_n tr((G_n G_n^H)^{-1}) restricted to the subset columns.
double dl_ofdm_power(const std::vector<Eigen::MatrixXcd>& dl_taps,
                     const AntennaSubset& subset, double total_power, int n_sc);

// Average OFDM sum rate; the SINR is identical across users and subcarriers,
// so this equals n_ms * log2(1 + alpha p_T / (1 + (1 - alpha) p_T)).
double dl_ofdm_sum_rate(const std::vector<Eigen::MatrixXcd>& dl_taps,
                        const AntennaSubset& subset, double total_power,
                        const QuantizerSpec& spec, int n_sc);

}  // namespace quantsel
