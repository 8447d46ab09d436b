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

#include "quantsel/downlink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "combinatorics.hpp"
#include "linalg.hpp"
#include "quantsel/channel.hpp"
#include "quantsel/errors.hpp"

namespace quantsel {
namespace {

double inverse_gram_trace(const Eigen::MatrixXcd& h) {
  if (h.rows() > h.cols()) {
    throw IllConditionedError("ZF needs at least as many antennas as users");
  }
  return internal::checked_inverse_trace(h * h.adjoint());
}

double sinr_from_power(double p_t, const QuantizerSpec& spec) {
  return spec.alpha * p_t / (1.0 + (1.0 - spec.alpha) * p_t);
}

double ofdm_trace_sum(const std::vector<Eigen::MatrixXcd>& dl_taps,
                      const AntennaSubset& subset, int n_sc) {
  if (dl_taps.empty()) throw Error("OFDM evaluation needs at least one tap");
  std::vector<Eigen::MatrixXcd> sliced;
  sliced.reserve(dl_taps.size());
  for (const Eigen::MatrixXcd& tap : dl_taps) {
    sliced.push_back(slice_cols(tap, subset));
  }
  double sum = 0.0;
  for (int n = 1; n <= n_sc; ++n) {
    sum += inverse_gram_trace(freq_channel(sliced, n, n_sc));
  }
  return sum;
}

}  // namespace

Eigen::MatrixXcd zf_precoder(const Eigen::MatrixXcd& h_t) {
  if (h_t.rows() > h_t.cols()) {
    throw IllConditionedError("ZF needs at least as many antennas as users");
  }
  const Eigen::MatrixXcd gram = h_t * h_t.adjoint();
  internal::checked_inverse_trace(gram);
  return h_t.adjoint() * gram.inverse();
}

double dl_power(const Eigen::MatrixXcd& h_t, double total_power) {
  if (!(total_power > 0.0)) throw Error("transmit power must be positive");
  return total_power / inverse_gram_trace(h_t);
}

DlEvaluation dl_sum_rate(const Eigen::MatrixXcd& h_t, double total_power,
                         const QuantizerSpec& spec) {
  DlEvaluation eval;
  eval.subset = AntennaSubset::full(static_cast<int>(h_t.cols()));
  eval.p_t = dl_power(h_t, total_power);
  eval.per_user_sinr = sinr_from_power(eval.p_t, spec);
  eval.sum_rate =
      static_cast<double>(h_t.rows()) * std::log2(1.0 + eval.per_user_sinr);
  return eval;
}

double dl_rate_loss(const Eigen::MatrixXcd& h_small,
                    const Eigen::MatrixXcd& h_large, double total_power,
                    const QuantizerSpec& spec) {
  return dl_sum_rate(h_large, total_power, spec).sum_rate -
         dl_sum_rate(h_small, total_power, spec).sum_rate;
}

double p_d_max(const Eigen::MatrixXcd& h_small, const Eigen::MatrixXcd& h_large,
               const QuantizerSpec& spec) {
  if (spec.alpha >= 1.0) {
    throw UnboundedError(
        "rate loss is monotone under perfect quantization; no interior "
        "maximum exists");
  }
  const double tr_q = inverse_gram_trace(h_large);
  const double tr_k = inverse_gram_trace(h_small);
  return std::sqrt(tr_q * tr_k / (1.0 - spec.alpha));
}

double max_rate_loss(const Eigen::MatrixXcd& h_small,
                     const Eigen::MatrixXcd& h_large,
                     const QuantizerSpec& spec) {
  if (spec.alpha >= 1.0) {
    throw UnboundedError(
        "rate loss is monotone under perfect quantization; no interior "
        "maximum exists");
  }
  const double tr_q = inverse_gram_trace(h_large);
  const double tr_k = inverse_gram_trace(h_small);
  const double one_minus = 1.0 - spec.alpha;
  const double gain = spec.alpha * (tr_k - tr_q) /
                      (tr_q + one_minus * tr_k +
                       2.0 * std::sqrt(one_minus * tr_q * tr_k));
  return static_cast<double>(h_small.rows()) * std::log2(1.0 + gain);
}

RateLossProfile rate_loss_profile(const Eigen::MatrixXcd& h_small,
                                  const Eigen::MatrixXcd& h_large,
                                  AntennaSubset subset_small,
                                  AntennaSubset subset_large,
                                  const QuantizerSpec& spec) {
  RateLossProfile profile;
  profile.subset_small = std::move(subset_small);
  profile.subset_large = std::move(subset_large);
  profile.tr_q = inverse_gram_trace(h_large);
  profile.tr_k = inverse_gram_trace(h_small);
  profile.p_d_max = p_d_max(h_small, h_large, spec);
  profile.max_loss = max_rate_loss(h_small, h_large, spec);
  return profile;
}

AntennaSubset nbs_select(const Eigen::MatrixXcd& h_dl, int n_t) {
  const int n_bs = static_cast<int>(h_dl.cols());
  if (n_t < 1 || n_t > n_bs) throw Error("selection size out of range");
  const Eigen::VectorXd norms = h_dl.colwise().squaredNorm();
  std::vector<int> order(static_cast<std::size_t>(n_bs));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms(a) > norms(b); });
  order.resize(static_cast<std::size_t>(n_t));
  return AntennaSubset::of(std::move(order));
}

SelectionOutcome exhaustive_dl_select(const Eigen::MatrixXcd& h_dl, int n_t,
                                      double total_power,
                                      const QuantizerSpec& spec) {
  const int n_bs = static_cast<int>(h_dl.cols());
  if (n_t < h_dl.rows() || n_t > n_bs) {
    throw Error("selection size out of range for ZF");
  }
  internal::check_enumeration_budget(n_bs, n_t);
  double best_trace = std::numeric_limits<double>::infinity();
  std::vector<int> best;
  internal::for_each_combination(n_bs, n_t, [&](const std::vector<int>& idx) {
    double trace = 0.0;
    try {
      trace = inverse_gram_trace(slice_cols(h_dl, AntennaSubset::of(idx)));
    } catch (const IllConditionedError&) {
      return;
    }
    if (trace < best_trace) {
      best_trace = trace;
      best = idx;
    }
  });
  if (best.empty()) {
    throw IllConditionedError("every candidate subset is ill-conditioned");
  }
  SelectionOutcome outcome;
  outcome.subset = AntennaSubset::of(std::move(best));
  outcome.algorithm = "exhaustive";
  outcome.objective =
      dl_sum_rate(slice_cols(h_dl, outcome.subset), total_power, spec)
          .sum_rate;
  return outcome;
}

double dl_ofdm_power(const std::vector<Eigen::MatrixXcd>& dl_taps,
                     const AntennaSubset& subset, double total_power,
                     int n_sc) {
  if (!(total_power > 0.0)) throw Error("transmit power must be positive");
  return total_power / ofdm_trace_sum(dl_taps, subset, n_sc);
}

double dl_ofdm_sum_rate(const std::vector<Eigen::MatrixXcd>& dl_taps,
                        const AntennaSubset& subset, double total_power,
                        const QuantizerSpec& spec, int n_sc) {
  const double p_t = dl_ofdm_power(dl_taps, subset, total_power, n_sc);
  const double sinr = sinr_from_power(p_t, spec);
  return static_cast<double>(dl_taps.front().rows()) * std::log2(1.0 + sinr);
}

}  // namespace quantsel
