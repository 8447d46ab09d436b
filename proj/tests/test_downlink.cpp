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
#include <complex>
#include <limits>
#include <vector>

#include <doctest.h>

#include "combinatorics.hpp"
#include "quantsel/channel.hpp"
#include "quantsel/downlink.hpp"
#include "quantsel/errors.hpp"
#include "quantsel/rng.hpp"

namespace {

Eigen::MatrixXcd random_dl(int n_ms, int n_t, std::uint64_t seed) {
  std::mt19937_64 gen = quantsel::make_engine(seed);
  Eigen::MatrixXcd h(n_ms, n_t);
  for (int i = 0; i < n_ms; ++i) {
    for (int j = 0; j < n_t; ++j) {
      h(i, j) = quantsel::standard_cn(gen);
    }
  }
  return h;
}

double inverse_gram_trace(const Eigen::MatrixXcd& h) {
  const Eigen::MatrixXcd gram = h * h.adjoint();
  return gram.inverse().trace().real();
}

}  // namespace

TEST_CASE("the ZF precoder inverts the channel") {
  const Eigen::MatrixXcd h = random_dl(3, 8, 1);
  const Eigen::MatrixXcd w = quantsel::zf_precoder(h);
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(3, 3);
  CHECK((h * w - identity).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("the ZF precoder rejects rank-deficient channels") {
  Eigen::MatrixXcd h = random_dl(3, 6, 2);
  h.row(2) = h.row(0);
  CHECK_THROWS_AS(quantsel::zf_precoder(h), quantsel::IllConditionedError);
}

TEST_CASE("equal per-user power meets the total power constraint") {
  const Eigen::MatrixXcd h = random_dl(2, 5, 3);
  const double total = 12.0;
  const double p_t = quantsel::dl_power(h, total);
  const Eigen::MatrixXcd w = quantsel::zf_precoder(h);
  CHECK(p_t * (w.adjoint() * w).trace().real() ==
        doctest::Approx(total).epsilon(1e-10));
}

TEST_CASE("the downlink sum rate follows the quantized SINR formula") {
  const Eigen::MatrixXcd h = random_dl(2, 6, 4);
  const double total = 4.0;
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(3);
  const quantsel::DlEvaluation eval = quantsel::dl_sum_rate(h, total, spec);
  const double p_t = quantsel::dl_power(h, total);
  const double sinr =
      spec.alpha * p_t / (1.0 + (1.0 - spec.alpha) * p_t);
  CHECK(eval.p_t == doctest::Approx(p_t).epsilon(1e-14));
  CHECK(eval.per_user_sinr == doctest::Approx(sinr).epsilon(1e-14));
  CHECK(eval.sum_rate ==
        doctest::Approx(2.0 * std::log2(1.0 + sinr)).epsilon(1e-14));

  const quantsel::QuantizerSpec perfect = quantsel::QuantizerSpec::infinite();
  const quantsel::DlEvaluation clean = quantsel::dl_sum_rate(h, total, perfect);
  CHECK(clean.sum_rate ==
        doctest::Approx(2.0 * std::log2(1.0 + p_t)).epsilon(1e-14));
}

TEST_CASE("dropping antennas never helps the downlink") {
  const Eigen::MatrixXcd h_large = random_dl(2, 7, 5);
  const Eigen::MatrixXcd h_small = h_large.leftCols(4);
  const quantsel::QuantizerSpec spec =
      quantsel::QuantizerSpec::from_alpha(0.9);
  for (double p : {0.01, 1.0, 100.0, 1e6}) {
    CHECK(quantsel::dl_rate_loss(h_small, h_large, p, spec) >= 0.0);
  }
}

TEST_CASE("the closed-form extremum matches a grid search") {
  const Eigen::MatrixXcd h_large = random_dl(2, 6, 6);
  const Eigen::MatrixXcd h_small = h_large.leftCols(3);
  const quantsel::QuantizerSpec spec =
      quantsel::QuantizerSpec::from_alpha(0.9655);
  const double p_star = quantsel::p_d_max(h_small, h_large, spec);
  const double loss_star = quantsel::max_rate_loss(h_small, h_large, spec);
  CHECK(std::abs(quantsel::dl_rate_loss(h_small, h_large, p_star, spec) -
                 loss_star) < 1e-9);
  double best = -1.0;
  for (int k = 0; k <= 400; ++k) {
    const double p = p_star * std::pow(10.0, (k - 200) / 100.0);
    best = std::max(best, quantsel::dl_rate_loss(h_small, h_large, p, spec));
  }
  CHECK(best <= loss_star + 1e-9);
  CHECK(quantsel::p_d_max(h_small, h_large, spec) ==
        doctest::Approx(std::sqrt(
            inverse_gram_trace(h_large) * inverse_gram_trace(h_small) /
            (1.0 - spec.alpha)))
            .epsilon(1e-12));
}

TEST_CASE("perfect quantization has no interior loss extremum") {
  const Eigen::MatrixXcd h_large = random_dl(2, 6, 7);
  const Eigen::MatrixXcd h_small = h_large.leftCols(3);
  const quantsel::QuantizerSpec perfect = quantsel::QuantizerSpec::infinite();
  CHECK_THROWS_AS(quantsel::p_d_max(h_small, h_large, perfect),
                  quantsel::UnboundedError);
  CHECK_THROWS_AS(quantsel::max_rate_loss(h_small, h_large, perfect),
                  quantsel::UnboundedError);
  double prev = 0.0;
  for (double p : {0.1, 1.0, 10.0, 1000.0, 1e6}) {
    const double loss = quantsel::dl_rate_loss(h_small, h_large, p, perfect);
    CHECK(loss >= prev - 1e-12);
    prev = loss;
  }
}

TEST_CASE("rate saturates at the quantization ceiling") {
  const Eigen::MatrixXcd h = random_dl(2, 8, 8);
  const quantsel::QuantizerSpec spec =
      quantsel::QuantizerSpec::from_alpha(0.9655);
  const double limit =
      2.0 * std::log2(1.0 + spec.alpha / (1.0 - spec.alpha));
  CHECK(std::abs(quantsel::dl_sum_rate(h, 1e12, spec).sum_rate - limit) <
        1e-3);
}

TEST_CASE("the rate loss profile reports the Gram traces") {
  const Eigen::MatrixXcd h_dl = random_dl(2, 6, 9);
  const quantsel::AntennaSubset large =
      quantsel::AntennaSubset::of(std::vector<int>{0, 1, 2, 3, 4});
  const quantsel::AntennaSubset small =
      quantsel::AntennaSubset::of(std::vector<int>{0, 1, 2});
  const Eigen::MatrixXcd h_large = quantsel::slice_cols(h_dl, large);
  const Eigen::MatrixXcd h_small = quantsel::slice_cols(h_dl, small);
  const quantsel::QuantizerSpec spec =
      quantsel::QuantizerSpec::from_alpha(0.8);
  const quantsel::RateLossProfile profile =
      quantsel::rate_loss_profile(h_small, h_large, small, large, spec);
  CHECK(profile.tr_q ==
        doctest::Approx(inverse_gram_trace(h_large)).epsilon(1e-10));
  CHECK(profile.tr_k ==
        doctest::Approx(inverse_gram_trace(h_small)).epsilon(1e-10));
  CHECK(profile.tr_k > profile.tr_q);
  CHECK(profile.p_d_max ==
        doctest::Approx(quantsel::p_d_max(h_small, h_large, spec))
            .epsilon(1e-12));
  CHECK(profile.max_loss ==
        doctest::Approx(quantsel::max_rate_loss(h_small, h_large, spec))
            .epsilon(1e-12));
  CHECK(profile.subset_small == small);
  CHECK(profile.subset_large == large);
}

TEST_CASE("norm-based selection picks the largest columns and nests") {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 4);
  h(0, 0) = 1.0;
  h(0, 1) = 3.0;
  h(1, 2) = 2.0;
  h(0, 3) = 2.0;
  CHECK(quantsel::nbs_select(h, 1).indices == std::vector<int>{1});
  CHECK(quantsel::nbs_select(h, 2).indices == std::vector<int>{1, 2});
  CHECK(quantsel::nbs_select(h, 3).indices == std::vector<int>{1, 2, 3});
  const Eigen::MatrixXcd r = random_dl(2, 8, 10);
  for (int n_t = 2; n_t < 8; ++n_t) {
    const quantsel::AntennaSubset small = quantsel::nbs_select(r, n_t);
    const quantsel::AntennaSubset big = quantsel::nbs_select(r, n_t + 1);
    for (int idx : small.indices) CHECK(big.contains(idx));
  }
}

TEST_CASE("exhaustive downlink selection maximizes the sum rate") {
  const Eigen::MatrixXcd h = random_dl(2, 6, 11);
  const double total = 5.0;
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(2);
  const quantsel::SelectionOutcome outcome =
      quantsel::exhaustive_dl_select(h, 3, total, spec);
  double best = -std::numeric_limits<double>::infinity();
  quantsel::internal::for_each_combination(
      6, 3, [&](const std::vector<int>& idx) {
        const Eigen::MatrixXcd sub =
            quantsel::slice_cols(h, quantsel::AntennaSubset::of(idx));
        best = std::max(best, quantsel::dl_sum_rate(sub, total, spec).sum_rate);
      });
  CHECK(outcome.objective == doctest::Approx(best).epsilon(1e-12));
  CHECK(outcome.algorithm == "exhaustive");
  const Eigen::MatrixXcd chosen = quantsel::slice_cols(h, outcome.subset);
  CHECK(quantsel::dl_sum_rate(chosen, total, spec).sum_rate ==
        doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("exhaustive downlink selection rejects undersized problems") {
  const Eigen::MatrixXcd h = random_dl(3, 6, 12);
  CHECK_THROWS_AS(
      quantsel::exhaustive_dl_select(h, 2, 1.0, quantsel::quantizer_spec(3)),
      quantsel::Error);
  const Eigen::MatrixXcd wide = random_dl(2, 40, 13);
  CHECK_THROWS_AS(
      quantsel::exhaustive_dl_select(wide, 20, 1.0,
                                     quantsel::quantizer_spec(3)),
      quantsel::BudgetExceededError);
}

TEST_CASE("flat OFDM reduces to narrowband with split power") {
  Eigen::VectorXd gains = Eigen::VectorXd::Ones(2);
  const quantsel::ChannelSet ch = quantsel::sample_channel(6, 2, 1, gains, 14);
  const std::vector<Eigen::MatrixXcd> dl = quantsel::dl_channel(ch);
  const quantsel::AntennaSubset subset =
      quantsel::AntennaSubset::of(std::vector<int>{0, 2, 4, 5});
  const double total = 8.0;
  const int n_sc = 16;
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(3);
  const double narrow =
      quantsel::dl_power(quantsel::slice_cols(dl.front(), subset), total);
  const double ofdm = quantsel::dl_ofdm_power(dl, subset, total, n_sc);
  CHECK(ofdm == doctest::Approx(narrow / n_sc).epsilon(1e-12));
  const double sinr = spec.alpha * ofdm / (1.0 + (1.0 - spec.alpha) * ofdm);
  CHECK(quantsel::dl_ofdm_sum_rate(dl, subset, total, spec, n_sc) ==
        doctest::Approx(2.0 * std::log2(1.0 + sinr)).epsilon(1e-12));
}
