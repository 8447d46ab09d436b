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
#include <iosfwd>
#include <limits>
#include <string_view>
#include <vector>

namespace quantsel {

// Scalar MMSE quantizer for a zero-mean unit-variance Gaussian source.
struct ScalarQuantizer {
  // Reconstruction points, ascending and symmetric about zero.
  std::vector<double> levels;
  // Finite decision boundaries; thresholds[i] separates levels[i] and
  // levels[i + 1].
  std::vector<double> thresholds;
  // Normalized mean squared error at the Lloyd fixed point.
  double distortion = 0.0;

  // Quantizes one sample with the nearest-level rule.
  double operator()(double x) const;
};

// ADC resolution with the AQNM distortion factor beta and gain
// alpha = 1 - beta.
struct QuantizerSpec {
  // kInfiniteBits models perfect quantization; 0 marks a synthetic spec
  // built from a bare alpha for analysis sweeps.
  int bits = kInfiniteBits;
  double beta = 0.0;
  double alpha = 1.0;

  static constexpr int kInfiniteBits = std::numeric_limits<int>::max();

  static QuantizerSpec infinite() { return {kInfiniteBits, 0.0, 1.0}; }
  // Synthetic spec with the given gain, 0 < alpha <= 1.
  static QuantizerSpec from_alpha(double alpha);
};

// Solves the Lloyd-Max fixed point for a unit-variance Gaussian source with
// 2^bits levels, 1 <= bits <= 12. Cell statistics use exact closed-form
// Gaussian moments; the symmetric fixed point is located by shooting on the
// positive half line. Throws NumericalError if a solve fails to converge
// within its iteration cap.
ScalarQuantizer lloyd_max(int bits);

// The high-rate distortion approximation (pi * sqrt(3) / 2) * 2^(-2 bits),
// valid for bits > 5.
double beta_approximation(int bits);

// Distortion factor lookup: the frozen Lloyd-Max table for bits <= 5, the
// closed-form approximation for larger finite bits, and beta = 0 for
// kInfiniteBits. Rejects bits < 1.
QuantizerSpec quantizer_spec(int bits);

// Recomputes the constants table with lloyd_max and writes it as
// "bits = beta" lines at 15 significant digits. The header records the
// command used to generate the file.
void write_beta_table(std::ostream& out, std::string_view command);

// Quantization noise covariance of the downlink AQNM model,
// alpha (1 - alpha) diag(P + I), for per-user receive powers P.
Eigen::DiagonalMatrix<double, Eigen::Dynamic> dl_quant_covariance(
    const QuantizerSpec& spec, const Eigen::VectorXd& per_user_power);

// Quantization noise covariance of the uplink AQNM model,
// alpha (1 - alpha) diag(rho H_K H_K^H + I), for the selected-row channel
// H_K (n_r x n_ms) at transmit power rho.
Eigen::DiagonalMatrix<double, Eigen::Dynamic> ul_quant_covariance(
    const QuantizerSpec& spec, const Eigen::MatrixXcd& h_k, double rho);

// Uplink OFDM variant: alpha (1 - alpha) diag(rho B_K B_K^H + I) where B_K
// stacks the tap matrices horizontally. The result is the same for every
// subcarrier.
Eigen::DiagonalMatrix<double, Eigen::Dynamic> ul_ofdm_quant_covariance(
    const QuantizerSpec& spec, const std::vector<Eigen::MatrixXcd>& taps,
    double rho);

}  // namespace quantsel
