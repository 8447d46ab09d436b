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

#include "quantsel/quantization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "quantsel/errors.hpp"

namespace quantsel {
namespace {

struct BetaEntry {
  int bits;
  double beta;
};

constexpr BetaEntry kBetaTable[] = {
#include "beta_table.inc"
};

constexpr int kMaxBits = 12;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gauss_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Upper tail probability P(Z > x) for a standard normal Z.
double upper_tail(double x) {
  return 0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0);
}

// Probability mass of the cell (lo, hi); hi may be infinity.
double cell_mass(double lo, double hi) {
  return upper_tail(lo) - (std::isinf(hi) ? 0.0 : upper_tail(hi));
}

// First moment of the cell (lo, hi).
double cell_moment(double lo, double hi) {
  return gauss_pdf(lo) - (std::isinf(hi) ? 0.0 : gauss_pdf(hi));
}

double centroid(double lo, double hi) {
  return cell_moment(lo, hi) / cell_mass(lo, hi);
}

constexpr double kTailLimit = 40.0;
constexpr int kBisectionSteps = 200;

// Solves centroid(lo, u) = target for u > lo. The centroid increases from lo
// to centroid(lo, inf) as u grows; returns infinity when the target exceeds
// the tail centroid.
double solve_upper(double lo, double target) {
  if (target >= centroid(lo, std::numeric_limits<double>::infinity())) {
    return std::numeric_limits<double>::infinity();
  }
  double hi = std::max(lo, target) + 1.0;
  while (centroid(lo, hi) < target) {
    hi = lo + 2.0 * (hi - lo);
    if (hi > kTailLimit) return std::numeric_limits<double>::infinity();
  }
  double a = std::max(lo, target);
  double b = hi;
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (centroid(lo, mid) < target ? a : b) = mid;
  }
  return 0.5 * (a + b);
}

// Forward recursion over the positive half line from a trial first level.
// Each upper threshold comes from the centroid condition of the current
// cell and the next level from the midpoint condition. Returns the terminal
// residual centroid(t_half, inf) - y_half, which decreases in `first_level`;
// -infinity flags an overshoot where some cell cannot reach its centroid.
double shoot(int half, double first_level, std::vector<double>* levels,
             std::vector<double>* thresholds) {
  if (levels != nullptr) {
    levels->clear();
    thresholds->clear();
  }
  double t = 0.0;
  double y = first_level;
  for (int i = 0; i + 1 < half; ++i) {
    if (levels != nullptr) {
      levels->push_back(y);
      if (i > 0) thresholds->push_back(t);
    }
    const double t_next = solve_upper(t, y);
    if (std::isinf(t_next)) return -std::numeric_limits<double>::infinity();
    const double y_next = 2.0 * t_next - y;
    t = t_next;
    y = y_next;
  }
  if (levels != nullptr) {
    levels->push_back(y);
    if (half > 1) thresholds->push_back(t);
  }
  return centroid(t, std::numeric_limits<double>::infinity()) - y;
}

}  // namespace

double ScalarQuantizer::operator()(double x) const {
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), x);
  return levels[static_cast<std::size_t>(it - thresholds.begin())];
}

QuantizerSpec QuantizerSpec::from_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ConfigError("alpha must lie in (0, 1]");
  }
  return {0, 1.0 - alpha, alpha};
}

ScalarQuantizer lloyd_max(int bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw ConfigError("lloyd_max supports 1 to 12 bits");
  }
  const int half = 1 << (bits - 1);

  double lo = 1e-9;
  double hi = 1.6;
  if (shoot(half, lo, nullptr, nullptr) <= 0.0 ||
      shoot(half, hi, nullptr, nullptr) >= 0.0) {
    throw NumericalError("Lloyd-Max shooting bracket failed");
  }
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shoot(half, mid, nullptr, nullptr) > 0.0 ? lo : hi) = mid;
  }

  std::vector<double> pos_levels;
  std::vector<double> pos_thresholds;
  shoot(half, 0.5 * (lo + hi), &pos_levels, &pos_thresholds);

  ScalarQuantizer q;
  q.levels.reserve(static_cast<std::size_t>(2 * half));
  for (int i = half - 1; i >= 0; --i) {
    q.levels.push_back(-pos_levels[static_cast<std::size_t>(i)]);
  }
  q.levels.insert(q.levels.end(), pos_levels.begin(), pos_levels.end());
  q.thresholds.reserve(static_cast<std::size_t>(2 * half - 1));
  for (int i = half - 2; i >= 0; --i) {
    q.thresholds.push_back(-pos_thresholds[static_cast<std::size_t>(i)]);
  }
  q.thresholds.push_back(0.0);
  q.thresholds.insert(q.thresholds.end(), pos_thresholds.begin(),
                      pos_thresholds.end());

  double captured = 0.0;
  double t_prev = 0.0;
  for (int i = 0; i < half; ++i) {
    const double t_next = i + 1 < half
                              ? pos_thresholds[static_cast<std::size_t>(i)]
                              : std::numeric_limits<double>::infinity();
    const double m = cell_moment(t_prev, t_next);
    captured += m * m / cell_mass(t_prev, t_next);
    t_prev = t_next;
  }
  q.distortion = 1.0 - 2.0 * captured;
  return q;
}

double beta_approximation(int bits) {
  return std::numbers::pi * std::sqrt(3.0) / 2.0 * std::exp2(-2.0 * bits);
}

QuantizerSpec quantizer_spec(int bits) {
  if (bits < 1) {
    throw ConfigError("ADC resolution must be at least 1 bit");
  }
  if (bits == QuantizerSpec::kInfiniteBits) {
    return QuantizerSpec::infinite();
  }
  if (bits <= 5) {
    for (const BetaEntry& entry : kBetaTable) {
      if (entry.bits == bits) return {bits, entry.beta, 1.0 - entry.beta};
    }
    throw NumericalError("distortion table is missing an entry");
  }
  const double beta = beta_approximation(bits);
  return {bits, beta, 1.0 - beta};
}

void write_beta_table(std::ostream& out, std::string_view command) {
  out << "# Lloyd-Max distortion factors beta for a unit-variance Gaussian\n";
  out << "# source, one line per ADC resolution, 15 significant digits.\n";
  out << "# Generated by: " << command << "\n";
  for (int bits = 1; bits <= kMaxBits; ++bits) {
    const double beta = lloyd_max(bits).distortion;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), beta,
                                   std::chars_format::general, 15);
    out << bits << " = " << std::string_view(buf, res.ptr) << "\n";
  }
}

namespace {

Eigen::DiagonalMatrix<double, Eigen::Dynamic> quant_covariance(
    const QuantizerSpec& spec, const Eigen::VectorXd& signal_power) {
  const double scale = spec.alpha * (1.0 - spec.alpha);
  return Eigen::DiagonalMatrix<double, Eigen::Dynamic>(
      (scale * (signal_power.array() + 1.0)).matrix());
}

}  // namespace

Eigen::DiagonalMatrix<double, Eigen::Dynamic> dl_quant_covariance(
    const QuantizerSpec& spec, const Eigen::VectorXd& per_user_power) {
  return quant_covariance(spec, per_user_power);
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> ul_quant_covariance(
    const QuantizerSpec& spec, const Eigen::MatrixXcd& h_k, double rho) {
  return quant_covariance(spec, rho * h_k.rowwise().squaredNorm());
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> ul_ofdm_quant_covariance(
    const QuantizerSpec& spec, const std::vector<Eigen::MatrixXcd>& taps,
    double rho) {
  if (taps.empty()) {
    throw Error("uplink OFDM covariance needs at least one tap");
  }
  Eigen::VectorXd power = Eigen::VectorXd::Zero(taps.front().rows());
  for (const Eigen::MatrixXcd& tap : taps) {
    power += tap.rowwise().squaredNorm();
  }
  return quant_covariance(spec, rho * power);
}

}  // namespace quantsel
