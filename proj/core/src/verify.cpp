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

#include "quantsel/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "linalg.hpp"
#include "quantsel/channel.hpp"
#include "quantsel/downlink.hpp"
#include "quantsel/errors.hpp"
#include "quantsel/quantization.hpp"
#include "quantsel/rng.hpp"
#include "quantsel/uplink.hpp"

namespace quantsel {
namespace {

constexpr std::uint64_t kMonotonicTag = 1;
constexpr std::uint64_t kExtremumTag = 2;
constexpr std::uint64_t kVanishTag = 3;
constexpr std::uint64_t kSubmodularTag = 4;
constexpr std::uint64_t kGreedyTag = 5;
constexpr std::uint64_t kRankOneTag = 6;
constexpr std::uint64_t kCirculantTag = 7;
constexpr std::uint64_t kUnboundedTag = 8;

ChannelSet unit_channel(int n_bs, int n_ms, int n_taps, std::uint64_t seed) {
  return sample_channel(n_bs, n_ms, n_taps, Eigen::VectorXd::Ones(n_ms), seed);
}

std::string format_margin(double value) {
  std::ostringstream out;
  out.precision(3);
  out << value;
  return out.str();
}

AntennaSubset subset_from_mask(unsigned mask) {
  std::vector<int> idx;
  for (int j = 0; mask != 0; ++j, mask >>= 1) {
    if (mask & 1u) idx.push_back(j);
  }
  return AntennaSubset::of(std::move(idx));
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.pass; });
}

VerifyCheck check_dl_monotonic(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "dl_optimal_rate_monotonic_in_nt";
  check.count = budget;
  constexpr int kNbs = 8;
  constexpr int kNms = 2;
  constexpr double kPower = 10.0;
  const double alphas[] = {0.7, 0.9655, 1.0};

  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < budget; ++i) {
    const ChannelSet chan =
        unit_channel(kNbs, kNms, 1, derive_seed(seed, kMonotonicTag, i));
    const Eigen::MatrixXcd h_dl = chan.taps.front().transpose();
    for (double alpha : alphas) {
      const QuantizerSpec spec = QuantizerSpec::from_alpha(alpha);
      double prev = -std::numeric_limits<double>::infinity();
      for (int n_t = kNms; n_t <= kNbs; ++n_t) {
        const double rate =
            exhaustive_dl_select(h_dl, n_t, kPower, spec).objective;
        if (n_t > kNms) worst = std::min(worst, rate - prev);
        prev = rate;
      }
    }
  }
  check.worst_margin = worst;
  check.pass = worst > 0.0;
  check.note = "min rate increase " + format_margin(worst) + " bps/Hz";
  return check;
}

VerifyCheck check_rate_loss_extremum(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "rate_loss_extremum_closed_form";
  check.count = budget;
  constexpr int kNbs = 8;
  constexpr int kNms = 2;
  constexpr int kGrid = 200;
  constexpr double kMaxRelativeError = 0.01;
  constexpr double kLossTolerance = 1e-6;

  double worst_loss_gap = 0.0;
  double worst_argmax_error = 0.0;
  bool interior = true;
  bool unimodal = true;
  for (int i = 0; i < budget; ++i) {
    std::mt19937_64 gen = make_engine(derive_seed(seed, kExtremumTag, i, 1));
    const ChannelSet chan =
        unit_channel(kNbs, kNms, 1, derive_seed(seed, kExtremumTag, i));
    const Eigen::MatrixXcd h_dl = chan.taps.front().transpose();
    const int n_large = kNms + 2 +
                        static_cast<int>(uniform_below(
                            gen, static_cast<std::uint64_t>(kNbs - kNms - 1)));
    const int n_small =
        kNms + static_cast<int>(uniform_below(
                   gen, static_cast<std::uint64_t>(n_large - kNms)));
    std::vector<int> order(kNbs);
    std::iota(order.begin(), order.end(), 0);
    for (int k = 0; k < n_large; ++k) {
      const std::size_t pos =
          static_cast<std::size_t>(k) +
          uniform_below(gen, static_cast<std::uint64_t>(kNbs - k));
      std::swap(order[static_cast<std::size_t>(k)], order[pos]);
    }
    const AntennaSubset large = AntennaSubset::of(
        std::vector<int>(order.begin(), order.begin() + n_large));
    const AntennaSubset small = AntennaSubset::of(
        std::vector<int>(order.begin(), order.begin() + n_small));
    const Eigen::MatrixXcd h_large = slice_cols(h_dl, large);
    const Eigen::MatrixXcd h_small = slice_cols(h_dl, small);
    const double alpha = 0.5 + 0.49 * uniform01(gen);
    const QuantizerSpec spec = QuantizerSpec::from_alpha(alpha);

    const double p_star = p_d_max(h_small, h_large, spec);
    int best_k = -1;
    double best_loss = -std::numeric_limits<double>::infinity();
    int direction_changes = 0;
    double prev_loss = 0.0;
    for (int k = 0; k < kGrid; ++k) {
      const double p = 0.5 * p_star *
                       std::pow(4.0, static_cast<double>(k) / (kGrid - 1));
      const double loss = dl_rate_loss(h_small, h_large, p, spec);
      if (loss > best_loss) {
        best_loss = loss;
        best_k = k;
      }
      if (k > 0 && loss < prev_loss && direction_changes == 0) {
        direction_changes = 1;
      } else if (k > 0 && loss > prev_loss && direction_changes == 1) {
        unimodal = false;
      }
      prev_loss = loss;
    }
    if (best_k == 0 || best_k == kGrid - 1) interior = false;
    const double p_best = 0.5 * p_star *
                          std::pow(4.0, static_cast<double>(best_k) /
                                            (kGrid - 1));
    worst_argmax_error =
        std::max(worst_argmax_error, std::abs(p_best - p_star) / p_star);
    const double closed = max_rate_loss(h_small, h_large, spec);
    const double at_star = dl_rate_loss(h_small, h_large, p_star, spec);
    worst_loss_gap = std::max(worst_loss_gap, std::abs(at_star - closed));
  }
  check.worst_margin = worst_loss_gap;
  check.pass = interior && unimodal &&
               worst_argmax_error <= kMaxRelativeError &&
               worst_loss_gap <= kLossTolerance;
  check.note = "max |loss - closed form| " + format_margin(worst_loss_gap) +
               ", max maximizer error " + format_margin(worst_argmax_error);
  return check;
}

VerifyCheck check_rate_loss_vanishes(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "rate_loss_vanishes_at_power_extremes";
  check.count = budget;
  constexpr int kNbs = 8;
  constexpr int kNms = 2;
  constexpr double kAlpha = 0.9655;
  constexpr double kHighPower = 1e12;
  constexpr double kLowPower = 1e-9;
  constexpr double kTolerance = 1e-3;
  const QuantizerSpec spec = QuantizerSpec::from_alpha(kAlpha);
  const double limit =
      kNms * std::log2(1.0 + spec.alpha / (1.0 - spec.alpha));

  double worst = 0.0;
  for (int i = 0; i < budget; ++i) {
    const ChannelSet chan =
        unit_channel(kNbs, kNms, 1, derive_seed(seed, kVanishTag, i));
    const Eigen::MatrixXcd h_dl = chan.taps.front().transpose();
    const AntennaSubset large = AntennaSubset::full(kNbs);
    const AntennaSubset small =
        AntennaSubset::of(std::vector<int>{0, 1, 2, 3});
    const Eigen::MatrixXcd h_large = slice_cols(h_dl, large);
    const Eigen::MatrixXcd h_small = slice_cols(h_dl, small);
    worst = std::max(
        worst, std::abs(dl_rate_loss(h_small, h_large, kHighPower, spec)));
    worst = std::max(
        worst, std::abs(dl_rate_loss(h_small, h_large, kLowPower, spec)));
    worst = std::max(worst,
                     std::abs(dl_sum_rate(h_large, kHighPower, spec).sum_rate -
                              limit));
  }
  check.worst_margin = worst;
  check.pass = worst < kTolerance;
  check.note = "max deviation " + format_margin(worst) + " bps/Hz";
  return check;
}

VerifyCheck check_submodularity(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "ul_capacity_submodular";
  check.count = budget;
  constexpr int kNbs = 8;
  constexpr int kNms = 2;
  constexpr double kTolerance = 1e-9;

  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < budget; ++i) {
    std::mt19937_64 gen = make_engine(derive_seed(seed, kSubmodularTag, i, 1));
    const ChannelSet chan =
        unit_channel(kNbs, kNms, 1, derive_seed(seed, kSubmodularTag, i));
    const Eigen::MatrixXcd& h = chan.taps.front();
    const double rho = 0.1 * std::pow(10.0, 3.0 * uniform01(gen));
    const QuantizerSpec spec = quantizer_spec(1 + i % 5);

    std::vector<double> f(1u << kNbs, 0.0);
    for (unsigned mask = 1; mask < (1u << kNbs); ++mask) {
      f[mask] =
          ul_capacity(slice_rows(h, subset_from_mask(mask)), rho, spec);
    }
    for (unsigned t = 0; t < (1u << kNbs); ++t) {
      for (int j = 0; j < kNbs; ++j) {
        const unsigned bit = 1u << j;
        if (t & bit) continue;
        const double gain_t = f[t | bit] - f[t];
        unsigned s = t;
        while (s != 0) {
          s = (s - 1) & t;
          const double gain_s = f[s | bit] - f[s];
          worst = std::min(worst, gain_s - gain_t);
        }
      }
    }
  }
  check.worst_margin = worst;
  check.pass = worst >= -kTolerance;
  check.note = "min marginal-gain slack " + format_margin(worst);
  return check;
}

VerifyCheck check_greedy_bound(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "greedy_within_submodular_bound";
  check.count = budget;
  constexpr int kNbs = 8;
  constexpr int kNms = 2;
  constexpr int kNr = 4;
  const double bound = 1.0 - 1.0 / std::numbers::e;

  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < budget; ++i) {
    std::mt19937_64 gen = make_engine(derive_seed(seed, kGreedyTag, i, 1));
    const ChannelSet chan =
        unit_channel(kNbs, kNms, 1, derive_seed(seed, kGreedyTag, i));
    const Eigen::MatrixXcd& h = chan.taps.front();
    const double rho = 0.1 * std::pow(10.0, 3.0 * uniform01(gen));
    const QuantizerSpec spec = quantizer_spec(1 + i % 5);
    const double greedy = qfas(h, rho, spec, kNr).objective;
    const double optimal = exhaustive_ul_select(h, rho, spec, kNr).objective;
    worst_ratio = std::min(worst_ratio, greedy / optimal);
  }
  check.worst_margin = worst_ratio;
  check.pass = worst_ratio >= bound - 1e-12;
  check.note = "worst greedy/optimal ratio " + format_margin(worst_ratio);
  return check;
}

VerifyCheck check_rank_one_updates(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "greedy_rank_one_updates_exact";
  check.count = budget;
  constexpr int kNbs = 8;
  constexpr int kNms = 3;
  constexpr int kNr = 5;
  constexpr int kNsc = 8;
  constexpr int kTaps = 4;
  constexpr double kTolerance = 1e-8;

  double worst = 0.0;
  const int narrowband_runs = budget - budget / 2;
  for (int i = 0; i < budget; ++i) {
    const bool ofdm = i >= narrowband_runs;
    std::mt19937_64 gen = make_engine(derive_seed(seed, kRankOneTag, i, 1));
    const double rho = 0.5 * std::pow(10.0, 2.0 * uniform01(gen));
    const QuantizerSpec spec = quantizer_spec(1 + i % 5);
    const ChannelSet chan = unit_channel(kNbs, kNms, ofdm ? kTaps : 1,
                                         derive_seed(seed, kRankOneTag, i));
    const int n_sc = ofdm ? kNsc : 1;

    std::vector<Eigen::MatrixXcd> freqs;
    for (int n = 1; n <= n_sc; ++n) {
      freqs.push_back(freq_channel(chan.taps, n, n_sc));
    }
    Eigen::VectorXd power = Eigen::VectorXd::Zero(kNbs);
    for (const Eigen::MatrixXcd& tap : chan.taps) {
      power += tap.rowwise().squaredNorm();
    }
    const Eigen::VectorXd penalties =
        (1.0 + rho * (1.0 - spec.alpha) * power.array()).matrix();

    const StageObserver observer = [&](const GreedyState& state) {
      const AntennaSubset prefix = AntennaSubset::of(state.selected);
      for (int n = 0; n < n_sc; ++n) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(kNms, kNms);
        for (int j : state.selected) {
          const Eigen::VectorXcd fj =
              freqs[static_cast<std::size_t>(n)].row(j).adjoint();
          m += (rho * spec.alpha / penalties(j)) * (fj * fj.adjoint());
        }
        const Eigen::MatrixXcd direct = m.inverse();
        worst = std::max(
            worst,
            (direct - state.q_matrices[static_cast<std::size_t>(n)])
                .cwiseAbs()
                .maxCoeff());
        for (int j = 0; j < kNbs; ++j) {
          if (prefix.contains(j)) continue;
          const Eigen::VectorXcd fj =
              freqs[static_cast<std::size_t>(n)].row(j).adjoint();
          const double c_direct = (fj.adjoint() * direct * fj).real()(0, 0);
          worst = std::max(worst, std::abs(c_direct - state.gains(n, j)));
        }
      }
      const double rate_direct =
          ofdm ? ul_ofdm_capacity(chan.taps, prefix, rho, spec, n_sc).sum
               : ul_capacity(slice_rows(chan.taps.front(), prefix), rho, spec);
      worst =
          std::max(worst, std::abs(rate_direct - state.stage_rates.back()));
    };

    if (ofdm) {
      qfas_ofdm(chan.taps, rho, spec, kNr, n_sc, observer);
    } else {
      qfas(chan.taps.front(), rho, spec, kNr, observer);
    }
  }
  check.worst_margin = worst;
  check.pass = worst <= kTolerance;
  check.note = "max deviation " + format_margin(worst);
  return check;
}

VerifyCheck check_block_circulant(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "block_circulant_diagonalization";
  check.count = budget;
  constexpr int kNbs = 5;
  constexpr int kNms = 2;
  constexpr int kNsc = 6;
  constexpr int kTaps = 3;
  constexpr double kTraceTolerance = 1e-9;
  constexpr double kSinrTolerance = 1e-12;
  constexpr double kPower = 5.0;

  double worst_trace = 0.0;
  double worst_sinr = 0.0;
  for (int i = 0; i < budget; ++i) {
    std::mt19937_64 gen = make_engine(derive_seed(seed, kCirculantTag, i, 1));
    const ChannelSet chan =
        unit_channel(kNbs, kNms, kTaps, derive_seed(seed, kCirculantTag, i));
    const std::vector<Eigen::MatrixXcd> dl_taps = dl_channel(chan);
    const double alpha = 0.6 + 0.39 * uniform01(gen);
    const QuantizerSpec spec = QuantizerSpec::from_alpha(alpha);

    Eigen::MatrixXcd und =
        Eigen::MatrixXcd::Zero(kNsc * kNms, kNsc * kNbs);
    for (int r = 0; r < kNsc; ++r) {
      for (int c = 0; c < kNsc; ++c) {
        const int l = ((r - c) % kNsc + kNsc) % kNsc;
        if (l < kTaps) {
          und.block(r * kNms, c * kNbs, kNms, kNbs) =
              dl_taps[static_cast<std::size_t>(l)];
        }
      }
    }
    const double direct_trace =
        internal::checked_inverse_trace(und * und.adjoint());
    double freq_trace = 0.0;
    for (int n = 1; n <= kNsc; ++n) {
      const Eigen::MatrixXcd g = freq_channel(dl_taps, n, kNsc);
      freq_trace += internal::checked_inverse_trace(g * g.adjoint());
    }
    worst_trace = std::max(
        worst_trace, std::abs(direct_trace - freq_trace) /
                         std::max(1.0, std::abs(direct_trace)));

    const AntennaSubset full = AntennaSubset::full(kNbs);
    const double p_t = dl_ofdm_power(dl_taps, full, kPower, kNsc);
    const double closed =
        spec.alpha * p_t / (1.0 + (1.0 - spec.alpha) * p_t);
    for (int n = 1; n <= kNsc; ++n) {
      const Eigen::MatrixXcd g = freq_channel(dl_taps, n, kNsc);
      const Eigen::MatrixXcd effective = g * zf_precoder(g);
      for (int u = 0; u < kNms; ++u) {
        const double row_power = effective.row(u).squaredNorm();
        const double direct = effective(u, u).real();
        const double signal =
            spec.alpha * spec.alpha * p_t * direct * direct;
        const double interference =
            spec.alpha * spec.alpha * p_t *
            (row_power - std::norm(effective(u, u)));
        const double quant = spec.alpha * (1.0 - spec.alpha) *
                             (p_t * row_power + 1.0);
        const double noise = spec.alpha * spec.alpha;
        const double sinr = signal / (noise + interference + quant);
        worst_sinr =
            std::max(worst_sinr, std::abs(sinr - closed) / closed);
      }
    }
  }
  check.worst_margin = std::max(worst_trace, worst_sinr);
  check.pass = worst_trace <= kTraceTolerance && worst_sinr <= kSinrTolerance;
  check.note = "trace gap " + format_margin(worst_trace) + ", SINR gap " +
               format_margin(worst_sinr);
  return check;
}

VerifyCheck check_unbounded_guard(std::uint64_t seed, int budget) {
  VerifyCheck check;
  check.name = "perfect_adc_rejects_extremum";
  check.count = budget;

  bool pass = true;
  for (int i = 0; i < budget; ++i) {
    const ChannelSet chan =
        unit_channel(6, 2, 1, derive_seed(seed, kUnboundedTag, i));
    const Eigen::MatrixXcd h_dl = chan.taps.front().transpose();
    const Eigen::MatrixXcd h_large =
        slice_cols(h_dl, AntennaSubset::of(std::vector<int>{0, 1, 2, 3, 4}));
    const Eigen::MatrixXcd h_small =
        slice_cols(h_dl, AntennaSubset::of(std::vector<int>{0, 1, 2}));
    bool threw = false;
    try {
      p_d_max(h_small, h_large, QuantizerSpec::from_alpha(1.0));
    } catch (const UnboundedError&) {
      threw = true;
    }
    bool quantized_ok = true;
    try {
      p_d_max(h_small, h_large, QuantizerSpec::from_alpha(0.9));
    } catch (const Error&) {
      quantized_ok = false;
    }
    pass = pass && threw && quantized_ok;
  }
  check.pass = pass;
  check.worst_margin = pass ? 1.0 : 0.0;
  check.note = pass ? "UnboundedError raised for alpha = 1 on every instance"
                    : "missing UnboundedError for alpha = 1";
  return check;
}

VerifyReport verify_theorems(std::uint64_t seed, int budget) {
  VerifyReport report;
  report.checks.push_back(check_dl_monotonic(seed, budget));
  report.checks.push_back(check_rate_loss_extremum(seed, budget));
  report.checks.push_back(check_rate_loss_vanishes(seed, budget));
  report.checks.push_back(check_submodularity(seed, budget));
  report.checks.push_back(check_greedy_bound(seed, budget));
  report.checks.push_back(check_rank_one_updates(seed, budget));
  report.checks.push_back(check_block_circulant(seed, budget));
  report.checks.push_back(check_unbounded_guard(seed, budget));
  return report;
}

void write_report(std::ostream& out, const VerifyReport& report) {
  for (const VerifyCheck& check : report.checks) {
    out << (check.pass ? "PASS" : "FAIL") << "  " << check.name
        << "  instances=" << check.count
        << "  margin=" << format_margin(check.worst_margin) << "  "
        << check.note << "\n";
  }
  out << (report.all_pass() ? "all checks passed" : "some checks FAILED")
      << "\n";
}

}  // namespace quantsel
