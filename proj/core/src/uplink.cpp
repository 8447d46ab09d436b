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

#include "quantsel/uplink.hpp"

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
#include "quantsel/rng.hpp"

namespace quantsel {
namespace {

Eigen::VectorXd wideband_penalties(const std::vector<Eigen::MatrixXcd>& taps,
                                   double rho, double alpha) {
  Eigen::VectorXd power = Eigen::VectorXd::Zero(taps.front().rows());
  for (const Eigen::MatrixXcd& tap : taps) {
    power += tap.rowwise().squaredNorm();
  }
  return (1.0 + rho * (1.0 - alpha) * power.array()).matrix();
}

void validate_selection(int n_bs, int n_ms, int n_r, double rho) {
  if (n_bs < 1 || n_ms < 1) throw Error("channel dimensions must be positive");
  if (n_r < 1 || n_r > n_bs) throw Error("selection size out of range");
  if (!(rho >= 0.0)) throw Error("transmit power must be nonnegative");
}

struct GreedyRun {
  std::vector<int> order;
  std::vector<double> stage_rates;
};

// Shared greedy core over per-subcarrier frequency matrices; narrowband runs
// pass a single matrix. The per-stage criterion is c(j) / d_j narrowband and
// the summed per-subcarrier rate increment wideband; both pick the same
// antenna for one subcarrier since the increment is monotone in c / d.
GreedyRun greedy_engine(const std::vector<Eigen::MatrixXcd>& freqs,
                        const Eigen::VectorXd& penalties, double rho_alpha,
                        int n_r, const StageObserver& observer) {
  const int n_sc = static_cast<int>(freqs.size());
  const int n_bs = static_cast<int>(freqs.front().rows());
  const int n_ms = static_cast<int>(freqs.front().cols());
  const bool wideband = n_sc > 1;

  Eigen::MatrixXd gains(n_sc, n_bs);
  for (int n = 0; n < n_sc; ++n) {
    gains.row(n) = freqs[static_cast<std::size_t>(n)]
                       .rowwise()
                       .squaredNorm()
                       .transpose();
  }
  std::vector<Eigen::MatrixXcd> q(
      static_cast<std::size_t>(n_sc),
      Eigen::MatrixXcd::Identity(n_ms, n_ms));
  std::vector<char> used(static_cast<std::size_t>(n_bs), 0);

  GreedyRun run;
  double cumulative = 0.0;
  for (int stage = 0; stage < n_r; ++stage) {
    int pick = -1;
    double pick_score = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_bs; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      double score = 0.0;
      if (wideband) {
        for (int n = 0; n < n_sc; ++n) {
          score += std::log2(1.0 + rho_alpha * std::max(gains(n, j), 0.0) /
                                       penalties(j));
        }
      } else {
        score = std::max(gains(0, j), 0.0) / penalties(j);
      }
      if (score > pick_score) {
        pick_score = score;
        pick = j;
      }
    }

    double increment = 0.0;
    for (int n = 0; n < n_sc; ++n) {
      increment += std::log2(1.0 + rho_alpha * std::max(gains(n, pick), 0.0) /
                                       penalties(pick));
    }
    cumulative += increment;

    if (rho_alpha > 0.0) {
      for (int n = 0; n < n_sc; ++n) {
        const Eigen::VectorXcd f =
            freqs[static_cast<std::size_t>(n)].row(pick).adjoint();
        const double c = std::max(gains(n, pick), 0.0);
        const Eigen::VectorXcd a =
            (q[static_cast<std::size_t>(n)] * f) /
            std::sqrt(c + penalties(pick) / rho_alpha);
        q[static_cast<std::size_t>(n)] -= a * a.adjoint();
        const Eigen::VectorXcd projections =
            freqs[static_cast<std::size_t>(n)] * a;
        gains.row(n) -= projections.cwiseAbs2().transpose();
      }
    }

    used[static_cast<std::size_t>(pick)] = 1;
    run.order.push_back(pick);
    run.stage_rates.push_back(cumulative);
    if (observer) {
      GreedyState state;
      state.selected = run.order;
      state.q_matrices = q;
      state.gains = gains;
      state.penalties = penalties;
      state.stage_rates = run.stage_rates;
      observer(state);
    }
  }
  return run;
}

SelectionOutcome mcmc_engine(
    int n_bs, int n_r, const McmcConfig& cfg, const AntennaSubset& init,
    std::uint64_t seed,
    const std::function<double(const AntennaSubset&)>& rate_fn) {
  if (n_r < 1) throw Error("selection size must be positive");
  if (cfg.n_mcmc < 1) throw Error("n_mcmc must be positive");
  if (cfg.tau_stop < 0) throw Error("tau_stop must be nonnegative");
  if (!(cfg.tau_rate > 0.0)) throw Error("tau_rate must be positive");
  if (!(cfg.step_exponent > 0.5) || cfg.step_exponent > 1.0) {
    throw Error("step_exponent must lie in (0.5, 1]");
  }
  if (init.size() != n_r || init.indices.back() >= n_bs) {
    throw Error("init subset does not match the selection size");
  }

  std::mt19937_64 gen = make_engine(seed);
  std::vector<double> p(static_cast<std::size_t>(n_bs), 0.5);
  std::vector<char> cur(static_cast<std::size_t>(n_bs), 0);
  for (int idx : init.indices) cur[static_cast<std::size_t>(idx)] = 1;
  double cur_rate = rate_fn(init);

  SelectionOutcome outcome;
  outcome.subset = init;
  outcome.objective = cur_rate;
  outcome.algorithm = "qmcmc";
  outcome.trace.reserve(static_cast<std::size_t>(cfg.tau_stop) *
                        static_cast<std::size_t>(cfg.n_mcmc));

  auto log_proposal = [&](const std::vector<char>& word) {
    double logq = 0.0;
    for (int j = 0; j < n_bs; ++j) {
      const double pj = p[static_cast<std::size_t>(j)];
      logq += word[static_cast<std::size_t>(j)] ? std::log(pj)
                                                : std::log1p(-pj);
    }
    return logq;
  };

  auto add_random_unset = [&](std::vector<char>& word, int missing) {
    std::vector<int> unset;
    for (int j = 0; j < n_bs; ++j) {
      if (!word[static_cast<std::size_t>(j)]) unset.push_back(j);
    }
    for (int i = 0; i < missing; ++i) {
      const std::size_t pos =
          static_cast<std::size_t>(i) +
          uniform_below(gen, unset.size() - static_cast<std::size_t>(i));
      std::swap(unset[static_cast<std::size_t>(i)], unset[pos]);
      word[static_cast<std::size_t>(unset[static_cast<std::size_t>(i)])] = 1;
    }
  };

  std::vector<double> occupancy(static_cast<std::size_t>(n_bs));
  for (int t = 1; t <= cfg.tau_stop; ++t) {
    std::fill(occupancy.begin(), occupancy.end(), 0.0);
    for (int step = 0; step < cfg.n_mcmc; ++step) {
      std::vector<char> prop(static_cast<std::size_t>(n_bs), 0);
      double logq_diff = 0.0;
      if (cfg.uniform_proposal) {
        prop.assign(static_cast<std::size_t>(n_bs), 0);
        add_random_unset(prop, n_r);
      } else {
        for (int j = 0; j < n_bs; ++j) {
          prop[static_cast<std::size_t>(j)] =
              uniform01(gen) < p[static_cast<std::size_t>(j)] ? 1 : 0;
        }
        const int count = static_cast<int>(
            std::count(prop.begin(), prop.end(), char{1}));
        if (count > n_r) {
          std::vector<int> set_bits;
          for (int j = 0; j < n_bs; ++j) {
            if (prop[static_cast<std::size_t>(j)]) set_bits.push_back(j);
          }
          std::stable_sort(set_bits.begin(), set_bits.end(),
                           [&](int a, int b) {
                             return p[static_cast<std::size_t>(a)] >
                                    p[static_cast<std::size_t>(b)];
                           });
          for (std::size_t i = static_cast<std::size_t>(n_r);
               i < set_bits.size(); ++i) {
            prop[static_cast<std::size_t>(set_bits[i])] = 0;
          }
        } else if (count < n_r) {
          add_random_unset(prop, n_r - count);
        }
        logq_diff = log_proposal(prop) - log_proposal(cur);
      }

      std::vector<int> prop_indices;
      prop_indices.reserve(static_cast<std::size_t>(n_r));
      for (int j = 0; j < n_bs; ++j) {
        if (prop[static_cast<std::size_t>(j)]) prop_indices.push_back(j);
      }
      const AntennaSubset prop_subset =
          AntennaSubset::of(std::move(prop_indices));
      const double prop_rate = rate_fn(prop_subset);

      const double log_accept =
          (prop_rate - cur_rate) / cfg.tau_rate - logq_diff;
      if (uniform01(gen) < std::exp(log_accept)) {
        cur = prop;
        cur_rate = prop_rate;
        if (cur_rate > outcome.objective) {
          outcome.objective = cur_rate;
          outcome.subset = prop_subset;
        }
      }
      for (int j = 0; j < n_bs; ++j) {
        occupancy[static_cast<std::size_t>(j)] +=
            cur[static_cast<std::size_t>(j)];
      }
      outcome.trace.push_back(cur_rate);
    }

    const double r = std::pow(static_cast<double>(t), -cfg.step_exponent);
    for (int j = 0; j < n_bs; ++j) {
      double& pj = p[static_cast<std::size_t>(j)];
      pj += r * (occupancy[static_cast<std::size_t>(j)] / cfg.n_mcmc - pj);
      pj = std::clamp(pj, 1e-12, 1.0 - 1e-12);
    }
  }
  return outcome;
}

}  // namespace

double ul_capacity(const Eigen::MatrixXcd& h_k, double rho,
                   const QuantizerSpec& spec) {
  if (h_k.rows() == 0) return 0.0;
  if (!(rho >= 0.0)) throw Error("transmit power must be nonnegative");
  const Eigen::Index n_ms = h_k.cols();
  const Eigen::VectorXd penalties =
      (1.0 + rho * (1.0 - spec.alpha) * h_k.rowwise().squaredNorm().array())
          .matrix();
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n_ms, n_ms) +
      rho * spec.alpha *
          (h_k.adjoint() * penalties.cwiseInverse().asDiagonal() * h_k);
  return internal::logdet2_hermitian(m);
}

UlOfdmCapacity ul_ofdm_capacity(const std::vector<Eigen::MatrixXcd>& taps,
                                const AntennaSubset& subset, double rho,
                                const QuantizerSpec& spec, int n_sc) {
  if (taps.empty()) throw Error("OFDM capacity needs at least one tap");
  if (!(rho >= 0.0)) throw Error("transmit power must be nonnegative");
  std::vector<Eigen::MatrixXcd> sliced;
  sliced.reserve(taps.size());
  for (const Eigen::MatrixXcd& tap : taps) {
    sliced.push_back(slice_rows(tap, subset));
  }
  const Eigen::Index n_ms = sliced.front().cols();
  const Eigen::VectorXd penalties =
      wideband_penalties(sliced, rho, spec.alpha);
  const Eigen::DiagonalMatrix<double, Eigen::Dynamic> inv_penalties(
      penalties.cwiseInverse());

  UlOfdmCapacity result;
  result.per_subcarrier.resize(n_sc);
  for (int n = 1; n <= n_sc; ++n) {
    const Eigen::MatrixXcd g = freq_channel(sliced, n, n_sc);
    const Eigen::MatrixXcd m =
        Eigen::MatrixXcd::Identity(n_ms, n_ms) +
        rho * spec.alpha * (g.adjoint() * inv_penalties * g);
    result.per_subcarrier(n - 1) = internal::logdet2_hermitian(m);
  }
  result.sum = result.per_subcarrier.sum();
  return result;
}

SelectionOutcome qfas(const Eigen::MatrixXcd& h, double rho,
                      const QuantizerSpec& spec, int n_r,
                      const StageObserver& observer) {
  validate_selection(static_cast<int>(h.rows()), static_cast<int>(h.cols()),
                     n_r, rho);
  const std::vector<Eigen::MatrixXcd> freqs{h};
  const Eigen::VectorXd penalties = wideband_penalties(freqs, rho, spec.alpha);
  GreedyRun run =
      greedy_engine(freqs, penalties, rho * spec.alpha, n_r, observer);

  SelectionOutcome outcome;
  outcome.subset = AntennaSubset::of(std::move(run.order));
  outcome.objective = ul_capacity(slice_rows(h, outcome.subset), rho, spec);
  outcome.algorithm = "qfas";
  outcome.trace = std::move(run.stage_rates);
  return outcome;
}

SelectionOutcome fas_baseline(const Eigen::MatrixXcd& h, double rho,
                              const QuantizerSpec& spec, int n_r,
                              const StageObserver& observer) {
  validate_selection(static_cast<int>(h.rows()), static_cast<int>(h.cols()),
                     n_r, rho);
  const std::vector<Eigen::MatrixXcd> freqs{h};
  const Eigen::VectorXd penalties = Eigen::VectorXd::Ones(h.rows());
  GreedyRun run = greedy_engine(freqs, penalties, rho, n_r, observer);

  SelectionOutcome outcome;
  outcome.subset = AntennaSubset::of(std::move(run.order));
  outcome.objective = ul_capacity(slice_rows(h, outcome.subset), rho, spec);
  outcome.algorithm = "fas";
  outcome.trace = std::move(run.stage_rates);
  return outcome;
}

SelectionOutcome nbs_ul(const Eigen::MatrixXcd& h, int n_r) {
  const int n_bs = static_cast<int>(h.rows());
  if (n_r < 1 || n_r > n_bs) throw Error("selection size out of range");
  const Eigen::VectorXd norms = h.rowwise().squaredNorm();
  std::vector<int> order(static_cast<std::size_t>(n_bs));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms(a) > norms(b); });
  order.resize(static_cast<std::size_t>(n_r));

  SelectionOutcome outcome;
  outcome.subset = AntennaSubset::of(std::move(order));
  outcome.objective = std::numeric_limits<double>::quiet_NaN();
  outcome.algorithm = "nbs";
  return outcome;
}

SelectionOutcome random_select(int n_bs, int n_r, std::uint64_t seed) {
  if (n_bs < 1 || n_r < 1 || n_r > n_bs) {
    throw Error("selection size out of range");
  }
  std::mt19937_64 gen = make_engine(seed);
  std::vector<int> pool(static_cast<std::size_t>(n_bs));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < n_r; ++i) {
    const std::size_t pos =
        static_cast<std::size_t>(i) +
        uniform_below(gen, static_cast<std::uint64_t>(n_bs - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[pos]);
  }
  pool.resize(static_cast<std::size_t>(n_r));

  SelectionOutcome outcome;
  outcome.subset = AntennaSubset::of(std::move(pool));
  outcome.objective = std::numeric_limits<double>::quiet_NaN();
  outcome.algorithm = "random";
  return outcome;
}

SelectionOutcome exhaustive_ul_select(const Eigen::MatrixXcd& h, double rho,
                                      const QuantizerSpec& spec, int n_r) {
  const int n_bs = static_cast<int>(h.rows());
  validate_selection(n_bs, static_cast<int>(h.cols()), n_r, rho);
  internal::check_enumeration_budget(n_bs, n_r);

  SelectionOutcome outcome;
  outcome.objective = -std::numeric_limits<double>::infinity();
  outcome.algorithm = "exhaustive";
  internal::for_each_combination(n_bs, n_r, [&](const std::vector<int>& idx) {
    const AntennaSubset subset = AntennaSubset::of(idx);
    const double rate = ul_capacity(slice_rows(h, subset), rho, spec);
    if (rate > outcome.objective) {
      outcome.objective = rate;
      outcome.subset = subset;
    }
  });
  return outcome;
}

SelectionOutcome qmcmc_as(const Eigen::MatrixXcd& h, double rho,
                          const QuantizerSpec& spec, int n_r,
                          const McmcConfig& cfg, const AntennaSubset& init,
                          std::uint64_t seed) {
  const int n_bs = static_cast<int>(h.rows());
  validate_selection(n_bs, static_cast<int>(h.cols()), n_r, rho);
  return mcmc_engine(n_bs, n_r, cfg, init, seed,
                     [&](const AntennaSubset& subset) {
                       return ul_capacity(slice_rows(h, subset), rho, spec);
                     });
}

SelectionOutcome qfas_ofdm(const std::vector<Eigen::MatrixXcd>& taps,
                           double rho, const QuantizerSpec& spec, int n_r,
                           int n_sc, const StageObserver& observer) {
  if (taps.empty()) throw Error("OFDM selection needs at least one tap");
  validate_selection(static_cast<int>(taps.front().rows()),
                     static_cast<int>(taps.front().cols()), n_r, rho);
  std::vector<Eigen::MatrixXcd> freqs;
  freqs.reserve(static_cast<std::size_t>(n_sc));
  for (int n = 1; n <= n_sc; ++n) {
    freqs.push_back(freq_channel(taps, n, n_sc));
  }
  const Eigen::VectorXd penalties = wideband_penalties(taps, rho, spec.alpha);
  GreedyRun run =
      greedy_engine(freqs, penalties, rho * spec.alpha, n_r, observer);

  SelectionOutcome outcome;
  outcome.subset = AntennaSubset::of(std::move(run.order));
  outcome.objective =
      ul_ofdm_capacity(taps, outcome.subset, rho, spec, n_sc).sum;
  outcome.algorithm = "qfas";
  outcome.trace = std::move(run.stage_rates);
  return outcome;
}

SelectionOutcome qmcmc_ofdm(const std::vector<Eigen::MatrixXcd>& taps,
                            double rho, const QuantizerSpec& spec, int n_r,
                            int n_sc, const McmcConfig& cfg,
                            const AntennaSubset& init, std::uint64_t seed) {
  if (taps.empty()) throw Error("OFDM selection needs at least one tap");
  const int n_bs = static_cast<int>(taps.front().rows());
  validate_selection(n_bs, static_cast<int>(taps.front().cols()), n_r, rho);
  return mcmc_engine(n_bs, n_r, cfg, init, seed,
                     [&](const AntennaSubset& subset) {
                       return ul_ofdm_capacity(taps, subset, rho, spec, n_sc)
                           .sum;
                     });
}

SelectionOutcome exhaustive_ul_ofdm_select(
    const std::vector<Eigen::MatrixXcd>& taps, double rho,
    const QuantizerSpec& spec, int n_r, int n_sc) {
  if (taps.empty()) throw Error("OFDM selection needs at least one tap");
  const int n_bs = static_cast<int>(taps.front().rows());
  validate_selection(n_bs, static_cast<int>(taps.front().cols()), n_r, rho);
  internal::check_enumeration_budget(n_bs, n_r);

  SelectionOutcome outcome;
  outcome.objective = -std::numeric_limits<double>::infinity();
  outcome.algorithm = "exhaustive";
  internal::for_each_combination(n_bs, n_r, [&](const std::vector<int>& idx) {
    const AntennaSubset subset = AntennaSubset::of(idx);
    const double rate = ul_ofdm_capacity(taps, subset, rho, spec, n_sc).sum;
    if (rate > outcome.objective) {
      outcome.objective = rate;
      outcome.subset = subset;
    }
  });
  return outcome;
}

}  // namespace quantsel
