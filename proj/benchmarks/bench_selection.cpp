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

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "quantsel/channel.hpp"
#include "quantsel/experiment.hpp"
#include "quantsel/quantization.hpp"
#include "quantsel/uplink.hpp"

namespace {

quantsel::ChannelSet unit_channel(int n_bs, int n_ms, int n_taps,
                                  std::uint64_t seed) {
  return quantsel::sample_channel(n_bs, n_ms, n_taps,
                                  Eigen::VectorXd::Ones(n_ms), seed);
}

void BM_LloydMax(benchmark::State& state) {
  const int bits = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantsel::lloyd_max(bits).distortion);
  }
}
BENCHMARK(BM_LloydMax)->Arg(3)->Arg(8)->Arg(12);

void BM_UlCapacity(benchmark::State& state) {
  const int n_r = static_cast<int>(state.range(0));
  const quantsel::ChannelSet chan = unit_channel(128, 8, 1, 1);
  const quantsel::AntennaSubset subset = quantsel::AntennaSubset::full(n_r);
  const Eigen::MatrixXcd h =
      quantsel::slice_rows(chan.taps.front(), subset);
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantsel::ul_capacity(h, 0.1, spec));
  }
}
BENCHMARK(BM_UlCapacity)->Arg(8)->Arg(16)->Arg(32);

void BM_Qfas(benchmark::State& state) {
  const int n_bs = static_cast<int>(state.range(0));
  const quantsel::ChannelSet chan = unit_channel(n_bs, 8, 1, 2);
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quantsel::qfas(chan.taps.front(), 0.1, spec, 8).objective);
  }
}
BENCHMARK(BM_Qfas)->Arg(32)->Arg(64)->Arg(128);

void BM_QfasOfdm(benchmark::State& state) {
  const int n_sc = static_cast<int>(state.range(0));
  const quantsel::ChannelSet chan = unit_channel(64, 8, 4, 3);
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quantsel::qfas_ofdm(chan.taps, 0.1, spec, 16, n_sc).objective);
  }
}
BENCHMARK(BM_QfasOfdm)->Arg(16)->Arg(64);

void BM_QmcmcAs(benchmark::State& state) {
  const quantsel::ChannelSet chan = unit_channel(32, 8, 1, 4);
  const quantsel::QuantizerSpec spec = quantsel::quantizer_spec(3);
  const quantsel::AntennaSubset init =
      quantsel::qfas(chan.taps.front(), 0.1, spec, 8).subset;
  const quantsel::McmcConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        quantsel::qmcmc_as(chan.taps.front(), 0.1, spec, 8, cfg, init, 5)
            .objective);
  }
}
BENCHMARK(BM_QmcmcAs);

void BM_SmallExperiment(benchmark::State& state) {
  quantsel::ExperimentConfig cfg;
  cfg.scenario = quantsel::Scenario::kUlRateVsPower;
  cfg.n_bs = 16;
  cfg.n_ms = 4;
  cfg.n_select = 6;
  cfg.bits = 3;
  cfg.trials = 20;
  cfg.seed = 7;
  cfg.power_grid = {0.0, 10.0, 20.0};
  cfg.algorithms = {"qfas", "fas", "nbs", "random"};
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantsel::run_experiment(cfg).rows.size());
  }
}
BENCHMARK(BM_SmallExperiment);

}  // namespace

BENCHMARK_MAIN();
