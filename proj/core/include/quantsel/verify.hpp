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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace quantsel {

// Outcome of one randomized analytic check.
struct VerifyCheck {
  std::string name;
  bool pass = false;
  // Random instances examined.
  int count = 0;
  // Tightest observed margin toward the failure boundary.
  double worst_margin = 0.0;
  std::string note;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

// Individual checks. Each draws `budget` random instances from substreams of
// `seed` and validates one analytic property against direct computation.

// The exhaustive-optimal downlink sum rate strictly increases in the number
// of selected antennas, for quantized and perfect ADCs alike.
VerifyCheck check_dl_monotonic(std::uint64_t seed, int budget);
// The closed-form maximizing power matches a fine grid search over the rate
// loss curve, and the curve is unimodal around it.
VerifyCheck check_rate_loss_extremum(std::uint64_t seed, int budget);
// Rate loss tends to zero at low and high power.
VerifyCheck check_rate_loss_vanishes(std::uint64_t seed, int budget);
// Uplink capacity is monotone submodular: it is a log-determinant of a sum
// of positive semidefinite per-antenna terms with set-independent penalties.
// The check enumerates all nested subset pairs on small instances and
// verifies diminishing marginal gains.
VerifyCheck check_submodularity(std::uint64_t seed, int budget);
// Greedy selection stays within the (1 - 1/e) submodular guarantee of the
// exhaustive optimum on small instances; the note reports the worst ratio.
VerifyCheck check_greedy_bound(std::uint64_t seed, int budget);
// Rank-one updates inside greedy selection match rates recomputed from
// scratch at every stage, narrowband and OFDM.
VerifyCheck check_rank_one_updates(std::uint64_t seed, int budget);
// The block-circulant time-domain matrix and its per-subcarrier
// diagonalization agree: equal inverse Gram traces and flat per-user SINRs.
VerifyCheck check_block_circulant(std::uint64_t seed, int budget);
// Rate-loss analysis rejects perfect quantization instead of dividing by
// zero.
VerifyCheck check_unbounded_guard(std::uint64_t seed, int budget);

// Runs the full battery.
VerifyReport verify_theorems(std::uint64_t seed, int budget);

// Fixed-width human-readable report.
void write_report(std::ostream& out, const VerifyReport& report);

}  // namespace quantsel
