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

#include <string>
#include <vector>

namespace quantsel {

// A set of antenna indices stored in ascending order. Selection algorithms
// that care about ordering record their pick sequence separately.
struct AntennaSubset {
  std::vector<int> indices;

  // Sorts and validates: non-empty, nonnegative, no duplicates.
  static AntennaSubset of(std::vector<int> idx);
  // The full index set {0, ..., n - 1}.
  static AntennaSubset full(int n);

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int idx) const;

  bool operator==(const AntennaSubset&) const = default;
};

// Result of one selection algorithm on one channel instance.
struct SelectionOutcome {
  AntennaSubset subset;
  // Achieved objective in bps/Hz. Algorithms that do not see enough context
  // to evaluate a rate (norm-based and random selection) leave it NaN; the
  // caller evaluates the subset instead.
  double objective = 0.0;
  std::string algorithm;
  // Per-stage (greedy) or per-iteration (MCMC) objective values.
  std::vector<double> trace;
};

}  // namespace quantsel
