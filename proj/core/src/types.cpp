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

#include "quantsel/types.hpp"

#include <algorithm>
#include <numeric>

#include "quantsel/errors.hpp"

namespace quantsel {

AntennaSubset AntennaSubset::of(std::vector<int> idx) {
  if (idx.empty()) throw Error("antenna subset must be non-empty");
  std::sort(idx.begin(), idx.end());
  if (idx.front() < 0) throw Error("antenna indices must be nonnegative");
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw Error("antenna subset has a duplicate index");
  }
  AntennaSubset subset;
  subset.indices = std::move(idx);
  return subset;
}

AntennaSubset AntennaSubset::full(int n) {
  if (n < 1) throw Error("antenna subset must be non-empty");
  AntennaSubset subset;
  subset.indices.resize(static_cast<std::size_t>(n));
  std::iota(subset.indices.begin(), subset.indices.end(), 0);
  return subset;
}

bool AntennaSubset::contains(int idx) const {
  return std::binary_search(indices.begin(), indices.end(), idx);
}

}  // namespace quantsel
