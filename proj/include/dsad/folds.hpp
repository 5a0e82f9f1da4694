/*
 * Copyright (c) 2026, The dsad Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dsad/error.hpp"
#include "dsad/random.hpp"

namespace dsad {

/// Assignment of record indices to k cross-validation folds.
struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // record index -> fold id

  std::size_t record_count() const noexcept { return assignment.size(); }

  /// Record indices of fold `f`, ascending.
  std::vector<std::size_t> members(std::size_t f) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == f) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> out(k, 0);
    for (auto f : assignment) ++out.at(f);
    return out;
  }
};

/// Seeded Fisher-Yates permutation cut into k contiguous chunks; the first
/// n mod k chunks get one extra record.
inline FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("fold count must be at least 2");
  if (n < k) throw InvalidArgument("cannot split " + std::to_string(n) + " records into " + std::to_string(k) + " folds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  FoldPlan plan{k, seed, std::vector<std::size_t>(n, 0)};
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    for (std::size_t t = 0; t < len; ++t) plan.assignment[perm[pos++]] = f;
  }
  return plan;
}

}  // namespace dsad
