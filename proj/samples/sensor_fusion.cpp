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

// Fusing three readings into a normal/abnormal decision with sigmoid bpas
// trained from a handful of reference values.

#include <iostream>
#include <vector>

#include "dsad/dsad.hpp"

int main() {
  using namespace dsad;
  // Reference readings per sensor; 7 of 10 are known normal.
  const std::vector<std::vector<double>> reference{
      {1, 1, 2, 2, 2, 3, 3, 7, 8, 9}, {2, 2, 2, 3, 3, 3, 4, 8, 8, 9}, {1, 1, 1, 1, 2, 2, 2, 5, 6, 6}};
  std::vector<SigmoidBpa> bpas;
  for (const auto& r : reference) bpas.push_back({modified_median_threshold(r, 7, 10)});

  const std::vector<double> reading{4, 3, 6};
  std::vector<MassFunction> evidence;
  for (std::size_t s = 0; s < reading.size(); ++s) {
    evidence.push_back(sigmoid_mass(reading[s], bpas[s]));
    std::cout << "sensor " << s << " (threshold " << bpas[s].threshold << "): " << to_string(evidence.back()) << '\n';
  }
  const auto fused = combine_all(evidence);
  std::cout << "fused: " << to_string(fused) << " -> " << binary_frame().label(decide_binary(fused)) << '\n';
}
