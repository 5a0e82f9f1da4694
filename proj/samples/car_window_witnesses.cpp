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

// Two witnesses who almost entirely disagree. Dempster's rule renormalizes the
// small shared mass into certainty, which is why the detectors in this library
// always keep some mass on the whole frame.

#include <iostream>

#include "dsad/dsad.hpp"

int main() {
  using namespace dsad;
  const Frame suspects{"Jon", "Mary", "Mike"};
  const auto witness1 = make_mass(suspects, {{"Jon", 0.9}, {"Mary", 0.1}});
  const auto witness2 = make_mass(suspects, {{"Mike", 0.9}, {"Mary", 0.1}});

  const auto [fused, k] = combine_detailed(witness1, witness2);
  std::cout << "conflict K = " << k << "\ncombined   = " << to_string(fused) << "\n\n";

  // Same testimony with 5% left uncommitted.
  const auto hedged1 = make_mass(suspects, {{"Jon", 0.85}, {"Mary", 0.1}, {"Θ", 0.05}});
  const auto hedged2 = make_mass(suspects, {{"Mike", 0.85}, {"Mary", 0.1}, {"Θ", 0.05}});
  const auto [hedged, k2] = combine_detailed(hedged1, hedged2);
  std::cout << "with ignorance: K = " << k2 << "\ncombined   = " << to_string(hedged) << '\n';
  for (std::size_t i = 0; i < suspects.size(); ++i) {
    const auto iv = interval(hedged, HypothesisSet::singleton(suspects, i));
    std::cout << "  " << suspects.label(i) << ": [" << iv.bel << ", " << iv.pl << "]\n";
  }
}
