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

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsad/error.hpp"
#include "dsad/frame.hpp"

namespace dsad {

/// Allowed deviation of a mass function's total from 1.
inline constexpr double kSumTolerance = 1e-9;
/// K at or above 1 - this value is treated as total conflict.
inline constexpr double kTotalConflictTolerance = 1e-12;
/// Masses closer than this compare as equal in decisions.
inline constexpr double kTieTolerance = 1e-9;

struct FocalElement {
  SubsetMask bits;
  double mass;

  friend bool operator==(const FocalElement&, const FocalElement&) = default;
};

/// Basic probability assignment over a frame. Stores only focal elements
/// (strictly positive mass, never the empty set), sorted by mask. Immutable.
class MassFunction {
 public:
  const Frame& frame() const noexcept { return frame_; }
  std::span<const FocalElement> focal_elements() const noexcept { return focal_; }
  std::size_t size() const noexcept { return focal_.size(); }

  double mass_of(SubsetMask bits) const noexcept {
    auto it = std::lower_bound(focal_.begin(), focal_.end(), bits,
                               [](const FocalElement& f, SubsetMask b) { return f.bits < b; });
    return (it != focal_.end() && it->bits == bits) ? it->mass : 0.0;
  }

  double mass(const HypothesisSet& a) const {
    if (!(a.frame() == frame_)) throw FrameMismatch();
    return mass_of(a.bits());
  }

  double theta_mass() const noexcept { return mass_of(frame_.full_mask()); }

  double total() const noexcept {
    double s = 0.0;
    for (const auto& f : focal_) s += f.mass;
    return s;
  }

  /// Builds from already-valid focal elements: drops zero entries, merges
  /// duplicates and sorts. No sum check; callers guarantee it.
  static MassFunction from_focal_unchecked(Frame frame, std::vector<FocalElement> focal) {
    std::sort(focal.begin(), focal.end(),
              [](const FocalElement& a, const FocalElement& b) { return a.bits < b.bits; });
    std::vector<FocalElement> merged;
    merged.reserve(focal.size());
    for (const auto& f : focal) {
      if (!merged.empty() && merged.back().bits == f.bits)
        merged.back().mass += f.mass;
      else
        merged.push_back(f);
    }
    std::erase_if(merged, [](const FocalElement& f) { return !(f.mass > 0.0); });
    return MassFunction(std::move(frame), std::move(merged));
  }

  friend bool operator==(const MassFunction& a, const MassFunction& b) {
    return a.frame_ == b.frame_ && a.focal_ == b.focal_;
  }

 private:
  MassFunction(Frame frame, std::vector<FocalElement> focal)
      : frame_(std::move(frame)), focal_(std::move(focal)) {}

  Frame frame_;
  std::vector<FocalElement> focal_;
};

struct BeliefInterval {
  double bel;
  double pl;

  double uncertainty() const noexcept { return pl - bel; }
};

/// Total ignorance: all mass on the whole frame.
inline MassFunction vacuous_mass(const Frame& frame) {
  return MassFunction::from_focal_unchecked(frame, {{frame.full_mask(), 1.0}});
}

inline MassFunction make_mass(const Frame& frame,
                              const std::vector<std::pair<HypothesisSet, double>>& entries) {
  std::vector<FocalElement> focal;
  focal.reserve(entries.size());
  double sum = 0.0;
  for (const auto& [set, value] : entries) {
    if (!(set.frame() == frame)) throw FrameMismatch();
    if (!std::isfinite(value) || value < 0.0)
      throw InvalidArgument("mass of " + set.name() + " must be a finite nonnegative value");
    if (value > 1.0 + kSumTolerance) throw InvalidArgument("mass of " + set.name() + " exceeds 1");
    for (const auto& f : focal)
      if (f.bits == set.bits()) throw InvalidArgument("subset " + set.name() + " listed twice");
    focal.push_back({set.bits(), value});
    sum += value;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw InvalidArgument("masses sum to " + std::to_string(sum) + ", expected 1");
  return MassFunction::from_focal_unchecked(frame, std::move(focal));
}

/// Convenience form taking subset text ("a", "a|b", "Θ").
inline MassFunction make_mass(const Frame& frame,
                              std::initializer_list<std::pair<std::string_view, double>> entries) {
  std::vector<std::pair<HypothesisSet, double>> parsed;
  parsed.reserve(entries.size());
  for (const auto& [name, value] : entries) parsed.emplace_back(HypothesisSet::parse(frame, name), value);
  return make_mass(frame, parsed);
}

/// Mass falling on empty intersections under Dempster's rule.
inline double conflict(const MassFunction& m1, const MassFunction& m2) {
  if (!(m1.frame() == m2.frame())) throw FrameMismatch();
  double k = 0.0;
  for (const auto& b : m1.focal_elements())
    for (const auto& c : m2.focal_elements())
      if ((b.bits & c.bits) == 0) k += b.mass * c.mass;
  return k;
}

struct Combination {
  MassFunction mass;
  double conflict;
};

/// Dempster's rule, also reporting the conflict K of this step.
inline Combination combine_detailed(const MassFunction& m1, const MassFunction& m2) {
  if (!(m1.frame() == m2.frame())) throw FrameMismatch();
  std::vector<FocalElement> acc;
  acc.reserve(m1.size() * m2.size());
  double k = 0.0;
  for (const auto& b : m1.focal_elements()) {
    for (const auto& c : m2.focal_elements()) {
      const SubsetMask meet = b.bits & c.bits;
      const double product = b.mass * c.mass;
      if (meet == 0) {
        k += product;
        continue;
      }
      auto it = std::find_if(acc.begin(), acc.end(), [meet](const FocalElement& f) { return f.bits == meet; });
      if (it == acc.end())
        acc.push_back({meet, product});
      else
        it->mass += product;
    }
  }
  if (k >= 1.0 - kTotalConflictTolerance) throw TotalConflict(k);
  const double norm = 1.0 - k;
  for (auto& f : acc) f.mass /= norm;
  return {MassFunction::from_focal_unchecked(m1.frame(), std::move(acc)), k};
}

inline MassFunction combine(const MassFunction& m1, const MassFunction& m2) {
  return combine_detailed(m1, m2).mass;
}

/// Left fold of combine over a nonempty list.
inline MassFunction combine_all(std::span<const MassFunction> masses) {
  if (masses.empty()) throw InvalidArgument("combine_all needs at least one mass function");
  MassFunction acc = masses.front();
  for (std::size_t i = 1; i < masses.size(); ++i) acc = combine(acc, masses[i]);
  return acc;
}

inline double belief_of(const MassFunction& m, SubsetMask a) noexcept {
  double bel = 0.0;
  for (const auto& f : m.focal_elements())
    if ((f.bits & ~a) == 0) bel += f.mass;
  return bel;
}

inline double plausibility_of(const MassFunction& m, SubsetMask a) noexcept {
  double pl = 0.0;
  for (const auto& f : m.focal_elements())
    if ((f.bits & a) != 0) pl += f.mass;
  return pl;
}

inline double belief(const MassFunction& m, const HypothesisSet& a) {
  if (!(a.frame() == m.frame())) throw FrameMismatch();
  return belief_of(m, a.bits());
}

inline double plausibility(const MassFunction& m, const HypothesisSet& a) {
  if (!(a.frame() == m.frame())) throw FrameMismatch();
  return plausibility_of(m, a.bits());
}

inline BeliefInterval interval(const MassFunction& m, const HypothesisSet& a) {
  return {belief(m, a), plausibility(m, a)};
}

/// Focal element of largest mass. Masses within kTieTolerance tie; ties go to
/// the smaller set, then the lower mask. Falls back to Θ when nothing is left.
inline HypothesisSet argmax_focal(const MassFunction& m, bool exclude_theta) {
  const SubsetMask theta = m.frame().full_mask();
  double best_mass = -1.0;
  for (const auto& f : m.focal_elements())
    if (!(exclude_theta && f.bits == theta)) best_mass = std::max(best_mass, f.mass);
  if (best_mass < 0.0) return HypothesisSet::theta(m.frame());

  SubsetMask best = 0;
  for (const auto& f : m.focal_elements()) {
    if (exclude_theta && f.bits == theta) continue;
    if (f.mass < best_mass - kTieTolerance) continue;
    if (best == 0 || std::popcount(f.bits) < std::popcount(best) ||
        (std::popcount(f.bits) == std::popcount(best) && f.bits < best))
      best = f.bits;
  }
  return {m.frame(), best};
}

/// Six significant digits, shortest form ("0.672131", "1", "1e-05").
inline std::string format_mass_value(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

/// Debug rendering: "{normal:0.672131, abnormal:0.311475, Θ:0.0163934}".
inline std::string to_string(const MassFunction& m) {
  std::string out = "{";
  bool first = true;
  for (const auto& f : m.focal_elements()) {
    if (!first) out += ", ";
    first = false;
    out += m.frame().name_of(f.bits);
    out += ':';
    out += format_mass_value(f.mass);
  }
  out += '}';
  return out;
}

}  // namespace dsad
