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
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "dsad/error.hpp"
#include "dsad/frame.hpp"
#include "dsad/mass_function.hpp"

namespace dsad {

// The two-hypothesis frame used by the anomaly detectors.
inline constexpr std::size_t kNormal = 0;
inline constexpr std::size_t kAbnormal = 1;
inline constexpr SubsetMask kNormalBit = 1u << kNormal;
inline constexpr SubsetMask kAbnormalBit = 1u << kAbnormal;

inline const Frame& binary_frame() {
  static const Frame frame{"normal", "abnormal"};
  return frame;
}

/// Smallest mass either hypothesis may receive from a sigmoid bpa.
inline constexpr double kSigmoidClamp = 1e-15;

struct SigmoidBpa {
  double threshold = 0.0;
};

/// Sigmoid on [floor, ceiling] for m(normal), fixed Θ mass, remainder abnormal.
struct ScaledSigmoidBpa {
  double threshold = 30.0;
  double floor = 0.3;
  double ceiling = 0.7;
  double theta_mass = 0.01;

  void validate() const {
    if (!std::isfinite(threshold)) throw InvalidArgument("scaled sigmoid threshold must be finite");
    if (!(floor >= 0.0 && floor < ceiling && ceiling <= 1.0))
      throw InvalidArgument("scaled sigmoid needs 0 <= floor < ceiling <= 1");
    if (!(theta_mass > 0.0 && theta_mass < 1.0)) throw InvalidArgument("theta mass must lie in (0, 1)");
    if (ceiling + theta_mass > 1.0 + 1e-12)
      throw InvalidArgument("ceiling + theta mass exceeds 1; abnormal mass would go negative");
  }
};

struct TableRow {
  double m_normal;
  double m_abnormal;
  double m_theta;
};

/// Mass lookup for a binary signal; rows[0] for signal 0, rows[1] for signal 1.
struct TableBpa {
  std::array<TableRow, 2> rows{};

  void validate() const {
    for (const auto& r : rows) {
      for (double v : {r.m_normal, r.m_abnormal, r.m_theta})
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("table bpa entries must lie in [0, 1]");
      if (std::abs(r.m_normal + r.m_abnormal + r.m_theta - 1.0) > kSumTolerance)
        throw InvalidArgument("table bpa row does not sum to 1");
    }
  }
};

struct ClassRange {
  double min;
  double max;
};

/// Observed [min, max] per feature and class.
struct BoundaryModel {
  std::vector<std::vector<ClassRange>> ranges;  // [feature][class]
  double confidence = 0.9;

  std::size_t feature_count() const noexcept { return ranges.size(); }
  std::size_t class_count() const noexcept { return ranges.empty() ? 0 : ranges.front().size(); }
  std::span<const ClassRange> feature(std::size_t j) const { return ranges.at(j); }
};

/// Per-class means of one feature.
struct DistanceModel {
  std::size_t feature = 0;
  std::vector<double> means;
  double confidence = 0.8;
};

/// k-th smallest value, k = round(|values| * normal_count / label_count), clamped to [1, |values|].
inline double modified_median_threshold(std::span<const double> values, std::size_t normal_count,
                                        std::size_t label_count) {
  if (values.empty()) throw InvalidArgument("threshold needs at least one value");
  if (normal_count == 0 || normal_count >= label_count)
    throw InvalidArgument("normal fraction must lie strictly between 0 and 1");
  const double p = static_cast<double>(normal_count) / static_cast<double>(label_count);
  auto k = static_cast<std::ptrdiff_t>(std::lround(static_cast<double>(values.size()) * p));
  k = std::clamp<std::ptrdiff_t>(k, 1, static_cast<std::ptrdiff_t>(values.size()));
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[static_cast<std::size_t>(k - 1)];
}

inline MassFunction sigmoid_mass(double value, const SigmoidBpa& bpa) {
  if (!std::isfinite(value)) throw InvalidArgument("sigmoid bpa needs a finite value");
  double normal = 1.0 / (1.0 + std::exp(value - bpa.threshold));
  normal = std::clamp(normal, kSigmoidClamp, 1.0 - kSigmoidClamp);
  return MassFunction::from_focal_unchecked(binary_frame(),
                                            {{kNormalBit, normal}, {kAbnormalBit, 1.0 - normal}});
}

inline MassFunction scaled_sigmoid_mass(double value, const ScaledSigmoidBpa& bpa) {
  if (!std::isfinite(value) || value < 0.0) throw InvalidArgument("interval must be a finite value >= 0");
  const double span = bpa.ceiling - bpa.floor;
  const double normal = span / (1.0 + std::exp(value - bpa.threshold)) + bpa.floor;
  const double abnormal = std::max(0.0, 1.0 - normal - bpa.theta_mass);
  return MassFunction::from_focal_unchecked(
      binary_frame(),
      {{kNormalBit, normal}, {kAbnormalBit, abnormal}, {binary_frame().full_mask(), bpa.theta_mass}});
}

inline MassFunction table_mass(int signal_value, const TableBpa& bpa) {
  if (signal_value != 0 && signal_value != 1)
    throw InvalidArgument("table bpa signal must be 0 or 1, got " + std::to_string(signal_value));
  const auto& row = bpa.rows[static_cast<std::size_t>(signal_value)];
  return MassFunction::from_focal_unchecked(
      binary_frame(),
      {{kNormalBit, row.m_normal}, {kAbnormalBit, row.m_abnormal}, {binary_frame().full_mask(), row.m_theta}});
}

/// Per feature and class, the range of training values. `rows[i][j]` is feature j of record i.
inline BoundaryModel fit_boundaries(std::span<const std::vector<double>> rows, std::span<const std::size_t> labels,
                                    std::size_t class_count, std::size_t n_features) {
  if (rows.size() != labels.size()) throw InvalidArgument("row and label counts differ");
  constexpr double inf = std::numeric_limits<double>::infinity();
  BoundaryModel model;
  model.ranges.assign(n_features, std::vector<ClassRange>(class_count, ClassRange{inf, -inf}));
  std::vector<std::size_t> seen(class_count, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto c = labels[i];
    if (c >= class_count) throw InvalidArgument("label index out of range");
    if (rows[i].size() < n_features) throw InvalidArgument("record has too few features");
    ++seen[c];
    for (std::size_t j = 0; j < n_features; ++j) {
      auto& r = model.ranges[j][c];
      r.min = std::min(r.min, rows[i][j]);
      r.max = std::max(r.max, rows[i][j]);
    }
  }
  for (std::size_t c = 0; c < class_count; ++c)
    if (seen[c] == 0) throw InvalidArgument("class " + std::to_string(c) + " absent from training data");
  return model;
}

/// Classes whose range contains `value`.
inline SubsetMask membership_set(double value, std::span<const ClassRange> ranges) noexcept {
  SubsetMask s = 0;
  for (std::size_t c = 0; c < ranges.size(); ++c)
    if (ranges[c].min <= value && value <= ranges[c].max) s |= SubsetMask{1} << c;
  return s;
}

/// Boundary-overlap bpa. All classes match: m(Θ) = 1. Some match: the matching
/// set gets `confidence`. None match: the class whose range is nearest does.
inline MassFunction boundary_mass(double value, std::span<const ClassRange> ranges, const Frame& frame,
                                  double confidence = 0.9) {
  if (ranges.size() != frame.size()) throw InvalidArgument("one range per frame label required");
  SubsetMask s = membership_set(value, ranges);
  if (s == frame.full_mask()) return vacuous_mass(frame);
  if (s == 0) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < ranges.size(); ++c) {
      const double d = value < ranges[c].min ? ranges[c].min - value : value - ranges[c].max;
      if (d < best) {
        best = d;
        nearest = c;
      }
    }
    s = SubsetMask{1} << nearest;
  }
  return MassFunction::from_focal_unchecked(frame, {{s, confidence}, {frame.full_mask(), 1.0 - confidence}});
}

inline double sample_sd(std::span<const double> v) {
  if (v.size() < 2) throw InvalidArgument("sample standard deviation needs at least two values");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Feature selection value: product of per-class sample sds over the sd of
/// the pooled values. Smaller separates the classes better.
inline double fsv(std::span<const std::vector<double>> grouped) {
  if (grouped.size() < 2) throw InvalidArgument("FSV needs at least two classes");
  double numerator = 1.0;
  std::vector<double> pooled;
  for (const auto& g : grouped) {
    numerator *= sample_sd(g);
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double denominator = sample_sd(pooled);
  if (!(denominator > 0.0)) throw DegenerateFeature("pooled standard deviation is zero");
  return numerator / denominator;
}

/// Feature with the smallest FSV over the classes in `classes`; ties go to the lowest index.
inline std::size_t select_feature(std::span<const std::vector<double>> rows, std::span<const std::size_t> labels,
                                  SubsetMask classes, std::size_t n_features) {
  if (std::popcount(classes) < 2) throw InvalidArgument("feature selection needs at least two classes");
  std::vector<std::size_t> class_ids;
  for (std::size_t c = 0; c < 32; ++c)
    if (classes >> c & 1u) class_ids.push_back(c);

  std::size_t best_feature = n_features;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n_features; ++j) {
    std::vector<std::vector<double>> grouped(class_ids.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t g = 0; g < class_ids.size(); ++g)
        if (labels[i] == class_ids[g]) grouped[g].push_back(rows[i].at(j));
    for (const auto& g : grouped)
      if (g.size() < 2) throw InvalidArgument("each class needs at least two training records");
    try {
      const double value = fsv(grouped);
      if (value < best) {
        best = value;
        best_feature = j;
      }
    } catch (const DegenerateFeature&) {
    }
  }
  if (best_feature == n_features) throw DegenerateFeature("every feature is degenerate for the chosen classes");
  return best_feature;
}

/// Class whose mean is closest to `value`; ties go to the lowest index.
inline std::size_t nearest_mean(double value, std::span<const double> means) {
  if (means.empty()) throw InvalidArgument("distance model has no class means");
  std::size_t best = 0;
  for (std::size_t c = 1; c < means.size(); ++c)
    if (std::abs(value - means[c]) < std::abs(value - means[best])) best = c;
  return best;
}

inline MassFunction distance_mass(double value, const DistanceModel& model, const Frame& frame) {
  if (model.means.size() != frame.size()) throw InvalidArgument("one mean per frame label required");
  const auto c = nearest_mean(value, model.means);
  return MassFunction::from_focal_unchecked(
      frame, {{SubsetMask{1} << c, model.confidence}, {frame.full_mask(), 1.0 - model.confidence}});
}

}  // namespace dsad
