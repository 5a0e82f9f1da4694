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
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsad/bpa.hpp"
#include "dsad/dataset.hpp"
#include "dsad/error.hpp"
#include "dsad/frame.hpp"
#include "dsad/mass_function.hpp"

namespace dsad {

struct Prediction {
  int id = 0;
  std::size_t label = 0;
  std::string label_name;
  MassFunction masses;
  std::string trace;
};

/// m(abnormal) - m(normal) on the binary frame.
inline double abnormal_margin(const MassFunction& m) { return m.mass_of(kAbnormalBit) - m.mass_of(kNormalBit); }

/// Abnormal only when its mass beats normal by more than the tie tolerance.
inline std::size_t decide_binary(const MassFunction& m) {
  return abnormal_margin(m) > kTieTolerance ? kAbnormal : kNormal;
}

inline std::string feature_letter(std::size_t j) { return std::string(1, static_cast<char>('A' + j)); }

// ---------------------------------------------------------------------------
// Binary threshold fusion

struct BinaryModel {
  std::vector<SigmoidBpa> thresholds;  // one per feature
  std::size_t feature_count = 0;
  double normal_fraction = 0.0;
};

inline BinaryModel train_binary(std::span<const Record> records) {
  if (records.empty()) throw InvalidArgument("binary training set is empty");
  const std::size_t n_features = records.front().features.size();
  std::size_t normals = 0;
  for (const auto& r : records) {
    if (r.features.size() != n_features) throw InvalidArgument("training records differ in arity");
    if (r.label > kAbnormal) throw InvalidArgument("binary training labels must be normal or abnormal");
    if (r.label == kNormal) ++normals;
  }
  if (normals == 0 || normals == records.size())
    throw InvalidArgument("binary training needs both normal and abnormal records");

  BinaryModel model;
  model.feature_count = n_features;
  model.normal_fraction = static_cast<double>(normals) / static_cast<double>(records.size());
  std::vector<double> column;
  for (std::size_t j = 0; j < n_features; ++j) {
    column.clear();
    for (const auto& r : records)
      if (r.features[j]) column.push_back(*r.features[j]);
    if (column.empty()) throw InvalidArgument("feature " + feature_letter(j) + " is missing in every training record");
    model.thresholds.push_back({modified_median_threshold(column, normals, records.size())});
  }
  return model;
}

/// Sigmoid masses of the present selected features, or nullopt when all are missing.
inline std::optional<MassFunction> fuse_binary(const Record& record, const BinaryModel& model,
                                               std::span<const std::size_t> features) {
  std::vector<MassFunction> masses;
  for (auto j : features) {
    if (j >= model.feature_count || j >= record.features.size())
      throw InvalidArgument("feature index " + std::to_string(j) + " out of range");
    if (record.features[j]) masses.push_back(sigmoid_mass(*record.features[j], model.thresholds[j]));
  }
  if (masses.empty()) return std::nullopt;
  return combine_all(masses);
}

inline Prediction classify_binary(const Record& record, const BinaryModel& model,
                                  std::span<const std::size_t> features) {
  if (features.empty()) throw InvalidArgument("no features selected");
  auto fused = fuse_binary(record, model, features);
  if (!fused)
    throw UnclassifiableRecord("record " + std::to_string(record.id) + " is missing every selected feature");
  std::string trace = "fused=";
  std::string skipped;
  for (auto j : features) {
    auto& dst = record.features[j] ? trace : skipped;
    if (!dst.empty() && dst.back() != '=') dst += ',';
    dst += feature_letter(j);
  }
  if (!skipped.empty()) trace += " missing=" + skipped;
  const auto label = decide_binary(*fused);
  return {record.id, label, binary_frame().label(label), std::move(*fused), std::move(trace)};
}

// ---------------------------------------------------------------------------
// Three-step multi-class (boundary overlap, then nearest mean)

inline const Frame& iris_frame() {
  static const Frame frame{"Setosa", "Versicolour", "Virginica"};
  return frame;
}

struct IrisModel {
  BoundaryModel boundaries;
  std::vector<std::vector<double>> means;              // [feature][class]
  std::map<SubsetMask, std::size_t> selected_features;  // class group (>= 2 classes) -> feature
  double distance_confidence = 0.8;
};

inline IrisModel train_iris(std::span<const Record> records, std::size_t class_count = 3) {
  if (records.empty()) throw InvalidArgument("iris training set is empty");
  const std::size_t n_features = records.front().features.size();
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  for (const auto& r : records) {
    std::vector<double> row;
    for (const auto& f : r.features) {
      if (!f) throw InvalidArgument("iris records may not have missing features");
      row.push_back(*f);
    }
    if (row.size() != n_features) throw InvalidArgument("training records differ in arity");
    rows.push_back(std::move(row));
    labels.push_back(r.label);
  }

  IrisModel model;
  model.boundaries = fit_boundaries(rows, labels, class_count, n_features);
  model.means.assign(n_features, std::vector<double>(class_count, 0.0));
  std::vector<std::size_t> counts(class_count, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ++counts[labels[i]];
    for (std::size_t j = 0; j < n_features; ++j) model.means[j][labels[i]] += rows[i][j];
  }
  for (auto& per_class : model.means)
    for (std::size_t c = 0; c < class_count; ++c) per_class[c] /= static_cast<double>(counts[c]);

  const SubsetMask full = (SubsetMask{1} << class_count) - 1;
  for (SubsetMask g = 1; g <= full; ++g)
    if (std::popcount(g) >= 2) model.selected_features[g] = select_feature(rows, labels, g, n_features);
  return model;
}

struct IrisDecision {
  Prediction prediction;
  MassFunction step1;
  SubsetMask step1_candidate = 0;
  int decided_at = 1;  // 1 or 3
  std::optional<std::size_t> step2_feature;
};

inline IrisDecision classify_iris_detailed(const Record& record, const IrisModel& model) {
  const Frame& frame = iris_frame();
  const auto n_features = model.boundaries.feature_count();
  if (record.features.size() != n_features) throw InvalidArgument("record arity does not match the model");
  std::vector<double> values;
  for (const auto& f : record.features) {
    if (!f || !std::isfinite(*f)) throw InvalidArgument("iris records need four finite values");
    values.push_back(*f);
  }

  std::vector<MassFunction> evidence;
  for (std::size_t j = 0; j < n_features; ++j)
    evidence.push_back(boundary_mass(values[j], model.boundaries.feature(j), frame, model.boundaries.confidence));
  MassFunction step1 = combine_all(evidence);
  const HypothesisSet candidate = argmax_focal(step1, /*exclude_theta=*/true);

  if (candidate.is_singleton()) {
    const auto label = static_cast<std::size_t>(std::countr_zero(candidate.bits()));
    Prediction p{record.id, label, frame.label(label), step1, "step1 candidate=" + candidate.name()};
    return {std::move(p), std::move(step1), candidate.bits(), 1, std::nullopt};
  }

  const auto feature = model.selected_features.at(candidate.bits());
  const DistanceModel distance{feature, model.means.at(feature), model.distance_confidence};
  MassFunction final_mass = combine(step1, distance_mass(values[feature], distance, frame));

  std::size_t label = 0;
  double best = -1.0;
  for (std::size_t c = 0; c < frame.size(); ++c) {
    const double bel = belief_of(final_mass, SubsetMask{1} << c);
    if (bel > best + kTieTolerance) {
      best = bel;
      label = c;
    }
  }
  std::string trace = "step3 candidate=" + candidate.name() + " feature=" + std::to_string(feature + 1) +
                      " nearest=" + frame.label(nearest_mean(values[feature], distance.means));
  Prediction p{record.id, label, frame.label(label), std::move(final_mass), std::move(trace)};
  return {std::move(p), std::move(step1), candidate.bits(), 3, feature};
}

inline Prediction classify_iris(const Record& record, const IrisModel& model) {
  return classify_iris_detailed(record, model).prediction;
}

// ---------------------------------------------------------------------------
// Email signal fusion

struct EmailModel {
  ScaledSigmoidBpa signal1;
  TableBpa signal2;
  TableBpa signal3;
  TableBpa signal4;
  std::vector<int> active_signals{1, 2, 3, 4};

  void validate() const {
    signal1.validate();
    signal2.validate();
    signal3.validate();
    signal4.validate();
  }
};

/// Expert-set constants: interval sigmoid 30 s on [0.3, 0.7], spoofed sender,
/// dangerous attachment, benign attachment; m(Θ) = 0.01 throughout.
inline EmailModel email_model_default() {
  EmailModel m;
  m.signal1 = {30.0, 0.3, 0.7, 0.01};
  m.signal2.rows = {TableRow{0.9, 0.09, 0.01}, TableRow{0.1, 0.89, 0.01}};
  m.signal3.rows = {TableRow{0.8, 0.19, 0.01}, TableRow{0.2, 0.79, 0.01}};
  m.signal4.rows = {TableRow{0.6, 0.39, 0.01}, TableRow{0.4, 0.59, 0.01}};
  return m;
}

inline void check_signals(std::span<const int> signals) {
  if (signals.empty()) throw InvalidArgument("no signals selected");
  for (int s : signals)
    if (s < 1 || s > 4) throw InvalidArgument("signal " + std::to_string(s) + " is not in 1..4");
}

inline MassFunction email_signal_mass(const Record& message, const EmailModel& model, int signal) {
  if (message.features.size() != 4) throw InvalidArgument("email records have four signals");
  const auto& cell = message.features[static_cast<std::size_t>(signal - 1)];
  if (!cell) throw InvalidArgument("email signal " + std::to_string(signal) + " is missing");
  switch (signal) {
    case 1: return scaled_sigmoid_mass(*cell, model.signal1);
    case 2: return table_mass(static_cast<int>(*cell), model.signal2);
    case 3: return table_mass(static_cast<int>(*cell), model.signal3);
    case 4: return table_mass(static_cast<int>(*cell), model.signal4);
    default: throw InvalidArgument("signal " + std::to_string(signal) + " is not in 1..4");
  }
}

inline Prediction classify_email(const Record& message, const EmailModel& model, std::span<const int> signals) {
  check_signals(signals);
  std::vector<MassFunction> evidence;
  std::string trace = "signals=";
  for (int s : signals) {
    evidence.push_back(email_signal_mass(message, model, s));
    if (trace.back() != '=') trace += ',';
    trace += std::to_string(s);
  }
  MassFunction fused = combine_all(evidence);
  const auto label = decide_binary(fused);
  return {message.id, label, binary_frame().label(label), std::move(fused), std::move(trace)};
}

}  // namespace dsad
