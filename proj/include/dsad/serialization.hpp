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

#include <string>

#include <json.hpp>

#include "dsad/bpa.hpp"
#include "dsad/classifiers.hpp"
#include "dsad/error.hpp"
#include "dsad/mass_function.hpp"

namespace dsad {

using Json = nlohmann::ordered_json;

namespace detail {

inline void expect_kind(const Json& j, std::string_view key, std::string_view kind) {
  if (!j.contains(key) || j.at(key) != kind)
    throw DataError("expected " + std::string(key) + " '" + std::string(kind) + "'");
}

template <class T>
T field(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad or missing field '") + key + "': " + e.what());
  }
}

}  // namespace detail

// Bpa models. Every object carries a "kind" tag.

inline void to_json(Json& j, const SigmoidBpa& b) { j = Json{{"kind", "sigmoid"}, {"threshold", b.threshold}}; }
inline void from_json(const Json& j, SigmoidBpa& b) {
  detail::expect_kind(j, "kind", "sigmoid");
  b.threshold = detail::field<double>(j, "threshold");
}

inline void to_json(Json& j, const ScaledSigmoidBpa& b) {
  j = Json{{"kind", "scaled_sigmoid"},
           {"threshold", b.threshold},
           {"floor", b.floor},
           {"ceiling", b.ceiling},
           {"theta_mass", b.theta_mass}};
}
inline void from_json(const Json& j, ScaledSigmoidBpa& b) {
  detail::expect_kind(j, "kind", "scaled_sigmoid");
  b = {detail::field<double>(j, "threshold"), detail::field<double>(j, "floor"), detail::field<double>(j, "ceiling"),
       detail::field<double>(j, "theta_mass")};
  b.validate();
}

inline void to_json(Json& j, const TableBpa& b) {
  Json rows = Json::object();
  for (std::size_t v = 0; v < 2; ++v)
    rows[std::to_string(v)] = Json{
        {"m_normal", b.rows[v].m_normal}, {"m_abnormal", b.rows[v].m_abnormal}, {"m_theta", b.rows[v].m_theta}};
  j = Json{{"kind", "table"}, {"rows", rows}};
}
inline void from_json(const Json& j, TableBpa& b) {
  detail::expect_kind(j, "kind", "table");
  const auto& rows = j.at("rows");
  for (std::size_t v = 0; v < 2; ++v) {
    const auto& r = rows.at(std::to_string(v));
    b.rows[v] = {detail::field<double>(r, "m_normal"), detail::field<double>(r, "m_abnormal"),
                 detail::field<double>(r, "m_theta")};
  }
  b.validate();
}

inline void to_json(Json& j, const BoundaryModel& b) {
  Json features = Json::array();
  for (const auto& per_class : b.ranges) {
    Json classes = Json::array();
    for (const auto& r : per_class) classes.push_back(Json{{"min", r.min}, {"max", r.max}});
    features.push_back(std::move(classes));
  }
  j = Json{{"kind", "boundary"}, {"confidence", b.confidence}, {"ranges", std::move(features)}};
}
inline void from_json(const Json& j, BoundaryModel& b) {
  detail::expect_kind(j, "kind", "boundary");
  b.confidence = detail::field<double>(j, "confidence");
  b.ranges.clear();
  for (const auto& classes : j.at("ranges")) {
    std::vector<ClassRange> per_class;
    for (const auto& r : classes) {
      per_class.push_back({detail::field<double>(r, "min"), detail::field<double>(r, "max")});
      if (per_class.back().min > per_class.back().max) throw DataError("boundary range has min > max");
    }
    b.ranges.push_back(std::move(per_class));
  }
}

inline void to_json(Json& j, const DistanceModel& d) {
  j = Json{{"kind", "distance"}, {"feature", d.feature}, {"confidence", d.confidence}, {"means", d.means}};
}
inline void from_json(const Json& j, DistanceModel& d) {
  detail::expect_kind(j, "kind", "distance");
  d.feature = detail::field<std::size_t>(j, "feature");
  d.confidence = detail::field<double>(j, "confidence");
  d.means = detail::field<std::vector<double>>(j, "means");
}

// Classifier models. Tagged with "classifier".

inline void to_json(Json& j, const BinaryModel& m) {
  j = Json{{"classifier", "binary"},
           {"feature_count", m.feature_count},
           {"normal_fraction", m.normal_fraction},
           {"thresholds", m.thresholds}};
}
inline void from_json(const Json& j, BinaryModel& m) {
  detail::expect_kind(j, "classifier", "binary");
  m.feature_count = detail::field<std::size_t>(j, "feature_count");
  m.normal_fraction = detail::field<double>(j, "normal_fraction");
  m.thresholds = j.at("thresholds").get<std::vector<SigmoidBpa>>();
  if (m.thresholds.size() != m.feature_count) throw DataError("binary model needs one threshold per feature");
}

inline void to_json(Json& j, const IrisModel& m) {
  Json selected = Json::object();
  for (const auto& [group, feature] : m.selected_features) selected[std::to_string(group)] = feature;
  j = Json{{"classifier", "iris"},
           {"boundaries", m.boundaries},
           {"means", m.means},
           {"selected_features", selected},
           {"distance_confidence", m.distance_confidence}};
}
inline void from_json(const Json& j, IrisModel& m) {
  detail::expect_kind(j, "classifier", "iris");
  m.boundaries = j.at("boundaries").get<BoundaryModel>();
  m.means = detail::field<std::vector<std::vector<double>>>(j, "means");
  m.distance_confidence = detail::field<double>(j, "distance_confidence");
  m.selected_features.clear();
  for (const auto& [group, feature] : j.at("selected_features").items())
    m.selected_features[static_cast<SubsetMask>(std::stoul(group))] = feature.get<std::size_t>();
}

inline void to_json(Json& j, const EmailModel& m) {
  j = Json{{"classifier", "email"},
           {"signal1", m.signal1},
           {"signal2", m.signal2},
           {"signal3", m.signal3},
           {"signal4", m.signal4},
           {"active_signals", m.active_signals}};
}
inline void from_json(const Json& j, EmailModel& m) {
  detail::expect_kind(j, "classifier", "email");
  m.signal1 = j.at("signal1").get<ScaledSigmoidBpa>();
  m.signal2 = j.at("signal2").get<TableBpa>();
  m.signal3 = j.at("signal3").get<TableBpa>();
  m.signal4 = j.at("signal4").get<TableBpa>();
  m.active_signals = detail::field<std::vector<int>>(j, "active_signals");
  check_signals(m.active_signals);
}

/// {"normal": 0.67, "abnormal": 0.31, "Θ": 0.016} in mask order.
inline Json masses_to_json(const MassFunction& m) {
  Json out = Json::object();
  for (const auto& f : m.focal_elements()) out[m.frame().name_of(f.bits)] = f.mass;
  return out;
}

inline Json prediction_to_json(const Prediction& p) {
  return Json{{"id", p.id}, {"label", p.label_name}, {"masses", masses_to_json(p.masses)}, {"trace", p.trace}};
}

}  // namespace dsad
