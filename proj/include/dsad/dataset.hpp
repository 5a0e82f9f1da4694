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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dsad/error.hpp"
#include "dsad/random.hpp"
#include "dsad/text.hpp"

namespace dsad {

struct Record {
  int id = 0;
  std::string source_id;                       // identifier carried by the input file, if any
  std::vector<std::optional<double>> features;  // nullopt = missing cell
  std::size_t label = 0;                       // index into RecordSet::label_names

  bool has_missing() const noexcept {
    return std::any_of(features.begin(), features.end(), [](const auto& f) { return !f.has_value(); });
  }

  friend bool operator==(const Record&, const Record&) = default;
};

struct RecordSet {
  std::string name;
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;
  std::vector<Record> records;

  std::size_t size() const noexcept { return records.size(); }

  std::size_t count_label(std::size_t label) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [label](const Record& r) { return r.label == label; }));
  }

  /// Ids unique, arity uniform, labels in range.
  void validate() const {
    std::vector<int> ids;
    ids.reserve(records.size());
    for (const auto& r : records) {
      if (r.features.size() != feature_names.size())
        throw DataError("record " + std::to_string(r.id) + " has wrong feature arity");
      if (r.label >= label_names.size()) throw DataError("record " + std::to_string(r.id) + " has unknown label");
      ids.push_back(r.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw DataError("duplicate record id");
  }

  friend bool operator==(const RecordSet&, const RecordSet&) = default;
};

namespace detail {

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline DataError row_error(const std::filesystem::path& path, std::size_t line_no, const std::string& what) {
  return DataError(path.filename().string() + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace detail

/// UCI breast-cancer-wisconsin.data: id, nine features 1..10 or '?', class 2|4.
/// Record ids are 1-based row numbers; the file's sample code goes to source_id
/// (the file repeats some sample codes).
inline RecordSet load_wbcd(const std::filesystem::path& path) {
  RecordSet set{"wbcd", {"A", "B", "C", "D", "E", "F", "G", "H", "I"}, {"normal", "abnormal"}, {}};
  const auto lines = detail::read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (text::trim(lines[n]).empty()) continue;
    const auto fields = text::split(lines[n], ',');
    if (fields.size() != 11) throw detail::row_error(path, n + 1, "expected 11 fields, got " + std::to_string(fields.size()));
    Record r;
    r.id = static_cast<int>(set.records.size() + 1);
    r.source_id = std::string(fields[0]);
    for (std::size_t j = 1; j <= 9; ++j) {
      if (fields[j] == "?") {
        r.features.emplace_back(std::nullopt);
        continue;
      }
      const auto v = text::parse_int(fields[j]);
      if (!v) throw detail::row_error(path, n + 1, "feature '" + std::string(fields[j]) + "' is not an integer");
      if (*v < 1 || *v > 10) throw detail::row_error(path, n + 1, "feature value outside 1..10");
      r.features.emplace_back(static_cast<double>(*v));
    }
    const auto cls = text::parse_int(fields[10]);
    if (!cls || (*cls != 2 && *cls != 4)) throw detail::row_error(path, n + 1, "class code must be 2 or 4");
    r.label = *cls == 2 ? 0 : 1;
    set.records.push_back(std::move(r));
  }
  if (set.records.empty()) throw DataError("'" + path.string() + "' contains no records");
  return set;
}

/// UCI iris.data: four decimals and a class name; ids are 1-based row numbers.
inline RecordSet load_iris(const std::filesystem::path& path) {
  RecordSet set{"iris",
                {"sepal_length", "sepal_width", "petal_length", "petal_width"},
                {"Setosa", "Versicolour", "Virginica"},
                {}};
  const auto lines = detail::read_lines(path);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (text::trim(lines[n]).empty()) continue;
    const auto fields = text::split(lines[n], ',');
    if (fields.size() != 5) throw detail::row_error(path, n + 1, "expected 5 fields, got " + std::to_string(fields.size()));
    Record r;
    r.id = static_cast<int>(set.records.size() + 1);
    for (std::size_t j = 0; j < 4; ++j) {
      const auto v = text::parse_double(fields[j]);
      if (!v || !std::isfinite(*v)) throw detail::row_error(path, n + 1, "feature '" + std::string(fields[j]) + "' is not a number");
      r.features.emplace_back(*v);
    }
    if (fields[4] == "Iris-setosa")
      r.label = 0;
    else if (fields[4] == "Iris-versicolor")
      r.label = 1;
    else if (fields[4] == "Iris-virginica")
      r.label = 2;
    else
      throw detail::row_error(path, n + 1, "unknown class '" + std::string(fields[4]) + "'");
    set.records.push_back(std::move(r));
  }
  if (set.records.empty()) throw DataError("'" + path.string() + "' contains no records");
  return set;
}

// Email records: feature columns in signal order.
inline constexpr std::size_t kEmailInterval = 0;
inline constexpr std::size_t kEmailSpoofed = 1;
inline constexpr std::size_t kEmailDangerous = 2;
inline constexpr std::size_t kEmailBenign = 3;
inline constexpr std::string_view kEmailHeader =
    "id,interval_seconds,spoofed,dangerous_attachment,benign_attachment,label";

struct IntervalRange {
  double lo;
  double hi;
};

/// Synthetic stand-in for the sent-box + worm corpus.
struct EmailGenConfig {
  std::size_t legit_count = 90;
  std::size_t worm_count = 42;
  std::vector<std::pair<int, int>> worm_blocks{{39, 59}, {61, 81}};  // inclusive id ranges
  std::vector<int> doc_attachment_ids{12, 101};
  std::vector<int> burst_leader_ids{39, 61};
  IntervalRange legit_interval{5.0, 3600.0};  // log-uniform
  double legit_long_gap_fraction = 0.2;
  IntervalRange legit_long_gap{3600.0, 94665.0};  // log-uniform
  IntervalRange worm_interval{60.0, 600.0};       // uniform
  IntervalRange leader_interval{5.0, 30.0};       // log-uniform
  std::uint64_t seed = 42;

  bool is_worm(int id) const noexcept {
    return std::any_of(worm_blocks.begin(), worm_blocks.end(),
                       [id](const auto& b) { return b.first <= id && id <= b.second; });
  }

  void validate() const {
    const auto total = static_cast<int>(legit_count + worm_count);
    std::size_t in_blocks = 0;
    for (std::size_t i = 0; i < worm_blocks.size(); ++i) {
      const auto [lo, hi] = worm_blocks[i];
      if (lo > hi || lo < 1 || hi > total) throw InvalidArgument("worm id block out of range");
      for (std::size_t j = 0; j < i; ++j)
        if (!(hi < worm_blocks[j].first || worm_blocks[j].second < lo)) throw InvalidArgument("worm id blocks overlap");
      in_blocks += static_cast<std::size_t>(hi - lo + 1);
    }
    if (in_blocks != worm_count) throw InvalidArgument("worm blocks do not match worm_count");
    for (int id : doc_attachment_ids)
      if (id < 1 || id > total || is_worm(id)) throw InvalidArgument("doc attachment id must be a legitimate message");
    for (int id : burst_leader_ids)
      if (!is_worm(id)) throw InvalidArgument("burst leader id must be a worm message");
    for (const auto& r : {legit_interval, legit_long_gap, leader_interval})
      if (!(r.lo > 0.0 && r.lo <= r.hi)) throw InvalidArgument("log-uniform interval range must satisfy 0 < lo <= hi");
    if (!(worm_interval.lo >= 0.0 && worm_interval.lo <= worm_interval.hi))
      throw InvalidArgument("worm interval range must satisfy 0 <= lo <= hi");
    if (!(legit_long_gap_fraction >= 0.0 && legit_long_gap_fraction <= 1.0))
      throw InvalidArgument("long-gap fraction must lie in [0, 1]");
  }
};

inline RecordSet email_schema() {
  return {"email", {"interval_seconds", "spoofed", "dangerous_attachment", "benign_attachment"}, {"normal", "abnormal"}, {}};
}

/// Deterministic for a fixed seed. Intervals are whole seconds.
inline RecordSet generate_email(const EmailGenConfig& config) {
  config.validate();
  RecordSet set = email_schema();
  Rng rng(config.seed);
  const int total = static_cast<int>(config.legit_count + config.worm_count);
  for (int id = 1; id <= total; ++id) {
    const bool worm = config.is_worm(id);
    const bool leader = std::find(config.burst_leader_ids.begin(), config.burst_leader_ids.end(), id) !=
                        config.burst_leader_ids.end();
    double interval;
    if (worm && leader) {
      interval = rng.log_uniform(config.leader_interval.lo, config.leader_interval.hi);
    } else if (worm) {
      interval = rng.uniform(config.worm_interval.lo, config.worm_interval.hi);
    } else {
      const bool long_gap = rng.uniform01() < config.legit_long_gap_fraction;
      const auto& range = long_gap ? config.legit_long_gap : config.legit_interval;
      interval = rng.log_uniform(range.lo, range.hi);
    }
    const bool doc = std::find(config.doc_attachment_ids.begin(), config.doc_attachment_ids.end(), id) !=
                     config.doc_attachment_ids.end();
    Record r;
    r.id = id;
    r.features = {std::round(interval), worm ? 1.0 : 0.0, worm ? 1.0 : 0.0, doc ? 1.0 : 0.0};
    r.label = worm ? 1 : 0;
    set.records.push_back(std::move(r));
  }
  return set;
}

inline void write_email_csv(const RecordSet& set, std::ostream& out) {
  out << kEmailHeader << '\n';
  for (const auto& r : set.records) {
    out << r.id;
    for (const auto& f : r.features) out << ',' << text::shortest(f.value_or(0.0));
    out << ',' << (r.label == 1 ? "worm" : "normal") << '\n';
  }
}

inline void write_email_csv(const RecordSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_email_csv(set, out);
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

inline RecordSet load_email(const std::filesystem::path& path) {
  const auto lines = detail::read_lines(path);
  if (lines.empty() || text::trim(lines.front()) != kEmailHeader)
    throw DataError("'" + path.string() + "' does not start with the email CSV header");
  RecordSet set = email_schema();
  for (std::size_t n = 1; n < lines.size(); ++n) {
    if (text::trim(lines[n]).empty()) continue;
    const auto fields = text::split(lines[n], ',');
    if (fields.size() != 6) throw detail::row_error(path, n + 1, "expected 6 fields");
    Record r;
    const auto id = text::parse_int(fields[0]);
    if (!id) throw detail::row_error(path, n + 1, "id is not an integer");
    r.id = static_cast<int>(*id);
    const auto interval = text::parse_double(fields[1]);
    if (!interval || !std::isfinite(*interval) || *interval < 0.0)
      throw detail::row_error(path, n + 1, "interval must be a number >= 0");
    r.features.emplace_back(*interval);
    for (std::size_t j = 2; j <= 4; ++j) {
      const auto flag = text::parse_int(fields[j]);
      if (!flag || (*flag != 0 && *flag != 1)) throw detail::row_error(path, n + 1, "flags must be 0 or 1");
      r.features.emplace_back(static_cast<double>(*flag));
    }
    if (fields[5] == "worm" || fields[5] == "abnormal")
      r.label = 1;
    else if (fields[5] == "normal")
      r.label = 0;
    else
      throw detail::row_error(path, n + 1, "unknown label '" + std::string(fields[5]) + "'");
    set.records.push_back(std::move(r));
  }
  set.validate();
  return set;
}

}  // namespace dsad
