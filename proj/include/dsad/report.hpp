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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "dsad/error.hpp"
#include "dsad/evaluation.hpp"
#include "dsad/serialization.hpp"

namespace dsad {

enum class ReportFormat { json, csv, text };

inline ReportFormat parse_format(std::string_view s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  throw InvalidArgument("unknown format '" + std::string(s) + "'");
}

inline std::string percent(double fraction, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f%%", digits, 100.0 * fraction);
  return buf;
}

namespace detail {

inline bool is_binary(const EvalReport& r) { return r.labels.size() == 2; }

inline const char* selection_key(std::string_view task) { return task == "email" ? "signals" : "features"; }

}  // namespace detail

/// Canonical machine form with a fixed key order. Leave out the runtime to get
/// byte-identical output from identical inputs.
inline Json to_json(const EvalReport& r, bool include_runtime = true) {
  Json per_fold = Json::array();
  for (const auto& f : r.per_fold)
    per_fold.push_back(Json{{"fold", f.fold}, {"size", f.size}, {"correct", f.correct}, {"accuracy", f.accuracy}});
  Json confusion;
  if (detail::is_binary(r)) {
    // abnormal is the positive class
    confusion = Json{{"tp", r.confusion[1][1]}, {"tn", r.confusion[0][0]},
                     {"fp", r.confusion[0][1]}, {"fn", r.confusion[1][0]}};
  } else {
    confusion = Json{{"labels", r.labels}, {"matrix", r.confusion}};
  }
  Json errors = Json::array();
  for (const auto& e : r.errors)
    errors.push_back(Json{{"id", e.id}, {"expected", e.expected}, {"predicted", e.predicted},
                          {"masses", e.masses}, {"trace", e.trace}});
  Json j{{"task", r.task},
         {"config", Json{{detail::selection_key(r.task), r.selection}, {"k", r.k}, {"seed", r.seed}, {"rng", r.rng}}},
         {"labels", r.labels},
         {"accuracy", r.accuracy},
         {"correct", r.correct},
         {"total", r.total},
         {"per_fold", per_fold},
         {"confusion", confusion},
         {"misclassified", r.misclassified},
         {"unclassifiable", r.unclassifiable},
         {"errors", errors}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

inline EvalReport report_from_json(const Json& j) {
  try {
    EvalReport r;
    r.task = j.at("task").get<std::string>();
    const auto& config = j.at("config");
    r.selection = config.at(detail::selection_key(r.task)).get<std::string>();
    r.k = config.at("k").get<std::size_t>();
    r.seed = config.at("seed").get<std::uint64_t>();
    r.rng = config.at("rng").get<std::string>();
    r.labels = j.at("labels").get<std::vector<std::string>>();
    r.accuracy = j.at("accuracy").get<double>();
    r.correct = j.at("correct").get<std::size_t>();
    r.total = j.at("total").get<std::size_t>();
    for (const auto& f : j.at("per_fold"))
      r.per_fold.push_back({f.at("fold").get<std::size_t>(), f.at("size").get<std::size_t>(),
                            f.at("correct").get<std::size_t>(), f.at("accuracy").get<double>()});
    const auto& c = j.at("confusion");
    if (detail::is_binary(r)) {
      r.confusion = {{c.at("tn").get<std::size_t>(), c.at("fp").get<std::size_t>()},
                     {c.at("fn").get<std::size_t>(), c.at("tp").get<std::size_t>()}};
    } else {
      r.confusion = c.at("matrix").get<std::vector<std::vector<std::size_t>>>();
    }
    r.misclassified = j.at("misclassified").get<std::vector<int>>();
    r.unclassifiable = j.at("unclassifiable").get<std::vector<int>>();
    for (const auto& e : j.at("errors"))
      r.errors.push_back({e.at("id").get<int>(), e.at("expected").get<std::string>(),
                          e.at("predicted").get<std::string>(), e.at("masses").get<std::string>(),
                          e.at("trace").get<std::string>()});
    if (j.contains("runtime_seconds")) r.runtime_seconds = j.at("runtime_seconds").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

/// Per-fold table: header plus one row per fold.
inline void write_csv(const EvalReport& r, std::ostream& out) {
  out << "fold,size,correct,accuracy\n";
  for (const auto& f : r.per_fold) out << f.fold << ',' << f.size << ',' << f.correct << ',' << text::shortest(f.accuracy) << '\n';
}

inline void write_text(const EvalReport& r, std::ostream& out) {
  out << "task: " << r.task << "  " << detail::selection_key(r.task) << ": " << r.selection;
  if (r.task != "email") out << "  folds: " << r.k << "  seed: " << r.seed;
  out << "\naccuracy: " << percent(r.accuracy) << " (" << r.correct << "/" << r.total << ")\n";
  if (r.per_fold.size() > 1) {
    out << "per fold:";
    for (const auto& f : r.per_fold) out << ' ' << percent(f.accuracy, 1);
    out << '\n';
  }
  if (detail::is_binary(r)) {
    out << "confusion (abnormal positive): tp=" << r.confusion[1][1] << " tn=" << r.confusion[0][0]
        << " fp=" << r.confusion[0][1] << " fn=" << r.confusion[1][0] << '\n';
  } else {
    out << "confusion (rows truth, columns predicted):\n";
    for (std::size_t t = 0; t < r.labels.size(); ++t) {
      out << "  " << r.labels[t] << ':';
      for (auto v : r.confusion[t]) out << ' ' << v;
      out << '\n';
    }
  }
  if (!r.unclassifiable.empty()) {
    out << "records with no selected feature present:";
    for (int id : r.unclassifiable) out << ' ' << id;
    out << '\n';
  }
  out << "misclassified (" << r.misclassified.size() << "):";
  for (int id : r.misclassified) out << ' ' << id;
  out << '\n';
  for (const auto& e : r.errors)
    out << "  id " << e.id << ": expected " << e.expected << ", got " << e.predicted << "  " << e.masses << "  ["
        << e.trace << "]\n";
  out << "runtime: " << r.runtime_seconds << " s\n";
}

inline Json to_json(const RepeatedReport& r, bool include_runtime = true) {
  Json runs = Json::array();
  for (const auto& run : r.runs) runs.push_back(to_json(run, include_runtime));
  Json recurrent = Json::array();
  for (const auto& [id, count] : r.recurrent) recurrent.push_back(Json{{"id", id}, {"runs", count}});
  Json j{{"task", r.task},
         {"config", Json{{"features", r.selection}, {"k", r.k}, {"seed", r.seed}, {"rng", r.rng}, {"runs", r.runs.size()}}},
         {"mean_accuracy", r.mean_accuracy},
         {"sd_accuracy", r.sd_accuracy},
         {"recurrent_misclassified", recurrent},
         {"runs", runs}};
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

inline void write_csv(const RepeatedReport& r, std::ostream& out) {
  out << "run,seed,accuracy,misclassified\n";
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    out << i << ',' << r.runs[i].seed << ',' << text::shortest(r.runs[i].accuracy) << ',';
    for (std::size_t e = 0; e < r.runs[i].misclassified.size(); ++e) out << (e ? ";" : "") << r.runs[i].misclassified[e];
    out << '\n';
  }
}

inline void write_text(const RepeatedReport& r, std::ostream& out) {
  out << "task: " << r.task << "  runs: " << r.runs.size() << "  folds: " << r.k << "  seeds: " << r.seed << ".."
      << r.seed + r.runs.size() - 1 << '\n';
  for (std::size_t i = 0; i < r.runs.size(); ++i)
    out << "  run " << i + 1 << ": " << percent(r.runs[i].accuracy) << "  misclassified:" << [&] {
      std::string s;
      for (int id : r.runs[i].misclassified) s += ' ' + std::to_string(id);
      return s;
    }() << '\n';
  out << "accuracy: " << percent(r.mean_accuracy) << " +/- " << percent(r.sd_accuracy) << '\n';
  out << "recurrent misclassified ids (runs):";
  for (const auto& [id, count] : r.recurrent)
    if (count * 2 > r.runs.size()) out << ' ' << id << " (" << count << ')';
  out << '\n';
  out << "runtime: " << r.runtime_seconds << " s\n";
}

inline Json to_json(const AblationTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back(Json{{"subset", r.selection}, {"accuracy", r.accuracy}, {"correct", r.correct}, {"total", r.total}});
  return Json{{"task", t.task}, {"config", Json{{"k", t.k}, {"seed", t.seed}, {"rng", t.rng}}}, {"rows", rows}};
}

inline void write_csv(const AblationTable& t, std::ostream& out) {
  out << "subset,accuracy,correct,total\n";
  for (const auto& r : t.rows) out << r.selection << ',' << text::shortest(r.accuracy) << ',' << r.correct << ',' << r.total << '\n';
}

inline void write_text(const AblationTable& t, std::ostream& out) {
  out << "task: " << t.task << "  folds: " << t.k << "  seed: " << t.seed << '\n';
  for (const auto& r : t.rows) out << "  " << r.selection << ": " << percent(r.accuracy, 1) << " (" << r.correct << '/' << r.total << ")\n";
}

template <class Report>
void write_report(const Report& report, std::ostream& out, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: out << to_json(report).dump(2) << '\n'; break;
    case ReportFormat::csv: write_csv(report, out); break;
    case ReportFormat::text: write_text(report, out); break;
  }
}

template <class Report>
void write_report(const Report& report, const std::filesystem::path& path, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_report(report, out, format);
  out.flush();
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

inline EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return report_from_json(Json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("report is not valid JSON: ") + e.what());
  }
}

}  // namespace dsad
