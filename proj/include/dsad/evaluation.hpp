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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "dsad/classifiers.hpp"
#include "dsad/dataset.hpp"
#include "dsad/error.hpp"
#include "dsad/folds.hpp"
#include "dsad/random.hpp"

namespace dsad {

enum class Task { wbcd, iris, email };

inline std::string_view task_name(Task t) {
  switch (t) {
    case Task::wbcd: return "wbcd";
    case Task::iris: return "iris";
    case Task::email: return "email";
  }
  return "unknown";
}

inline Task parse_task(std::string_view s) {
  if (s == "wbcd") return Task::wbcd;
  if (s == "iris") return Task::iris;
  if (s == "email") return Task::email;
  throw InvalidArgument("unknown task '" + std::string(s) + "'");
}

/// "ADI" -> {0, 3, 8}. Letters A..A+n-1, no repeats.
inline std::vector<std::size_t> parse_feature_letters(std::string_view s, std::size_t n_features = 9) {
  if (s.empty()) throw InvalidArgument("empty feature subset");
  std::vector<std::size_t> out;
  for (char ch : s) {
    const auto j = static_cast<std::size_t>(ch - 'A');
    if (ch < 'A' || j >= n_features) throw InvalidArgument(std::string("unknown feature '") + ch + "'");
    if (std::find(out.begin(), out.end(), j) != out.end()) throw InvalidArgument(std::string("feature '") + ch + "' repeated");
    out.push_back(j);
  }
  return out;
}

/// "134" -> {1, 3, 4}. Digits 1..n, no repeats.
inline std::vector<int> parse_signal_digits(std::string_view s, int n_signals = 4) {
  if (s.empty()) throw InvalidArgument("empty signal subset");
  std::vector<int> out;
  for (char ch : s) {
    const int d = ch - '0';
    if (d < 1 || d > n_signals) throw InvalidArgument(std::string("unknown signal '") + ch + "'");
    if (std::find(out.begin(), out.end(), d) != out.end()) throw InvalidArgument(std::string("signal '") + ch + "' repeated");
    out.push_back(d);
  }
  return out;
}

/// Selection text as echoed in reports: letters for WBCD, 1-based digits otherwise.
inline std::string selection_text(Task task, std::span<const std::size_t> columns) {
  std::string out;
  for (auto j : columns) out += task == Task::wbcd ? static_cast<char>('A' + j) : static_cast<char>('1' + j);
  return out;
}

struct FoldResult {
  std::size_t fold = 0;
  std::size_t size = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;

  friend bool operator==(const FoldResult&, const FoldResult&) = default;
};

struct Misclassification {
  int id = 0;
  std::string expected;
  std::string predicted;
  std::string masses;
  std::string trace;

  friend bool operator==(const Misclassification&, const Misclassification&) = default;
};

struct EvalReport {
  std::string task;
  std::string selection;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string rng{kRngAlgorithm};
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<FoldResult> per_fold;
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  std::vector<int> misclassified;
  std::vector<int> unclassifiable;  // every selected feature missing; labeled by the tie rule
  std::vector<Misclassification> errors;
  double runtime_seconds = 0.0;

  /// Equality ignoring wall-clock time.
  bool same_results(const EvalReport& o) const {
    return task == o.task && selection == o.selection && k == o.k && seed == o.seed && rng == o.rng &&
           accuracy == o.accuracy && correct == o.correct && total == o.total && per_fold == o.per_fold &&
           labels == o.labels && confusion == o.confusion && misclassified == o.misclassified &&
           unclassifiable == o.unclassifiable && errors == o.errors;
  }
};

struct EvalOptions {
  std::vector<std::size_t> features;  // 0-based columns; empty = all
  std::optional<FoldPlan> folds;      // ignored for email
  std::size_t k = 10;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  EmailModel email_model = email_model_default();
};

namespace detail {

struct Outcome {
  std::size_t predicted = 0;
  bool unclassifiable = false;
  std::string masses;
  std::string trace;
};

inline std::vector<std::size_t> resolve_columns(const RecordSet& data, const std::vector<std::size_t>& requested) {
  std::vector<std::size_t> cols = requested;
  if (cols.empty())
    for (std::size_t j = 0; j < data.feature_names.size(); ++j) cols.push_back(j);
  for (auto j : cols)
    if (j >= data.feature_names.size()) throw InvalidArgument("feature column " + std::to_string(j) + " out of range");
  return cols;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions from the
/// lowest index are rethrown after every thread has joined.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  std::vector<std::exception_ptr> failures(n);
  auto body = [&](std::size_t start, std::size_t stride) {
    for (std::size_t i = start; i < n; i += stride) {
      try {
        fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1u, workers), n);
  if (threads <= 1) {
    body(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(body, t, threads);
  }
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
}

inline Outcome classify_one(Task task, const Record& r, const BinaryModel* binary, const IrisModel* iris,
                            const EmailModel* email, std::span<const std::size_t> cols,
                            std::span<const int> signals) {
  switch (task) {
    case Task::wbcd: {
      auto fused = fuse_binary(r, *binary, cols);
      if (!fused) {
        // no evidence: vacuous mass, which the tie rule labels normal
        const auto vac = vacuous_mass(binary_frame());
        return {decide_binary(vac), true, to_string(vac), "no selected feature present"};
      }
      auto p = classify_binary(r, *binary, cols);
      return {p.label, false, to_string(p.masses), p.trace};
    }
    case Task::iris: {
      auto p = classify_iris(r, *iris);
      return {p.label, false, to_string(p.masses), p.trace};
    }
    case Task::email: {
      auto p = classify_email(r, *email, signals);
      return {p.label, false, to_string(p.masses), p.trace};
    }
  }
  throw InvalidArgument("unknown task");
}

inline Record project(const Record& r, std::span<const std::size_t> cols) {
  Record out{r.id, r.source_id, {}, r.label};
  for (auto j : cols) out.features.push_back(r.features[j]);
  return out;
}

}  // namespace detail

/// Cross-validated (WBCD, Iris) or fixed-model (email) evaluation.
inline EvalReport evaluate(const RecordSet& data, Task task, const EvalOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (data.records.empty()) throw InvalidArgument("dataset is empty");
  const auto cols = detail::resolve_columns(data, options.features);
  const std::size_t n = data.size();

  std::vector<int> signals;
  if (task == Task::email) {
    for (auto j : cols) signals.push_back(static_cast<int>(j) + 1);
    check_signals(signals);
    options.email_model.validate();
  }

  EvalReport report;
  report.task = std::string(task_name(task));
  report.selection = selection_text(task, cols);
  report.seed = options.seed;
  report.labels = data.label_names;
  report.total = n;

  std::vector<detail::Outcome> outcomes(n);
  std::vector<std::size_t> fold_of(n, 0);

  if (task == Task::email) {
    report.k = 1;
    detail::parallel_for(n, options.workers, [&](std::size_t i) {
      try {
        outcomes[i] = detail::classify_one(task, data.records[i], nullptr, nullptr, &options.email_model, cols, signals);
      } catch (const Error& e) {
        throw EvaluationError("message " + std::to_string(data.records[i].id) + ": " + e.what());
      }
    });
  } else {
    const FoldPlan plan = options.folds ? *options.folds : make_folds(n, options.k, options.seed);
    if (plan.record_count() != n) throw InvalidArgument("fold plan does not match the dataset size");
    report.k = plan.k;
    report.seed = plan.seed;
    fold_of = plan.assignment;

    detail::parallel_for(plan.k, options.workers, [&](std::size_t f) {
      std::vector<Record> train;
      std::vector<std::size_t> test;
      for (std::size_t i = 0; i < n; ++i) {
        if (plan.assignment[i] == f)
          test.push_back(i);
        else
          train.push_back(task == Task::iris ? detail::project(data.records[i], cols) : data.records[i]);
      }
      std::optional<BinaryModel> binary;
      std::optional<IrisModel> iris;
      try {
        if (task == Task::wbcd)
          binary = train_binary(train);
        else
          iris = train_iris(train, data.label_names.size());
      } catch (const Error& e) {
        throw EvaluationError("training fold " + std::to_string(f) + ": " + e.what());
      }
      for (auto i : test) {
        try {
          if (task == Task::iris) {
            const auto projected = detail::project(data.records[i], cols);
            outcomes[i] = detail::classify_one(task, projected, nullptr, &*iris, nullptr, cols, signals);
          } else {
            outcomes[i] = detail::classify_one(task, data.records[i], &*binary, nullptr, nullptr, cols, signals);
          }
        } catch (const Error& e) {
          throw EvaluationError("fold " + std::to_string(f) + ", record " + std::to_string(data.records[i].id) +
                                ": " + e.what());
        }
      }
    });
  }

  const std::size_t labels = data.label_names.size();
  report.confusion.assign(labels, std::vector<std::size_t>(labels, 0));
  report.per_fold.resize(report.k);
  for (std::size_t f = 0; f < report.k; ++f) report.per_fold[f].fold = f;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = data.records[i];
    const auto& o = outcomes[i];
    auto& fold = report.per_fold[fold_of[i]];
    ++fold.size;
    ++report.confusion[r.label][o.predicted];
    if (o.unclassifiable) report.unclassifiable.push_back(r.id);
    if (o.predicted == r.label) {
      ++fold.correct;
      ++report.correct;
    } else {
      report.misclassified.push_back(r.id);
      report.errors.push_back({r.id, data.label_names[r.label], data.label_names[o.predicted], o.masses, o.trace});
    }
  }
  for (auto& f : report.per_fold)
    f.accuracy = f.size ? static_cast<double>(f.correct) / static_cast<double>(f.size) : 0.0;
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(n);
  std::sort(report.misclassified.begin(), report.misclassified.end());
  std::sort(report.unclassifiable.begin(), report.unclassifiable.end());
  std::sort(report.errors.begin(), report.errors.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Several complete cross-validations with seeds seed, seed+1, ...
struct RepeatedReport {
  std::string task;
  std::string selection;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string rng{kRngAlgorithm};
  std::vector<EvalReport> runs;
  double mean_accuracy = 0.0;
  double sd_accuracy = 0.0;                         // sample sd over runs; 0 for a single run
  std::vector<std::pair<int, std::size_t>> recurrent;  // id -> runs misclassified, most frequent first
  double runtime_seconds = 0.0;
};

inline RepeatedReport repeated_evaluate(const RecordSet& data, Task task, const EvalOptions& options,
                                        std::size_t runs) {
  if (runs == 0) throw InvalidArgument("runs must be at least 1");
  if (task == Task::email) throw InvalidArgument("repeated cross-validation does not apply to the email task");
  const auto start = std::chrono::steady_clock::now();
  RepeatedReport out;
  out.task = std::string(task_name(task));
  out.k = options.k;
  out.seed = options.seed;
  std::map<int, std::size_t> counts;
  for (std::size_t r = 0; r < runs; ++r) {
    EvalOptions o = options;
    o.folds.reset();
    o.seed = options.seed + r;
    out.runs.push_back(evaluate(data, task, o));
    for (int id : out.runs.back().misclassified) ++counts[id];
  }
  out.selection = out.runs.front().selection;
  // pooled counts; equals the mean of run accuracies since every run covers the whole set
  std::size_t correct = 0, total = 0;
  for (const auto& r : out.runs) {
    correct += r.correct;
    total += r.total;
  }
  out.mean_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  if (runs > 1) {
    double ss = 0.0;
    for (const auto& r : out.runs) ss += (r.accuracy - out.mean_accuracy) * (r.accuracy - out.mean_accuracy);
    out.sd_accuracy = std::sqrt(ss / static_cast<double>(runs - 1));
  }
  out.recurrent.assign(counts.begin(), counts.end());
  std::stable_sort(out.recurrent.begin(), out.recurrent.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  out.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct AblationRow {
  std::string selection;
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
};

struct AblationTable {
  std::string task;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::string rng{kRngAlgorithm};
  std::vector<AblationRow> rows;

  double accuracy_of(std::string_view selection) const {
    for (const auto& r : rows)
      if (r.selection == selection) return r.accuracy;
    throw InvalidArgument("subset '" + std::string(selection) + "' not in ablation table");
  }
};

/// One evaluation per subset, all sharing a single fold plan.
inline AblationTable ablation(const RecordSet& data, Task task, const std::vector<std::vector<std::size_t>>& subsets,
                              const EvalOptions& options) {
  AblationTable table;
  table.task = std::string(task_name(task));
  EvalOptions o = options;
  if (task != Task::email && !o.folds) o.folds = make_folds(data.size(), o.k, o.seed);
  table.k = task == Task::email ? 1 : o.folds->k;
  table.seed = task == Task::email ? o.seed : o.folds->seed;
  for (const auto& subset : subsets) {
    o.features = subset;
    const auto report = evaluate(data, task, o);
    table.rows.push_back({report.selection, report.accuracy, report.correct, report.total});
  }
  return table;
}

}  // namespace dsad
