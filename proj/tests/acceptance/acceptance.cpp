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

// One line per acceptance criterion; exit status is nonzero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dsad/dsad.hpp"
#include "support/oracles.hpp"

namespace {

using namespace dsad;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(bool ok, const char* id, const std::string& detail) {
  std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::string kWbcdPath = DSAD_DATA_DIR "/breast-cancer-wisconsin.data";
const std::string kIrisPath = DSAD_DATA_DIR "/iris.data";

void ac1() {
  const Frame f{"Jon", "Mary", "Mike"};
  const auto w1 = make_mass(f, {{"Jon", 0.9}, {"Mary", 0.1}});
  const auto w2 = make_mass(f, {{"Mike", 0.9}, {"Mary", 0.1}});
  const auto t = Clock::now();
  const auto c = combine_detailed(w1, w2);
  const double elapsed = seconds_since(t);
  const double mary = c.mass.mass(HypothesisSet::of(f, {"Mary"}));
  const bool ok = std::abs(mary - 1.0) <= 1e-12 && std::abs(c.conflict - 0.99) <= 1e-12 && c.mass.size() == 1 &&
                  elapsed < 1e-3;
  report(ok, "AC1", fmt("witness conflict: m(Mary)=%.15g K=%.15g (%.2g s, limit 1 ms)", mary, c.conflict, elapsed));
}

void ac2() {
  const auto t = Clock::now();
  std::size_t violations = 0, samples = 0, total_conflicts = 0;
  for (const Frame& frame : {Frame{"n", "a"}, Frame{"x", "y", "z"}}) {
    std::mt19937_64 gen(frame.size() * 7919);
    const auto full = frame.full_mask();
    for (int i = 0; i < 1000; ++i, ++samples) {
      const auto a = oracle::random_mass(gen, frame), b = oracle::random_mass(gen, frame),
                 c = oracle::random_mass(gen, frame);
      if (std::abs(a.total() - 1.0) > 1e-9) ++violations;
      const auto id = combine(a, vacuous_mass(frame));
      for (SubsetMask s = 1; s <= full; ++s) {
        if (std::abs(id.mass_of(s) - a.mass_of(s)) > 1e-12) ++violations;
        if (belief_of(a, s) > plausibility_of(a, s) + 1e-12) ++violations;
      }
      const auto naive = oracle::naive_combine(oracle::to_dense(a), oracle::to_dense(b));
      if (naive.conflict >= 1.0 - kTotalConflictTolerance) {
        ++total_conflicts;
        try {
          combine(a, b);
          ++violations;
        } catch (const TotalConflict&) {
        }
        continue;
      }
      const auto ab = combine(a, b), ba = combine(b, a);
      if (std::abs(ab.total() - 1.0) > 1e-9) ++violations;
      for (SubsetMask s = 1; s <= full; ++s) {
        if (std::abs(ab.mass_of(s) - ba.mass_of(s)) > 1e-9) ++violations;
        if (std::abs(ab.mass_of(s) - naive.mass[s]) > 1e-9) ++violations;
      }
      std::optional<MassFunction> l, r;
      try { l = combine(ab, c); } catch (const TotalConflict&) {}
      try { r = combine(a, combine(b, c)); } catch (const TotalConflict&) {}
      if (l.has_value() != r.has_value()) {
        ++violations;
      } else if (l) {
        for (SubsetMask s = 1; s <= full; ++s)
          if (std::abs(l->mass_of(s) - r->mass_of(s)) > 1e-9) ++violations;
      }
    }
  }
  const double elapsed = seconds_since(t);
  report(violations == 0 && elapsed < 5.0, "AC2",
         fmt("core properties: %zu random masses, %zu violations, %zu total-conflict pairs (%.3f s, limit 5 s)",
             samples, violations, total_conflicts, elapsed));
}

EvalReport wbcd_all(const RecordSet& d) {
  EvalOptions o;
  o.seed = 42;
  return evaluate(d, Task::wbcd, o);
}

void ac3(const RecordSet& d) {
  const auto t = Clock::now();
  const auto r = wbcd_all(d);
  const double elapsed = seconds_since(t);
  std::size_t missing = 0;
  for (const auto& rec : d.records) missing += rec.has_missing();
  const bool ok = r.total == 699 && missing == 16 && r.accuracy >= 0.965 && r.accuracy <= 0.985 && elapsed < 10.0;
  report(ok, "AC3",
         fmt("WBCD all nine features: %.2f%% (%zu/%zu, %zu records with a missing cell) in [96.5, 98.5] (%.3f s, "
             "limit 10 s)",
             100 * r.accuracy, r.correct, r.total, missing, elapsed));
}

void ac4(const RecordSet& d) {
  struct Target {
    const char* subset;
    double expected;
  };
  const std::vector<Target> targets{{"A", 86.0}, {"B", 92.7}, {"C", 92.1},  {"D", 85.7},
                                    {"F", 91.3}, {"I", 79.3}, {"ADI", 90.0}, {"BCF", 95.7}};
  std::vector<std::vector<std::size_t>> subsets;
  for (const auto& t : targets) subsets.push_back(parse_feature_letters(t.subset));
  subsets.push_back(parse_feature_letters("ABCDEFGHI"));
  EvalOptions o;
  o.seed = 42;
  const auto table = ablation(d, Task::wbcd, subsets, o);
  for (const auto& t : targets) {
    const double got = 100 * table.accuracy_of(t.subset);
    report(std::abs(got - t.expected) <= 2.0, "AC4",
           fmt("WBCD {%s}: %.2f%%, expected %.1f +/- 2.0", t.subset, got, t.expected));
  }
  for (const auto& [combo, parts] : {std::pair<std::string, std::string>{"ADI", "ADI"}, {"BCF", "BCF"}}) {
    double best = 0.0;
    for (char p : parts) best = std::max(best, table.accuracy_of(std::string(1, p)));
    const double c = table.accuracy_of(combo);
    report(c > best - 0.01, "AC4", fmt("WBCD {%s} %.2f%% > best constituent %.2f%% - 1.0", combo.c_str(), 100 * c, 100 * best));
  }
  const double all = table.accuracy_of("ABCDEFGHI");
  double best = 0.0;
  for (const auto& row : table.rows)
    if (row.selection != "ABCDEFGHI") best = std::max(best, row.accuracy);
  report(all >= best - 0.005, "AC4", fmt("WBCD all nine %.2f%% >= best tested subset %.2f%% - 0.5", 100 * all, 100 * best));
}

void ac5(const RecordSet& d) {
  const auto plan = make_folds(d.size(), 10, 42);
  std::vector<std::size_t> all(9);
  for (std::size_t j = 0; j < 9; ++j) all[j] = j;
  std::size_t covered = 0, equal = 0;
  for (std::size_t f = 0; f < plan.k; ++f) {
    std::vector<Record> train;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (plan.assignment[i] != f) train.push_back(d.records[i]);
    const auto model = train_binary(train);
    for (auto i : plan.members(f)) {
      const auto& r = d.records[i];
      if (!r.has_missing()) continue;
      ++covered;
      std::vector<std::size_t> reduced;
      std::vector<MassFunction> masses;
      for (std::size_t j = 0; j < 9; ++j)
        if (r.features[j]) {
          reduced.push_back(j);
          masses.push_back(sigmoid_mass(*r.features[j], model.thresholds[j]));
        }
      const auto explicit_mass = combine_all(masses);
      const auto full = classify_binary(r, model, all);
      const auto less = classify_binary(r, model, reduced);
      if (full.label == less.label && full.label == decide_binary(explicit_mass) && full.masses == explicit_mass &&
          less.masses == explicit_mass)
        ++equal;
    }
  }
  report(covered == 16 && equal == 16, "AC5",
         fmt("WBCD missing-value records match reduced-feature recombination: %zu/%zu (16 expected)", equal, covered));
}

RepeatedReport iris_runs(const RecordSet& d) {
  EvalOptions o;
  o.seed = 42;
  return repeated_evaluate(d, Task::iris, o, 10);
}

void ac6(const RecordSet& d) {
  const auto t = Clock::now();
  const auto r = iris_runs(d);
  const double elapsed = seconds_since(t);
  const bool ok = r.mean_accuracy >= 0.94 && r.mean_accuracy <= 0.97 && r.sd_accuracy <= 0.015 && elapsed < 5.0;
  std::string ids;
  for (const auto& [id, n] : r.recurrent)
    if (n * 2 > r.runs.size()) ids += (ids.empty() ? "" : ",") + std::to_string(id);
  report(ok, "AC6",
         fmt("Iris 10 runs: mean %.2f%% in [94.0, 97.0], sd %.2f pp <= 1.5, recurrent errors {%s} (%.3f s, limit 5 s)",
             100 * r.mean_accuracy, 100 * r.sd_accuracy, ids.c_str(), elapsed));
}

void ac7() {
  IrisModel m;
  m.boundaries.ranges = {
      {{4.3, 5.8}, {4.9, 6.9}, {4.9, 7.9}},
      {{2.3, 4.4}, {2.0, 3.3}, {2.2, 3.8}},
      {{1.0, 1.9}, {3.3, 5.1}, {4.5, 6.7}},
      {{0.1, 0.6}, {1.0, 1.7}, {1.4, 2.5}},
  };
  Record r;
  r.id = 86;
  r.features = {6.0, 3.4, 4.5, 1.6};
  r.label = 1;
  const auto d = classify_iris_detailed(r, m);
  const double c3 = d.step1.mass_of(0b100), c23 = d.step1.mass_of(0b110), c13 = d.step1.mass_of(0b101),
               th = d.step1.mass_of(0b111);
  const bool ok = std::abs(c3 - 0.8991) <= 1e-9 && std::abs(c23 - 0.0999) <= 1e-9 && std::abs(c13 - 0.0009) <= 1e-9 &&
                  std::abs(th - 0.0001) <= 1e-9 && d.step1.size() == 4 && d.decided_at == 1 &&
                  d.prediction.label_name == "Virginica";
  report(ok, "AC7",
         fmt("Iris item 86 step 1: c3=%.10f c2|c3=%.10f c1|c3=%.10f theta=%.10f -> %s at step %d", c3, c23, c13, th,
             d.prediction.label_name.c_str(), d.decided_at));
}

EvalReport email_all(const RecordSet& mail) { return evaluate(mail, Task::email, EvalOptions{}); }

void ac8() {
  const auto t = Clock::now();
  const auto mail = generate_email(EmailGenConfig{});
  const auto r = email_all(mail);
  const double elapsed = seconds_since(t);
  const auto& cm = r.confusion;
  const std::size_t detected = cm[1][1], missed = cm[1][0], fp = cm[0][1];
  bool docs_ok = true;
  for (int id : {12, 101}) {
    const auto& rec = mail.records[static_cast<std::size_t>(id - 1)];
    docs_ok = docs_ok && *rec.features[kEmailBenign] == 1.0 &&
              !std::binary_search(r.misclassified.begin(), r.misclassified.end(), id);
  }
  const bool ok = mail.size() == 132 && detected == 42 && missed == 0 && fp == 0 && cm[0][0] == 90 && docs_ok &&
                  elapsed < 1.0;
  report(ok, "AC8",
         fmt("email four signals: %zu/42 worms detected, %zu missed, %zu/90 false positives, ids 12,101 %s (%.4f s, "
             "limit 1 s)",
             detected, missed, fp, docs_ok ? "normal" : "WRONG", elapsed));
}

void ac9() {
  const auto m = email_model_default();
  struct Row {
    int signal, value;
    double n, a;
  };
  const std::vector<Row> rows{{2, 0, 0.9, 0.09}, {2, 1, 0.1, 0.89}, {3, 0, 0.8, 0.19},
                              {3, 1, 0.2, 0.79}, {4, 0, 0.6, 0.39}, {4, 1, 0.4, 0.59}};
  bool ok = m.signal1.threshold == 30.0 && m.signal1.floor == 0.3 && m.signal1.ceiling == 0.7 &&
            m.signal1.theta_mass == 0.01;
  for (const auto& row : rows) {
    Record r;
    r.features = {100.0, 0.0, 0.0, 0.0};
    r.features[static_cast<std::size_t>(row.signal - 1)] = row.value;
    const auto mass = email_signal_mass(r, m, row.signal);
    ok = ok && mass.mass_of(kNormalBit) == row.n && mass.mass_of(kAbnormalBit) == row.a && mass.theta_mass() == 0.01;
  }
  Record at30;
  at30.features = {30.0, 0.0, 0.0, 0.0};
  const auto s1 = email_signal_mass(at30, m, 1);
  ok = ok && std::abs(s1.mass_of(kNormalBit) - 0.5) <= 1e-12 && std::abs(s1.mass_of(kAbnormalBit) - 0.49) <= 1e-12 &&
       std::abs(s1.theta_mass() - 0.01) <= 1e-12;
  report(ok, "AC9",
         fmt("email table rows exact; signal1(30 s) = {%.15g, %.15g, %.15g}", s1.mass_of(kNormalBit),
             s1.mass_of(kAbnormalBit), s1.theta_mass()));
}

void ac10() {
  const auto m = email_model_default();
  const std::vector<int> four{1, 2, 3, 4}, three{1, 3, 4};
  Record r;
  r.features = {0.0, 1.0, 1.0, 0.0};
  std::size_t normal_hits = 0, checked = 0;
  for (int benign = 0; benign <= 1; ++benign) {
    r.features[kEmailBenign] = benign;
    for (int s = 0; s <= 1'000'000; ++s, ++checked) {
      r.features[kEmailInterval] = s;
      if (classify_email(r, m, four).label != kAbnormal) ++normal_hits;
    }
  }
  report(normal_hits == 0, "AC10",
         fmt("spoofed+dangerous sweep 0..1e6 s: %zu/%zu labeled abnormal", checked - normal_hits, checked));

  r.features[kEmailBenign] = 0.0;
  double lo = 1.0, hi = -1.0;
  for (int s = 0; s <= 25; ++s) {
    r.features[kEmailInterval] = s;
    const double margin = abnormal_margin(classify_email(r, m, three).masses);
    lo = std::min(lo, margin);
    hi = std::max(hi, margin);
  }
  report(std::abs(lo) < 0.05 && std::abs(hi) < 0.05, "AC10",
         fmt("signals {1,3,4} short-interval worms (0..25 s): margin m(a)-m(n) in [%.4f, %.4f], |margin| < 0.05", lo, hi));
}

void ac11(const RecordSet& wbcd, const RecordSet& iris) {
  const auto a3 = to_json(wbcd_all(wbcd), false).dump(), b3 = to_json(wbcd_all(wbcd), false).dump();
  const auto a6 = to_json(iris_runs(iris), false).dump(), b6 = to_json(iris_runs(iris), false).dump();
  const auto a8 = to_json(email_all(generate_email(EmailGenConfig{})), false).dump();
  const auto b8 = to_json(email_all(generate_email(EmailGenConfig{})), false).dump();
  EvalOptions par;
  par.workers = 4;
  const auto p3 = to_json(evaluate(wbcd, Task::wbcd, par), false).dump();
  const bool ok = a3 == b3 && a6 == b6 && a8 == b8 && a3 == p3;
  report(ok, "AC11",
         fmt("repeat runs give byte-identical JSON: wbcd %s (%zu bytes, 4 workers %s), iris %s (%zu bytes), email %s "
             "(%zu bytes)",
             a3 == b3 ? "same" : "DIFFER", a3.size(), a3 == p3 ? "same" : "DIFFER", a6 == b6 ? "same" : "DIFFER",
             a6.size(), a8 == b8 ? "same" : "DIFFER", a8.size()));
}

void guarded(const char* id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(false, id, std::string("threw: ") + e.what());
  }
}

}  // namespace

int main() {
  std::optional<RecordSet> wbcd, iris;
  guarded("data", [&] {
    wbcd = load_wbcd(kWbcdPath);
    iris = load_iris(kIrisPath);
  });
  guarded("AC1", ac1);
  guarded("AC2", ac2);
  if (wbcd) {
    guarded("AC3", [&] { ac3(*wbcd); });
    guarded("AC4", [&] { ac4(*wbcd); });
    guarded("AC5", [&] { ac5(*wbcd); });
  }
  if (iris) guarded("AC6", [&] { ac6(*iris); });
  guarded("AC7", ac7);
  guarded("AC8", ac8);
  guarded("AC9", ac9);
  guarded("AC10", ac10);
  if (wbcd && iris) guarded("AC11", [&] { ac11(*wbcd, *iris); });
  std::printf("%d acceptance check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
