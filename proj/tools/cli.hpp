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
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dsad/dsad.hpp"

namespace dsad::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kComputation = 4 };

/// Bad flag values detected after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct CliConfig {
  std::string data;
  std::string out;
  std::string format = "text";
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  std::size_t runs = 10;
  unsigned workers = 1;
  std::string features;
  std::string signals = "1234";
  bool ablation = false;
  bool generate = false;
  std::string emails_out;
  std::string model_in;
  std::string dump_model;
  std::string frame;
  std::vector<std::string> masses;
};

namespace detail {

template <class Fn>
auto as_usage(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

inline void write_json_file(const Json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

/// Report to --out in --format plus a text summary on stdout, or the report on stdout.
template <class Report>
void emit(const Report& report, const CliConfig& cfg, ReportFormat format, std::ostream& out) {
  if (cfg.out.empty()) {
    write_report(report, out, format);
  } else {
    write_report(report, std::filesystem::path(cfg.out), format);
    if (format != ReportFormat::text) write_text(report, out);
    out << "report written to " << cfg.out << '\n';
  }
}

inline void add_common(CLI::App* cmd, CliConfig& cfg, bool folds) {
  cmd->add_option("--data", cfg.data, "Input dataset path");
  cmd->add_option("--out", cfg.out, "Write the report to this path");
  cmd->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  if (folds) {
    cmd->add_option("--folds", cfg.folds, "Cross-validation fold count")->capture_default_str();
    cmd->add_option("--workers", cfg.workers, "Worker threads for fold evaluation")->capture_default_str();
  }
}

// Every subcommand output below assumes flags were validated first.

inline int run_wbcd(const CliConfig& cfg, std::ostream& out) {
  if (cfg.data.empty()) throw UsageError("--data is required");
  const auto format = as_usage([&] { return parse_format(cfg.format); });
  if (cfg.folds < 2) throw UsageError("--folds must be at least 2");
  std::vector<std::vector<std::size_t>> subsets;
  if (cfg.ablation) {
    for (const char* s : {"A", "B", "C", "D", "E", "F", "G", "H", "I", "ADI", "BCF", "ABCDEFGHI"})
      subsets.push_back(parse_feature_letters(s));
  } else {
    const std::string subsets_arg = cfg.features.empty() ? "ABCDEFGHI" : cfg.features;
    as_usage([&] {
      for (auto part : text::split(subsets_arg, ',')) subsets.push_back(parse_feature_letters(part));
      return 0;
    });
  }

  const auto data = load_wbcd(cfg.data);
  EvalOptions options;
  options.k = cfg.folds;
  options.seed = cfg.seed;
  options.workers = cfg.workers;
  if (!cfg.dump_model.empty()) write_json_file(Json(train_binary(data.records)), cfg.dump_model);

  if (subsets.size() == 1) {
    options.features = subsets.front();
    emit(evaluate(data, Task::wbcd, options), cfg, format, out);
  } else {
    emit(ablation(data, Task::wbcd, subsets, options), cfg, format, out);
  }
  return kOk;
}

inline int run_iris(const CliConfig& cfg, std::ostream& out) {
  if (cfg.data.empty()) throw UsageError("--data is required");
  const auto format = as_usage([&] { return parse_format(cfg.format); });
  if (cfg.runs < 1) throw UsageError("--runs must be at least 1");
  if (cfg.folds < 2) throw UsageError("--folds must be at least 2");
  std::vector<std::size_t> columns;
  if (!cfg.features.empty())
    for (int d : as_usage([&] { return parse_signal_digits(cfg.features, 4); }))
      columns.push_back(static_cast<std::size_t>(d - 1));

  const auto data = load_iris(cfg.data);
  EvalOptions options;
  options.k = cfg.folds;
  options.seed = cfg.seed;
  options.workers = cfg.workers;
  options.features = columns;
  if (!cfg.dump_model.empty()) write_json_file(Json(train_iris(data.records)), cfg.dump_model);
  emit(repeated_evaluate(data, Task::iris, options, cfg.runs), cfg, format, out);
  return kOk;
}

inline int run_email(const CliConfig& cfg, std::ostream& out) {
  if (cfg.data.empty() == !cfg.generate) throw UsageError("give exactly one of --data or --generate");
  const auto format = as_usage([&] { return parse_format(cfg.format); });
  const auto signals = as_usage([&] { return parse_signal_digits(cfg.signals); });

  EmailModel model = email_model_default();
  if (!cfg.model_in.empty()) {
    std::ifstream in(cfg.model_in);
    if (!in) throw DataError("cannot open '" + cfg.model_in + "'");
    try {
      model = Json::parse(in).get<EmailModel>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("bad email model: ") + e.what());
    }
  }

  RecordSet data;
  EmailGenConfig gen;
  gen.seed = cfg.seed;
  if (cfg.generate) {
    data = generate_email(gen);
    if (!cfg.emails_out.empty()) write_email_csv(data, std::filesystem::path(cfg.emails_out));
  } else {
    data = load_email(cfg.data);
  }
  if (!cfg.dump_model.empty()) write_json_file(Json(model), cfg.dump_model);

  EvalOptions options;
  options.seed = cfg.seed;
  options.email_model = model;
  for (int s : signals) options.features.push_back(static_cast<std::size_t>(s - 1));
  const auto report = evaluate(data, Task::email, options);
  emit(report, cfg, format, out);

  if (format == ReportFormat::text || !cfg.out.empty()) {
    std::vector<int> detected, missed, false_alarms;
    for (const auto& r : data.records) {
      const bool wrong = std::binary_search(report.misclassified.begin(), report.misclassified.end(), r.id);
      if (r.label == kAbnormal)
        (wrong ? missed : detected).push_back(r.id);
      else if (wrong)
        false_alarms.push_back(r.id);
    }
    auto list = [&](const char* title, const std::vector<int>& ids) {
      out << title << " (" << ids.size() << "):";
      for (int id : ids) out << ' ' << id;
      out << '\n';
    };
    list("detected worms", detected);
    list("missed worms", missed);
    list("false positives", false_alarms);
    // worms sent right after legitimate traffic
    out << "burst leader margins m(abnormal)-m(normal):\n";
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      const auto& r = data.records[i];
      if (r.label != kAbnormal || (i > 0 && data.records[i - 1].label == kAbnormal)) continue;
      const auto p = classify_email(r, model, signals);
      char buf[96];
      std::snprintf(buf, sizeof buf, "  id %d (interval %gs): %+.4f -> %s\n", r.id, r.features[kEmailInterval].value_or(0.0),
                    abnormal_margin(p.masses), p.label_name.c_str());
      out << buf;
    }
  }
  return kOk;
}

inline int run_generate(const CliConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw UsageError("--out is required");
  EmailGenConfig gen;
  gen.seed = cfg.seed;
  const auto data = generate_email(gen);
  write_email_csv(data, std::filesystem::path(cfg.out));
  out << "wrote " << data.size() << " messages (" << data.count_label(kAbnormal) << " worms) to " << cfg.out << '\n';
  return kOk;
}

/// "a:0.9,b|c:0.1" -> mass function.
inline MassFunction parse_mass_flag(const Frame& frame, const std::string& entries_arg) {
  std::vector<std::pair<HypothesisSet, double>> entries;
  for (auto item : text::split(entries_arg, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string_view::npos) throw InvalidArgument("mass entry '" + std::string(item) + "' lacks ':'");
    const auto value = text::parse_double(text::trim(item.substr(colon + 1)));
    if (!value) throw InvalidArgument("mass value in '" + std::string(item) + "' is not a number");
    entries.emplace_back(HypothesisSet::parse(frame, text::trim(item.substr(0, colon))), *value);
  }
  return make_mass(frame, entries);
}

inline int run_combine(const CliConfig& cfg, std::ostream& out) {
  if (cfg.frame.empty()) throw UsageError("--frame is required");
  if (cfg.masses.empty()) throw UsageError("at least one --mass is required");
  const auto format = as_usage([&] { return parse_format(cfg.format); });
  if (format == ReportFormat::csv) throw UsageError("combine supports --format text or json");
  std::vector<std::string> labels;
  for (auto l : text::split(cfg.frame, ',')) labels.emplace_back(l);
  const Frame frame = as_usage([&] { return make_frame(labels); });
  std::vector<MassFunction> inputs;
  for (const auto& m : cfg.masses) inputs.push_back(as_usage([&] { return parse_mass_flag(frame, m); }));

  MassFunction acc = inputs.front();
  std::optional<double> last_conflict;
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    auto step = combine_detailed(acc, inputs[i]);
    acc = std::move(step.mass);
    last_conflict = step.conflict;
  }

  if (format == ReportFormat::json) {
    Json intervals = Json::object();
    for (std::size_t c = 0; c < frame.size(); ++c) {
      const auto iv = interval(acc, HypothesisSet::singleton(frame, c));
      intervals[frame.label(c)] = Json{{"bel", iv.bel}, {"pl", iv.pl}, {"uncertainty", iv.uncertainty()}};
    }
    Json j{{"frame", frame.labels()},
           {"inputs", inputs.size()},
           {"masses", masses_to_json(acc)},
           {"conflict", last_conflict ? Json(*last_conflict) : Json(nullptr)},
           {"intervals", intervals}};
    out << j.dump(2) << '\n';
  } else {
    out << "combined: " << to_string(acc) << '\n';
    out << "conflict K (last step): " << (last_conflict ? format_mass_value(*last_conflict) : std::string("n/a")) << '\n';
    for (std::size_t c = 0; c < frame.size(); ++c) {
      const auto iv = interval(acc, HypothesisSet::singleton(frame, c));
      out << "  " << frame.label(c) << ": [Bel " << format_mass_value(iv.bel) << ", Pl " << format_mass_value(iv.pl)
          << "]\n";
    }
  }
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw DataError("cannot write '" + cfg.out + "'");
    f << to_string(acc) << '\n';
  }
  return kOk;
}

}  // namespace detail

/// Entry point; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Dempster-Shafer evidence fusion and anomaly-detection benchmarks", "dsad"};
  app.require_subcommand(1);

  auto* wbcd = app.add_subcommand("wbcd", "Cross-validate the binary fusion detector on the breast-cancer data");
  detail::add_common(wbcd, cfg, true);
  wbcd->add_option("--features", cfg.features, "Feature letters A-I; comma-separate several subsets for an ablation");
  wbcd->add_flag("--ablation", cfg.ablation, "Run every single feature, ADI, BCF and all nine");
  wbcd->add_option("--dump-model", cfg.dump_model, "Write the model trained on all records as JSON");

  auto* iris = app.add_subcommand("iris", "Repeated cross-validation of the three-step classifier on the iris data");
  detail::add_common(iris, cfg, true);
  iris->add_option("--runs", cfg.runs, "Number of complete cross-validations")->capture_default_str();
  iris->add_option("--features", cfg.features, "Feature digits 1-4 (default all)");
  iris->add_option("--dump-model", cfg.dump_model, "Write the model trained on all records as JSON");

  auto* email = app.add_subcommand("email", "Classify email messages by signal fusion");
  detail::add_common(email, cfg, false);
  email->add_flag("--generate", cfg.generate, "Use the synthetic corpus for --seed");
  email->add_option("--signals", cfg.signals, "Signal digits 1-4")->capture_default_str();
  email->add_option("--emails-out", cfg.emails_out, "Also write the generated corpus CSV here");
  email->add_option("--model", cfg.model_in, "Load email model constants from JSON");
  email->add_option("--dump-model", cfg.dump_model, "Write the email model as JSON");

  auto* gen = app.add_subcommand("generate-email", "Write the synthetic email corpus as CSV");
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", cfg.out, "Output CSV path");

  auto* comb = app.add_subcommand("combine", "Combine mass functions with Dempster's rule");
  comb->add_option("--frame", cfg.frame, "Comma-separated hypothesis labels");
  comb->add_option("--mass", cfg.masses, "subset:value,... with subsets as label unions a|b (repeatable)");
  comb->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  comb->add_option("--out", cfg.out, "Also write the combined mass here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (wbcd->parsed()) return detail::run_wbcd(cfg, out);
    if (iris->parsed()) return detail::run_iris(cfg, out);
    if (email->parsed()) return detail::run_email(cfg, out);
    if (gen->parsed()) return detail::run_generate(cfg, out);
    if (comb->parsed()) return detail::run_combine(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const Error& e) {
    err << "computation error: " << e.what() << '\n';
    return kComputation;
  }
  return kUsage;
}

}  // namespace dsad::cli
