// Copyright 2026 The physkg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// physkg: command-line front end for the physics knowledge-graph toolkit.
//
//   physkg kg-validate [graph.json]
//   physkg paths --from high_current --to increased_penetration
//   physkg score --input responses.jsonl
//   physkg augment --input pairs.jsonl --output augmented.jsonl
//   physkg eval --input corpus.jsonl --format text
//   physkg train-toy --input pairs.jsonl --checkpoint model.json --log train.csv
//
// Settings resolve as flags > --config file > built-in defaults. The graph
// path falls back to $PKG_DPO_KG.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "physkg/physkg.hpp"

namespace {

using physkg::Error;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

// Raised for bad flag values or config contents detected after CLI11 parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string kg_path;
  physkg::PkgWeights weights;
  double alpha = 0.7;
  double beta = 0.1;
  double learning_rate = 0.1;
  int epochs = 500;
  int depth = 3;
  std::size_t max_paths = 10;
  std::uint64_t seed = 0;
  double holdout = 0.3;
  double conflict_margin = physkg::kDefaultConflictMargin;
  std::string policy = "keep";
  std::string format = "json";
};

// Values bound to flags; applied over the config only when the flag was given.
struct Flags {
  std::string config_path;
  CliConfig v;
};

template <typename T>
void take(const json& j, const char* key, T& dst) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      dst = it->get<T>();
    } catch (const json::exception&) {
      throw UsageError(std::string("config key '") + key + "' has the wrong type");
    }
  }
}

void apply_config_file(const std::string& path, CliConfig& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("config " + path + " must be a JSON object");
  static const std::set<std::string> known = {
      "kg",   "lambda1", "lambda2", "lambda3", "critical_threshold", "formula_tolerance",
      "alpha", "beta",   "learning_rate", "epochs", "max_depth", "max_paths", "seed",
      "holdout", "conflict_margin", "policy", "format"};
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) throw UsageError("unknown config key '" + k + "'");
  }
  take(j, "kg", c.kg_path);
  take(j, "lambda1", c.weights.lambda1);
  take(j, "lambda2", c.weights.lambda2);
  take(j, "lambda3", c.weights.lambda3);
  take(j, "critical_threshold", c.weights.critical_threshold);
  take(j, "formula_tolerance", c.weights.formula_tolerance);
  take(j, "alpha", c.alpha);
  take(j, "beta", c.beta);
  take(j, "learning_rate", c.learning_rate);
  take(j, "epochs", c.epochs);
  take(j, "max_depth", c.depth);
  take(j, "max_paths", c.max_paths);
  take(j, "seed", c.seed);
  take(j, "holdout", c.holdout);
  take(j, "conflict_margin", c.conflict_margin);
  take(j, "policy", c.policy);
  take(j, "format", c.format);
}

// Every option that can also come from the config file registers an
// overrider here, so resolution is a single pass after parsing.
class Resolver {
 public:
  template <typename T>
  CLI::Option* add(CLI::App& app, const std::string& name, T& flag_value, T CliConfig::*member,
                   const std::string& help) {
    CLI::Option* opt = app.add_option(name, flag_value, help);
    overrides_.push_back([opt, &flag_value, member](CliConfig& c) {
      if (opt->count() > 0) c.*member = flag_value;
    });
    return opt;
  }
  template <typename T>
  CLI::Option* add_weight(CLI::App& app, const std::string& name, T& flag_value,
                          T physkg::PkgWeights::*member, const std::string& help) {
    CLI::Option* opt = app.add_option(name, flag_value, help);
    overrides_.push_back([opt, &flag_value, member](CliConfig& c) {
      if (opt->count() > 0) c.weights.*member = flag_value;
    });
    return opt;
  }
  void apply(CliConfig& c) const {
    for (const auto& f : overrides_) f(c);
  }

 private:
  std::vector<std::function<void(CliConfig&)>> overrides_;
};

void print_error(std::string_view kind, std::string_view message) {
  ordered_json j = {{"error", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

void report_line_diagnostics(const std::vector<physkg::LineDiagnostic>& diags,
                             const std::string& source) {
  for (const auto& d : diags) {
    ordered_json j = {{"source", source}, {"line", d.line}, {"message", d.message}};
    std::cerr << j.dump() << '\n';
  }
}

std::string resolve_kg_path(const CliConfig& c) {
  if (!c.kg_path.empty()) return c.kg_path;
  if (const char* env = std::getenv("PKG_DPO_KG"); env && *env) return env;
  throw UsageError("no knowledge graph given; pass --kg or set PKG_DPO_KG");
}

// Writes to `path`, or standard output when empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  fn(out);
}

physkg::ReportFormat parse_format(const std::string& s) {
  if (s == "json") return physkg::ReportFormat::kJson;
  if (s == "text") return physkg::ReportFormat::kText;
  throw UsageError("unknown format '" + s + "' (expected json or text)");
}

// ---------------------------------------------------------------------------
// Subcommands

int run_kg_validate(const std::string& path) {
  physkg::KnowledgeGraph g;
  try {
    g = physkg::load_graph(path);
  } catch (const physkg::ValidationError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << physkg::to_json(d).dump() << '\n';
    return kExitDomain;
  }
  ordered_json summary = {{"graph", path},
                          {"entities", g.entities().size()},
                          {"relations", g.relations().size()},
                          {"constraints", g.constraints().size()},
                          {"valid", true}};
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_paths(const physkg::KnowledgeGraph& g, const std::vector<std::string>& from,
              const std::vector<std::string>& to, const CliConfig& c) {
  physkg::ReasoningQuery q;
  q.sources.insert(from.begin(), from.end());
  q.targets.insert(to.begin(), to.end());
  q.max_depth = c.depth;
  q.max_paths = c.max_paths;
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  ordered_json out = ordered_json::array();
  for (const auto& p : physkg::find_paths(g, q)) out.push_back(physkg::to_json(p));
  std::cout << out.dump() << '\n';
  return 0;
}

int run_score(const physkg::KnowledgeGraph& g, const std::string& input,
              const std::vector<std::string>& texts, const std::string& output,
              const CliConfig& c) {
  std::vector<std::string> items = texts;
  if (!input.empty()) {
    auto loaded = physkg::read_eval_items(input);
    report_line_diagnostics(loaded.diagnostics, input);
    for (auto& it : loaded.items) items.push_back(std::move(it.text));
  }
  if (items.empty()) throw UsageError("score needs --input or --text");
  with_output(output, [&](std::ostream& out) {
    for (const auto& t : items) {
      out << physkg::to_json(physkg::score_response(g, t, c.weights)).dump() << '\n';
    }
  });
  return 0;
}

int run_augment(const physkg::KnowledgeGraph& g, const std::string& input,
                const std::string& output, const CliConfig& c) {
  const auto policy = physkg::parse_filter_policy(c.policy);
  if (!policy) {
    throw UsageError("unknown policy '" + c.policy +
                     "' (expected keep, drop_critical_chosen or swap_on_conflict)");
  }
  auto pairs = physkg::read_pairs(input);
  report_line_diagnostics(pairs.diagnostics, input);
  auto augmented = physkg::augment(g, pairs.items, c.weights, c.conflict_margin);
  report_line_diagnostics(augmented.diagnostics, input);
  const auto kept = physkg::filter_pairs(augmented.items, *policy, c.conflict_margin);
  with_output(output, [&](std::ostream& out) { physkg::write_augmented(out, kept); });
  return 0;
}

int run_eval(const physkg::KnowledgeGraph& g, const std::string& input, const std::string& output,
             const CliConfig& c) {
  const auto format = parse_format(c.format);
  auto items = physkg::read_eval_items(input);
  report_line_diagnostics(items.diagnostics, input);
  const auto report = physkg::evaluate(g, items.items, c.weights);
  with_output(output, [&](std::ostream& out) { physkg::emit_report(report, out, format); });
  return 0;
}

int run_train_toy(const physkg::KnowledgeGraph& g, const std::string& input,
                  const std::string& checkpoint, const std::string& log, const CliConfig& c) {
  physkg::TrainConfig tc;
  tc.alpha = c.alpha;
  tc.beta = c.beta;
  tc.learning_rate = c.learning_rate;
  tc.epochs = c.epochs;
  tc.seed = c.seed;
  tc.weights = c.weights;
  try {
    tc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(c.holdout >= 0 && c.holdout < 1)) throw UsageError("holdout must lie in [0, 1)");

  auto pairs = physkg::read_pairs(input);
  report_line_diagnostics(pairs.diagnostics, input);
  auto augmented = physkg::augment(g, pairs.items, c.weights, c.conflict_margin);
  report_line_diagnostics(augmented.diagnostics, input);
  const auto all = physkg::make_training_pairs(augmented.items);
  if (all.empty()) throw Error("no usable training pairs in " + input);

  auto [train_idx, test_idx] = physkg::split_holdout(all.size(), c.holdout, c.seed);
  if (train_idx.empty()) throw Error("holdout leaves no training pairs");
  std::vector<physkg::TrainingPair> train_set, test_set;
  for (auto i : train_idx) train_set.push_back(all[i]);
  for (auto i : test_idx) test_set.push_back(all[i]);

  const auto result = physkg::train(train_set, tc);

  if (!checkpoint.empty()) {
    with_output(checkpoint, [&](std::ostream& out) {
      out << physkg::to_json(result.model).dump(2) << '\n';
    });
  }
  if (!log.empty()) {
    with_output(log, [&](std::ostream& out) { physkg::write_training_log(out, result.trajectory); });
  }

  ordered_json summary = {
      {"alpha", tc.alpha},
      {"beta", tc.beta},
      {"epochs", tc.epochs},
      {"seed", tc.seed},
      {"train_pairs", train_set.size()},
      {"heldout_pairs", test_set.size()},
      {"initial_loss", result.trajectory.front().l_total},
      {"final_loss", result.final_loss.l_total},
      {"train_accuracy", physkg::pairwise_accuracy(result.model, train_set)},
      {"heldout_accuracy", test_set.empty() ? ordered_json(nullptr)
                                            : ordered_json(physkg::pairwise_accuracy(
                                                  result.model, test_set))},
      {"heldout_violating_preferred", physkg::violating_preferred(result.model, test_set)},
      {"theta", result.model.theta}};
  std::cout << summary.dump() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics knowledge-graph toolkit: graph validation, reasoning paths, response "
               "scoring, preference augmentation, corpus evaluation and toy training."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Flags flags;
  Resolver resolver;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path,
                    "JSON config file; explicit flags override its values")
        ->check(CLI::ExistingFile);
    resolver.add(*sub, "--kg", flags.v.kg_path, &CliConfig::kg_path,
                 "Knowledge graph JSON (default: $PKG_DPO_KG)");
  };
  auto add_weights = [&](CLI::App* sub) {
    resolver.add_weight(*sub, "--lambda1", flags.v.weights.lambda1, &physkg::PkgWeights::lambda1,
                        "Weight of the violation penalty V (default 0.5)");
    resolver.add_weight(*sub, "--lambda2", flags.v.weights.lambda2, &physkg::PkgWeights::lambda2,
                        "Weight of the coverage term 1-C (default 0.25)");
    resolver.add_weight(*sub, "--lambda3", flags.v.weights.lambda3, &physkg::PkgWeights::lambda3,
                        "Weight of the reasoning term 1-R (default 0.25)");
    resolver.add_weight(*sub, "--critical-threshold", flags.v.weights.critical_threshold,
                        &physkg::PkgWeights::critical_threshold,
                        "Minimum severity for a critical violation (default 0.8)");
    resolver.add_weight(*sub, "--formula-tolerance", flags.v.weights.formula_tolerance,
                        &physkg::PkgWeights::formula_tolerance,
                        "Relative tolerance for stated formula outputs (default 0.05)");
  };

  auto* validate = app.add_subcommand("kg-validate", "Validate a knowledge graph file");
  std::string validate_path;
  add_common(validate);
  validate->add_option("graph", validate_path, "Graph file (default: --kg or $PKG_DPO_KG)");

  auto* paths = app.add_subcommand("paths", "List reasoning paths between entities");
  std::vector<std::string> from, to;
  add_common(paths);
  paths->add_option("--from", from, "Source entity id (repeatable)")->required();
  paths->add_option("--to", to, "Target entity id (repeatable)")->required();
  resolver.add(*paths, "--max-depth", flags.v.depth, &CliConfig::depth,
               "Maximum path length in nodes (default 3)")
      ->check(CLI::Range(1, 64));
  resolver.add(*paths, "--max-paths", flags.v.max_paths, &CliConfig::max_paths,
               "Maximum number of paths returned (default 10)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));

  auto* score = app.add_subcommand("score", "Score responses for physics compliance (JSONL out)");
  std::string score_input, score_output;
  std::vector<std::string> score_texts;
  add_common(score);
  add_weights(score);
  score->add_option("--input", score_input, "JSONL with a 'text' or 'response' field per line");
  score->add_option("--text", score_texts, "Inline response text (repeatable)");
  score->add_option("--output,-o", score_output, "Output file (default: standard output)");

  auto* aug = app.add_subcommand("augment", "Attach physics scores and flags to preference pairs");
  std::string aug_input, aug_output;
  add_common(aug);
  add_weights(aug);
  aug->add_option("--input", aug_input, "Preference pairs JSONL")->required();
  aug->add_option("--output,-o", aug_output, "Output file (default: standard output)");
  resolver.add(*aug, "--policy", flags.v.policy, &CliConfig::policy,
               "keep | drop_critical_chosen | swap_on_conflict (default keep)");
  resolver.add(*aug, "--conflict-margin", flags.v.conflict_margin, &CliConfig::conflict_margin,
               "Score gap that flags a physics/preference conflict (default 0.2)");

  auto* ev = app.add_subcommand("eval", "Corpus metrics: CVR, CRVR, physics score, KGC, RPA, QPA");
  std::string ev_input, ev_output;
  add_common(ev);
  add_weights(ev);
  ev->add_option("--input", ev_input, "Responses JSONL")->required();
  ev->add_option("--output,-o", ev_output, "Output file (default: standard output)");
  resolver.add(*ev, "--format", flags.v.format, &CliConfig::format,
               "json | text (default json)");

  auto* tt = app.add_subcommand("train-toy", "Train the feature-linear policy on preference pairs");
  std::string tt_input, tt_checkpoint, tt_log;
  add_common(tt);
  add_weights(tt);
  tt->add_option("--input", tt_input, "Preference pairs JSONL")->required();
  tt->add_option("--checkpoint", tt_checkpoint, "Write the trained model JSON here");
  tt->add_option("--log", tt_log, "Write the per-epoch CSV loss log here");
  resolver.add(*tt, "--alpha", flags.v.alpha, &CliConfig::alpha,
               "Preference/physics balance in [0,1] (default 0.7)");
  resolver.add(*tt, "--beta", flags.v.beta, &CliConfig::beta, "DPO temperature (default 0.1)");
  resolver.add(*tt, "--lr", flags.v.learning_rate, &CliConfig::learning_rate,
               "Learning rate (default 0.1)");
  resolver.add(*tt, "--epochs", flags.v.epochs, &CliConfig::epochs, "Epochs (default 500)");
  resolver.add(*tt, "--seed", flags.v.seed, &CliConfig::seed, "Seed for the held-out split (default 0)");
  resolver.add(*tt, "--holdout", flags.v.holdout, &CliConfig::holdout,
               "Held-out fraction in [0,1) (default 0.3)");
  resolver.add(*tt, "--conflict-margin", flags.v.conflict_margin, &CliConfig::conflict_margin,
               "Score gap that flags a physics/preference conflict (default 0.2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    CliConfig cfg;
    if (!flags.config_path.empty()) apply_config_file(flags.config_path, cfg);
    resolver.apply(cfg);
    try {
      cfg.weights.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }

    if (validate->parsed()) {
      return run_kg_validate(validate_path.empty() ? resolve_kg_path(cfg) : validate_path);
    }
    const auto g = physkg::load_graph(resolve_kg_path(cfg));
    if (paths->parsed()) return run_paths(g, from, to, cfg);
    if (score->parsed()) return run_score(g, score_input, score_texts, score_output, cfg);
    if (aug->parsed()) return run_augment(g, aug_input, aug_output, cfg);
    if (ev->parsed()) return run_eval(g, ev_input, ev_output, cfg);
    if (tt->parsed()) return run_train_toy(g, tt_input, tt_checkpoint, tt_log, cfg);
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return kExitUsage;
  } catch (const physkg::ParseError& e) {
    print_error("parse", e.what());
    return kExitUsage;
  } catch (const physkg::ValidationError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << physkg::to_json(d).dump() << '\n';
    return kExitDomain;
  } catch (const physkg::UnknownEntityError& e) {
    print_error("unknown_entity", e.what());
    return kExitDomain;
  } catch (const std::exception& e) {
    print_error("domain", e.what());
    return kExitDomain;
  }
  return kExitUsage;
}
