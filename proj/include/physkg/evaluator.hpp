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

#ifndef PHYSKG_EVALUATOR_HPP_
#define PHYSKG_EVALUATOR_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "physkg/dataset.hpp"
#include "physkg/errors.hpp"
#include "physkg/graph.hpp"
#include "physkg/physics_score.hpp"
#include "physkg/reasoner.hpp"

namespace physkg {

struct EvalItem {
  std::string prompt;
  std::string text;
};

struct EvalOptions {
  int relevance_radius = 2;  // hops around prompt mentions that count as relevant
  int claim_depth = 2;       // longest path that may confirm a claim
};

struct ResponseRow {
  std::size_t index = 0;
  std::size_t violations = 0;
  bool critical = false;
  double s_pkg = 0.0;
  std::optional<double> kgc;
  std::size_t bound_quantities = 0;
  std::size_t accurate_quantities = 0;
  std::size_t claims = 0;
  std::size_t confirmed_claims = 0;

  friend bool operator==(const ResponseRow&, const ResponseRow&) = default;
};

// Corpus metrics. A metric is absent when its denominator is empty.
struct MetricsReport {
  std::size_t n = 0;
  std::optional<double> cvr;
  std::optional<double> crvr;
  std::optional<double> physics_score;
  std::optional<double> kgc;
  std::optional<double> rpa;
  std::optional<double> qpa;
  std::size_t kgc_items = 0;  // responses with a non-empty relevant set
  std::size_t rpa_items = 0;  // parameter-bound quantities
  std::size_t qpa_items = 0;  // extracted claims
  std::vector<ResponseRow> per_response;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Reads {"prompt": str, "text": str} lines; "response" is accepted in place
// of "text" and the prompt may be omitted.
inline Loaded<EvalItem> read_eval_items(std::istream& in) {
  Loaded<EvalItem> out;
  detail::for_each_jsonl(in, out.diagnostics, [&](std::size_t n, const nlohmann::json& j) {
    if (!j.is_object()) {
      out.diagnostics.push_back({n, "line is not a JSON object"});
      return;
    }
    const char* key = j.contains("text") ? "text" : "response";
    if (!j.contains(key) || !j.at(key).is_string()) {
      out.diagnostics.push_back({n, "missing string key \"text\""});
      return;
    }
    EvalItem item;
    item.text = j.at(key).get<std::string>();
    if (j.contains("prompt") && j.at("prompt").is_string()) item.prompt = j.at("prompt").get<std::string>();
    out.items.push_back(std::move(item));
  });
  return out;
}

inline Loaded<EvalItem> read_eval_items(const std::string& path) {
  auto in = detail::open_input(path);
  return read_eval_items(in);
}

// Entities within `radius` hops (either edge direction) of the seeds,
// seeds included.
inline std::set<std::string> neighborhood(const KnowledgeGraph& g, const std::set<std::string>& seeds,
                                          int radius) {
  std::map<std::string, std::vector<std::string>> undirected;
  for (const auto& r : g.relations()) {
    undirected[r.source].push_back(r.target);
    undirected[r.target].push_back(r.source);
  }
  std::set<std::string> seen;
  for (const auto& s : seeds) {
    if (g.contains(s)) seen.insert(s);
  }
  std::set<std::string> frontier = seen;
  for (int hop = 0; hop < radius && !frontier.empty(); ++hop) {
    std::set<std::string> next;
    for (const auto& id : frontier) {
      for (const auto& nb : undirected[id]) {
        if (g.contains(nb) && seen.insert(nb).second) next.insert(nb);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// A claim holds when the graph has the same relation directly, or (for
// CAUSES/PREVENTS) a causal path of at most `depth` hops whose sign matches:
// each PREVENTS edge flips the sign.
inline bool claim_confirmed(const KnowledgeGraph& g, const Claim& claim, int depth) {
  for (std::size_t idx : g.outgoing(claim.source)) {
    const Relation& r = g.relations()[idx];
    if (r.target == claim.target && r.kind == claim.kind) return true;
  }
  if (claim.kind != RelationKind::kCauses && claim.kind != RelationKind::kPrevents) return false;
  if (!g.contains(claim.source) || !g.contains(claim.target)) return false;
  ReasoningQuery q{{claim.source}, {claim.target}, depth, 1000};
  const bool want_negative = claim.kind == RelationKind::kPrevents;
  for (const auto& p : find_paths(g, q)) {
    bool causal = !p.edges.empty();
    bool negative = false;
    for (const auto& e : p.edges) {
      if (e.kind == RelationKind::kPrevents) {
        negative = !negative;
      } else if (e.kind != RelationKind::kCauses) {
        causal = false;
      }
    }
    if (causal && negative == want_negative) return true;
  }
  return false;
}

inline MetricsReport evaluate(const KnowledgeGraph& g, const std::vector<EvalItem>& items,
                              const PkgWeights& weights, const EvalOptions& options = {}) {
  MetricsReport rep;
  rep.n = items.size();
  std::size_t violating = 0, critical = 0, accurate = 0, confirmed = 0;
  double s_sum = 0.0, kgc_sum = 0.0;

  for (std::size_t i = 0; i < items.size(); ++i) {
    const ScoredResponse s = score_response(g, items[i].text, weights);
    ResponseRow row;
    row.index = i;
    row.violations = s.violations.size();
    row.critical = s.has_critical();
    row.s_pkg = s.s_pkg;
    violating += s.has_violation() ? 1 : 0;
    critical += row.critical ? 1 : 0;
    s_sum += s.s_pkg;

    const auto prompt_ids = extract(g, items[i].prompt).entity_ids();
    const auto relevant = neighborhood(g, prompt_ids, options.relevance_radius);
    if (!relevant.empty()) {
      std::size_t hit = 0;
      for (const auto& id : s.extraction.entity_ids()) hit += relevant.count(id);
      row.kgc = static_cast<double>(hit) / static_cast<double>(relevant.size());
      kgc_sum += *row.kgc;
      ++rep.kgc_items;
    }

    for (const auto& q : s.extraction.quantities) {
      if (!q.parameter) continue;
      ++row.bound_quantities;
      const bool broken = std::any_of(s.violations.begin(), s.violations.end(), [&](const Violation& v) {
        return v.observed.span == q.span && v.observed.parameter == q.parameter;
      });
      if (!broken) ++row.accurate_quantities;
    }
    rep.rpa_items += row.bound_quantities;
    accurate += row.accurate_quantities;

    for (const auto& claim : s.extraction.claims) {
      ++row.claims;
      if (claim_confirmed(g, claim, options.claim_depth)) ++row.confirmed_claims;
    }
    rep.qpa_items += row.claims;
    confirmed += row.confirmed_claims;
    rep.per_response.push_back(row);
  }

  if (rep.n > 0) {
    const double n = static_cast<double>(rep.n);
    rep.cvr = static_cast<double>(violating) / n;
    rep.crvr = static_cast<double>(critical) / n;
    rep.physics_score = s_sum / n;
  }
  if (rep.kgc_items > 0) rep.kgc = kgc_sum / static_cast<double>(rep.kgc_items);
  if (rep.rpa_items > 0) rep.rpa = static_cast<double>(accurate) / static_cast<double>(rep.rpa_items);
  if (rep.qpa_items > 0) rep.qpa = static_cast<double>(confirmed) / static_cast<double>(rep.qpa_items);
  return rep;
}

// ---------------------------------------------------------------------------
// Report emission

namespace detail {

inline nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.per_response) {
    rows.push_back({{"index", row.index},
                    {"violations", row.violations},
                    {"critical", row.critical},
                    {"s_pkg", row.s_pkg},
                    {"kgc", detail::optional_number(row.kgc)},
                    {"bound_quantities", row.bound_quantities},
                    {"accurate_quantities", row.accurate_quantities},
                    {"claims", row.claims},
                    {"confirmed_claims", row.confirmed_claims}});
  }
  return {{"n", r.n},
          {"cvr", detail::optional_number(r.cvr)},
          {"crvr", detail::optional_number(r.crvr)},
          {"physics_score", detail::optional_number(r.physics_score)},
          {"kgc", detail::optional_number(r.kgc)},
          {"rpa", detail::optional_number(r.rpa)},
          {"qpa", detail::optional_number(r.qpa)},
          {"kgc_items", r.kgc_items},
          {"rpa_items", r.rpa_items},
          {"qpa_items", r.qpa_items},
          {"per_response", std::move(rows)}};
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  MetricsReport r;
  try {
    r.n = j.at("n").get<std::size_t>();
    r.cvr = detail::read_optional(j, "cvr");
    r.crvr = detail::read_optional(j, "crvr");
    r.physics_score = detail::read_optional(j, "physics_score");
    r.kgc = detail::read_optional(j, "kgc");
    r.rpa = detail::read_optional(j, "rpa");
    r.qpa = detail::read_optional(j, "qpa");
    r.kgc_items = j.at("kgc_items").get<std::size_t>();
    r.rpa_items = j.at("rpa_items").get<std::size_t>();
    r.qpa_items = j.at("qpa_items").get<std::size_t>();
    for (const auto& row : j.at("per_response")) {
      ResponseRow x;
      x.index = row.at("index").get<std::size_t>();
      x.violations = row.at("violations").get<std::size_t>();
      x.critical = row.at("critical").get<bool>();
      x.s_pkg = row.at("s_pkg").get<double>();
      x.kgc = detail::read_optional(row, "kgc");
      x.bound_quantities = row.at("bound_quantities").get<std::size_t>();
      x.accurate_quantities = row.at("accurate_quantities").get<std::size_t>();
      x.claims = row.at("claims").get<std::size_t>();
      x.confirmed_claims = row.at("confirmed_claims").get<std::size_t>();
      r.per_response.push_back(x);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

enum class ReportFormat { kJson, kText };

inline void write_report_text(std::ostream& out, const MetricsReport& r) {
  auto cell = [](const std::optional<double>& v, bool percent) {
    if (!v) return std::string("n/a");
    char buf[32];
    if (percent) {
      std::snprintf(buf, sizeof buf, "%.1f%%", *v * 100.0);
    } else {
      std::snprintf(buf, sizeof buf, "%.4f", *v);
    }
    return std::string(buf);
  };
  auto line = [&](std::string_view label, const std::string& value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-42.*s %10s\n", static_cast<int>(label.size()), label.data(),
                  value.c_str());
    out << buf;
  };
  out << "Evaluation report (n = " << r.n << ")\n\n";
  out << "Physics compliance\n";
  line("Constraint Violation Rate (CVR)", cell(r.cvr, true));
  line("Critical Violation Rate (CRVR)", cell(r.crvr, true));
  line("Physics Score", cell(r.physics_score, false));
  out << "\nDomain knowledge integration\n";
  line("Knowledge Graph Coverage (KGC)", cell(r.kgc, true));
  line("Relevant Parameter Accuracy (RPA)", cell(r.rpa, true));
  line("Qualitative Physics Alignment (QPA)", cell(r.qpa, true));
  out << "\nItems: " << r.kgc_items << " responses with relevant entities, " << r.rpa_items
      << " bound quantities, " << r.qpa_items << " claims\n";
}

inline void emit_report(const MetricsReport& r, std::ostream& out, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    out << to_json(r).dump(2) << '\n';
  } else {
    write_report_text(out, r);
  }
}

inline void emit_report(const MetricsReport& r, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report: " + path);
  emit_report(r, out, format);
  if (!out) throw Error("failed writing report: " + path);
}

// ---------------------------------------------------------------------------
// Judge records and rubric bands

inline constexpr std::array<std::string_view, 5> kJudgeCriteria = {
    "thermal_physics", "metallurgical_accuracy", "technical_precision", "physics_explanations",
    "practical_application"};

class JudgeError : public Error {
 public:
  using Error::Error;
};

struct JudgeScores {
  std::array<double, 5> criteria{};
  double total = 0.0;

  double mean() const { return total / static_cast<double>(criteria.size()); }
  friend bool operator==(const JudgeScores&, const JudgeScores&) = default;
};

struct JudgeRecord {
  JudgeScores a;
  JudgeScores b;
  char preferred = 'A';
  std::string reasoning;

  friend bool operator==(const JudgeRecord&, const JudgeRecord&) = default;
};

inline JudgeRecord judge_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw JudgeError("judge record must be a JSON object");
  auto number = [&](const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw JudgeError("missing key \"" + key + "\"");
    if (!it->is_number()) throw JudgeError("key \"" + key + "\" must be a number");
    return it->get<double>();
  };
  JudgeRecord rec;
  for (const auto& [side, scores] : {std::pair{"a", &rec.a}, std::pair{"b", &rec.b}}) {
    const std::string prefix = std::string("response_") + side + "_";
    double sum = 0.0;
    for (std::size_t k = 0; k < kJudgeCriteria.size(); ++k) {
      const std::string key = prefix + std::string(kJudgeCriteria[k]);
      const double v = number(key);
      if (!(v >= 1 && v <= 20)) {
        throw JudgeError("key \"" + key + "\" out of range [1, 20]: " + detail::format_number(v));
      }
      scores->criteria[k] = v;
      sum += v;
    }
    scores->total = number(prefix + "total");
    if (std::abs(scores->total - sum) > 1e-9) {
      throw JudgeError("key \"" + prefix + "total\" is " + detail::format_number(scores->total) +
                       " but criteria sum to " + detail::format_number(sum));
    }
  }
  auto pref = j.find("preferred_response");
  if (pref == j.end() || !pref->is_string()) {
    throw JudgeError("key \"preferred_response\" must be \"A\" or \"B\"");
  }
  const auto p = pref->get<std::string>();
  if (p != "A" && p != "B") throw JudgeError("key \"preferred_response\" must be \"A\" or \"B\"");
  rec.preferred = p.front();
  auto reasoning = j.find("reasoning");
  if (reasoning == j.end() || !reasoning->is_string()) {
    throw JudgeError("key \"reasoning\" must be a string");
  }
  rec.reasoning = reasoning->get<std::string>();
  return rec;
}

// Accepts one record object or an array of them.
inline std::vector<JudgeRecord> parse_judge(const nlohmann::json& doc) {
  std::vector<JudgeRecord> out;
  if (doc.is_array()) {
    for (const auto& j : doc) out.push_back(judge_from_json(j));
  } else {
    out.push_back(judge_from_json(doc));
  }
  return out;
}

inline std::vector<JudgeRecord> parse_judge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return parse_judge(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

enum class RubricBand { kVeryPoor, kPoor, kFair, kGood, kExcellent };

inline std::string_view to_string(RubricBand b) {
  switch (b) {
    case RubricBand::kVeryPoor: return "Very Poor";
    case RubricBand::kPoor: return "Poor";
    case RubricBand::kFair: return "Fair";
    case RubricBand::kGood: return "Good";
    case RubricBand::kExcellent: return "Excellent";
  }
  return "?";
}

// Band of a 0-20 criterion score after rounding to the nearest integer.
inline RubricBand rubric_band(double score) {
  if (!(score >= 0 && score <= 20)) {
    throw std::out_of_range("rubric score must lie in [0, 20]: " + detail::format_number(score));
  }
  const auto s = std::lround(score);
  if (s <= 3) return RubricBand::kVeryPoor;
  if (s <= 7) return RubricBand::kPoor;
  if (s <= 11) return RubricBand::kFair;
  if (s <= 15) return RubricBand::kGood;
  return RubricBand::kExcellent;
}

}  // namespace physkg

#endif  // PHYSKG_EVALUATOR_HPP_
