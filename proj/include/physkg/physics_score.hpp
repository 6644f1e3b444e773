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

#ifndef PHYSKG_PHYSICS_SCORE_HPP_
#define PHYSKG_PHYSICS_SCORE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "physkg/constraints.hpp"
#include "physkg/extraction.hpp"
#include "physkg/formulas.hpp"
#include "physkg/graph.hpp"
#include "physkg/reasoner.hpp"

namespace physkg {

// Mixing weights of the per-response physics loss
//   l = lambda1 * min(1, V) + lambda2 * (1 - C) + lambda3 * (1 - R).
struct PkgWeights {
  double lambda1 = 0.5;
  double lambda2 = 0.25;
  double lambda3 = 0.25;
  double critical_threshold = kDefaultCriticalThreshold;
  double formula_tolerance = 0.05;  // relative

  void validate() const {
    if (!(lambda1 >= 0 && lambda2 >= 0 && lambda3 >= 0)) {
      throw std::invalid_argument("lambda weights must be >= 0");
    }
    if (std::abs(lambda1 + lambda2 + lambda3 - 1.0) > 1e-9) {
      throw std::invalid_argument("lambda weights must sum to 1");
    }
    if (!(critical_threshold > 0 && critical_threshold <= 1)) {
      throw std::invalid_argument("critical_threshold must lie in (0, 1]");
    }
    if (!(formula_tolerance >= 0)) throw std::invalid_argument("formula_tolerance must be >= 0");
  }
};

// Sum of weight * severity over all violations.
inline double violation_penalty(std::span<const Violation> violations) {
  double v = 0.0;
  for (const auto& x : violations) v += x.weight * x.severity;
  return v;
}

// Fraction of a response's candidate entities that are graph entities.
// Candidates are the unique resolved entity ids plus the unresolved
// off-graph candidates; an empty candidate set scores 0.
inline double coverage(const KnowledgeGraph& g, const ExtractionResult& e) {
  std::size_t in_graph = 0;
  const auto ids = e.entity_ids();
  for (const auto& id : ids) {
    if (g.contains(id)) ++in_graph;
  }
  const std::size_t total = ids.size() + e.unresolved.size();
  return total == 0 ? 0.0 : static_cast<double>(in_graph) / static_cast<double>(total);
}

// Mean path confidence; 0 with no paths.
inline double reasoning_reward(std::span<const ReasoningPath> paths) {
  if (paths.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : paths) sum += p.confidence;
  return sum / static_cast<double>(paths.size());
}

inline double physics_loss(double v, double c, double r, const PkgWeights& w) {
  return w.lambda1 * std::min(1.0, v) + w.lambda2 * (1.0 - c) + w.lambda3 * (1.0 - r);
}

// Cross-checks stated quantities against governing equations. For every
// formula constraint whose inputs are all bound in the extraction, an input
// outside the formula's domain yields one violation; otherwise every stated
// output value deviating from the computed one by more than the relative
// tolerance yields one violation.
inline std::vector<Violation> check_formulas(const KnowledgeGraph& g, const ExtractionResult& e,
                                             const PkgWeights& w = {}) {
  std::vector<Violation> out;
  auto first_bound = [&](std::string_view param) -> const Quantity* {
    for (const auto& q : e.quantities) {
      if (q.parameter && *q.parameter == param) return &q;
    }
    return nullptr;
  };
  for (const auto& c : g.constraints()) {
    if (c.kind != ConstraintKind::kFormula || !c.formula) continue;
    const FormulaSpec* spec = find_formula(*c.formula);
    if (spec == nullptr) continue;
    std::array<const Quantity*, 4> inputs{};
    bool complete = true;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      inputs[k] = first_bound(spec->inputs[k]);
      if (inputs[k] == nullptr || inputs[k]->unit != spec->input_units[k]) complete = false;
    }
    if (!complete) continue;

    double computed = 0.0;
    try {
      computed = spec->evaluate(inputs[0]->value, inputs[1]->value, inputs[2]->value,
                                inputs[3]->value);
    } catch (const DomainError& err) {
      const Quantity* culprit = inputs[0];
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        if (!spec->input_domain[k](inputs[k]->value)) {
          culprit = inputs[k];
          break;
        }
      }
      out.push_back(make_violation(c, *culprit, w.critical_threshold,
                                   std::string(err.what()) + " (" + c.id + ")"));
      continue;
    }
    for (const auto& q : e.quantities) {
      if (!q.parameter || *q.parameter != c.parameter || q.unit != spec->output_unit) continue;
      const double rel = std::abs(q.value - computed) / std::abs(computed);
      if (rel > w.formula_tolerance) {
        out.push_back(make_violation(
            c, q, w.critical_threshold,
            c.parameter + " stated as " + detail::format_quantity(q.value, q.unit) +
                " but inputs give " + detail::format_quantity(computed, spec->output_unit) +
                " (" + c.id + ")"));
      }
    }
  }
  return out;
}

struct ScoredResponse {
  std::string text;
  ExtractionResult extraction;
  std::vector<Violation> violations;
  std::vector<ReasoningPath> paths;
  double v = 0.0;
  double c = 0.0;
  double r = 0.0;
  double l_pkg = 0.0;
  double s_pkg = 0.0;

  bool has_violation() const noexcept { return !violations.empty(); }
  bool has_critical() const noexcept {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& x) { return x.critical; });
  }
};

// First bound quantity per parameter.
inline Bindings bindings_of(const ExtractionResult& e) {
  Bindings b;
  for (const auto& q : e.quantities) {
    if (q.parameter) b.emplace(*q.parameter, q);
  }
  return b;
}

// Full single-response pipeline: extraction, bound checks on every bound
// quantity, formula checks, path search and pruning, then V, C, R and the
// physics loss. Without an explicit query the mentioned outcome entities are
// the targets and the other mentioned entities the sources.
inline ScoredResponse score_response(const KnowledgeGraph& g, std::string_view text,
                                     const PkgWeights& weights,
                                     const std::optional<ReasoningQuery>& query = std::nullopt) {
  weights.validate();
  ScoredResponse s;
  s.text = std::string(text);
  s.extraction = extract(g, text);

  for (const auto& q : s.extraction.quantities) {
    auto found = check_bounds(g, q, weights.critical_threshold);
    s.violations.insert(s.violations.end(), found.begin(), found.end());
  }
  auto formula = check_formulas(g, s.extraction, weights);
  s.violations.insert(s.violations.end(), formula.begin(), formula.end());

  std::vector<ReasoningPath> found;
  if (query) {
    found = find_paths(g, *query);
  } else {
    ReasoningQuery q;
    for (const auto& id : s.extraction.entity_ids()) {
      const Entity* ent = g.find(id);
      if (ent == nullptr) continue;
      (ent->category == Category::kOutcome ? q.targets : q.sources).insert(id);
    }
    if (!q.sources.empty() && !q.targets.empty()) found = find_paths(g, q);
  }
  s.paths = prune_paths(g, found, bindings_of(s.extraction));

  s.v = violation_penalty(s.violations);
  s.c = coverage(g, s.extraction);
  s.r = reasoning_reward(s.paths);
  s.l_pkg = physics_loss(s.v, s.c, s.r, weights);
  s.s_pkg = 1.0 - s.l_pkg;
  return s;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::ordered_json to_json(const Quantity& q) {
  nlohmann::ordered_json j = {{"value", q.value}, {"unit", q.unit}};
  j["parameter"] = q.parameter ? nlohmann::ordered_json(*q.parameter) : nlohmann::ordered_json(nullptr);
  j["span"] = {q.span.begin, q.span.end};
  return j;
}

inline Quantity quantity_from_json(const nlohmann::json& j) {
  Quantity q;
  q.value = j.at("value").get<double>();
  q.unit = j.at("unit").get<std::string>();
  if (j.contains("parameter") && !j.at("parameter").is_null()) {
    q.parameter = j.at("parameter").get<std::string>();
  }
  if (j.contains("span")) {
    q.span = {j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
  }
  return q;
}

inline nlohmann::ordered_json to_json(const Violation& v) {
  return {{"constraint", v.constraint}, {"parameter", v.parameter},
          {"observed", to_json(v.observed)}, {"weight", v.weight},
          {"severity", v.severity},     {"critical", v.critical},
          {"message", v.message}};
}

inline Violation violation_from_json(const nlohmann::json& j) {
  return Violation{j.at("constraint").get<std::string>(), j.at("parameter").get<std::string>(),
                   quantity_from_json(j.at("observed")),  j.at("weight").get<double>(),
                   j.at("severity").get<double>(),        j.at("critical").get<bool>(),
                   j.at("message").get<std::string>()};
}

inline nlohmann::ordered_json to_json(const ScoredResponse& s) {
  nlohmann::ordered_json violations = nlohmann::ordered_json::array();
  for (const auto& v : s.violations) violations.push_back(to_json(v));
  nlohmann::ordered_json paths = nlohmann::ordered_json::array();
  for (const auto& p : s.paths) paths.push_back(to_json(p));
  return {{"text", s.text},   {"v", s.v},
          {"c", s.c},         {"r", s.r},
          {"l_pkg", s.l_pkg}, {"s_pkg", s.s_pkg},
          {"violations", std::move(violations)}, {"paths", std::move(paths)}};
}

// Restores every serialised field; the extraction is not persisted and comes
// back empty.
inline ScoredResponse scored_from_json(const nlohmann::json& j) {
  ScoredResponse s;
  s.text = j.at("text").get<std::string>();
  s.v = j.at("v").get<double>();
  s.c = j.at("c").get<double>();
  s.r = j.at("r").get<double>();
  s.l_pkg = j.at("l_pkg").get<double>();
  s.s_pkg = j.at("s_pkg").get<double>();
  for (const auto& v : j.at("violations")) s.violations.push_back(violation_from_json(v));
  for (const auto& p : j.at("paths")) s.paths.push_back(path_from_json(p));
  return s;
}

}  // namespace physkg

#endif  // PHYSKG_PHYSICS_SCORE_HPP_
