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

#ifndef PHYSKG_GRAPH_HPP_
#define PHYSKG_GRAPH_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "physkg/errors.hpp"
#include "physkg/formulas.hpp"
#include "physkg/units.hpp"

namespace physkg {

enum class Category { kMaterial, kProcess, kParameter, kProperty, kConstraint, kOutcome };
enum class RelationKind { kCauses, kPrevents, kRequires, kIncompatibleWith, kRanges };
enum class ConstraintKind { kLowerBound, kUpperBound, kRange, kFormula };

inline constexpr std::array<std::pair<Category, std::string_view>, 6> kCategoryNames{{
    {Category::kMaterial, "material"},
    {Category::kProcess, "process"},
    {Category::kParameter, "parameter"},
    {Category::kProperty, "property"},
    {Category::kConstraint, "constraint"},
    {Category::kOutcome, "outcome"},
}};

inline constexpr std::array<std::pair<RelationKind, std::string_view>, 5> kRelationKindNames{{
    {RelationKind::kCauses, "CAUSES"},
    {RelationKind::kPrevents, "PREVENTS"},
    {RelationKind::kRequires, "REQUIRES"},
    {RelationKind::kIncompatibleWith, "INCOMPATIBLE_WITH"},
    {RelationKind::kRanges, "RANGES"},
}};

inline constexpr std::array<std::pair<ConstraintKind, std::string_view>, 4> kConstraintKindNames{{
    {ConstraintKind::kLowerBound, "lower_bound"},
    {ConstraintKind::kUpperBound, "upper_bound"},
    {ConstraintKind::kRange, "range"},
    {ConstraintKind::kFormula, "formula"},
}};

namespace detail {

template <typename E, std::size_t N>
std::string_view enum_name(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> enum_parse(const std::array<std::pair<E, std::string_view>, N>& table,
                            std::string_view text) {
  for (const auto& [e, name] : table) {
    if (name == text) return e;
  }
  return std::nullopt;
}

inline bool is_word_char(char c) noexcept {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

inline std::string_view to_string(Category c) { return detail::enum_name(kCategoryNames, c); }
inline std::string_view to_string(RelationKind k) { return detail::enum_name(kRelationKindNames, k); }
inline std::string_view to_string(ConstraintKind k) { return detail::enum_name(kConstraintKindNames, k); }

inline std::optional<Category> parse_category(std::string_view s) {
  return detail::enum_parse(kCategoryNames, s);
}
inline std::optional<RelationKind> parse_relation_kind(std::string_view s) {
  return detail::enum_parse(kRelationKindNames, s);
}
inline std::optional<ConstraintKind> parse_constraint_kind(std::string_view s) {
  return detail::enum_parse(kConstraintKindNames, s);
}

struct Entity {
  std::string id;
  std::string name;
  Category category = Category::kProperty;
  std::map<std::string, std::string> attributes;

  // Canonical unit for parameter entities, from the "unit" attribute.
  std::optional<std::string> unit() const {
    auto it = attributes.find("unit");
    if (it == attributes.end()) return std::nullopt;
    return it->second;
  }
  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Relation {
  std::string source;
  std::string target;
  RelationKind kind = RelationKind::kCauses;
  double confidence = 1.0;
  std::optional<std::string> note;

  friend bool operator==(const Relation&, const Relation&) = default;
};

struct Constraint {
  std::string id;
  std::string parameter;
  ConstraintKind kind = ConstraintKind::kRange;
  std::optional<double> low;
  std::optional<double> high;
  std::string unit;
  double weight = 1.0;
  double severity = 1.0;
  bool critical = false;
  std::optional<std::string> formula;

  bool is_bound() const noexcept { return kind != ConstraintKind::kFormula; }
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// A machine-readable validation finding. `code` is stable (e.g.
// "DANGLING_TARGET"); `subject` names the offending element.
struct Diagnostic {
  std::string code;
  std::string subject;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

inline nlohmann::ordered_json to_json(const Diagnostic& d) {
  return {{"code", d.code}, {"subject", d.subject}, {"message", d.message}};
}

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics)
      : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string summarize(const std::vector<Diagnostic>& ds) {
    std::string msg = "graph validation failed with " + std::to_string(ds.size()) + " error(s)";
    for (const auto& d : ds) msg += "\n  " + d.code + " [" + d.subject + "]: " + d.message;
    return msg;
  }
  std::vector<Diagnostic> diagnostics_;
};

// Lower-cased surface form (id, name or synonym) that resolves to an entity.
struct SurfaceForm {
  std::string text;
  std::string entity;
};

// A word-bounded lexicon hit inside some text.
struct SurfaceMatch {
  std::string entity;
  Span span;
};

// Typed physics knowledge graph. Immutable once constructed; the adjacency
// index and surface lexicon are derived from the constructor arguments.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(std::vector<Entity> entities, std::vector<Relation> relations,
                 std::vector<Constraint> constraints,
                 std::map<std::string, std::string> synonyms = {})
      : entities_(std::move(entities)),
        relations_(std::move(relations)),
        constraints_(std::move(constraints)),
        synonyms_(std::move(synonyms)) {
    build_indices();
  }

  const std::vector<Entity>& entities() const noexcept { return entities_; }
  const std::vector<Relation>& relations() const noexcept { return relations_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::map<std::string, std::string>& synonyms() const noexcept { return synonyms_; }
  const std::vector<SurfaceForm>& lexicon() const noexcept { return lexicon_; }

  bool contains(std::string_view id) const { return index_.find(id) != index_.end(); }

  const Entity* find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &entities_[it->second];
  }

  const Entity& entity(std::string_view id) const {
    const Entity* e = find(id);
    if (e == nullptr) throw UnknownEntityError(std::string(id));
    return *e;
  }

  // Indices into relations() of the edges leaving `id`, ordered by
  // (target id, kind).
  std::span<const std::size_t> outgoing(std::string_view id) const {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) return {};
    return it->second;
  }

  std::vector<const Constraint*> constraints_on(std::string_view parameter) const {
    std::vector<const Constraint*> out;
    for (const auto& c : constraints_) {
      if (c.parameter == parameter) out.push_back(&c);
    }
    return out;
  }

  // Longest-match, left-to-right, non-overlapping scan of `text` for
  // surface forms at word boundaries (ASCII case-insensitive).
  std::vector<SurfaceMatch> scan(std::string_view text) const {
    std::vector<SurfaceMatch> out;
    const std::string lowered = detail::ascii_lower(text);
    std::size_t i = 0;
    while (i < lowered.size()) {
      if (i > 0 && detail::is_word_char(lowered[i - 1]) && detail::is_word_char(lowered[i])) {
        ++i;
        continue;
      }
      bool matched = false;
      for (const auto& form : lexicon_) {
        const std::size_t n = form.text.size();
        if (n == 0 || i + n > lowered.size()) continue;
        if (lowered.compare(i, n, form.text) != 0) continue;
        if (i + n < lowered.size() && detail::is_word_char(lowered[i + n]) &&
            detail::is_word_char(form.text.back())) {
          continue;
        }
        out.push_back({form.entity, {i, i + n}});
        i += n;
        matched = true;
        break;
      }
      if (!matched) ++i;
    }
    return out;
  }

  friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    auto sorted = [](std::vector<Entity> es) {
      std::sort(es.begin(), es.end(),
                [](const Entity& x, const Entity& y) { return x.id < y.id; });
      return es;
    };
    return sorted(a.entities_) == sorted(b.entities_) && a.relations_ == b.relations_ &&
           a.constraints_ == b.constraints_ && a.synonyms_ == b.synonyms_;
  }

 private:
  void build_indices() {
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      index_.emplace(entities_[i].id, i);  // first occurrence wins
    }
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      adjacency_[relations_[i].source].push_back(i);
    }
    for (auto& [id, edges] : adjacency_) {
      std::stable_sort(edges.begin(), edges.end(), [&](std::size_t x, std::size_t y) {
        return std::tie(relations_[x].target, relations_[x].kind) <
               std::tie(relations_[y].target, relations_[y].kind);
      });
    }

    // Entity ids and names take precedence over synonyms; among entities the
    // smallest id wins a collision.
    std::map<std::string, std::string> forms;
    std::vector<const Entity*> by_id;
    for (const auto& e : entities_) by_id.push_back(&e);
    std::sort(by_id.begin(), by_id.end(),
              [](const Entity* x, const Entity* y) { return x->id < y->id; });
    for (const Entity* e : by_id) {
      std::string spaced = e->id;
      std::replace(spaced.begin(), spaced.end(), '_', ' ');
      for (const auto& f : {e->id, spaced, e->name}) {
        if (!f.empty()) forms.emplace(detail::ascii_lower(f), e->id);
      }
    }
    for (const auto& [surface, id] : synonyms_) {
      if (!surface.empty()) forms.emplace(detail::ascii_lower(surface), id);
    }
    lexicon_.clear();
    for (auto& [text, id] : forms) lexicon_.push_back({text, id});
    std::stable_sort(lexicon_.begin(), lexicon_.end(),
                     [](const SurfaceForm& x, const SurfaceForm& y) {
                       return x.text.size() > y.text.size();
                     });
  }

  std::vector<Entity> entities_;
  std::vector<Relation> relations_;
  std::vector<Constraint> constraints_;
  std::map<std::string, std::string> synonyms_;

  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> adjacency_;
  std::vector<SurfaceForm> lexicon_;
};

// Checks every KnowledgeGraph invariant and reports all findings.
inline std::vector<Diagnostic> validate_graph(const KnowledgeGraph& g) {
  std::vector<Diagnostic> out;
  auto emit = [&](std::string code, std::string subject, std::string message) {
    out.push_back({std::move(code), std::move(subject), std::move(message)});
  };

  std::map<std::string, int> seen;
  for (const auto& e : g.entities()) {
    if (e.id.empty()) {
      emit("EMPTY_ID", e.name, "entity has an empty id");
      continue;
    }
    if (++seen[e.id] == 2) emit("DUPLICATE_ID", e.id, "entity id '" + e.id + "' is not unique");
  }

  for (std::size_t i = 0; i < g.relations().size(); ++i) {
    const Relation& r = g.relations()[i];
    const std::string subject = "relations[" + std::to_string(i) + "]";
    if (!g.contains(r.source)) {
      emit("DANGLING_SOURCE", r.source, subject + " source '" + r.source + "' is not an entity");
    }
    if (!g.contains(r.target)) {
      emit("DANGLING_TARGET", r.target, subject + " target '" + r.target + "' is not an entity");
    }
    if (!(r.confidence > 0 && r.confidence <= 1)) {
      emit("CONFIDENCE_RANGE", subject, "confidence must lie in (0, 1]");
    }
  }

  std::map<std::string, int> seen_constraints;
  for (const auto& c : g.constraints()) {
    const std::string& subject = c.id;
    if (c.id.empty()) emit("EMPTY_ID", c.parameter, "constraint has an empty id");
    if (!c.id.empty() && ++seen_constraints[c.id] == 2) {
      emit("DUPLICATE_CONSTRAINT_ID", c.id, "constraint id '" + c.id + "' is not unique");
    }
    const Entity* param = g.find(c.parameter);
    if (param == nullptr) {
      emit("DANGLING_PARAMETER", c.parameter,
           "constraint '" + c.id + "' references unknown parameter '" + c.parameter + "'");
    }
    if (!(c.weight >= 0) || !std::isfinite(c.weight)) {
      emit("WEIGHT_RANGE", subject, "weight must be finite and >= 0");
    }
    if (!(c.severity >= 0 && c.severity <= 1)) {
      emit("SEVERITY_RANGE", subject, "severity must lie in [0, 1]");
    }
    if (!is_canonical_unit(c.unit)) {
      emit("UNKNOWN_UNIT", subject, "unit '" + c.unit + "' is not a canonical unit");
    } else if (param != nullptr && param->unit() && *param->unit() != c.unit) {
      emit("UNIT_MISMATCH", subject,
           "constraint unit '" + c.unit + "' differs from parameter unit '" + *param->unit() + "'");
    }
    switch (c.kind) {
      case ConstraintKind::kLowerBound:
        if (!c.low) emit("MISSING_BOUND", subject, "lower_bound constraint needs 'low'");
        break;
      case ConstraintKind::kUpperBound:
        if (!c.high) emit("MISSING_BOUND", subject, "upper_bound constraint needs 'high'");
        break;
      case ConstraintKind::kRange:
        if (!c.low || !c.high) {
          emit("MISSING_BOUND", subject, "range constraint needs 'low' and 'high'");
        } else if (!(*c.low < *c.high)) {
          emit("EMPTY_RANGE", subject, "range constraint needs low < high");
        }
        break;
      case ConstraintKind::kFormula:
        if (!c.formula || find_formula(*c.formula) == nullptr) {
          emit("UNKNOWN_FORMULA", subject,
               "formula constraint names unregistered formula '" + c.formula.value_or("") + "'");
        }
        break;
    }
  }

  for (const auto& [surface, id] : g.synonyms()) {
    if (surface.empty()) emit("EMPTY_SYNONYM", id, "synonym surface form is empty");
    if (!g.contains(id)) {
      emit("DANGLING_SYNONYM", id, "synonym '" + surface + "' targets unknown entity '" + id + "'");
    }
  }
  return out;
}

// Outgoing (relation, target entity) pairs of `id`, sorted by target id then
// kind. Edges whose target is missing from the graph are skipped.
struct Neighbor {
  const Relation* relation;
  const Entity* entity;
};

inline std::vector<Neighbor> neighbors(const KnowledgeGraph& g, std::string_view id) {
  if (!g.contains(id)) throw UnknownEntityError(std::string(id));
  std::vector<Neighbor> out;
  for (std::size_t idx : g.outgoing(id)) {
    const Relation& r = g.relations()[idx];
    if (const Entity* e = g.find(r.target)) out.push_back({&r, e});
  }
  return out;
}

// Maps a surface string to an entity id: an exact (case-insensitive) name,
// id or synonym match first, else the longest word-bounded match inside it.
inline std::optional<std::string> resolve_entity(const KnowledgeGraph& g, std::string_view surface) {
  std::size_t b = 0, e = surface.size();
  while (b < e && std::isspace(static_cast<unsigned char>(surface[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(surface[e - 1]))) --e;
  const std::string key = detail::ascii_lower(surface.substr(b, e - b));
  if (key.empty()) return std::nullopt;
  for (const auto& form : g.lexicon()) {
    if (form.text == key) return form.entity;
  }
  const SurfaceMatch* best = nullptr;
  const auto matches = g.scan(key);
  for (const auto& m : matches) {
    if (best == nullptr || m.span.size() > best->span.size()) best = &m;
  }
  if (best == nullptr) return std::nullopt;
  return best->entity;
}

// ---------------------------------------------------------------------------
// JSON persistence

inline nlohmann::ordered_json to_json(const KnowledgeGraph& g) {
  using nlohmann::ordered_json;
  ordered_json doc;
  ordered_json entities = ordered_json::array();
  for (const auto& e : g.entities()) {
    ordered_json attrs = ordered_json::object();
    for (const auto& [k, v] : e.attributes) attrs[k] = v;
    entities.push_back({{"id", e.id},
                        {"name", e.name},
                        {"category", to_string(e.category)},
                        {"attributes", std::move(attrs)}});
  }
  ordered_json relations = ordered_json::array();
  for (const auto& r : g.relations()) {
    ordered_json j = {{"source", r.source},
                      {"target", r.target},
                      {"kind", to_string(r.kind)},
                      {"confidence", r.confidence}};
    if (r.note) j["note"] = *r.note;
    relations.push_back(std::move(j));
  }
  ordered_json constraints = ordered_json::array();
  for (const auto& c : g.constraints()) {
    ordered_json j = {{"id", c.id}, {"parameter", c.parameter}, {"kind", to_string(c.kind)}};
    if (c.low) j["low"] = *c.low;
    if (c.high) j["high"] = *c.high;
    j["unit"] = c.unit;
    j["weight"] = c.weight;
    j["severity"] = c.severity;
    j["critical"] = c.critical;
    if (c.formula) j["formula"] = *c.formula;
    constraints.push_back(std::move(j));
  }
  ordered_json synonyms = ordered_json::object();
  for (const auto& [k, v] : g.synonyms()) synonyms[k] = v;
  doc["entities"] = std::move(entities);
  doc["relations"] = std::move(relations);
  doc["constraints"] = std::move(constraints);
  doc["synonyms"] = std::move(synonyms);
  return doc;
}

namespace detail {

// Field readers that record schema problems instead of throwing, so one load
// reports every bad field.
class FieldReader {
 public:
  explicit FieldReader(std::vector<Diagnostic>& out) : out_(out) {}

  std::optional<std::string> string(const nlohmann::json& obj, const char* key,
                                    const std::string& where, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) missing(key, where);
      return std::nullopt;
    }
    if (!it->is_string()) {
      bad_type(key, where, "string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<double> number(const nlohmann::json& obj, const char* key,
                               const std::string& where, bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) missing(key, where);
      return std::nullopt;
    }
    if (!it->is_number()) {
      bad_type(key, where, "number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<bool> boolean(const nlohmann::json& obj, const char* key,
                              const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      missing(key, where);
      return std::nullopt;
    }
    if (!it->is_boolean()) {
      bad_type(key, where, "bool");
      return std::nullopt;
    }
    return it->get<bool>();
  }

  void emit(std::string code, std::string subject, std::string message) {
    out_.push_back({std::move(code), std::move(subject), std::move(message)});
  }

 private:
  void missing(const char* key, const std::string& where) {
    emit("MISSING_FIELD", where, std::string("missing required key '") + key + "'");
  }
  void bad_type(const char* key, const std::string& where, const char* want) {
    emit("BAD_TYPE", where, std::string("key '") + key + "' must be a " + want);
  }
  std::vector<Diagnostic>& out_;
};

inline const nlohmann::json& array_or_empty(const nlohmann::json& doc, const char* key,
                                            FieldReader& reader) {
  static const nlohmann::json kEmpty = nlohmann::json::array();
  auto it = doc.find(key);
  if (it == doc.end()) return kEmpty;
  if (!it->is_array()) {
    reader.emit("BAD_TYPE", key, std::string("top-level '") + key + "' must be an array");
    return kEmpty;
  }
  return *it;
}

}  // namespace detail

// Builds a graph from a parsed document. Throws ParseError if the document is
// not an object and ValidationError listing every schema or invariant
// breach otherwise.
inline KnowledgeGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("knowledge graph document must be a JSON object");
  std::vector<Diagnostic> diags;
  detail::FieldReader read(diags);

  std::vector<Entity> entities;
  const auto& jentities = detail::array_or_empty(doc, "entities", read);
  for (std::size_t i = 0; i < jentities.size(); ++i) {
    const auto& j = jentities[i];
    const std::string where = "entities[" + std::to_string(i) + "]";
    if (!j.is_object()) {
      read.emit("BAD_TYPE", where, "entity must be an object");
      continue;
    }
    Entity e;
    auto id = read.string(j, "id", where);
    if (!id) continue;
    e.id = *id;
    e.name = read.string(j, "name", where).value_or(e.id);
    if (auto cat = read.string(j, "category", where)) {
      if (auto parsed = parse_category(*cat)) {
        e.category = *parsed;
      } else {
        read.emit("BAD_CATEGORY", e.id, "unknown category '" + *cat + "'");
      }
    }
    if (auto it = j.find("attributes"); it != j.end()) {
      if (!it->is_object()) {
        read.emit("BAD_TYPE", e.id, "attributes must be an object of strings");
      } else {
        for (const auto& [k, v] : it->items()) {
          if (v.is_string()) {
            e.attributes[k] = v.get<std::string>();
          } else {
            read.emit("BAD_TYPE", e.id, "attribute '" + k + "' must be a string");
          }
        }
      }
    }
    entities.push_back(std::move(e));
  }

  std::vector<Relation> relations;
  const auto& jrelations = detail::array_or_empty(doc, "relations", read);
  for (std::size_t i = 0; i < jrelations.size(); ++i) {
    const auto& j = jrelations[i];
    const std::string where = "relations[" + std::to_string(i) + "]";
    if (!j.is_object()) {
      read.emit("BAD_TYPE", where, "relation must be an object");
      continue;
    }
    auto source = read.string(j, "source", where);
    auto target = read.string(j, "target", where);
    auto kind = read.string(j, "kind", where);
    auto confidence = read.number(j, "confidence", where, /*required=*/false);
    auto note = read.string(j, "note", where, /*required=*/false);
    if (!source || !target || !kind) continue;
    auto parsed = parse_relation_kind(*kind);
    if (!parsed) {
      read.emit("BAD_KIND", where, "unknown relation kind '" + *kind + "'");
      continue;
    }
    relations.push_back({*source, *target, *parsed, confidence.value_or(1.0), note});
  }

  std::vector<Constraint> constraints;
  const auto& jconstraints = detail::array_or_empty(doc, "constraints", read);
  for (std::size_t i = 0; i < jconstraints.size(); ++i) {
    const auto& j = jconstraints[i];
    const std::string where = "constraints[" + std::to_string(i) + "]";
    if (!j.is_object()) {
      read.emit("BAD_TYPE", where, "constraint must be an object");
      continue;
    }
    Constraint c;
    auto id = read.string(j, "id", where);
    auto parameter = read.string(j, "parameter", where);
    auto kind = read.string(j, "kind", where);
    c.low = read.number(j, "low", where, false);
    c.high = read.number(j, "high", where, false);
    auto unit = read.string(j, "unit", where);
    auto weight = read.number(j, "weight", where);
    auto severity = read.number(j, "severity", where);
    auto critical = read.boolean(j, "critical", where);
    c.formula = read.string(j, "formula", where, false);
    if (!id || !parameter || !kind || !unit || !weight || !severity || !critical) continue;
    auto parsed = parse_constraint_kind(*kind);
    if (!parsed) {
      read.emit("BAD_KIND", *id, "unknown constraint kind '" + *kind + "'");
      continue;
    }
    c.id = *id;
    c.parameter = *parameter;
    c.kind = *parsed;
    c.unit = *unit;
    c.weight = *weight;
    c.severity = *severity;
    c.critical = *critical;
    constraints.push_back(std::move(c));
  }

  std::map<std::string, std::string> synonyms;
  if (auto it = doc.find("synonyms"); it != doc.end()) {
    if (!it->is_object()) {
      read.emit("BAD_TYPE", "synonyms", "synonyms must be an object of strings");
    } else {
      for (const auto& [k, v] : it->items()) {
        if (v.is_string()) {
          synonyms[k] = v.get<std::string>();
        } else {
          read.emit("BAD_TYPE", "synonyms", "synonym '" + k + "' must map to a string");
        }
      }
    }
  }

  KnowledgeGraph g(std::move(entities), std::move(relations), std::move(constraints),
                   std::move(synonyms));
  auto invariant_diags = validate_graph(g);
  diags.insert(diags.end(), invariant_diags.begin(), invariant_diags.end());
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return g;
}

inline KnowledgeGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open knowledge graph file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return graph_from_json(doc);
}

inline void save_graph(const KnowledgeGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write knowledge graph file: " + path);
  out << to_json(g).dump(2) << '\n';
}

}  // namespace physkg

#endif  // PHYSKG_GRAPH_HPP_
