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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "support.hpp"

namespace physkg {
namespace {

using testing::sample_graph;

std::set<std::string> codes_of(const std::vector<Diagnostic>& ds) {
  std::set<std::string> out;
  for (const auto& d : ds) out.insert(d.code);
  return out;
}

// Diagnostics produced by graph_from_json, or empty when it succeeds.
std::vector<Diagnostic> load_diagnostics(const nlohmann::json& doc) {
  try {
    graph_from_json(doc);
  } catch (const ValidationError& e) {
    return e.diagnostics();
  }
  return {};
}

Entity param(const std::string& id, const std::string& unit) {
  return {id, id, Category::kParameter, {{"unit", unit}}};
}

TEST(LoadGraph, SampleGraphIsValidAndRich) {
  const auto& g = sample_graph();
  EXPECT_GE(g.entities().size(), 20u);
  std::set<RelationKind> kinds;
  for (const auto& r : g.relations()) kinds.insert(r.kind);
  EXPECT_EQ(kinds.size(), 5u);
  std::set<Category> cats;
  for (const auto& e : g.entities()) cats.insert(e.category);
  EXPECT_EQ(cats.size(), 6u);
  EXPECT_TRUE(validate_graph(g).empty());
}

TEST(LoadGraph, DanglingReferenceIsNamed) {
  nlohmann::json doc = {
      {"entities", {{{"id", "steel"}, {"name", "Steel"}, {"category", "material"}}}},
      {"relations", {{{"source", "steel"}, {"target", "unobtanium"}, {"kind", "CAUSES"}}}}};
  const auto ds = load_diagnostics(doc);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "DANGLING_TARGET");
  EXPECT_EQ(ds[0].subject, "unobtanium");
  EXPECT_NE(ds[0].message.find("unobtanium"), std::string::npos);
}

TEST(LoadGraph, ReportsEveryErrorAtOnce) {
  nlohmann::json doc = {
      {"entities",
       {{{"id", "a"}, {"name", "A"}, {"category", "material"}},
        {{"id", "b"}, {"name", "B"}, {"category", "mineral"}}}},
      {"relations",
       {{{"source", "ghost"}, {"target", "a"}, {"kind", "CAUSES"}},
        {{"source", "a"}, {"target", "phantom"}, {"kind", "CAUSES"}, {"confidence", 0}},
        {{"source", "a"}, {"target", "b"}, {"kind", "MELTS"}}}},
      {"constraints",
       {{{"id", "c1"}, {"parameter", "nothing"}, {"kind", "range"}, {"low", 5}, {"high", 5},
         {"unit", "A"}, {"weight", 1}, {"severity", 1.5}, {"critical", false}}}},
      {"synonyms", {{"ghostly", "ghost"}}}};
  const auto codes = codes_of(load_diagnostics(doc));
  for (const char* c : {"BAD_CATEGORY", "BAD_KIND", "DANGLING_SOURCE", "DANGLING_TARGET",
                        "CONFIDENCE_RANGE", "DANGLING_PARAMETER", "EMPTY_RANGE", "SEVERITY_RANGE",
                        "DANGLING_SYNONYM"}) {
    EXPECT_TRUE(codes.count(c)) << c;
  }
}

TEST(LoadGraph, EmptyGraphIsValid) {
  const auto g = graph_from_json({{"entities", nlohmann::json::array()},
                                  {"relations", nlohmann::json::array()}});
  EXPECT_TRUE(g.entities().empty());
  EXPECT_TRUE(g.relations().empty());
  EXPECT_TRUE(validate_graph(g).empty());
  EXPECT_TRUE(validate_graph(graph_from_json(nlohmann::json::object())).empty());
}

TEST(LoadGraph, MissingFieldsAndWrongTypes) {
  nlohmann::json doc = {{"entities", {{{"name", "No id"}, {"category", "material"}},
                                      {{"id", 7}, {"name", "x"}, {"category", "material"}}}}};
  const auto codes = codes_of(load_diagnostics(doc));
  EXPECT_TRUE(codes.count("MISSING_FIELD"));
  EXPECT_TRUE(codes.count("BAD_TYPE"));
}

TEST(LoadGraph, ParseErrors) {
  EXPECT_THROW(graph_from_json(nlohmann::json::array()), ParseError);
  const auto dir = testing::scratch_dir("graph-parse");
  const auto bad = (dir / "bad.json").string();
  std::ofstream(bad) << "{ not json";
  EXPECT_THROW(load_graph(bad), ParseError);
  EXPECT_THROW(load_graph((dir / "missing.json").string()), ParseError);
}

TEST(LoadGraph, ConfidenceDefaultsToOne) {
  const auto g = graph_from_json(
      {{"entities",
        {{{"id", "a"}, {"name", "A"}, {"category", "property"}},
         {{"id", "b"}, {"name", "B"}, {"category", "outcome"}}}},
       {"relations", {{{"source", "a"}, {"target", "b"}, {"kind", "CAUSES"}, {"note", "n"}}}}});
  ASSERT_EQ(g.relations().size(), 1u);
  EXPECT_EQ(g.relations()[0].confidence, 1.0);
  EXPECT_EQ(g.relations()[0].note, "n");
}

TEST(ValidateGraph, SampleIsClean) { EXPECT_TRUE(validate_graph(sample_graph()).empty()); }

TEST(ValidateGraph, SeverityOutOfRange) {
  Constraint c{"hot", "temperature", ConstraintKind::kUpperBound, std::nullopt, 3000.0, "°C",
               1.0, 1.5, false, std::nullopt};
  KnowledgeGraph g({param("temperature", "°C")}, {}, {c});
  const auto ds = validate_graph(g);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].code, "SEVERITY_RANGE");
  EXPECT_EQ(ds[0].subject, "hot");
}

TEST(ValidateGraph, DegenerateRange) {
  Constraint c{"r", "current", ConstraintKind::kRange, 5.0, 5.0, "A", 1.0, 0.5, false,
               std::nullopt};
  KnowledgeGraph g({param("current", "A")}, {}, {c});
  EXPECT_EQ(codes_of(validate_graph(g)), std::set<std::string>{"EMPTY_RANGE"});
}

TEST(ValidateGraph, RemainingCodes) {
  std::vector<Entity> es = {param("current", "A"), param("current", "A"),
                            {"", "anonymous", Category::kMaterial, {}}};
  std::vector<Constraint> cs = {
      {"w", "current", ConstraintKind::kLowerBound, 0.0, std::nullopt, "A", -1, 0.5, false, {}},
      {"w", "current", ConstraintKind::kLowerBound, std::nullopt, std::nullopt, "A", 1, 0.5,
       false, {}},
      {"u", "current", ConstraintKind::kUpperBound, std::nullopt, 1.0, "V", 1, 0.5, false, {}},
      {"f", "current", ConstraintKind::kFormula, std::nullopt, std::nullopt, "A", 1, 0.5, false,
       std::string("ohms_law")},
      {"x", "current", ConstraintKind::kUpperBound, std::nullopt, 1.0, "furlong", 1, 0.5, false,
       {}}};
  KnowledgeGraph g(es, {}, cs, {{"", "current"}});
  const auto codes = codes_of(validate_graph(g));
  for (const char* c : {"DUPLICATE_ID", "EMPTY_ID", "WEIGHT_RANGE", "DUPLICATE_CONSTRAINT_ID",
                        "MISSING_BOUND", "UNIT_MISMATCH", "UNKNOWN_FORMULA", "UNKNOWN_UNIT",
                        "EMPTY_SYNONYM"}) {
    EXPECT_TRUE(codes.count(c)) << c;
  }
}

TEST(ValidateGraph, EveryAcceptedFileValidatesClean) {
  const auto& g = sample_graph();
  const auto reloaded = graph_from_json(to_json(g));
  EXPECT_TRUE(validate_graph(reloaded).empty());
}

TEST(Neighbors, HighCurrentCausesIncreasedPenetration) {
  const auto ns = neighbors(sample_graph(), "high_current");
  const bool found = std::any_of(ns.begin(), ns.end(), [](const Neighbor& n) {
    return n.relation->kind == RelationKind::kCauses && n.entity->id == "increased_penetration";
  });
  EXPECT_TRUE(found);
}

TEST(Neighbors, MatchesIndependentEnumeration) {
  const auto& g = sample_graph();
  for (const auto& e : g.entities()) {
    std::vector<std::tuple<std::string, RelationKind>> expected;
    for (const auto& r : g.relations()) {
      if (r.source == e.id) expected.emplace_back(r.target, r.kind);
    }
    std::sort(expected.begin(), expected.end());
    std::vector<std::tuple<std::string, RelationKind>> got;
    for (const auto& n : neighbors(g, e.id)) got.emplace_back(n.entity->id, n.relation->kind);
    EXPECT_EQ(got, expected) << e.id;
  }
  // high_current has exactly three outgoing edges.
  const auto hc = neighbors(g, "high_current");
  ASSERT_EQ(hc.size(), 3u);
  EXPECT_EQ(hc[0].entity->id, "burn_through");
  EXPECT_EQ(hc[1].entity->id, "increased_penetration");
  EXPECT_EQ(hc[2].entity->id, "spatter");
}

TEST(Neighbors, IsolatedAndUnknown) {
  KnowledgeGraph g({{"lonely", "Lonely", Category::kMaterial, {}}}, {}, {});
  EXPECT_TRUE(neighbors(g, "lonely").empty());
  EXPECT_THROW(neighbors(g, "nobody"), UnknownEntityError);
}

TEST(Neighbors, DirectedOnly) {
  const auto ns = neighbors(sample_graph(), "increased_penetration");
  for (const auto& n : ns) EXPECT_EQ(n.relation->source, "increased_penetration");
}

TEST(Neighbors, UnionEqualsRelationList) {
  const auto& g = sample_graph();
  std::multiset<std::tuple<std::string, std::string, RelationKind, double>> all, via;
  for (const auto& r : g.relations()) all.insert({r.source, r.target, r.kind, r.confidence});
  for (const auto& e : g.entities()) {
    for (const auto& n : neighbors(g, e.id)) {
      via.insert({n.relation->source, n.relation->target, n.relation->kind, n.relation->confidence});
    }
  }
  EXPECT_EQ(all, via);
}

TEST(ResolveEntity, SynonymsIdsAndMisses) {
  const auto& g = sample_graph();
  EXPECT_EQ(resolve_entity(g, "TIG"), "gtaw");
  EXPECT_EQ(resolve_entity(g, "tig"), "gtaw");
  EXPECT_EQ(resolve_entity(g, "gtaw"), "gtaw");
  EXPECT_EQ(resolve_entity(g, "Gas Tungsten Arc Welding"), "gtaw");
  EXPECT_EQ(resolve_entity(g, "  High Current "), "high_current");
  EXPECT_EQ(resolve_entity(g, "banana"), std::nullopt);
  EXPECT_EQ(resolve_entity(g, ""), std::nullopt);
}

TEST(ResolveEntity, LongestMatchInsidePhrase) {
  const auto& g = sample_graph();
  EXPECT_EQ(resolve_entity(g, "excessive heat input here"), "heat_input");
  EXPECT_EQ(resolve_entity(g, "very high travel speed"), "high_travel_speed");
}

TEST(ResolveEntity, IdempotentOnCanonicalNames) {
  const auto& g = sample_graph();
  for (const auto& e : g.entities()) {
    EXPECT_EQ(resolve_entity(g, e.id), e.id);
    const auto once = resolve_entity(g, e.name);
    ASSERT_TRUE(once.has_value()) << e.name;
    EXPECT_EQ(resolve_entity(g, *once), once);
  }
}

TEST(Scan, LongestMatchAndWordBoundaries) {
  const auto& g = sample_graph();
  const auto ms = g.scan("Heat input rises; preheating helps. steelworks are not steel.");
  ASSERT_GE(ms.size(), 3u);
  EXPECT_EQ(ms[0].entity, "heat_input");
  EXPECT_EQ(ms[0].span, (Span{0, 10}));
  EXPECT_EQ(ms[1].entity, "preheating");
  EXPECT_EQ(ms.back().entity, "steel");
  EXPECT_EQ(ms.size(), 3u);  // "steelworks" is not a mention
}

TEST(Persistence, SaveLoadRoundTrip) {
  const auto& g = sample_graph();
  const auto dir = testing::scratch_dir("graph-roundtrip");
  const auto path = (dir / "kg.json").string();
  save_graph(g, path);
  const auto back = load_graph(path);
  EXPECT_EQ(back, g);
  EXPECT_EQ(to_json(back).dump(), to_json(g).dump());
}

TEST(Persistence, EqualityIgnoresEntityOrder) {
  auto es = sample_graph().entities();
  std::reverse(es.begin(), es.end());
  KnowledgeGraph shuffled(es, sample_graph().relations(), sample_graph().constraints(),
                          sample_graph().synonyms());
  EXPECT_EQ(shuffled, sample_graph());
}

TEST(Enums, RoundTripNames) {
  for (const auto& [k, name] : kRelationKindNames) {
    EXPECT_EQ(parse_relation_kind(name), k);
    EXPECT_EQ(to_string(k), name);
  }
  for (const auto& [c, name] : kCategoryNames) EXPECT_EQ(parse_category(name), c);
  for (const auto& [c, name] : kConstraintKindNames) EXPECT_EQ(parse_constraint_kind(name), c);
  EXPECT_EQ(parse_relation_kind("causes"), std::nullopt);
}

}  // namespace
}  // namespace physkg
