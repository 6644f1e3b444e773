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
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

namespace physkg {
namespace {

using testing::sample_graph;

Quantity bound(double v, const std::string& unit, const std::string& param) {
  return Quantity{v, unit, param, {0, 1}};
}

std::vector<std::string> ids_of(const std::vector<Violation>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.constraint);
  return out;
}

Violation wv(double w, double s) { return Violation{"c", "p", {}, w, s, false, ""}; }

TEST(CheckBounds, BelowAbsoluteZeroIsCritical) {
  const auto vs = check_bounds(sample_graph(), bound(-300, "°C", "temperature"));
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].constraint, "absolute_zero_limit");
  EXPECT_TRUE(vs[0].critical);
  EXPECT_EQ(vs[0].observed.value, -300);
  EXPECT_NE(vs[0].message.find("-300"), std::string::npos);
}

TEST(CheckBounds, GtawCurrentInterior) {
  EXPECT_TRUE(check_bounds(sample_graph(), bound(250, "A", "current")).empty());
}

TEST(CheckBounds, EfficiencyAboveOne) {
  EXPECT_EQ(ids_of(check_bounds(sample_graph(), bound(1.2, "1", "efficiency"))),
            std::vector<std::string>{"efficiency_max"});
}

TEST(CheckBounds, BoundarySemantics) {
  const auto& g = sample_graph();
  // lower bounds are strict, upper bounds and ranges inclusive
  EXPECT_EQ(ids_of(check_bounds(g, bound(-273.15, "°C", "temperature"))),
            std::vector<std::string>{"absolute_zero_limit"});
  EXPECT_TRUE(check_bounds(g, bound(-273.0, "°C", "temperature")).empty());
  EXPECT_TRUE(check_bounds(g, bound(1.0, "1", "efficiency")).empty());
  EXPECT_TRUE(check_bounds(g, bound(5, "A", "current")).empty());
  EXPECT_TRUE(check_bounds(g, bound(500, "A", "current")).empty());
  EXPECT_EQ(ids_of(check_bounds(g, bound(4.999, "A", "current"))),
            std::vector<std::string>{"gtaw_current_range"});
  EXPECT_EQ(ids_of(check_bounds(g, bound(500.001, "A", "current"))),
            std::vector<std::string>{"gtaw_current_range"});
  EXPECT_EQ(ids_of(check_bounds(g, bound(0, "A", "current"))),
            (std::vector<std::string>{"current_positive", "gtaw_current_range"}));
}

TEST(CheckBounds, UnboundOrMismatchedUnitsAreSkipped) {
  const auto& g = sample_graph();
  EXPECT_TRUE(check_bounds(g, Quantity{-500, "°C", std::nullopt, {0, 1}}).empty());
  EXPECT_TRUE(check_bounds(g, bound(-500, "V", "temperature")).empty());
}

TEST(CheckBounds, CriticalNeedsFlagAndThreshold) {
  const auto& g = sample_graph();
  const auto neg = check_bounds(g, bound(-5, "A", "current"));
  ASSERT_EQ(neg.size(), 2u);
  EXPECT_TRUE(neg[0].critical);    // current_positive: flagged, severity 0.9
  EXPECT_FALSE(neg[1].critical);   // gtaw_current_range: not flagged
  const auto strict = check_bounds(g, bound(-5, "A", "current"), 0.95);
  EXPECT_FALSE(strict[0].critical);
  // efficiency_max has severity 0.7 but is not flagged critical at any threshold.
  EXPECT_FALSE(check_bounds(g, bound(1.5, "1", "efficiency"), 0.1)[0].critical);
}

TEST(CheckFormulas, ConsistentHeatInput) {
  const auto e = extract(sample_graph(),
                         "With current 100 A, voltage 20 V, efficiency 0.8 and travel speed "
                         "5 mm/s the heat input is 320 J/mm.");
  EXPECT_EQ(e.quantities.size(), 5u);
  EXPECT_TRUE(check_formulas(sample_graph(), e).empty());
}

TEST(CheckFormulas, TenfoldMismatch) {
  const auto e = extract(sample_graph(),
                         "With current 100 A, voltage 20 V, efficiency 80% and travel speed "
                         "5 mm/s the heat input is 3200 J/mm.");
  const auto vs = check_formulas(sample_graph(), e);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].constraint, "heat_input_formula");
  EXPECT_EQ(vs[0].observed.value, 3200);
  EXPECT_NE(vs[0].message.find("320 J/mm"), std::string::npos);
}

TEST(CheckFormulas, ZeroTravelSpeed) {
  const auto e = extract(sample_graph(),
                         "current 100 A, voltage 20 V, efficiency 0.8, travel speed 0 mm/s.");
  const auto vs = check_formulas(sample_graph(), e);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].parameter, "heat_input");
  EXPECT_EQ(vs[0].observed.parameter, "travel_speed");
  EXPECT_EQ(vs[0].observed.value, 0);
}

TEST(CheckFormulas, ToleranceEdgeAndIncompleteInputs) {
  const auto& g = sample_graph();
  const std::string inputs = "current 100 A, voltage 20 V, efficiency 0.8, travel speed 5 mm/s, ";
  // 336 is exactly 5% above 320; only strictly larger deviations count.
  EXPECT_TRUE(check_formulas(g, extract(g, inputs + "heat input 336 J/mm")).empty());
  EXPECT_EQ(check_formulas(g, extract(g, inputs + "heat input 337 J/mm")).size(), 1u);
  PkgWeights loose;
  loose.formula_tolerance = 0.1;
  EXPECT_TRUE(check_formulas(g, extract(g, inputs + "heat input 337 J/mm"), loose).empty());
  EXPECT_TRUE(check_formulas(g, extract(g, "current 100 A, heat input 9999 J/mm")).empty());
}

TEST(ViolationPenalty, ClosedForms) {
  const std::vector<Violation> two = {wv(1.0, 0.9), wv(0.5, 0.4)};
  EXPECT_EQ(violation_penalty(two), 1.1);
  EXPECT_EQ(violation_penalty(std::vector<Violation>{}), 0.0);
  EXPECT_EQ(violation_penalty(std::vector<Violation>{wv(2.0, 0.5)}), 1.0);
}

TEST(Coverage, ClosedForms) {
  const auto& g = sample_graph();
  ExtractionResult e;
  e.mentions = {{"gtaw", "GTAW", {0, 4}}, {"argon", "argon", {10, 15}}};
  e.unresolved = {"inconel"};
  EXPECT_EQ(coverage(g, e), 2.0 / 3.0);
  e.unresolved.clear();
  EXPECT_EQ(coverage(g, e), 1.0);
  EXPECT_EQ(coverage(g, ExtractionResult{}), 0.0);
  // Repeated mentions of one entity count once.
  e.mentions.push_back({"gtaw", "TIG", {20, 23}});
  e.unresolved = {"inconel"};
  EXPECT_EQ(coverage(g, e), 2.0 / 3.0);
}

TEST(Coverage, FromText) {
  const auto& g = sample_graph();
  EXPECT_EQ(coverage(g, extract(g, "Use GTAW with Inconel filler.")), 0.5);
  EXPECT_EQ(coverage(g, extract(g, "nothing relevant here")), 0.0);
}

TEST(ReasoningReward, ClosedForms) {
  auto path = [](double c) { return ReasoningPath{{"a", "b"}, {}, c}; };
  EXPECT_EQ(reasoning_reward(std::vector<ReasoningPath>{path(0.8), path(0.6)}), 0.7);
  EXPECT_EQ(reasoning_reward(std::vector<ReasoningPath>{}), 0.0);
  EXPECT_EQ(reasoning_reward(std::vector<ReasoningPath>{path(1.0)}), 1.0);
}

TEST(PhysicsLoss, ClampsV) {
  const PkgWeights w;
  EXPECT_EQ(physics_loss(0, 1, 1, w), 0.0);
  EXPECT_EQ(physics_loss(3.0, 1, 1, w), 0.5);
  EXPECT_EQ(physics_loss(0, 0, 0, w), 0.5);
}

TEST(PkgWeights, Validation) {
  PkgWeights w;
  EXPECT_NO_THROW(w.validate());
  w.lambda1 = 0.6;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = PkgWeights{};
  w.lambda3 = -0.25;
  w.lambda2 = 0.75;
  EXPECT_THROW(w.validate(), std::invalid_argument);
  w = PkgWeights{};
  w.critical_threshold = 0;
  EXPECT_THROW(w.validate(), std::invalid_argument);
}

TEST(ScoreResponse, CleanResponseWithOnePath) {
  const PkgWeights w;
  const auto s = score_response(sample_graph(), "High current causes spatter.", w);
  EXPECT_EQ(s.v, 0.0);
  EXPECT_EQ(s.c, 1.0);
  ASSERT_EQ(s.paths.size(), 1u);
  EXPECT_EQ(s.r, 0.7);
  EXPECT_DOUBLE_EQ(s.s_pkg, 1.0 - w.lambda3 * (1.0 - 0.7));
}

TEST(ScoreResponse, SubZeroPreheat) {
  const PkgWeights w;
  const auto s = score_response(sample_graph(), "Hold the preheat temperature at -300 °C.", w);
  ASSERT_EQ(s.violations.size(), 1u);
  EXPECT_TRUE(s.has_critical());
  EXPECT_EQ(s.v, 1.0);
  EXPECT_EQ(s.c, 1.0);
  EXPECT_EQ(s.r, 0.0);
  // hand-computed: 0.5 * 1 + 0.25 * 0 + 0.25 * 1
  EXPECT_EQ(s.l_pkg, 0.75);
  EXPECT_EQ(s.s_pkg, 0.25);
  EXPECT_LE(s.s_pkg, 1.0 - w.lambda1 * std::min(1.0, s.v) + 1e-12);
}

TEST(ScoreResponse, EmptyText) {
  const PkgWeights w;
  const auto s = score_response(sample_graph(), "", w);
  EXPECT_EQ(s.v, 0.0);
  EXPECT_EQ(s.c, 0.0);
  EXPECT_EQ(s.r, 0.0);
  EXPECT_EQ(s.l_pkg, w.lambda2 + w.lambda3);
}

TEST(ScoreResponse, ExplicitQuery) {
  ReasoningQuery q;
  q.sources = {"aluminum_welding"};
  q.targets = {"lack_of_fusion"};
  const auto s = score_response(sample_graph(), "Aluminum welding is tricky.", PkgWeights{}, q);
  ASSERT_EQ(s.paths.size(), 1u);
  EXPECT_DOUBLE_EQ(s.r, 0.72);
  q.targets = {"unobtanium"};
  EXPECT_THROW(score_response(sample_graph(), "x", PkgWeights{}, q), UnknownEntityError);
}

TEST(ScoreResponse, BoundViolationPrunesPaths) {
  // current -> heat_input -> distortion exists, but 700 A breaks the GTAW range.
  const auto ok = score_response(sample_graph(), "Set current to 200 A; it causes distortion.", {});
  const auto bad = score_response(sample_graph(), "Set current to 700 A; it causes distortion.", {});
  EXPECT_FALSE(ok.paths.empty());
  EXPECT_TRUE(bad.paths.empty());
}

// Appending a violating statement about an already-bound parameter leaves the
// mention set, bindings and paths unchanged, so only V can move.
TEST(ScoreResponse, AppendingViolationIsMonotone) {
  const auto& g = sample_graph();
  const std::vector<std::string> bases = {
      "Set current to 150 A and keep the preheat temperature near 100 °C. An arc efficiency of 80% "
      "is typical.",
      "Set current to 150 A. Preheating prevents cracking. Keep the preheat temperature near 100 "
      "°C. An arc efficiency of 70% helps. High current causes spatter.",
      "Use GTAW. Set current to 150 A. The preheat temperature is 50 °C and the arc efficiency 0.75."};
  const std::vector<std::string> violations = {" Set current to 900 A.", " Set current to 2 A.",
                                               " Assume an arc efficiency of 130%.",
                                               " Then the temperature drops to -280 °C."};
  const PkgWeights w;
  for (const auto& base : bases) {
    std::string text = base;
    auto prev = score_response(g, text, w);
    for (const auto& v : violations) {
      text += v;
      const auto next = score_response(g, text, w);
      EXPECT_GE(next.v, prev.v) << text;
      EXPECT_LE(next.s_pkg, prev.s_pkg) << text;
      if (prev.v < 1.0) {
        EXPECT_LT(next.s_pkg, prev.s_pkg) << text;
      }
      prev = next;
    }
  }
}

TEST(ScoreResponse, InternalConsistencyAndBounds) {
  const auto& g = sample_graph();
  std::mt19937_64 rng(4);
  const std::vector<std::string> pieces = {
      "High current causes spatter.",       "Set current to 650 A.",
      "Hold the temperature at -300 °C.",   "Proper cleaning prevents porosity.",
      "Use a Inconel filler with GTAW.",    "An arc efficiency of 120% is fine.",
      "Moisture causes porosity.",          "travel speed 0 mm/s",
      "current 100 A, voltage 20 V, efficiency 0.8, travel speed 5 mm/s, heat input 999 J/mm.",
      "Aluminum welding requires AC current.", "Heat input causes distortion."};
  const PkgWeights w;
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int k = static_cast<int>(rng() % 6);
    for (int i = 0; i < k; ++i) text += pieces[rng() % pieces.size()] + " ";
    const auto s = score_response(g, text, w);
    EXPECT_EQ(s.v, violation_penalty(s.violations));
    EXPECT_EQ(s.c, coverage(g, s.extraction));
    EXPECT_EQ(s.r, reasoning_reward(s.paths));
    double l = w.lambda1 * std::min(1.0, s.v) + w.lambda2 * (1 - s.c) + w.lambda3 * (1 - s.r);
    EXPECT_EQ(s.l_pkg, l);
    EXPECT_EQ(s.s_pkg, 1.0 - l);
    EXPECT_GE(s.v, 0.0);
    for (double x : {s.c, s.r, s.s_pkg, s.l_pkg}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    for (const auto& v : s.violations) {
      if (v.critical) {
        EXPECT_GE(v.severity, w.critical_threshold);
      }
    }
    if (s.has_critical()) {
      EXPECT_TRUE(s.has_violation());
    }
  }
}

TEST(ScoredJson, RoundTrip) {
  const auto s = score_response(sample_graph(),
                                "Hold the preheat temperature at -300 °C. High current causes spatter.",
                                PkgWeights{});
  const auto j = to_json(s);
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"text", "v", "c", "r", "l_pkg", "s_pkg", "violations",
                                            "paths"}));
  const auto back = scored_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.violations, s.violations);
  EXPECT_EQ(back.s_pkg, s.s_pkg);
  EXPECT_EQ(to_json(back).dump(), j.dump());
}

}  // namespace
}  // namespace physkg
