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

#ifndef PHYSKG_REASONER_HPP_
#define PHYSKG_REASONER_HPP_

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "physkg/constraints.hpp"
#include "physkg/graph.hpp"

namespace physkg {

// A simple path through the graph. edges[i] connects nodes[i] to nodes[i+1].
struct ReasoningPath {
  std::vector<std::string> nodes;
  std::vector<Relation> edges;
  double confidence = 1.0;

  friend bool operator==(const ReasoningPath&, const ReasoningPath&) = default;
};

struct ReasoningQuery {
  std::set<std::string> sources;
  std::set<std::string> targets;
  int max_depth = 3;
  std::size_t max_paths = 10;

  void validate() const {
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (max_paths < 1) throw std::invalid_argument("max_paths must be >= 1");
    if (sources.empty()) throw std::invalid_argument("query needs at least one source");
    if (targets.empty()) throw std::invalid_argument("query needs at least one target");
  }
};

// Product of edge confidences; 1 for a single-node path.
inline double path_confidence(const ReasoningPath& p) {
  double c = 1.0;
  for (const auto& e : p.edges) c *= e.confidence;
  return c;
}

namespace detail {

// Identity of a path for de-duplication: nodes plus the kind of each edge.
inline std::vector<std::pair<std::string, int>> path_key(const std::vector<std::string>& nodes,
                                                         const std::vector<Relation>& edges) {
  std::vector<std::pair<std::string, int>> key;
  key.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    key.emplace_back(nodes[i], i == 0 ? -1 : static_cast<int>(edges[i - 1].kind));
  }
  return key;
}

inline bool contains_node(const std::vector<std::string>& nodes, const std::string& id) {
  return std::find(nodes.begin(), nodes.end(), id) != nodes.end();
}

}  // namespace detail

// Breadth-first multi-hop search from every source towards any target.
//
// A popped partial path (at most max_depth nodes) is emitted when its last
// node is a target, and extended by one edge for every direct relation
// (except INCOMPATIBLE_WITH) from its last node to a target. Only simple
// paths are explored. Results come in discovery order: BFS level, then the
// node sequence compared element-wise (ties on parallel edges broken by edge
// kind). At most max_paths paths are returned.
inline std::vector<ReasoningPath> find_paths(const KnowledgeGraph& g, const ReasoningQuery& q) {
  q.validate();
  for (const auto* set : {&q.sources, &q.targets}) {
    for (const auto& id : *set) {
      if (!g.contains(id)) throw UnknownEntityError(id);
    }
  }

  struct Partial {
    std::vector<std::string> nodes;
    std::vector<Relation> edges;
  };
  std::deque<Partial> queue;
  for (const auto& s : q.sources) queue.push_back({{s}, {}});

  std::vector<ReasoningPath> paths;
  std::set<std::vector<std::pair<std::string, int>>> emitted;
  auto emit = [&](std::vector<std::string> nodes, std::vector<Relation> edges) {
    if (paths.size() >= q.max_paths) return;
    if (!emitted.insert(detail::path_key(nodes, edges)).second) return;
    ReasoningPath p{std::move(nodes), std::move(edges), 1.0};
    p.confidence = path_confidence(p);
    paths.push_back(std::move(p));
  };

  const auto depth_limit = static_cast<std::size_t>(q.max_depth);
  while (!queue.empty() && paths.size() < q.max_paths) {
    Partial cur = std::move(queue.front());
    queue.pop_front();
    if (cur.nodes.size() > depth_limit) continue;
    const std::string& here = cur.nodes.back();

    if (q.targets.count(here) != 0) emit(cur.nodes, cur.edges);
    for (std::size_t idx : g.outgoing(here)) {
      const Relation& r = g.relations()[idx];
      if (r.kind == RelationKind::kIncompatibleWith) continue;
      if (q.targets.count(r.target) == 0 || detail::contains_node(cur.nodes, r.target)) continue;
      auto nodes = cur.nodes;
      auto edges = cur.edges;
      nodes.push_back(r.target);
      edges.push_back(r);
      emit(std::move(nodes), std::move(edges));
    }

    for (std::size_t idx : g.outgoing(here)) {
      const Relation& r = g.relations()[idx];
      if (!g.contains(r.target) || detail::contains_node(cur.nodes, r.target)) continue;
      Partial next{cur.nodes, cur.edges};
      next.nodes.push_back(r.target);
      next.edges.push_back(r);
      queue.push_back(std::move(next));
    }
  }
  return paths;
}

// Quantities bound to parameters, keyed by parameter id.
using Bindings = std::map<std::string, Quantity>;

namespace detail {

inline bool incompatible(const KnowledgeGraph& g, const std::string& a, const std::string& b) {
  for (const auto& [from, to] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
    for (std::size_t idx : g.outgoing(*from)) {
      const Relation& r = g.relations()[idx];
      if (r.target == *to && r.kind == RelationKind::kIncompatibleWith) return true;
    }
  }
  return false;
}

}  // namespace detail

// Drops paths that traverse an incompatibility (in either stored direction)
// or pass through a parameter whose bound constraints are broken by its
// binding. Survivors keep their order.
inline std::vector<ReasoningPath> prune_paths(const KnowledgeGraph& g,
                                              const std::vector<ReasoningPath>& paths,
                                              const Bindings& bindings) {
  std::vector<ReasoningPath> out;
  for (const auto& p : paths) {
    bool keep = true;
    for (std::size_t i = 0; keep && i < p.edges.size(); ++i) {
      if (p.edges[i].kind == RelationKind::kIncompatibleWith ||
          detail::incompatible(g, p.nodes[i], p.nodes[i + 1])) {
        keep = false;
      }
    }
    for (std::size_t i = 0; keep && i < p.nodes.size(); ++i) {
      auto it = bindings.find(p.nodes[i]);
      if (it != bindings.end() && !check_bounds(g, it->second).empty()) keep = false;
    }
    if (keep) out.push_back(p);
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Relation& r) {
  nlohmann::ordered_json j = {{"source", r.source},
                              {"target", r.target},
                              {"kind", to_string(r.kind)},
                              {"confidence", r.confidence}};
  if (r.note) j["note"] = *r.note;
  return j;
}

inline nlohmann::ordered_json to_json(const ReasoningPath& p) {
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : p.edges) edges.push_back(to_json(e));
  return {{"nodes", p.nodes}, {"edges", std::move(edges)}, {"confidence", p.confidence}};
}

inline ReasoningPath path_from_json(const nlohmann::json& j) {
  ReasoningPath p;
  p.nodes = j.at("nodes").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges")) {
    Relation r;
    r.source = e.at("source").get<std::string>();
    r.target = e.at("target").get<std::string>();
    auto kind = parse_relation_kind(e.at("kind").get<std::string>());
    if (!kind) throw ParseError("unknown relation kind in path");
    r.kind = *kind;
    r.confidence = e.value("confidence", 1.0);
    if (e.contains("note")) r.note = e.at("note").get<std::string>();
    p.edges.push_back(std::move(r));
  }
  p.confidence = j.at("confidence").get<double>();
  return p;
}

}  // namespace physkg

#endif  // PHYSKG_REASONER_HPP_
