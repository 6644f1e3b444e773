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

// Shared helpers for the test and acceptance binaries: fixture paths, random
// graphs and an exhaustive path oracle that shares no code with the BFS.

#ifndef PHYSKG_TESTS_SUPPORT_HPP_
#define PHYSKG_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "physkg/physkg.hpp"

namespace physkg::testing {

inline std::string data_path(const std::string& name) {
  return std::string(PHYSKG_DATA_DIR) + "/" + name;
}
inline std::string fixture_path(const std::string& name) {
  return std::string(PHYSKG_FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const KnowledgeGraph& sample_graph() {
  static const KnowledgeGraph g = load_graph(data_path("welding_kg.json"));
  return g;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("physkg-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Random directed multigraph over ids n0..n{nodes-1}. Parallel edges differ in
// kind; self-loops are allowed (a simple path can never use them).
inline KnowledgeGraph random_graph(std::mt19937_64& rng, int nodes, int edges) {
  std::vector<Entity> ents;
  for (int i = 0; i < nodes; ++i) {
    ents.push_back({"n" + std::to_string(i), "Node " + std::to_string(i), Category::kProperty, {}});
  }
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_int_distribution<int> conf(1, 10);
  std::set<std::tuple<int, int, int>> seen;
  std::vector<Relation> rels;
  for (int tries = 0; static_cast<int>(rels.size()) < edges && tries < edges * 20; ++tries) {
    const int s = pick(rng), t = pick(rng), k = kind(rng);
    if (!seen.insert({s, t, k}).second) continue;
    Relation r;
    r.source = "n" + std::to_string(s);
    r.target = "n" + std::to_string(t);
    r.kind = static_cast<RelationKind>(k);
    r.confidence = conf(rng) / 10.0;
    rels.push_back(r);
  }
  return KnowledgeGraph(std::move(ents), std::move(rels), {});
}

// Every simple path from a source that the search rules admit, in the
// documented order, truncated to the cap.
//
// Admission: a path ending at a target is found either by extending its
// prefix over a final non-incompatibility edge (needs at most max_depth
// edges; found while expanding the prefix, i.e. at level edges-1) or by
// reaching the target as a queued partial path (needs at most max_depth
// nodes; level = edges).
inline std::vector<ReasoningPath> brute_force_paths(const KnowledgeGraph& g, const ReasoningQuery& q) {
  using Key = std::vector<std::pair<std::string, int>>;
  struct Found {
    std::size_t level;
    Key key;
    ReasoningPath path;
  };
  std::vector<Found> all;
  const auto d = static_cast<std::size_t>(q.max_depth);

  std::vector<std::string> nodes;
  std::vector<Relation> edges;
  auto consider = [&] {
    if (!q.targets.count(nodes.back())) return;
    const std::size_t e = edges.size();
    std::size_t level;
    if (e >= 1 && edges.back().kind != RelationKind::kIncompatibleWith && e <= d) {
      level = e - 1;
    } else if (e + 1 <= d) {
      level = e;
    } else {
      return;
    }
    Key key;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      key.emplace_back(nodes[i], i == 0 ? -1 : static_cast<int>(edges[i - 1].kind));
    }
    double c = 1.0;
    for (const auto& r : edges) c *= r.confidence;
    all.push_back({level, std::move(key), ReasoningPath{nodes, edges, c}});
  };
  // Plain recursive DFS over the raw relation list.
  auto dfs = [&](auto&& self) -> void {
    consider();
    if (edges.size() >= d) return;
    for (const auto& r : g.relations()) {
      if (r.source != nodes.back()) continue;
      if (std::find(nodes.begin(), nodes.end(), r.target) != nodes.end()) continue;
      nodes.push_back(r.target);
      edges.push_back(r);
      self(self);
      nodes.pop_back();
      edges.pop_back();
    }
  };
  for (const auto& s : q.sources) {
    nodes = {s};
    edges.clear();
    dfs(dfs);
  }
  std::sort(all.begin(), all.end(), [](const Found& a, const Found& b) {
    return std::tie(a.level, a.key) < std::tie(b.level, b.key);
  });
  std::vector<ReasoningPath> out;
  for (auto& f : all) {
    if (out.size() >= q.max_paths) break;
    out.push_back(std::move(f.path));
  }
  return out;
}

inline bool same_paths(const std::vector<ReasoningPath>& a, const std::vector<ReasoningPath>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].nodes != b[i].nodes || a[i].edges != b[i].edges) return false;
    if (a[i].confidence != b[i].confidence) return false;
  }
  return true;
}

// Random query over a random graph: 1-2 sources, 1-3 targets, depth 1-4,
// cap 1-12.
inline ReasoningQuery random_query(std::mt19937_64& rng, int nodes) {
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  ReasoningQuery q;
  const int ns = 1 + static_cast<int>(rng() % 2), nt = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < ns; ++i) q.sources.insert("n" + std::to_string(pick(rng)));
  for (int i = 0; i < nt; ++i) q.targets.insert("n" + std::to_string(pick(rng)));
  q.max_depth = 1 + static_cast<int>(rng() % 4);
  q.max_paths = 1 + rng() % 12;
  return q;
}

// Random training pairs with features in [0,1] and physics terms drawn so
// l_pkg covers its whole range.
inline std::vector<TrainingPair> random_training_pairs(std::mt19937_64& rng, std::size_t n,
                                                       std::size_t dims) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<TrainingPair> out(n);
  for (auto& p : out) {
    p.phi_w.resize(dims);
    p.phi_l.resize(dims);
    for (std::size_t k = 0; k < dims; ++k) {
      p.phi_w[k] = u(rng);
      p.phi_l[k] = u(rng);
    }
    p.chosen = {1.5 * u(rng), u(rng), u(rng)};
    p.rejected = {1.5 * u(rng), u(rng), u(rng)};
    p.chosen_violates = p.chosen.v > 0;
    p.rejected_violates = p.rejected.v > 0;
  }
  return out;
}

inline PolicyModel random_policy(std::mt19937_64& rng, std::size_t dims) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  PolicyModel m = zero_policy(0.1 + 0.9 * std::uniform_real_distribution<double>(0, 1)(rng));
  m.feature_names.resize(dims);
  for (std::size_t k = 0; k < dims; ++k) m.feature_names[k] = "f" + std::to_string(k);
  m.theta.assign(dims, 0.0);
  for (auto& t : m.theta) t = u(rng);
  return m;
}

}  // namespace physkg::testing

#endif  // PHYSKG_TESTS_SUPPORT_HPP_
