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

#ifndef PHYSKG_DATASET_HPP_
#define PHYSKG_DATASET_HPP_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "physkg/errors.hpp"
#include "physkg/graph.hpp"
#include "physkg/physics_score.hpp"

namespace physkg {

inline constexpr double kDefaultConflictMargin = 0.2;

struct PreferencePair {
  std::string id;
  std::string prompt;
  std::string chosen;
  std::string rejected;
  std::map<std::string, std::string> meta;

  friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

enum class PairFlag { kCriticalInChosen, kPhysicsPreferenceConflict };

inline std::string_view to_string(PairFlag f) {
  return f == PairFlag::kCriticalInChosen ? "CRITICAL_IN_CHOSEN" : "PHYSICS_PREFERENCE_CONFLICT";
}

inline std::optional<PairFlag> parse_pair_flag(std::string_view s) {
  if (s == "CRITICAL_IN_CHOSEN") return PairFlag::kCriticalInChosen;
  if (s == "PHYSICS_PREFERENCE_CONFLICT") return PairFlag::kPhysicsPreferenceConflict;
  return std::nullopt;
}

// A preference pair enriched with both sides' physics scoring.
struct AugmentedPair {
  PreferencePair pair;
  ScoredResponse chosen;
  ScoredResponse rejected;
  std::vector<PairFlag> flags;

  bool has(PairFlag f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  }
};

// A problem tied to one input line (1-based) or pair.
struct LineDiagnostic {
  std::size_t line = 0;
  std::string message;
};

template <typename T>
struct Loaded {
  std::vector<T> items;
  std::vector<LineDiagnostic> diagnostics;
};

inline std::vector<std::string> pair_errors(const PreferencePair& p) {
  std::vector<std::string> errs;
  if (p.prompt.empty()) errs.push_back("prompt must be non-empty");
  if (p.chosen == p.rejected) errs.push_back("chosen and rejected must differ");
  return errs;
}

inline std::vector<PairFlag> compute_flags(const ScoredResponse& chosen,
                                           const ScoredResponse& rejected,
                                           double conflict_margin) {
  std::vector<PairFlag> flags;
  if (chosen.has_critical()) flags.push_back(PairFlag::kCriticalInChosen);
  if (rejected.s_pkg - chosen.s_pkg > conflict_margin) {
    flags.push_back(PairFlag::kPhysicsPreferenceConflict);
  }
  return flags;
}

// Scores both sides of every valid pair. Invalid pairs are reported (with
// their 1-based position) and skipped; order is preserved.
inline Loaded<AugmentedPair> augment(const KnowledgeGraph& g,
                                     const std::vector<PreferencePair>& pairs,
                                     const PkgWeights& weights,
                                     double conflict_margin = kDefaultConflictMargin) {
  weights.validate();
  Loaded<AugmentedPair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    auto errs = pair_errors(p);
    if (!errs.empty()) {
      for (auto& e : errs) out.diagnostics.push_back({i + 1, p.id + ": " + e});
      continue;
    }
    AugmentedPair a{p, score_response(g, p.chosen, weights), score_response(g, p.rejected, weights),
                    {}};
    a.flags = compute_flags(a.chosen, a.rejected, conflict_margin);
    out.items.push_back(std::move(a));
  }
  return out;
}

// Exchanges chosen and rejected (texts and scores) and recomputes flags.
// Applying it twice restores the original pair.
inline AugmentedPair swap_sides(const AugmentedPair& a,
                                double conflict_margin = kDefaultConflictMargin) {
  AugmentedPair s = a;
  std::swap(s.pair.chosen, s.pair.rejected);
  std::swap(s.chosen, s.rejected);
  s.flags = compute_flags(s.chosen, s.rejected, conflict_margin);
  return s;
}

enum class FilterPolicy { kKeep, kDropCriticalChosen, kSwapOnConflict };

inline std::optional<FilterPolicy> parse_filter_policy(std::string_view s) {
  if (s == "keep") return FilterPolicy::kKeep;
  if (s == "drop_critical_chosen") return FilterPolicy::kDropCriticalChosen;
  if (s == "swap_on_conflict") return FilterPolicy::kSwapOnConflict;
  return std::nullopt;
}

inline std::vector<AugmentedPair> filter_pairs(const std::vector<AugmentedPair>& augmented,
                                               FilterPolicy policy,
                                               double conflict_margin = kDefaultConflictMargin) {
  std::vector<AugmentedPair> out;
  for (const auto& a : augmented) {
    switch (policy) {
      case FilterPolicy::kKeep:
        out.push_back(a);
        break;
      case FilterPolicy::kDropCriticalChosen:
        if (!a.has(PairFlag::kCriticalInChosen)) out.push_back(a);
        break;
      case FilterPolicy::kSwapOnConflict:
        out.push_back(a.has(PairFlag::kPhysicsPreferenceConflict) ? swap_sides(a, conflict_margin)
                                                                  : a);
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSONL I/O

inline nlohmann::ordered_json to_json(const PreferencePair& p) {
  nlohmann::ordered_json j = {
      {"id", p.id}, {"prompt", p.prompt}, {"chosen", p.chosen}, {"rejected", p.rejected}};
  if (!p.meta.empty()) j["meta"] = p.meta;
  return j;
}

// Parses one input object. `fallback_id` is used when "id" is absent.
// Throws ParseError naming the offending key.
inline PreferencePair pair_from_json(const nlohmann::json& j, const std::string& fallback_id) {
  if (!j.is_object()) throw ParseError("line is not a JSON object");
  auto need = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing key \"") + key + "\"");
    if (!it->is_string()) throw ParseError(std::string("key \"") + key + "\" must be a string");
    return it->get<std::string>();
  };
  PreferencePair p;
  if (auto it = j.find("id"); it != j.end()) {
    if (it->is_string()) {
      p.id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      p.id = std::to_string(it->get<long long>());
    } else {
      throw ParseError("key \"id\" must be a string or integer");
    }
  } else {
    p.id = fallback_id;
  }
  p.prompt = need("prompt");
  p.chosen = need("chosen");
  p.rejected = need("rejected");
  if (auto it = j.find("meta"); it != j.end() && it->is_object()) {
    for (const auto& [k, v] : it->items()) p.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  return p;
}

namespace detail {

// Calls fn(line_number, parsed_json) for every non-blank line; JSON syntax
// errors become diagnostics.
template <typename Fn>
void for_each_jsonl(std::istream& in, std::vector<LineDiagnostic>& diags, Fn&& fn) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      diags.push_back({n, std::string("invalid JSON: ") + e.what()});
      continue;
    }
    fn(n, j);
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

}  // namespace detail

inline Loaded<PreferencePair> read_pairs(std::istream& in) {
  Loaded<PreferencePair> out;
  detail::for_each_jsonl(in, out.diagnostics, [&](std::size_t n, const nlohmann::json& j) {
    try {
      out.items.push_back(pair_from_json(j, "line-" + std::to_string(n)));
    } catch (const Error& e) {
      out.diagnostics.push_back({n, e.what()});
    }
  });
  return out;
}

inline Loaded<PreferencePair> read_pairs(const std::string& path) {
  auto in = detail::open_input(path);
  return read_pairs(in);
}

inline void write_pairs(std::ostream& out, const std::vector<PreferencePair>& pairs) {
  for (const auto& p : pairs) out << to_json(p).dump() << '\n';
}

inline void write_pairs(const std::string& path, const std::vector<PreferencePair>& pairs) {
  auto out = detail::open_output(path);
  write_pairs(out, pairs);
}

inline nlohmann::ordered_json to_json(const AugmentedPair& a) {
  nlohmann::ordered_json flags = nlohmann::ordered_json::array();
  for (auto f : a.flags) flags.push_back(to_string(f));
  nlohmann::ordered_json j = {{"id", a.pair.id},
                              {"prompt", a.pair.prompt},
                              {"chosen", a.pair.chosen},
                              {"rejected", a.pair.rejected},
                              {"chosen_pkg", to_json(a.chosen)},
                              {"rejected_pkg", to_json(a.rejected)},
                              {"flags", std::move(flags)}};
  if (!a.pair.meta.empty()) j["meta"] = a.pair.meta;
  return j;
}

inline AugmentedPair augmented_from_json(const nlohmann::json& j) {
  AugmentedPair a;
  try {
    a.pair = pair_from_json(j, "");
    a.chosen = scored_from_json(j.at("chosen_pkg"));
    a.rejected = scored_from_json(j.at("rejected_pkg"));
    for (const auto& f : j.at("flags")) {
      auto flag = parse_pair_flag(f.get<std::string>());
      if (!flag) throw ParseError("unknown flag " + f.dump());
      a.flags.push_back(*flag);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what());
  }
  return a;
}

inline void write_augmented(std::ostream& out, const std::vector<AugmentedPair>& pairs) {
  for (const auto& a : pairs) out << to_json(a).dump() << '\n';
}

inline void write_augmented(const std::string& path, const std::vector<AugmentedPair>& pairs) {
  auto out = detail::open_output(path);
  write_augmented(out, pairs);
}

inline Loaded<AugmentedPair> read_augmented(std::istream& in) {
  Loaded<AugmentedPair> out;
  detail::for_each_jsonl(in, out.diagnostics, [&](std::size_t n, const nlohmann::json& j) {
    try {
      out.items.push_back(augmented_from_json(j));
    } catch (const Error& e) {
      out.diagnostics.push_back({n, e.what()});
    }
  });
  return out;
}

inline Loaded<AugmentedPair> read_augmented(const std::string& path) {
  auto in = detail::open_input(path);
  return read_augmented(in);
}

}  // namespace physkg

#endif  // PHYSKG_DATASET_HPP_
