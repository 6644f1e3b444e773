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

#ifndef PHYSKG_SYNTHETIC_HPP_
#define PHYSKG_SYNTHETIC_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "physkg/dataset.hpp"

namespace physkg {

// Knobs for the synthetic welding preference set. Pair kinds cycle through a
// fixed pattern of `period` slots: the first `quality_slots` are quality
// pairs (both sides physically clean, the chosen one more detailed), the
// next `contrast_slots` are contrast pairs (clean chosen, violating
// rejected) and any remaining slots are conflict pairs, where the human
// label prefers a long, on-topic answer that breaks a constraint.
struct SyntheticOptions {
  std::size_t period = 25;
  std::size_t quality_slots = 15;
  std::size_t contrast_slots = 8;
};

namespace detail {

struct Scenario {
  std::string_view prompt;
  std::string_view intro;
};

inline constexpr std::array<Scenario, 6> kScenarios{{
    {"How should I set current and voltage for GTAW on thin steel plate?",
     "For GTAW on thin steel plate, set current and voltage with care."},
    {"What causes porosity when welding aluminum with GTAW?",
     "Porosity when welding aluminum with GTAW has a few clear causes."},
    {"How do I avoid cracking in thick steel sections?",
     "To avoid cracking in thick steel sections, control the heat."},
    {"Which travel speed and arc efficiency should I assume for GMAW heat input?",
     "For GMAW heat input, pick the travel speed and arc efficiency first."},
    {"Why does high current change penetration in GTAW?",
     "In GTAW, high current changes penetration in a predictable way."},
    {"What preheat temperature should I use before welding steel?",
     "Before welding steel, choose the preheat temperature from the steel grade."},
}};

class SentenceSource {
 public:
  explicit SentenceSource(std::uint64_t seed) : rng_(seed) {}

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  int between(int lo, int hi, int step) {
    return lo + step * static_cast<int>(pick(static_cast<std::size_t>((hi - lo) / step + 1)));
  }

  std::string valid() {
    switch (pick(13)) {
      case 0:
        return "Set current to " + std::to_string(between(90, 250, 10)) + " A and voltage to " +
               std::to_string(between(12, 28, 1)) + " V.";
      case 1: return "High current causes increased penetration.";
      case 2: return "Proper cleaning prevents porosity.";
      case 3: return "Aluminum welding requires AC current.";
      case 4: return "Preheating prevents cracking.";
      case 5:
        return "Keep the preheat temperature near " + std::to_string(between(50, 200, 10)) + " °C.";
      case 6: return "An arc efficiency of " + std::to_string(between(60, 85, 5)) + "% is typical.";
      case 7:
        return "A travel speed of " + std::to_string(between(3, 9, 1)) +
               " mm/s keeps the bead even.";
      case 8: return "Contamination causes porosity.";
      case 9: return "High travel speed causes lack of fusion.";
      case 10: return "Argon gives a stable arc.";
      case 11: return "Moisture causes porosity.";
      default: return "Heat input causes distortion.";
    }
  }

  std::string violating() {
    switch (pick(4)) {
      case 0: return "Set current to " + std::to_string(between(550, 900, 50)) + " A for GTAW.";
      case 1:
        return "Hold the preheat temperature at " + std::to_string(between(-400, -280, 20)) + " °C.";
      case 2: return "Assume an arc efficiency of " + std::to_string(between(110, 150, 10)) + "%.";
      default: return "Use a welding current of " + std::to_string(-between(20, 120, 10)) + " A.";
    }
  }

  std::string valid_run(std::size_t lo, std::size_t hi) {
    std::string out;
    const std::size_t n = lo + pick(hi - lo + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (!out.empty()) out += ' ';
      out += valid();
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
};

inline std::string join(std::string a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + " " + b;
}

}  // namespace detail

// Deterministic synthetic preference pairs over the sample welding graph.
inline std::vector<PreferencePair> generate_preference_pairs(std::size_t n, std::uint64_t seed,
                                                             const SyntheticOptions& opt = {}) {
  detail::SentenceSource src(seed);
  std::vector<PreferencePair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& sc = detail::kScenarios[src.pick(detail::kScenarios.size())];
    const std::size_t slot = i % opt.period;
    PreferencePair p;
    p.id = "syn-" + std::to_string(i);
    p.prompt = std::string(sc.prompt);
    if (slot < opt.quality_slots) {
      p.meta["kind"] = "quality";
      p.chosen = detail::join(std::string(sc.intro), src.valid_run(4, 6));
      p.rejected = src.valid_run(1, 2);
    } else if (slot < opt.quality_slots + opt.contrast_slots) {
      p.meta["kind"] = "contrast";
      p.chosen = detail::join(std::string(sc.intro), src.valid_run(3, 4));
      p.rejected = detail::join(src.valid_run(1, 2), src.violating());
    } else {
      p.meta["kind"] = "conflict";
      p.chosen = detail::join(detail::join(std::string(sc.intro), src.valid_run(4, 6)),
                              src.violating());
      p.rejected = src.valid_run(1, 2);
    }
    if (p.chosen == p.rejected) p.rejected += " Proper cleaning prevents porosity.";
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace physkg

#endif  // PHYSKG_SYNTHETIC_HPP_
