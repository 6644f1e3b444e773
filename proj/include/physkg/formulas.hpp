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

#ifndef PHYSKG_FORMULAS_HPP_
#define PHYSKG_FORMULAS_HPP_

#include <algorithm>
#include <array>
#include <string_view>

#include "physkg/errors.hpp"
#include "physkg/units.hpp"

namespace physkg {

// Heat input per unit weld length in J/mm from current [A], voltage [V],
// fractional arc efficiency and travel speed [mm/s].
inline double heat_input(double current, double voltage, double efficiency,
                         double travel_speed) {
  if (!(travel_speed > 0)) {
    throw DomainError("heat_input: travel speed must be > 0 mm/s");
  }
  if (!(efficiency > 0 && efficiency <= 1)) {
    throw DomainError("heat_input: efficiency must lie in (0, 1]");
  }
  if (!(current > 0)) throw DomainError("heat_input: current must be > 0 A");
  if (!(voltage > 0)) throw DomainError("heat_input: voltage must be > 0 V");
  return current * voltage * efficiency / travel_speed;
}

// A governing equation that formula constraints can reference by id. Inputs
// are KG parameter ids in the order the evaluator expects them.
struct FormulaSpec {
  std::string_view id;
  std::array<std::string_view, 4> inputs;
  std::array<std::string_view, 4> input_units;
  std::array<bool (*)(double), 4> input_domain;
  std::string_view output_unit;
  double (*evaluate)(double, double, double, double);
};

inline constexpr std::array<FormulaSpec, 1> kFormulas{{
    {"heat_input",
     {"current", "voltage", "efficiency", "travel_speed"},
     {units::kAmpere, units::kVolt, units::kDimensionless,
      units::kMillimetrePerSecond},
     {[](double i) { return i > 0; }, [](double v) { return v > 0; },
      [](double eta) { return eta > 0 && eta <= 1; }, [](double s) { return s > 0; }},
     units::kJoulePerMillimetre,
     &heat_input},
}};

inline const FormulaSpec* find_formula(std::string_view id) noexcept {
  auto it = std::find_if(kFormulas.begin(), kFormulas.end(),
                         [&](const FormulaSpec& f) { return f.id == id; });
  return it == kFormulas.end() ? nullptr : &*it;
}

}  // namespace physkg

#endif  // PHYSKG_FORMULAS_HPP_
