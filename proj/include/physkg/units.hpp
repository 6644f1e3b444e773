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

#ifndef PHYSKG_UNITS_HPP_
#define PHYSKG_UNITS_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "physkg/errors.hpp"

namespace physkg {

namespace units {
inline constexpr std::string_view kAmpere = "A";
inline constexpr std::string_view kVolt = "V";
inline constexpr std::string_view kCelsius = "°C";
inline constexpr std::string_view kMillimetrePerSecond = "mm/s";
inline constexpr std::string_view kJoulePerMillimetre = "J/mm";
inline constexpr std::string_view kDimensionless = "1";
inline constexpr std::string_view kMillimetre = "mm";
}  // namespace units

// Half-open character range [begin, end) into a source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end <= begin; }
  bool overlaps(const Span& o) const noexcept {
    return begin < o.end && o.begin < end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Quantity {
  double value = 0.0;
  std::string unit;                      // canonical unit
  std::optional<std::string> parameter;  // bound KG parameter id
  Span span;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

// canonical = alias * scale_num / scale_den + offset
struct UnitAlias {
  std::string_view alias;
  std::string_view canonical;
  double scale_num;
  double scale_den;
  double offset;
};

inline constexpr std::array<UnitAlias, 36> kUnitAliases{{
    {"A", units::kAmpere, 1, 1, 0},
    {"amp", units::kAmpere, 1, 1, 0},
    {"amps", units::kAmpere, 1, 1, 0},
    {"ampere", units::kAmpere, 1, 1, 0},
    {"amperes", units::kAmpere, 1, 1, 0},
    {"mA", units::kAmpere, 1, 1000, 0},
    {"kA", units::kAmpere, 1000, 1, 0},
    {"V", units::kVolt, 1, 1, 0},
    {"volt", units::kVolt, 1, 1, 0},
    {"volts", units::kVolt, 1, 1, 0},
    {"mV", units::kVolt, 1, 1000, 0},
    {"kV", units::kVolt, 1000, 1, 0},
    {"°C", units::kCelsius, 1, 1, 0},
    {"ºC", units::kCelsius, 1, 1, 0},  // masculine ordinal, common typo
    {"degC", units::kCelsius, 1, 1, 0},
    {"celsius", units::kCelsius, 1, 1, 0},
    {"K", units::kCelsius, 1, 1, -273.15},
    {"kelvin", units::kCelsius, 1, 1, -273.15},
    {"mm/s", units::kMillimetrePerSecond, 1, 1, 0},
    {"cm/s", units::kMillimetrePerSecond, 10, 1, 0},
    {"mm/min", units::kMillimetrePerSecond, 1, 60, 0},
    {"cm/min", units::kMillimetrePerSecond, 10, 60, 0},
    {"m/min", units::kMillimetrePerSecond, 1000, 60, 0},
    {"J/mm", units::kJoulePerMillimetre, 1, 1, 0},
    {"kJ/mm", units::kJoulePerMillimetre, 1000, 1, 0},
    {"J/cm", units::kJoulePerMillimetre, 1, 10, 0},
    {"kJ/cm", units::kJoulePerMillimetre, 100, 1, 0},
    {"%", units::kDimensionless, 1, 100, 0},
    {"percent", units::kDimensionless, 1, 100, 0},
    {"mm", units::kMillimetre, 1, 1, 0},
    {"cm", units::kMillimetre, 10, 1, 0},
    {"m", units::kMillimetre, 1000, 1, 0},
    {"in", units::kMillimetre, 254, 10, 0},
    {"inch", units::kMillimetre, 254, 10, 0},
    {"inches", units::kMillimetre, 254, 10, 0},
    {"1", units::kDimensionless, 1, 1, 0},
}};

inline const UnitAlias* find_unit_alias(std::string_view alias) noexcept {
  auto it = std::find_if(kUnitAliases.begin(), kUnitAliases.end(),
                         [&](const UnitAlias& u) { return u.alias == alias; });
  return it == kUnitAliases.end() ? nullptr : &*it;
}

inline bool is_canonical_unit(std::string_view unit) noexcept {
  return std::any_of(kUnitAliases.begin(), kUnitAliases.end(),
                     [&](const UnitAlias& u) { return u.canonical == unit; });
}

// Converts (value, unit) into canonical units. Throws UnknownUnitError when
// the unit is not in the alias table.
inline Quantity normalize_unit(double value, std::string_view unit) {
  const UnitAlias* alias = find_unit_alias(unit);
  if (alias == nullptr) throw UnknownUnitError(std::string(unit));
  double v = value;
  if (alias->scale_num != 1) v *= alias->scale_num;
  if (alias->scale_den != 1) v /= alias->scale_den;
  if (alias->offset != 0) v += alias->offset;
  return Quantity{v, std::string(alias->canonical), std::nullopt, {}};
}

}  // namespace physkg

#endif  // PHYSKG_UNITS_HPP_
