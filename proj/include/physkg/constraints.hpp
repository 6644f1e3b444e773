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

#ifndef PHYSKG_CONSTRAINTS_HPP_
#define PHYSKG_CONSTRAINTS_HPP_

#include <sstream>
#include <string>
#include <vector>

#include "physkg/graph.hpp"
#include "physkg/units.hpp"

namespace physkg {

inline constexpr double kDefaultCriticalThreshold = 0.8;

// One detected breach of a physics constraint.
struct Violation {
  std::string constraint;
  std::string parameter;
  Quantity observed;
  double weight = 0.0;
  double severity = 0.0;
  bool critical = false;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

namespace detail {

inline std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string format_quantity(double v, std::string_view unit) {
  std::string s = format_number(v);
  if (unit != units::kDimensionless) {
    s += ' ';
    s += unit;
  }
  return s;
}

}  // namespace detail

// A violation is critical when its constraint is flagged critical and its
// severity reaches the configured threshold.
inline Violation make_violation(const Constraint& c, const Quantity& observed,
                                double critical_threshold, std::string message) {
  return Violation{c.id,       c.parameter, observed,
                   c.weight,   c.severity,  c.critical && c.severity >= critical_threshold,
                   std::move(message)};
}

// One Violation per bound-type constraint on q.parameter that q.value breaks.
// lower_bound requires value > low, upper_bound requires value <= high and
// range requires low <= value <= high. Quantities whose unit differs from the
// constraint's unit are not comparable and are skipped.
inline std::vector<Violation> check_bounds(const KnowledgeGraph& g, const Quantity& q,
                                           double critical_threshold = kDefaultCriticalThreshold) {
  std::vector<Violation> out;
  if (!q.parameter) return out;
  for (const Constraint* c : g.constraints_on(*q.parameter)) {
    if (!c->is_bound() || c->unit != q.unit) continue;
    const double v = q.value;
    std::string requirement;
    bool broken = false;
    switch (c->kind) {
      case ConstraintKind::kLowerBound:
        if (!c->low) continue;
        broken = !(v > *c->low);
        requirement = "> " + detail::format_quantity(*c->low, c->unit);
        break;
      case ConstraintKind::kUpperBound:
        if (!c->high) continue;
        broken = !(v <= *c->high);
        requirement = "<= " + detail::format_quantity(*c->high, c->unit);
        break;
      case ConstraintKind::kRange:
        if (!c->low || !c->high) continue;
        broken = !(v >= *c->low && v <= *c->high);
        requirement = "in [" + detail::format_quantity(*c->low, c->unit) + ", " +
                      detail::format_quantity(*c->high, c->unit) + "]";
        break;
      case ConstraintKind::kFormula:
        break;
    }
    if (broken) {
      out.push_back(make_violation(
          *c, q, critical_threshold,
          *q.parameter + " = " + detail::format_quantity(v, q.unit) + " violates " + c->id +
              " (requires " + requirement + ")"));
    }
  }
  return out;
}

}  // namespace physkg

#endif  // PHYSKG_CONSTRAINTS_HPP_
