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

// Umbrella header for the physkg library.
#ifndef PHYSKG_PHYSKG_HPP_
#define PHYSKG_PHYSKG_HPP_

#include "physkg/constraints.hpp"
#include "physkg/dataset.hpp"
#include "physkg/errors.hpp"
#include "physkg/evaluator.hpp"
#include "physkg/extraction.hpp"
#include "physkg/formulas.hpp"
#include "physkg/graph.hpp"
#include "physkg/objective.hpp"
#include "physkg/physics_score.hpp"
#include "physkg/reasoner.hpp"
#include "physkg/synthetic.hpp"
#include "physkg/units.hpp"

#endif  // PHYSKG_PHYSKG_HPP_
