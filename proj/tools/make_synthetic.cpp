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

// Writes the synthetic welding preference set as JSONL.
//
//   physkg_synth --count 200 --seed 7 > data/separable_pairs.jsonl

#include <cstdint>
#include <iostream>

#include <CLI11.hpp>

#include "physkg/dataset.hpp"
#include "physkg/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate synthetic preference pairs over the sample welding graph"};
  std::size_t count = 200;
  std::uint64_t seed = 7;
  physkg::SyntheticOptions opt;
  app.add_option("--count", count, "Number of pairs")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--period", opt.period, "Length of the pair-kind cycle")->check(CLI::PositiveNumber);
  app.add_option("--quality", opt.quality_slots, "Quality pairs per cycle");
  app.add_option("--contrast", opt.contrast_slots, "Contrast pairs per cycle");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (opt.quality_slots + opt.contrast_slots > opt.period) {
    std::cerr << "quality + contrast slots exceed the period\n";
    return 2;
  }
  physkg::write_pairs(std::cout, physkg::generate_preference_pairs(count, seed, opt));
  return 0;
}
