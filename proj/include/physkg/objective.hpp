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

#ifndef PHYSKG_OBJECTIVE_HPP_
#define PHYSKG_OBJECTIVE_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "physkg/dataset.hpp"
#include "physkg/errors.hpp"
#include "physkg/physics_score.hpp"

namespace physkg {

// Feature-linear policy scored against the all-zero reference policy, so
// the pairwise log-ratio margin is theta . (phi_w - phi_l).
struct PolicyModel {
  std::vector<std::string> feature_names;
  std::vector<double> theta;
  double beta = 0.1;

  double score(std::span<const double> phi) const {
    return std::inner_product(theta.begin(), theta.end(), phi.begin(), 0.0);
  }
  friend bool operator==(const PolicyModel&, const PolicyModel&) = default;
};

inline const std::vector<std::string>& default_feature_names() {
  static const std::vector<std::string> kNames = {"s_pkg",        "c",
                                                  "r",            "v_clamped",
                                                  "length_norm",  "prompt_overlap"};
  return kNames;
}

inline PolicyModel zero_policy(double beta = 0.1) {
  const auto& names = default_feature_names();
  return PolicyModel{names, std::vector<double>(names.size(), 0.0), beta};
}

// The physics terms of one response, kept so the loss can be re-weighted.
struct PhysicsTerms {
  double v = 0.0;
  double c = 0.0;
  double r = 0.0;
};

struct TrainingPair {
  std::vector<double> phi_w;
  std::vector<double> phi_l;
  PhysicsTerms chosen;
  PhysicsTerms rejected;
  bool chosen_violates = false;
  bool rejected_violates = false;
};

namespace detail {

inline std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch)) != 0) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace detail

// Word count scaled to [0, 1], saturating at 100 words.
inline double length_norm(std::string_view text) {
  return std::min(1.0, static_cast<double>(detail::word_tokens(text).size()) / 100.0);
}

// Share of the prompt's distinct words that reappear in the response.
inline double prompt_overlap(std::string_view prompt, std::string_view response) {
  const auto p = detail::word_tokens(prompt);
  const auto r = detail::word_tokens(response);
  const std::set<std::string> ps(p.begin(), p.end());
  const std::set<std::string> rs(r.begin(), r.end());
  if (ps.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& w : ps) shared += rs.count(w);
  return static_cast<double>(shared) / static_cast<double>(ps.size());
}

inline std::vector<double> response_features(std::string_view prompt, const ScoredResponse& s) {
  return {s.s_pkg, s.c, s.r, std::min(1.0, s.v), length_norm(s.text),
          prompt_overlap(prompt, s.text)};
}

inline TrainingPair make_training_pair(const AugmentedPair& a) {
  return TrainingPair{response_features(a.pair.prompt, a.chosen),
                      response_features(a.pair.prompt, a.rejected),
                      {a.chosen.v, a.chosen.c, a.chosen.r},
                      {a.rejected.v, a.rejected.c, a.rejected.r},
                      a.chosen.has_violation(),
                      a.rejected.has_violation()};
}

inline std::vector<TrainingPair> make_training_pairs(const std::vector<AugmentedPair>& augmented) {
  std::vector<TrainingPair> out;
  out.reserve(augmented.size());
  for (const auto& a : augmented) out.push_back(make_training_pair(a));
  return out;
}

struct TrainConfig {
  double alpha = 0.7;
  PkgWeights weights;
  double learning_rate = 0.1;
  int epochs = 500;
  std::uint64_t seed = 0;
  double beta = 0.1;

  void validate() const {
    if (!(alpha >= 0 && alpha <= 1)) throw std::invalid_argument("alpha must lie in [0, 1]");
    if (!(learning_rate >= 0)) throw std::invalid_argument("learning_rate must be >= 0");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
    weights.validate();
  }
};

namespace detail {

inline double margin(const PolicyModel& m, const TrainingPair& p) {
  double z = 0.0;
  for (std::size_t k = 0; k < m.theta.size(); ++k) z += m.theta[k] * (p.phi_w[k] - p.phi_l[k]);
  return z;
}

inline void require_pairs(std::span<const TrainingPair> pairs, const PolicyModel& m) {
  if (pairs.empty()) throw std::invalid_argument("loss needs at least one pair");
  for (const auto& p : pairs) {
    if (p.phi_w.size() != m.theta.size() || p.phi_l.size() != m.theta.size()) {
      throw std::invalid_argument("feature vector length differs from theta");
    }
  }
}

}  // namespace detail

// Mean over pairs of -log sigmoid(beta * theta . (phi_w - phi_l)).
inline double dpo_loss(const PolicyModel& m, std::span<const TrainingPair> pairs) {
  detail::require_pairs(pairs, m);
  double sum = 0.0;
  for (const auto& p : pairs) sum += detail::softplus(-m.beta * detail::margin(m, p));
  return sum / static_cast<double>(pairs.size());
}

// Expected physics loss under the policy's pairwise choice probability
// p = sigmoid(theta . (phi_w - phi_l)), averaged over pairs.
inline double pkg_loss_policy(const PolicyModel& m, std::span<const TrainingPair> pairs,
                              const PkgWeights& w) {
  detail::require_pairs(pairs, m);
  double sum = 0.0;
  for (const auto& p : pairs) {
    const double pw = detail::sigmoid(detail::margin(m, p));
    const double lw = physics_loss(p.chosen.v, p.chosen.c, p.chosen.r, w);
    const double ll = physics_loss(p.rejected.v, p.rejected.c, p.rejected.r, w);
    sum += pw * lw + (1.0 - pw) * ll;
  }
  return sum / static_cast<double>(pairs.size());
}

inline double combine_losses(double alpha, double l_dpo, double l_pkg) {
  return alpha * l_dpo + (1.0 - alpha) * l_pkg;
}

inline double pkg_dpo_loss(const PolicyModel& m, std::span<const TrainingPair> pairs,
                           const TrainConfig& config) {
  return combine_losses(config.alpha, dpo_loss(m, pairs), pkg_loss_policy(m, pairs, config.weights));
}

struct LossEvaluation {
  double l_dpo = 0.0;
  double l_pkg = 0.0;
  double total = 0.0;
  std::vector<double> gradient;
};

// Losses and the analytic gradient of the combined objective w.r.t. theta.
inline LossEvaluation evaluate_objective(const PolicyModel& m, std::span<const TrainingPair> pairs,
                                         const TrainConfig& config) {
  detail::require_pairs(pairs, m);
  const double n = static_cast<double>(pairs.size());
  LossEvaluation out;
  out.gradient.assign(m.theta.size(), 0.0);
  for (const auto& p : pairs) {
    const double z = detail::margin(m, p);
    const double lw = physics_loss(p.chosen.v, p.chosen.c, p.chosen.r, config.weights);
    const double ll = physics_loss(p.rejected.v, p.rejected.c, p.rejected.r, config.weights);
    const double pw = detail::sigmoid(z);
    out.l_dpo += detail::softplus(-m.beta * z);
    out.l_pkg += pw * lw + (1.0 - pw) * ll;
    // d/dz softplus(-beta z) = -beta * sigmoid(-beta z)
    // d/dz [p lw + (1 - p) ll] = p (1 - p) (lw - ll)
    const double coeff = config.alpha * (-m.beta * detail::sigmoid(-m.beta * z)) +
                         (1.0 - config.alpha) * pw * (1.0 - pw) * (lw - ll);
    for (std::size_t k = 0; k < m.theta.size(); ++k) {
      out.gradient[k] += coeff * (p.phi_w[k] - p.phi_l[k]);
    }
  }
  out.l_dpo /= n;
  out.l_pkg /= n;
  for (auto& g : out.gradient) g /= n;
  out.total = combine_losses(config.alpha, out.l_dpo, out.l_pkg);
  return out;
}

struct EpochLoss {
  int epoch = 0;
  double l_dpo = 0.0;
  double l_pkg = 0.0;
  double l_total = 0.0;

  friend bool operator==(const EpochLoss&, const EpochLoss&) = default;
};

struct TrainResult {
  PolicyModel model;
  std::vector<EpochLoss> trajectory;  // loss at the start of each epoch
  EpochLoss final_loss;
};

// Full-batch gradient descent from the zero policy.
inline TrainResult train(std::span<const TrainingPair> pairs, const TrainConfig& config) {
  config.validate();
  if (pairs.empty()) throw std::invalid_argument("train needs at least one pair");
  TrainResult result{zero_policy(config.beta), {}, {}};
  PolicyModel& m = result.model;
  for (int epoch = 0; epoch <= config.epochs; ++epoch) {
    const LossEvaluation eval = evaluate_objective(m, pairs, config);
    if (!std::isfinite(eval.total)) {
      throw Error("non-finite loss at epoch " + std::to_string(epoch));
    }
    const EpochLoss row{epoch, eval.l_dpo, eval.l_pkg, eval.total};
    if (epoch == config.epochs) {
      result.final_loss = row;
      break;
    }
    result.trajectory.push_back(row);
    for (std::size_t k = 0; k < m.theta.size(); ++k) {
      m.theta[k] -= config.learning_rate * eval.gradient[k];
    }
  }
  return result;
}

// Fraction of pairs whose chosen side the policy scores strictly higher.
inline double pairwise_accuracy(const PolicyModel& m, std::span<const TrainingPair> pairs) {
  if (pairs.empty()) return 0.0;
  std::size_t right = 0;
  for (const auto& p : pairs) right += detail::margin(m, p) > 0 ? 1 : 0;
  return static_cast<double>(right) / static_cast<double>(pairs.size());
}

// Pairs where exactly one side has a physics violation and the policy
// strictly prefers that side.
inline std::size_t violating_preferred(const PolicyModel& m, std::span<const TrainingPair> pairs) {
  std::size_t count = 0;
  for (const auto& p : pairs) {
    if (p.chosen_violates == p.rejected_violates) continue;
    const double z = detail::margin(m, p);
    if ((p.chosen_violates && z > 0) || (p.rejected_violates && z < 0)) ++count;
  }
  return count;
}

// Deterministic shuffled split; the last `holdout_fraction` of the shuffled
// indices form the held-out set.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_holdout(
    std::size_t n, double holdout_fraction, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(idx[i - 1], idx[rng() % i]);
  }
  const auto held = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n)));
  std::vector<std::size_t> train(idx.begin(), idx.end() - static_cast<std::ptrdiff_t>(held));
  std::vector<std::size_t> test(idx.end() - static_cast<std::ptrdiff_t>(held), idx.end());
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Persistence

inline nlohmann::ordered_json to_json(const PolicyModel& m) {
  return {{"feature_names", m.feature_names}, {"theta", m.theta}, {"beta", m.beta}};
}

inline PolicyModel policy_from_json(const nlohmann::json& j) {
  PolicyModel m;
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.theta = j.at("theta").get<std::vector<double>>();
  m.beta = j.at("beta").get<double>();
  if (m.theta.size() != m.feature_names.size()) {
    throw ParseError("checkpoint theta and feature_names differ in length");
  }
  if (!(m.beta > 0)) throw ParseError("checkpoint beta must be > 0");
  return m;
}

inline void write_training_log(std::ostream& out, const std::vector<EpochLoss>& rows) {
  out << "epoch,l_dpo,l_pkg,l_total\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.epoch, r.l_dpo, r.l_pkg, r.l_total);
    out << buf;
  }
}

}  // namespace physkg

#endif  // PHYSKG_OBJECTIVE_HPP_
