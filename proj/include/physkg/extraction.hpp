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

#ifndef PHYSKG_EXTRACTION_HPP_
#define PHYSKG_EXTRACTION_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "physkg/graph.hpp"
#include "physkg/units.hpp"

namespace physkg {

struct Mention {
  std::string entity;
  std::string surface;
  Span span;

  friend bool operator==(const Mention&, const Mention&) = default;
};

// A relational statement read from text, e.g. "cleaning prevents porosity".
struct Claim {
  std::string source;
  RelationKind kind = RelationKind::kCauses;
  std::string target;
  Span cue;

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct ExtractionResult {
  std::vector<Mention> mentions;
  std::vector<Quantity> quantities;
  std::vector<Claim> claims;
  // Off-graph candidate entities (lower-cased, sorted, unique): capitalised
  // or acronym tokens that resolve to nothing, and unit-bearing quantities
  // that do not bind to a KG parameter.
  std::vector<std::string> unresolved;
  std::vector<Diagnostic> diagnostics;

  std::set<std::string> entity_ids() const {
    std::set<std::string> ids;
    for (const auto& m : mentions) ids.insert(m.entity);
    return ids;
  }
  friend bool operator==(const ExtractionResult&, const ExtractionResult&) = default;
};

namespace detail {

struct CueWord {
  std::string_view text;
  RelationKind kind;
};

inline constexpr std::array<CueWord, 15> kClaimCues{{
    {"causes", RelationKind::kCauses},
    {"cause", RelationKind::kCauses},
    {"caused", RelationKind::kCauses},
    {"leads to", RelationKind::kCauses},
    {"lead to", RelationKind::kCauses},
    {"led to", RelationKind::kCauses},
    {"results in", RelationKind::kCauses},
    {"result in", RelationKind::kCauses},
    {"prevents", RelationKind::kPrevents},
    {"prevent", RelationKind::kPrevents},
    {"prevented", RelationKind::kPrevents},
    {"requires", RelationKind::kRequires},
    {"require", RelationKind::kRequires},
    {"required", RelationKind::kRequires},
    {"needs", RelationKind::kRequires},
}};

inline constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

inline bool is_sentence_break(std::string_view text, std::size_t i) noexcept {
  const char c = text[i];
  if (c == '!' || c == '?' || c == '\n') return true;
  if (c != '.') return false;
  // A decimal point is not a sentence break.
  return !(i > 0 && i + 1 < text.size() && is_digit(text[i - 1]) && is_digit(text[i + 1]));
}

// Sentence index of every byte of `text`.
inline std::vector<std::size_t> sentence_ids(std::string_view text) {
  std::vector<std::size_t> ids(text.size());
  std::size_t current = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    ids[i] = current;
    if (is_sentence_break(text, i)) ++current;
  }
  return ids;
}

struct NumberToken {
  double value;
  std::size_t begin;
  std::size_t end;
};

// Numeric literal at `i`: optional sign (ASCII or U+2212), digits with an
// optional fraction, optional exponent. Signs directly after a word
// character are range dashes, not signs.
inline std::optional<NumberToken> parse_number(std::string_view text, std::size_t i) {
  const std::size_t begin = i;
  if (i > 0 && (is_word_char(text[i - 1]) || text[i - 1] == '.')) return std::nullopt;
  bool negative = false;
  if (text[i] == '-' || text[i] == '+') {
    negative = text[i] == '-';
    ++i;
  } else if (text.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
    negative = true;
    i += kUnicodeMinus.size();
  }
  std::string literal;
  const std::size_t digits_begin = i;
  while (i < text.size() && is_digit(text[i])) literal += text[i++];
  if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
    literal += text[i++];
    while (i < text.size() && is_digit(text[i])) literal += text[i++];
  }
  if (i == digits_begin || literal == ".") return std::nullopt;
  if (literal.front() == '.') literal.insert(literal.begin(), '0');
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::size_t j = i + 1;
    std::string exponent = "e";
    if (j < text.size() && (text[j] == '+' || text[j] == '-')) exponent += text[j++];
    const std::size_t exp_digits = j;
    while (j < text.size() && is_digit(text[j])) exponent += text[j++];
    if (j > exp_digits && (j == text.size() || !is_word_char(text[j]))) {
      literal += exponent;
      i = j;
    }
  }
  double value = 0;
  auto [ptr, ec] = std::from_chars(literal.data(), literal.data() + literal.size(), value);
  if (ec != std::errc() || ptr != literal.data() + literal.size()) return std::nullopt;
  return NumberToken{negative ? -value : value, begin, i};
}

// Longest alias from the unit table that starts at `i` and ends at a word
// boundary. Aliases starting with a digit are not matched in free text.
inline const UnitAlias* match_unit(std::string_view text, std::size_t i, std::size_t& end) {
  const UnitAlias* best = nullptr;
  for (const auto& u : kUnitAliases) {
    if (u.alias.empty() || is_digit(u.alias.front())) continue;
    if (text.substr(i, u.alias.size()) != u.alias) continue;
    const std::size_t e = i + u.alias.size();
    if (e < text.size() && is_word_char(text[e]) && is_word_char(u.alias.back())) continue;
    if (best == nullptr || u.alias.size() > best->alias.size()) {
      best = &u;
      end = e;
    }
  }
  return best;
}

inline std::string_view trailing_token(std::string_view text, std::size_t i) {
  std::size_t e = i;
  while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
  while (e > i && std::string_view(",;:).!?").find(text[e - 1]) != std::string_view::npos) --e;
  return text.substr(i, e - i);
}

}  // namespace detail

// Rule-based reading of mentions, quantities and relational claims from a
// free-text response. Never throws on odd input; unreadable fragments are
// skipped and reported in `diagnostics`.
inline ExtractionResult extract(const KnowledgeGraph& g, std::string_view text) {
  ExtractionResult r;
  if (text.empty()) return r;
  const auto sentence = detail::sentence_ids(text);

  for (auto& m : g.scan(text)) {
    r.mentions.push_back({m.entity, std::string(text.substr(m.span.begin, m.span.size())), m.span});
  }
  auto inside_mention = [&](std::size_t pos) {
    return std::any_of(r.mentions.begin(), r.mentions.end(), [&](const Mention& m) {
      return pos >= m.span.begin && pos < m.span.end;
    });
  };

  // Quantities.
  std::set<std::string> unresolved;
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    const bool may_start = detail::is_digit(c) || c == '-' || c == '+' || c == '.' ||
                           text.substr(i, detail::kUnicodeMinus.size()) == detail::kUnicodeMinus;
    if (!may_start || inside_mention(i)) {
      ++i;
      continue;
    }
    auto num = detail::parse_number(text, i);
    if (!num) {
      ++i;
      continue;
    }
    std::size_t j = num->end;
    while (j < text.size() && (text[j] == ' ' || text[j] == '\t')) ++j;
    std::size_t unit_end = j;
    const UnitAlias* alias = j < text.size() ? detail::match_unit(text, j, unit_end) : nullptr;
    if (alias == nullptr) {
      // A bare number right after a dimensionless parameter ("efficiency
      // 0.8") is that parameter's value.
      const Mention* prev = nullptr;
      for (const auto& m : r.mentions) {
        if (m.span.end <= num->begin && sentence[m.span.begin] == sentence[num->begin]) prev = &m;
      }
      const Entity* pe = prev != nullptr ? g.find(prev->entity) : nullptr;
      if (pe != nullptr && pe->category == Category::kParameter && pe->unit() == units::kDimensionless) {
        Quantity q{num->value, std::string(units::kDimensionless), pe->id, {num->begin, num->end}};
        r.quantities.push_back(std::move(q));
        i = num->end;
        continue;
      }
      auto token = detail::trailing_token(text, j);
      if (!token.empty() && j < text.size() && !detail::is_sentence_break(text, j)) {
        r.diagnostics.push_back({"UNKNOWN_UNIT", std::string(token),
                                 "no known unit after number at offset " +
                                     std::to_string(num->begin)});
        const bool has_letter = std::any_of(token.begin(), token.end(), [](char ch) {
          return std::isalpha(static_cast<unsigned char>(ch)) != 0;
        });
        if (has_letter && token.size() <= 8) unresolved.insert("unit:" + std::string(token));
      }
      i = num->end;
      continue;
    }
    Quantity q = normalize_unit(num->value, alias->alias);
    q.span = {num->begin, unit_end};
    for (auto m = r.mentions.rbegin(); m != r.mentions.rend(); ++m) {
      if (m->span.end > q.span.begin || sentence[m->span.begin] != sentence[q.span.begin]) continue;
      const Entity* e = g.find(m->entity);
      if (e != nullptr && e->category == Category::kParameter && e->unit() == q.unit) {
        q.parameter = e->id;
        break;
      }
    }
    if (!q.parameter) unresolved.insert("quantity:" + q.unit);
    r.quantities.push_back(std::move(q));
    i = unit_end;
  }

  // Claims.
  const std::string lowered = detail::ascii_lower(text);
  for (std::size_t i = 0; i < lowered.size(); ++i) {
    if (i > 0 && detail::is_word_char(lowered[i - 1])) continue;
    if (inside_mention(i)) continue;
    for (const auto& cue : detail::kClaimCues) {
      const std::size_t end = i + cue.text.size();
      if (lowered.compare(i, cue.text.size(), cue.text) != 0) continue;
      if (end < lowered.size() && detail::is_word_char(lowered[end])) continue;
      const Mention* left = nullptr;
      const Mention* right = nullptr;
      for (const auto& m : r.mentions) {
        if (sentence[m.span.begin] != sentence[i]) continue;
        if (m.span.end <= i) left = &m;
        if (m.span.begin >= end && right == nullptr) right = &m;
      }
      if (left != nullptr && right != nullptr && left->entity != right->entity) {
        r.claims.push_back({left->entity, cue.kind, right->entity, {i, end}});
      }
      i = end - 1;
      break;
    }
  }

  // Capitalised or acronym word tokens that are not graph entities.
  auto covered = [&](std::size_t b, std::size_t e) {
    const Span s{b, e};
    for (const auto& m : r.mentions) {
      if (m.span.overlaps(s)) return true;
    }
    for (const auto& q : r.quantities) {
      if (q.span.overlaps(s)) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < text.size();) {
    if (!std::isalpha(static_cast<unsigned char>(text[i])) ||
        (i > 0 && detail::is_word_char(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t e = i;
    while (e < text.size() && detail::is_word_char(text[e])) ++e;
    const std::string_view word = text.substr(i, e - i);
    const bool all_letters = std::all_of(word.begin(), word.end(), [](char ch) {
      return std::isalpha(static_cast<unsigned char>(ch)) != 0;
    });
    if (all_letters && word.size() >= 2 && !covered(i, e)) {
      const bool acronym = std::all_of(word.begin(), word.end(), [](char ch) {
        return std::isupper(static_cast<unsigned char>(ch)) != 0;
      });
      bool sentence_initial = true;
      for (std::size_t k = i; k > 0; --k) {
        if (sentence[k - 1] != sentence[i] || detail::is_sentence_break(text, k - 1)) break;
        if (detail::is_word_char(text[k - 1])) {
          sentence_initial = false;
          break;
        }
      }
      const bool capitalised = std::isupper(static_cast<unsigned char>(word.front())) != 0;
      if (acronym || (capitalised && !sentence_initial)) {
        unresolved.insert(detail::ascii_lower(word));
      }
    }
    i = e;
  }
  r.unresolved.assign(unresolved.begin(), unresolved.end());
  return r;
}

}  // namespace physkg

#endif  // PHYSKG_EXTRACTION_HPP_
