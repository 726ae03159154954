// Copyright 2026 The cqca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cqca/rule_matrix.hpp"

namespace cqca {

/// A rule read from a rule-definition file: the integer template plus the
/// file's own N, if it names one.
struct RuleSource {
  RuleTemplate rule;
  std::optional<std::uint64_t> modulus;
};

/// Parses the rule-file JSON:
///
///   {"N": 5, "entries": [[P00, P01], [P10, P11]]}
///
/// where each P is a list of [exponent, coefficient] integer pairs. The
/// string "paper" may replace either the whole document or "entries" to
/// select the built-in rule.
inline RuleSource parse_rule_json(const nlohmann::json& doc, const std::string& name = "custom") {
  RuleSource out{paper_rule_template(), std::nullopt};
  if (doc.is_string()) {
    if (doc.get<std::string>() != "paper") {
      throw std::invalid_argument("unknown built-in rule '" + doc.get<std::string>() + "'");
    }
    return out;
  }
  if (!doc.is_object()) throw std::invalid_argument("rule file must be a JSON object or \"paper\"");
  if (doc.contains("N")) {
    const auto& n = doc.at("N");
    if (!n.is_number_integer() || n.get<std::int64_t>() < 2) {
      throw std::invalid_argument("rule file field N must be an integer >= 2");
    }
    out.modulus = checked_modulus(n.get<std::uint64_t>());
  }
  if (!doc.contains("entries")) throw std::invalid_argument("rule file is missing \"entries\"");
  const auto& entries = doc.at("entries");
  if (entries.is_string()) {
    if (entries.get<std::string>() != "paper") {
      throw std::invalid_argument("unknown built-in rule '" + entries.get<std::string>() + "'");
    }
    return out;
  }
  if (!entries.is_array() || entries.size() != 2) {
    throw std::invalid_argument("\"entries\" must be a 2x2 array of polynomials");
  }
  RuleTemplate rule;
  rule.name = doc.value("name", name);
  for (std::size_t r = 0; r < 2; ++r) {
    if (!entries[r].is_array() || entries[r].size() != 2) {
      throw std::invalid_argument("\"entries\" must be a 2x2 array of polynomials");
    }
    for (std::size_t c = 0; c < 2; ++c) {
      const auto& poly = entries[r][c];
      if (!poly.is_array()) throw std::invalid_argument("polynomial must be a list of [exponent, coefficient]");
      for (const auto& term : poly) {
        if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer() ||
            !term[1].is_number_integer()) {
          throw std::invalid_argument("polynomial term must be an [exponent, coefficient] integer pair");
        }
        rule.entries[r][c].emplace_back(term[0].get<Exponent>(), term[1].get<std::int64_t>());
      }
    }
  }
  out.rule = std::move(rule);
  return out;
}

/// `spec` is either the literal "paper" or a path to a rule file.
inline RuleSource load_rule(const std::string& spec) {
  if (spec == "paper") return RuleSource{paper_rule_template(), std::nullopt};
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot open rule file '" + spec + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("rule file '" + spec + "' is not valid JSON: " + e.what());
  }
  return parse_rule_json(doc, std::filesystem::path(spec).stem().string());
}

inline nlohmann::json rule_to_json(const RuleMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (int r = 0; r < 2; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < 2; ++c) {
      nlohmann::json poly = nlohmann::json::array();
      for (const auto& t : m.entry(r, c).terms()) poly.push_back({t.exponent, t.coeff});
      row.push_back(poly);
    }
    entries.push_back(row);
  }
  return {{"N", m.modulus()}, {"name", m.name()}, {"entries", entries}};
}

}  // namespace cqca
