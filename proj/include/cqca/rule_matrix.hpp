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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqca/laurent_poly.hpp"
#include "cqca/modular.hpp"

namespace cqca {

/// Row-major 2x2 matrix over Z_N[q, q^-1]. Row/column 0 is the Q
/// component of an operator vector and 1 is the P component.
using RuleEntries = std::array<std::array<LaurentPoly, 2>, 2>;

struct RuleValidation {
  bool reversible = false;
  bool palindromic = false;
  LaurentPoly determinant;
};

inline LaurentPoly rule_determinant(const RuleEntries& m) {
  return m[0][0] * m[1][1] - m[0][1] * m[1][0];
}

namespace detail {
inline std::uint32_t common_modulus(const RuleEntries& m) {
  const std::uint32_t n = m[0][0].modulus();
  for (const auto& row : m) {
    for (const auto& e : row) {
      if (e.modulus() != n) throw std::invalid_argument("rule entries have different moduli");
    }
  }
  return n;
}

/// A unit of Z_N[q, q^-1] relevant here: c*q^k with gcd(c, N) == 1.
inline bool is_unit_monomial(const LaurentPoly& p) {
  return p.term_count() == 1 && mod_inverse(p.terms()[0].coeff, p.modulus()).has_value();
}
}  // namespace detail

/// Reports reversibility (unit-monomial determinant) and palindromicity
/// (every entry fixed by q -> q^-1) independently. Does not throw on
/// invalid rules.
///
/// Only the determinant condition is checked. A full symplectic
/// characterization over the Laurent ring is not attempted, so an exotic
/// user rule can pass and still not be a physical automorphism.
inline RuleValidation validate_rule(const RuleEntries& m) {
  detail::common_modulus(m);
  RuleValidation v{false, true, rule_determinant(m)};
  v.reversible = detail::is_unit_monomial(v.determinant);
  for (const auto& row : m) {
    for (const auto& e : row) v.palindromic = v.palindromic && e.is_palindromic();
  }
  return v;
}

/// A reversible one-step rule. Construction rejects rules whose
/// determinant is not a unit monomial.
class RuleMatrix {
 public:
  RuleMatrix(RuleEntries entries, std::string name)
      : entries_(std::move(entries)), name_(std::move(name)), validation_(validate_rule(entries_)) {
    if (!validation_.reversible) {
      throw std::invalid_argument("rule '" + name_ + "' is not reversible: determinant " +
                                  validation_.determinant.to_string() + " is not a unit monomial");
    }
  }

  const LaurentPoly& entry(int row, int col) const { return entries_.at(row).at(col); }
  const RuleEntries& entries() const { return entries_; }
  const std::string& name() const { return name_; }
  std::uint32_t modulus() const { return entries_[0][0].modulus(); }
  const RuleValidation& validation() const { return validation_; }
  bool is_palindromic() const { return validation_.palindromic; }
  const LaurentPoly& determinant() const { return validation_.determinant; }

  /// Max |exponent| over all entries: the per-step support growth.
  Exponent radius() const {
    Exponent r = 0;
    for (const auto& row : entries_) {
      for (const auto& e : row) r = std::max(r, e.radius());
    }
    return r;
  }

  /// adj(M) * det^-1, with det^-1 = c^-1 q^-k.
  RuleMatrix inverse() const {
    const auto& det = validation_.determinant.terms()[0];
    const std::uint32_t n = modulus();
    LaurentPoly det_inv = LaurentPoly::monomial(-det.exponent, *mod_inverse(det.coeff, n), n);
    RuleEntries adj{{{entries_[1][1] * det_inv, poly_neg(entries_[0][1]) * det_inv},
                     {poly_neg(entries_[1][0]) * det_inv, entries_[0][0] * det_inv}}};
    return RuleMatrix(std::move(adj), name_ + "^-1");
  }

  friend bool operator==(const RuleMatrix& a, const RuleMatrix& b) { return a.entries_ == b.entries_; }

 private:
  RuleEntries entries_;
  std::string name_;
  RuleValidation validation_;
};

/// Integer-coefficient rule that can be instantiated at any modulus. Lets a
/// single rule definition drive scans over N.
struct RuleTemplate {
  using IntPoly = std::vector<std::pair<Exponent, std::int64_t>>;

  std::string name;
  std::array<std::array<IntPoly, 2>, 2> entries;

  RuleEntries entries_at(std::uint64_t modulus) const {
    auto mk = [&](const IntPoly& p) {
      return LaurentPoly::from_terms(std::span<const std::pair<Exponent, std::int64_t>>(p), modulus);
    };
    return RuleEntries{{{mk(entries[0][0]), mk(entries[0][1])}, {mk(entries[1][0]), mk(entries[1][1])}}};
  }

  RuleMatrix instantiate(std::uint64_t modulus) const { return RuleMatrix(entries_at(modulus), name); }
};

/// Q_a -> Q_{a-1} Q_a P_a Q_{a+1},  P_a -> Q_a^{N-1}:
///
///   M = [[q^-1 + 1 + q, N-1],
///        [1,            0  ]].
inline RuleTemplate paper_rule_template() {
  RuleTemplate rule;
  rule.name = "paper";
  rule.entries[0][0] = {{-1, 1}, {0, 1}, {1, 1}};
  rule.entries[0][1] = {{0, -1}};
  rule.entries[1][0] = {{0, 1}};
  return rule;
}

inline RuleMatrix paper_rule(std::uint64_t modulus) { return paper_rule_template().instantiate(modulus); }

}  // namespace cqca
