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

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "cqca/laurent_poly.hpp"
#include "cqca/operator_string.hpp"
#include "cqca/parallel.hpp"
#include "cqca/rule_matrix.hpp"

namespace cqca {

/// Dense-window Heisenberg evolution of one operator string under a rule.
///
/// Holds the Q and P exponents on a contiguous site window that grows by
/// the rule radius each step and is trimmed back to the nonzero support.
/// The overall phase is not tracked.
class Evolver {
 public:
  Evolver(const RuleMatrix& rule, const OperatorString& initial)
      : modulus_(rule.modulus()), radius_(rule.radius()) {
    if (initial.modulus() != modulus_) {
      throw std::invalid_argument("operator modulus " + std::to_string(initial.modulus()) +
                                  " does not match rule modulus " + std::to_string(modulus_));
    }
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        for (const auto& t : rule.entry(r, c).terms()) taps_[r][c].push_back(t);
      }
    }
    auto lo = std::min(initial.qpart().min_exponent().value_or(0), initial.ppart().min_exponent().value_or(0));
    auto hi = std::max(initial.qpart().max_exponent().value_or(0), initial.ppart().max_exponent().value_or(0));
    lowest_ = lo;
    q_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    p_.assign(q_.size(), 0);
    for (const auto& t : initial.qpart().terms()) q_[static_cast<std::size_t>(t.exponent - lo)] = t.coeff;
    for (const auto& t : initial.ppart().terms()) p_[static_cast<std::size_t>(t.exponent - lo)] = t.coeff;
    trim();
  }

  std::uint64_t time() const { return time_; }
  std::uint32_t modulus() const { return modulus_; }

  /// First site of the stored window (exponents outside are zero).
  Exponent window_begin() const { return lowest_; }
  Exponent window_end() const { return lowest_ + static_cast<Exponent>(q_.size()); }

  /// (A, B): exponents of Q and P at `site`.
  std::pair<Coeff, Coeff> exponents_at(Exponent site) const {
    if (site < window_begin() || site >= window_end()) return {0, 0};
    const auto k = static_cast<std::size_t>(site - lowest_);
    return {q_[k], p_[k]};
  }

  void step() {
    const Exponent new_lowest = lowest_ - radius_;
    const std::size_t width = q_.size() + 2 * static_cast<std::size_t>(radius_);
    std::vector<Coeff> nq(width, 0), np(width, 0);
    const std::uint32_t n = modulus_;
    parallel_for(0, width, 1 << 15, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const Exponent site = new_lowest + static_cast<Exponent>(k);
        nq[k] = row_at(0, site, n);
        np[k] = row_at(1, site, n);
      }
    });
    q_ = std::move(nq);
    p_ = std::move(np);
    lowest_ = new_lowest;
    ++time_;
    trim();
  }

  void advance(std::uint64_t steps) {
    for (std::uint64_t s = 0; s < steps; ++s) step();
  }

  OperatorString current() const {
    return OperatorString(LaurentPoly::from_dense(lowest_, q_, modulus_),
                          LaurentPoly::from_dense(lowest_, p_, modulus_));
  }

 private:
  Coeff source(const std::vector<Coeff>& v, Exponent site) const {
    if (site < window_begin() || site >= window_end()) return 0;
    return v[static_cast<std::size_t>(site - lowest_)];
  }

  // (M v)_row at `site` = sum_col sum_{c q^e in M[row][col]} c * v_col[site - e]
  Coeff row_at(int row, Exponent site, std::uint32_t n) const {
    std::uint64_t acc = 0;
    for (int col = 0; col < 2; ++col) {
      const auto& src = col == 0 ? q_ : p_;
      for (const auto& t : taps_[row][col]) {
        acc = (acc + std::uint64_t{t.coeff} * source(src, site - t.exponent)) % n;
      }
    }
    return static_cast<Coeff>(acc);
  }

  void trim() {
    std::size_t first = 0, last = q_.size();
    while (first < last && q_[first] == 0 && p_[first] == 0) ++first;
    while (last > first && q_[last - 1] == 0 && p_[last - 1] == 0) --last;
    if (first == last) {
      // identity: keep a single zero cell at the old origin
      q_.assign(1, 0);
      p_.assign(1, 0);
      return;
    }
    if (first == 0 && last == q_.size()) return;
    q_ = std::vector<Coeff>(q_.begin() + static_cast<std::ptrdiff_t>(first), q_.begin() + static_cast<std::ptrdiff_t>(last));
    p_ = std::vector<Coeff>(p_.begin() + static_cast<std::ptrdiff_t>(first), p_.begin() + static_cast<std::ptrdiff_t>(last));
    lowest_ += static_cast<Exponent>(first);
  }

  std::uint32_t modulus_;
  Exponent radius_;
  std::array<std::array<std::vector<LaurentPoly::Term>, 2>, 2> taps_;
  Exponent lowest_ = 0;
  std::vector<Coeff> q_, p_;
  std::uint64_t time_ = 0;
};

/// One step: the matrix-vector product M * (qpart, ppart) over Z_N[q, q^-1].
inline OperatorString apply_rule(const RuleMatrix& m, const OperatorString& op) {
  if (m.modulus() != op.modulus()) {
    throw std::invalid_argument("modulus mismatch between rule and operator");
  }
  return OperatorString(m.entry(0, 0) * op.qpart() + m.entry(0, 1) * op.ppart(),
                        m.entry(1, 0) * op.qpart() + m.entry(1, 1) * op.ppart());
}

/// M^t applied to op, via the dense evolver.
inline OperatorString evolve(const RuleMatrix& m, const OperatorString& op, std::uint64_t t) {
  if (t == 0) {
    if (m.modulus() != op.modulus()) throw std::invalid_argument("modulus mismatch between rule and operator");
    return op;
  }
  Evolver ev(m, op);
  ev.advance(t);
  return ev.current();
}

}  // namespace cqca
