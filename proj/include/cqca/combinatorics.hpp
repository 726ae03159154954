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
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cqca/parallel.hpp"

namespace cqca {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Zig-zag poset p1 < p2 > p3 < p4 > ... on `order` points. Points are
/// numbered 1..order; relation k joins p_k and p_{k+1}.
class Fence {
 public:
  /// Subset enumeration uses 64-bit masks over 2^order subsets.
  static constexpr unsigned kMaxOrder = 40;

  explicit Fence(unsigned order) : order_(order) {
    if (order > kMaxOrder) {
      throw std::invalid_argument("fence order " + std::to_string(order) + " exceeds brute-force limit");
    }
    for (unsigned k = 1; k < order; ++k) {
      // odd k: p_k < p_{k+1};  even k: p_k > p_{k+1}
      relations_.push_back(k % 2 == 1 ? std::pair{k, k + 1} : std::pair{k + 1, k});
    }
    below_.assign(order, 0);
    for (const auto& [lower, upper] : relations_) below_[upper - 1] |= std::uint64_t{1} << (lower - 1);
  }

  unsigned order() const { return order_; }

  /// Covering relations as (lower, upper), 1-based.
  const std::vector<std::pair<unsigned, unsigned>>& relations() const { return relations_; }

  /// Bit k-1 set iff p_k is covered by point `p` (1-based).
  std::uint64_t lower_covers(unsigned p) const { return below_.at(p - 1); }

  /// Downward closed: every member's lower covers are members too.
  bool is_ideal(std::uint64_t mask) const {
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const unsigned k = static_cast<unsigned>(std::countr_zero(rest));
      if ((below_[k] & ~mask) != 0) return false;
    }
    return true;
  }

 private:
  unsigned order_;
  std::vector<std::pair<unsigned, unsigned>> relations_;
  std::vector<std::uint64_t> below_;
};

namespace detail {
/// Histogram of ideal sizes over all 2^n subsets, split across workers by
/// subset prefix.
inline std::vector<std::uint64_t> ideal_histogram(const Fence& f) {
  const unsigned n = f.order();
  const std::uint64_t total = std::uint64_t{1} << n;
  const unsigned workers = n >= 16 ? worker_count() : 1;
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n + 1, 0));
  parallel_for(0, workers, 1, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t w = lo; w < hi; ++w) {
      const std::uint64_t begin = total / workers * w;
      const std::uint64_t end = w + 1 == workers ? total : total / workers * (w + 1);
      for (std::uint64_t mask = begin; mask < end; ++mask) {
        if (f.is_ideal(mask)) ++partial[w][static_cast<std::size_t>(std::popcount(mask))];
      }
    }
  });
  std::vector<std::uint64_t> hist(n + 1, 0);
  for (const auto& p : partial) {
    for (unsigned i = 0; i <= n; ++i) hist[i] += p[i];
  }
  return hist;
}
}  // namespace detail

/// Number of ideals of size `i` (the Whitney number f_{n,i}), by exhaustive
/// subset enumeration. This is the reference oracle, not a fast path.
inline std::uint64_t count_ideals(const Fence& f, unsigned i) {
  if (i > f.order()) {
    throw std::invalid_argument("ideal size " + std::to_string(i) + " exceeds fence order " +
                                std::to_string(f.order()));
  }
  return detail::ideal_histogram(f)[i];
}

/// All f_{n,i}, i = 0..n, from one enumeration pass.
inline std::vector<std::uint64_t> ideal_rank_counts(const Fence& f) { return detail::ideal_histogram(f); }

/// Terminating 4F3((1-t)/2, (1-t)/2, -t/2, -t/2; 1, -t, -t; 16), summed
/// exactly over rationals with the term ratio
///
///   T_{k+1} / T_k = prod_i (a_i + k) / prod_j (b_j + k) * 16 / (k + 1).
///
/// One of the half-integer numerator parameters is a non-positive integer,
/// which cuts the series off before any (-t + k) denominator vanishes.
inline BigInt whitney_hypergeometric(unsigned t) {
  if (t < 1) throw std::invalid_argument("whitney_hypergeometric needs t >= 1");
  const BigRational half_t(static_cast<long long>(t), 2);
  const BigRational a1 = BigRational(1, 2) - half_t;
  const std::array<BigRational, 4> a{a1, a1, -half_t, -half_t};
  const std::array<BigRational, 3> b{BigRational(1), BigRational(-static_cast<long long>(t)),
                                     BigRational(-static_cast<long long>(t))};
  BigRational term(1), sum(0);
  for (unsigned k = 0;; ++k) {
    sum += term;
    BigRational num(16), den(k + 1);
    bool terminated = false;
    for (const auto& ai : a) {
      const BigRational f = ai + k;
      if (f == 0) terminated = true;
      num *= f;
    }
    if (terminated) break;
    for (const auto& bj : b) {
      const BigRational f = bj + k;
      if (f == 0) throw std::logic_error("4F3 denominator parameter hit zero before termination");
      den *= f;
    }
    term = term * num / den;
  }
  if (denominator(sum) != 1) {
    throw std::logic_error("4F3 sum for t = " + std::to_string(t) + " is not an integer: " + sum.str());
  }
  return numerator(sum);
}

struct WhitneyEntry {
  unsigned t = 0;
  BigInt value;                 // W_{2t}
  bool oracle_checked = false;  // compared against brute-force f_{2t,t}
};

struct WhitneySequence {
  std::vector<WhitneyEntry> values;
};

class WhitneyMismatch : public std::runtime_error {
 public:
  WhitneyMismatch(unsigned t, const BigInt& series, std::uint64_t oracle)
      : std::runtime_error("W_{2t} mismatch at t = " + std::to_string(t) + ": hypergeometric " + series.str() +
                           " vs fence-ideal count " + std::to_string(oracle)),
        t_(t) {}
  unsigned t() const { return t_; }

 private:
  unsigned t_;
};

/// W_{2t} for t = 1..t_max by the series; every t <= oracle_max is also
/// counted by brute force and must agree.
inline WhitneySequence whitney_sequence(unsigned t_max, unsigned oracle_max = 12) {
  WhitneySequence seq;
  for (unsigned t = 1; t <= t_max; ++t) {
    WhitneyEntry e{t, whitney_hypergeometric(t), false};
    if (t <= oracle_max && 2 * t <= Fence::kMaxOrder) {
      const std::uint64_t oracle = count_ideals(Fence(2 * t), t);
      if (e.value != oracle) throw WhitneyMismatch(t, e.value, oracle);
      e.oracle_checked = true;
    }
    seq.values.push_back(std::move(e));
  }
  return seq;
}

}  // namespace cqca
