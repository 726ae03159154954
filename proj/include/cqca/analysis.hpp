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
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqca/dynamics.hpp"
#include "cqca/evolution.hpp"
#include "cqca/line_fit.hpp"
#include "cqca/rule_matrix.hpp"

namespace cqca {

/// f(t): number of cells in row t with C >= threshold.
inline std::uint64_t scrambled_sites(const HeatMap& h, std::uint64_t t, double threshold) {
  const auto row = h.value_row(t);
  return static_cast<std::uint64_t>(
      std::count_if(row.begin(), row.end(), [&](double c) { return meets_threshold(c, threshold); }));
}

struct BoxCountPoint {
  std::uint64_t horizon = 0;  // T
  std::uint64_t sum_f = 0;    // sum_{t=0}^{T} f(t)
  double log_t = 0;
  double log_sum_f = 0;
};

struct BoxCountSeries {
  std::vector<BoxCountPoint> points;
  double threshold = 1.0;
  std::size_t fit_begin = 0;  // fit uses points[fit_begin..]
  double dimension = 0;       // slope of log sum_f vs log T
  double intercept = 0;
};

using HeatMapGenerator = std::function<HeatMap(std::uint64_t horizon)>;

/// Box-counting dimension with boxes of side 1/T: log(sum_f) against
/// log(T), slope fitted over the upper half of the points.
inline BoxCountSeries box_count(const HeatMapGenerator& generate, std::span<const std::uint64_t> horizons,
                                double threshold) {
  if (horizons.size() < 4) throw std::invalid_argument("box counting needs at least 4 horizons");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1 || (i > 0 && horizons[i] <= horizons[i - 1])) {
      throw std::invalid_argument("box-counting horizons must be positive and strictly increasing");
    }
  }
  BoxCountSeries out;
  out.threshold = threshold;
  for (const std::uint64_t horizon : horizons) {
    const HeatMap h = generate(horizon);
    if (h.horizon() < horizon) throw std::invalid_argument("generator returned a heat map shorter than requested");
    std::uint64_t sum = 0;
    for (std::uint64_t t = 0; t <= horizon; ++t) sum += scrambled_sites(h, t, threshold);
    if (sum == 0) {
      throw std::domain_error("no cell reaches C >= " + std::to_string(threshold) + " up to T = " +
                              std::to_string(horizon) + "; log(sum f) is undefined");
    }
    out.points.push_back({horizon, sum, std::log(static_cast<double>(horizon)), std::log(static_cast<double>(sum))});
  }
  out.fit_begin = out.points.size() / 2;
  std::vector<double> xs, ys;
  for (std::size_t i = out.fit_begin; i < out.points.size(); ++i) {
    xs.push_back(out.points[i].log_t);
    ys.push_back(out.points[i].log_sum_f);
  }
  const LineFit fit = fit_line(xs, ys);
  out.dimension = fit.slope;
  out.intercept = fit.intercept;
  return out;
}

/// Fraction of in-cone cells (|alpha| <= t, inside the window) with
/// C >= threshold.
inline double cone_fill_fraction(const HeatMap& h, double threshold) {
  std::uint64_t inside = 0, hits = 0;
  for (std::uint64_t t = 0; t <= h.horizon(); ++t) {
    const std::int64_t reach = std::min<std::int64_t>(static_cast<std::int64_t>(t), h.half_width());
    for (std::int64_t a = -reach; a <= reach; ++a) {
      ++inside;
      if (meets_threshold(h.value(t, a), threshold)) ++hits;
    }
  }
  if (inside == 0) throw std::invalid_argument("heat map has no in-cone cells");
  return static_cast<double>(hits) / static_cast<double>(inside);
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

struct ScarComparison {
  std::uint32_t n_composite = 0;
  std::uint32_t kappa = 1;
  std::uint32_t prime = 2;
  unsigned ell = 1;
  std::uint32_t prime_power = 2;
  double max_cell_deviation = 0;
  bool exact_match = false;    // every cell's C agrees exactly (as reduced rationals)
  bool support_match = false;  // C == 0 on exactly the same cells
  std::uint64_t mismatched_cells = 0;
  HeatMap composite;    // modulus N, insertions scaled by kappa
  HeatMap prime_power_map;  // modulus p^ell, base insertions
};

/// True iff every image of the kappa-scaled generators Q^kappa, P^kappa
/// under one rule step has all exponents divisible by kappa.
inline bool subalgebra_closed(const RuleMatrix& m, std::uint32_t kappa) {
  const std::uint32_t n = m.modulus();
  for (const auto& gen : {OperatorString::single_site(kappa, 0, 0, n), OperatorString::single_site(0, kappa, 0, n)}) {
    const OperatorString img = apply_rule(m, gen);
    for (const auto* part : {&img.qpart(), &img.ppart()}) {
      for (const auto& term : part->terms()) {
        if (term.coeff % kappa != 0) return false;
      }
    }
  }
  return true;
}

/// Compares the N = kappa p^ell heat map for insertions (kappa i, kappa j)
/// with the p^ell heat map for (i, j). Cell equality is decided on the
/// reduced rationals min(xi, m - xi) / m, on which C depends exactly.
inline ScarComparison primal_scar_check(const RuleTemplate& rule, std::uint64_t n_composite, std::uint64_t kappa,
                                        std::uint64_t prime, unsigned ell, const Insertion& w_base,
                                        std::optional<Insertion> v_base, std::uint64_t horizon,
                                        std::int64_t half_width) {
  const std::uint32_t n = checked_modulus(n_composite);
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  if (!is_prime(prime)) throw std::invalid_argument(std::to_string(prime) + " is not prime");
  if (ell < 1) throw std::invalid_argument("ell must be >= 1");
  std::uint64_t pp = 1;
  for (unsigned k = 0; k < ell; ++k) {
    pp *= prime;
    if (pp > n) break;
  }
  if (pp > n || kappa * pp != n) {
    throw std::invalid_argument("kappa * p^ell = " + std::to_string(kappa) + " * " + std::to_string(prime) + "^" +
                                std::to_string(ell) + " does not equal N = " + std::to_string(n));
  }
  if (std::gcd(kappa, prime) != 1) {
    throw std::invalid_argument("kappa = " + std::to_string(kappa) + " is not coprime to p = " + std::to_string(prime));
  }
  const Insertion v0 = v_base.value_or(w_base);
  const auto pp32 = static_cast<std::uint32_t>(pp);
  w_base.check_modulus(pp32);
  v0.check_modulus(pp32);

  const RuleMatrix big = rule.instantiate(n);
  if (!subalgebra_closed(big, static_cast<std::uint32_t>(kappa))) {
    throw std::domain_error("rule '" + rule.name + "' does not preserve the subalgebra generated by Q^" +
                            std::to_string(kappa) + ", P^" + std::to_string(kappa));
  }
  const RuleMatrix small = rule.instantiate(pp);
  const Insertion w_big(static_cast<std::int64_t>(kappa * w_base.q_exp()), static_cast<std::int64_t>(kappa * w_base.p_exp()));
  const Insertion v_big(static_cast<std::int64_t>(kappa * v0.q_exp()), static_cast<std::int64_t>(kappa * v0.p_exp()));

  ScarComparison out{n,
                     static_cast<std::uint32_t>(kappa),
                     static_cast<std::uint32_t>(prime),
                     ell,
                     pp32,
                     0,
                     true,
                     true,
                     0,
                     heat_map(big, w_big, v_big, half_width, horizon),
                     heat_map(small, w_base, v0, half_width, horizon)};
  const auto xa = out.composite.xi_grid();
  const auto xb = out.prime_power_map.xi_grid();
  const auto ca = out.composite.values();
  const auto cb = out.prime_power_map.values();
  for (std::size_t k = 0; k < xa.size(); ++k) {
    const std::uint64_t ra = symmetric_residue(xa[k], n);
    const std::uint64_t rb = symmetric_residue(xb[k], pp32);
    // ra / n == rb / pp
    if (ra * pp != rb * n) {
      out.exact_match = false;
      ++out.mismatched_cells;
    }
    if ((ra == 0) != (rb == 0)) out.support_match = false;
    out.max_cell_deviation = std::max(out.max_cell_deviation, std::abs(ca[k] - cb[k]));
  }
  return out;
}

}  // namespace cqca
