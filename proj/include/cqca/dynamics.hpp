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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqca/evolution.hpp"
#include "cqca/line_fit.hpp"
#include "cqca/modular.hpp"
#include "cqca/operator_string.hpp"
#include "cqca/parallel.hpp"
#include "cqca/rule_matrix.hpp"

namespace cqca {

/// Single-site generalized Pauli Q^q_exp P^p_exp used as W or V.
class Insertion {
 public:
  Insertion(std::int64_t q_exp, std::int64_t p_exp) {
    if (q_exp < 0 || p_exp < 0 || q_exp > static_cast<std::int64_t>(kMaxModulus) ||
        p_exp > static_cast<std::int64_t>(kMaxModulus)) {
      throw std::invalid_argument("insertion exponents must be non-negative residues");
    }
    if (q_exp == 0 && p_exp == 0) {
      throw std::invalid_argument("insertion (0,0) is the identity; it commutes with everything");
    }
    q_exp_ = static_cast<Coeff>(q_exp);
    p_exp_ = static_cast<Coeff>(p_exp);
  }

  /// "Q", "P", "QP" or an explicit "i,j" exponent pair.
  static Insertion parse(std::string_view text) {
    if (text == "Q") return {1, 0};
    if (text == "P") return {0, 1};
    if (text == "QP") return {1, 1};
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("insertion must be Q, P, QP or 'i,j', got '" + std::string(text) + "'");
    }
    auto number = [&](std::string_view s) {
      std::size_t used = 0;
      std::string str(s);
      long long v = 0;
      try {
        v = std::stoll(str, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != str.size()) {
        throw std::invalid_argument("bad insertion exponent '" + str + "'");
      }
      return v;
    };
    return {number(text.substr(0, comma)), number(text.substr(comma + 1))};
  }

  Coeff q_exp() const { return q_exp_; }
  Coeff p_exp() const { return p_exp_; }

  void check_modulus(std::uint32_t n) const {
    if (q_exp_ >= n || p_exp_ >= n) {
      throw std::invalid_argument("insertion " + label() + " has exponents outside [0, N-1] for N = " +
                                  std::to_string(n));
    }
  }

  OperatorString at(Exponent site, std::uint32_t n) const {
    check_modulus(n);
    return OperatorString::single_site(q_exp_, p_exp_, site, n);
  }

  std::string label() const {
    if (q_exp_ == 1 && p_exp_ == 0) return "Q";
    if (q_exp_ == 0 && p_exp_ == 1) return "P";
    if (q_exp_ == 1 && p_exp_ == 1) return "QP";
    return std::to_string(q_exp_) + "," + std::to_string(p_exp_);
  }

  friend bool operator==(const Insertion&, const Insertion&) = default;

 private:
  Coeff q_exp_ = 1;
  Coeff p_exp_ = 0;
};

/// Absolute slack for comparing C values against a threshold, so that
/// exact band edges (e.g. xi/N = 1/6 at threshold 1) are counted in.
inline constexpr double kThresholdSlack = 1e-9;

/// 4 sin^2(pi xi / N). Depends only on min(xi mod N, N - xi mod N), which
/// makes the result bitwise symmetric under xi -> N - xi.
inline double squared_commutator(std::int64_t xi_val, std::uint32_t n) {
  Coeff k = mod_reduce(xi_val, n);
  k = std::min<Coeff>(k, n - k);
  const double s = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  return 4.0 * s * s;
}

/// C >= 1 decided exactly: |sin(pi xi / N)| >= 1/2  <=>  N <= 6 xi <= 5 N.
inline bool is_scrambled(std::int64_t xi_val, std::uint32_t n) {
  const std::uint64_t x = mod_reduce(xi_val, n);
  return 6 * x >= n && 6 * x <= std::uint64_t{5} * n;
}

inline bool meets_threshold(double c_value, double threshold) { return c_value >= threshold - kThresholdSlack; }

/// min(xi, N - xi): the representative C actually depends on.
inline Coeff symmetric_residue(std::int64_t xi_val, std::uint32_t n) {
  Coeff k = mod_reduce(xi_val, n);
  return std::min<Coeff>(k, n - k);
}

namespace detail {
inline void require_palindromic(const RuleMatrix& m) {
  if (!m.is_palindromic()) {
    throw std::domain_error("rule '" + m.name() +
                            "' is not palindromic: computing C_alpha(t) from a single evolution of W "
                            "at the origin relies on q -> q^-1 symmetry of every rule entry");
  }
}

/// xi = A D - B C for W(t) exponents (A, B) and V = Q^C P^D.
inline Coeff xi_from(Coeff a, Coeff b, const Insertion& v, std::uint32_t n) {
  return mod_sub(mod_mul(a, v.p_exp(), n), mod_mul(b, v.q_exp(), n), n);
}
}  // namespace detail

/// Commutator phase exponent between W evolved t steps from the origin and
/// V placed at site alpha: xi = A(t) D - B(t) C mod N.
inline Coeff xi(const RuleMatrix& m, const Insertion& w, const Insertion& v, Exponent alpha,
                std::uint64_t t) {
  detail::require_palindromic(m);
  const std::uint32_t n = m.modulus();
  v.check_modulus(n);
  Evolver ev(m, w.at(0, n));
  ev.advance(t);
  const auto [a, b] = ev.exponents_at(alpha);
  return detail::xi_from(a, b, v, n);
}

struct HeatMapInfo {
  std::uint32_t modulus = 2;
  std::string rule_name;
  Insertion w{1, 0};
  Insertion v{1, 0};
  std::int64_t half_width = 0;  // L: columns alpha in [-L, L]
  std::uint64_t horizon = 0;    // T: rows t in [0, T]
  Exponent rule_radius = 1;
  bool window_covers_cone = true;  // L >= r T
};

/// Dense space-time grid of xi(alpha, t) and C_alpha(t), row-major with
/// rows t = 0..T and columns alpha = -L..L. Immutable once built; the C
/// grid is always derived from the xi grid.
class HeatMap {
 public:
  HeatMap(HeatMapInfo info, std::vector<Coeff> xi_grid) : info_(std::move(info)), xi_(std::move(xi_grid)) {
    if (info_.half_width < 0) throw std::invalid_argument("heat map half-width must be >= 0");
    if (xi_.size() != rows() * cols()) throw std::invalid_argument("xi grid has wrong size");
    values_.resize(xi_.size());
    const std::uint32_t n = info_.modulus;
    for (std::size_t k = 0; k < xi_.size(); ++k) {
      if (xi_[k] >= n) throw std::invalid_argument("xi grid value not reduced mod N");
      values_[k] = squared_commutator(xi_[k], n);
    }
  }

  const HeatMapInfo& info() const { return info_; }
  std::uint32_t modulus() const { return info_.modulus; }
  std::int64_t half_width() const { return info_.half_width; }
  std::uint64_t horizon() const { return info_.horizon; }
  std::size_t rows() const { return static_cast<std::size_t>(info_.horizon) + 1; }
  std::size_t cols() const { return 2 * static_cast<std::size_t>(info_.half_width) + 1; }

  Coeff xi(std::uint64_t t, Exponent alpha) const { return xi_[index(t, alpha)]; }
  double value(std::uint64_t t, Exponent alpha) const { return values_[index(t, alpha)]; }

  std::span<const Coeff> xi_row(std::uint64_t t) const {
    return std::span<const Coeff>(xi_).subspan(static_cast<std::size_t>(t) * cols(), cols());
  }
  std::span<const double> value_row(std::uint64_t t) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(t) * cols(), cols());
  }
  std::span<const Coeff> xi_grid() const { return xi_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t index(std::uint64_t t, Exponent alpha) const {
    if (t > info_.horizon || alpha < -info_.half_width || alpha > info_.half_width) {
      throw std::out_of_range("heat map cell (t=" + std::to_string(t) + ", alpha=" + std::to_string(alpha) +
                              ") outside the grid");
    }
    return static_cast<std::size_t>(t) * cols() + static_cast<std::size_t>(alpha + info_.half_width);
  }

  HeatMapInfo info_;
  std::vector<Coeff> xi_;
  std::vector<double> values_;
};

/// Full heat map from a single evolution stream of W: row t is read off
/// W(t) before the next rule application.
inline HeatMap heat_map(const RuleMatrix& m, const Insertion& w, const Insertion& v, std::int64_t half_width,
                        std::uint64_t horizon) {
  detail::require_palindromic(m);
  if (half_width < 0) throw std::invalid_argument("window half-width L must be >= 0");
  const std::uint32_t n = m.modulus();
  v.check_modulus(n);
  HeatMapInfo info{n, m.name(), w, v, half_width, horizon, m.radius(),
                   static_cast<std::uint64_t>(half_width) >= static_cast<std::uint64_t>(m.radius()) * horizon};
  const std::size_t cols = 2 * static_cast<std::size_t>(half_width) + 1;
  std::vector<Coeff> grid(cols * (static_cast<std::size_t>(horizon) + 1), 0);
  Evolver ev(m, w.at(0, n));
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    Coeff* row = grid.data() + static_cast<std::size_t>(t) * cols;
    parallel_for(0, cols, 1 << 14, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t k = lo; k < hi; ++k) {
        const auto [a, b] = ev.exponents_at(static_cast<Exponent>(k) - half_width);
        row[k] = detail::xi_from(a, b, v, n);
      }
    });
    if (t < horizon) ev.step();
  }
  return HeatMap(std::move(info), std::move(grid));
}

struct ScramblingTime {
  std::uint64_t t_star = 0;
  Coeff xi = 0;       // xi(0, t*) mod N
  Coeff witness = 0;  // min(xi, N - xi)
};

/// Minimal t in [1, t_max] with C_0(t) >= 1; nullopt if none.
inline std::optional<ScramblingTime> scrambling_time(const RuleMatrix& m, const Insertion& w, const Insertion& v,
                                                     std::uint64_t t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  detail::require_palindromic(m);
  const std::uint32_t n = m.modulus();
  v.check_modulus(n);
  Evolver ev(m, w.at(0, n));
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    ev.step();
    const auto [a, b] = ev.exponents_at(0);
    const Coeff x = detail::xi_from(a, b, v, n);
    if (is_scrambled(x, n)) return ScramblingTime{t, x, symmetric_residue(x, n)};
  }
  return std::nullopt;
}

struct ScanRow {
  std::uint32_t modulus = 2;
  std::optional<ScramblingTime> result;  // nullopt: not scrambled within t_max
};

struct ScanResult {
  std::string rule_name;
  Insertion w{1, 0};
  Insertion v{1, 0};
  std::uint64_t t_max = 0;
  std::vector<ScanRow> rows;

  /// Values of N (in list order) whose t* exceeds the previous row's t*.
  std::vector<std::uint32_t> jump_boundaries() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& prev = rows[i - 1].result;
      const auto& cur = rows[i].result;
      if (prev && cur && cur->t_star > prev->t_star) out.push_back(rows[i].modulus);
    }
    return out;
  }
};

inline ScanResult scan_scrambling_times(const RuleTemplate& rule, std::span<const std::uint64_t> moduli,
                                        const Insertion& w, const Insertion& v, std::uint64_t t_max) {
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  ScanResult out{rule.name, w, v, t_max, {}};
  out.rows.resize(moduli.size());
  for (std::size_t i = 0; i < moduli.size(); ++i) out.rows[i].modulus = checked_modulus(moduli[i]);
  // Instantiate up front so invalid rules/insertions fail on the calling thread.
  std::vector<RuleMatrix> rules;
  rules.reserve(moduli.size());
  for (const auto& row : out.rows) {
    rules.push_back(rule.instantiate(row.modulus));
    detail::require_palindromic(rules.back());
    w.check_modulus(row.modulus);
    v.check_modulus(row.modulus);
  }
  parallel_for(0, moduli.size(), 16, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out.rows[i].result = scrambling_time(rules[i], w, v, t_max);
  });
  return out;
}

struct ConeFit {
  std::vector<std::pair<std::uint64_t, Exponent>> edge_points;  // (t, alpha_max(t)), all qualifying rows
  std::size_t fit_begin = 0;  // first edge point used by the fit
  LineFit fit;                // alpha_max = slope * t + intercept
  double v_b = 0;
};

/// Least-squares cone edge over the last half of the time rows. Rows with
/// no cell at or above `threshold` are skipped.
inline ConeFit fit_butterfly_velocity(const HeatMap& h, double threshold) {
  ConeFit out;
  for (std::uint64_t t = 0; t <= h.horizon(); ++t) {
    const auto row = h.value_row(t);
    for (std::size_t k = row.size(); k-- > 0;) {
      if (meets_threshold(row[k], threshold)) {
        out.edge_points.emplace_back(t, static_cast<Exponent>(k) - h.half_width());
        break;
      }
    }
  }
  const std::uint64_t first_row = (h.horizon() + 1) / 2;
  std::vector<double> ts, as;
  for (std::size_t i = 0; i < out.edge_points.size(); ++i) {
    if (out.edge_points[i].first < first_row) {
      out.fit_begin = i + 1;
      continue;
    }
    ts.push_back(static_cast<double>(out.edge_points[i].first));
    as.push_back(static_cast<double>(out.edge_points[i].second));
  }
  if (ts.size() < 2) {
    throw std::invalid_argument("cone fit needs at least two late-time rows with C >= " + std::to_string(threshold));
  }
  out.fit = fit_line(ts, as);
  out.v_b = out.fit.slope;
  return out;
}

}  // namespace cqca
