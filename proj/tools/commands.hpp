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

// Subcommand implementations for the cqca command-line tool. Kept in a
// header so tests can drive them without spawning processes.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqca/cqca.hpp"

namespace cqca::cli {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kRuntimeFailure = 2 };

/// Bad user input. Maps to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A consistency check failed (oracle mismatch, scar mismatch). Maps to
/// exit code 2.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string rule = "paper";
  std::optional<std::uint64_t> modulus;
  std::string v = "Q";
  std::string w = "Q";
  std::int64_t half_width = 100;
  std::uint64_t horizon = 100;
  double threshold = 1.0;
  std::filesystem::path out_dir = ".";
  std::string formats = "csv,pgm,json";
};

struct ScanConfig {
  RunConfig run;
  std::string moduli = "2..378";
  std::uint64_t t_max = 64;
};

struct WhitneyConfig {
  unsigned t_max = 6;
  unsigned oracle_max = 12;
  std::filesystem::path out_dir = ".";
};

struct FractalConfig {
  RunConfig run;
  std::string horizons = "64,128,256,512,1024";
  std::string pattern = "cqca";  // or "filled-cone"
};

struct ScarConfig {
  RunConfig run;
  std::uint64_t kappa = 1;
  std::uint64_t prime = 2;
  unsigned ell = 1;
  std::optional<std::string> v;  // defaults to W
};

// ---------------------------------------------------------------------------
// formatting helpers

inline std::string format_g9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

inline std::uint8_t pixel_value(double c) {
  const double scaled = std::round(c / 4.0 * 255.0);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

/// Header "t,<alpha=-L>,...,<alpha=L>", then one line per t with C values
/// at 9 significant digits.
inline void write_heatmap_csv(const HeatMap& h, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "t";
  for (std::int64_t a = -h.half_width(); a <= h.half_width(); ++a) out << ',' << a;
  out << '\n';
  for (std::uint64_t t = 0; t <= h.horizon(); ++t) {
    out << t;
    for (double c : h.value_row(t)) out << ',' << format_g9(c);
    out << '\n';
  }
}

/// Plain (P2) 8-bit PGM, row 0 = t = 0 at the top, C in [0,4] -> [0,255].
inline void write_heatmap_pgm(const HeatMap& h, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "P2\n" << h.cols() << ' ' << h.rows() << "\n255\n";
  for (std::uint64_t t = 0; t <= h.horizon(); ++t) {
    std::size_t line = 0;
    bool first = true;
    for (double c : h.value_row(t)) {
      const std::string px = std::to_string(pixel_value(c));
      // plain PGM lines stay under 70 characters
      if (!first && line + 1 + px.size() > 70) {
        out << '\n';
        line = 0;
        first = true;
      }
      if (!first) {
        out << ' ';
        ++line;
      }
      out << px;
      line += px.size();
      first = false;
    }
    out << '\n';
  }
}

inline void write_json(const nlohmann::json& doc, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

/// Parses "a..b" (inclusive) or "a,b,c".
inline std::vector<std::uint64_t> parse_moduli(const std::string& text) {
  auto to_u64 = [](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ValidationError("bad integer '" + s + "' in N list");
    return static_cast<std::uint64_t>(v);
  };
  std::vector<std::uint64_t> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const std::uint64_t lo = to_u64(text.substr(0, dots));
    const std::uint64_t hi = to_u64(text.substr(dots + 2));
    if (hi < lo) throw ValidationError("reversed N range " + text);
    if (hi - lo > 10'000'000) throw ValidationError("N range " + text + " is too long");
    for (std::uint64_t n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_u64(item));
  }
  for (auto n : out) {
    if (n < 2 || n > kMaxModulus) throw ValidationError("N = " + std::to_string(n) + " outside [2, 2^31)");
  }
  return out;
}

/// Parses a comma-separated list of horizons T.
inline std::vector<std::uint64_t> parse_horizons(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      if (!item.empty() && item[0] == '-') throw std::invalid_argument("negative");
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v < 1) throw ValidationError("bad horizon '" + item + "' in T list");
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// validation

struct ResolvedRun {
  RuleSource source;
  std::uint32_t modulus;
  Insertion v;
  Insertion w;
};

inline void validate_common(const RunConfig& c, bool allow_zero_horizon) {
  if (c.modulus && (*c.modulus < 2 || *c.modulus > kMaxModulus)) {
    throw ValidationError("--N must satisfy 2 <= N < 2^31");
  }
  if (c.horizon < 1 && !allow_zero_horizon) throw ValidationError("--T must be >= 1");
  if (c.half_width < 1) throw ValidationError("--L must be >= 1");
  if (!(c.threshold > 0.0 && c.threshold <= 4.0)) throw ValidationError("--threshold must lie in (0, 4]");
}

inline ResolvedRun resolve(const RunConfig& c) {
  try {
    RuleSource src = load_rule(c.rule);
    const std::uint64_t n = c.modulus.value_or(src.modulus.value_or(2));
    const auto n32 = checked_modulus(n);
    Insertion v = Insertion::parse(c.v);
    Insertion w = Insertion::parse(c.w);
    v.check_modulus(n32);
    w.check_modulus(n32);
    return {std::move(src), n32, v, w};
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

inline RuleMatrix instantiate_or_throw(const RuleTemplate& rule, std::uint64_t n) {
  try {
    RuleMatrix m = rule.instantiate(n);
    if (!m.is_palindromic()) {
      throw ValidationError("rule '" + m.name() + "' is not palindromic (entries must be symmetric under q -> 1/q)");
    }
    return m;
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

inline bool wants(const RunConfig& c, const std::string& fmt) {
  std::stringstream ss(c.formats);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == fmt) return true;
  }
  return false;
}

inline void ensure_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string());
  }
}

inline nlohmann::json optional_number(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

// ---------------------------------------------------------------------------
// subcommands

inline int cmd_heatmap(const RunConfig& c, std::ostream& log = std::cerr) {
  validate_common(c, /*allow_zero_horizon=*/true);
  const ResolvedRun r = resolve(c);
  const RuleMatrix m = instantiate_or_throw(r.source.rule, r.modulus);
  if (static_cast<std::uint64_t>(c.half_width) < static_cast<std::uint64_t>(m.radius()) * c.horizon) {
    log << "warning: window L = " << c.half_width << " is narrower than the light cone r*T = "
        << m.radius() * static_cast<std::int64_t>(c.horizon) << "; outer cells are not shown\n";
  }
  const HeatMap h = heat_map(m, r.w, r.v, c.half_width, c.horizon);
  ensure_out_dir(c.out_dir);
  if (wants(c, "csv")) write_heatmap_csv(h, c.out_dir / "heatmap.csv");
  if (wants(c, "pgm")) write_heatmap_pgm(h, c.out_dir / "heatmap.pgm");
  if (wants(c, "json")) {
    nlohmann::json summary;
    summary["N"] = r.modulus;
    summary["rule"] = m.name();
    summary["W"] = r.w.label();
    summary["V"] = r.v.label();
    summary["L"] = c.half_width;
    summary["T"] = c.horizon;
    summary["threshold"] = c.threshold;
    summary["window_covers_cone"] = h.info().window_covers_cone;
    std::optional<ScramblingTime> ts;
    if (c.horizon >= 1) ts = scrambling_time(m, r.w, r.v, c.horizon);
    summary["t_star"] = ts ? nlohmann::json(ts->t_star) : nlohmann::json(nullptr);
    summary["xi_witness"] = ts ? nlohmann::json(ts->witness) : nlohmann::json(nullptr);
    std::optional<double> vb;
    try {
      vb = fit_butterfly_velocity(h, c.threshold).v_b;
    } catch (const std::invalid_argument&) {
      // too few scrambled rows for a cone fit
    }
    summary["v_B"] = optional_number(vb);
    summary["fill_fraction"] = cone_fill_fraction(h, c.threshold);
    write_json(summary, c.out_dir / "summary.json");
  }
  return kSuccess;
}

inline int cmd_scan(const ScanConfig& c, std::ostream& /*log*/ = std::cerr) {
  if (c.t_max < 1) throw ValidationError("--t-max must be >= 1");
  const auto moduli = parse_moduli(c.moduli);
  RunConfig probe = c.run;
  probe.modulus = moduli.empty() ? std::optional<std::uint64_t>{} : std::optional<std::uint64_t>{moduli.front()};
  const ResolvedRun r = resolve(probe);
  for (auto n : moduli) instantiate_or_throw(r.source.rule, n);
  ScanResult scan;
  try {
    scan = scan_scrambling_times(r.source.rule, moduli, r.w, r.v, c.t_max);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  ensure_out_dir(c.run.out_dir);
  {
    auto out = open_output(c.run.out_dir / "scan.csv");
    out << "N,t_star,xi_witness\n";
    for (const auto& row : scan.rows) {
      out << row.modulus << ',';
      if (row.result) {
        out << row.result->t_star << ',' << row.result->witness << '\n';
      } else {
        out << "NA,NA\n";
      }
    }
  }
  nlohmann::json jumps;
  jumps["rule"] = scan.rule_name;
  jumps["W"] = r.w.label();
  jumps["V"] = r.v.label();
  jumps["t_max"] = c.t_max;
  jumps["jumps"] = scan.jump_boundaries();
  std::uint64_t not_found = 0;
  for (const auto& row : scan.rows) not_found += row.result ? 0 : 1;
  jumps["not_found"] = not_found;
  write_json(jumps, c.run.out_dir / "jumps.json");
  return kSuccess;
}

inline int cmd_whitney(const WhitneyConfig& c, std::ostream& log = std::cerr) {
  WhitneySequence seq;
  try {
    seq = whitney_sequence(c.t_max, c.oracle_max);
  } catch (const WhitneyMismatch& e) {
    log << "error: " << e.what() << '\n';
    throw ConsistencyError(e.what());
  }
  ensure_out_dir(c.out_dir);
  auto out = open_output(c.out_dir / "whitney.csv");
  out << "t,W_2t,oracle_checked\n";
  for (const auto& e : seq.values) {
    out << e.t << ',' << e.value.str() << ',' << (e.oracle_checked ? "true" : "false") << '\n';
  }
  return kSuccess;
}

/// Every cell with |alpha| <= t carries C = 4.
inline HeatMap filled_cone(std::uint64_t horizon, std::int64_t half_width) {
  HeatMapInfo info;
  info.modulus = 2;
  info.rule_name = "filled-cone";
  info.half_width = half_width;
  info.horizon = horizon;
  info.window_covers_cone = static_cast<std::uint64_t>(half_width) >= horizon;
  const std::size_t cols = 2 * static_cast<std::size_t>(half_width) + 1;
  std::vector<Coeff> xi(cols * (horizon + 1), 0);
  for (std::uint64_t t = 0; t <= horizon; ++t) {
    for (std::int64_t a = -half_width; a <= half_width; ++a) {
      if (static_cast<std::uint64_t>(std::abs(a)) <= t) xi[t * cols + static_cast<std::size_t>(a + half_width)] = 1;
    }
  }
  return HeatMap(std::move(info), std::move(xi));
}

inline int cmd_fractal(const FractalConfig& c, std::ostream& /*log*/ = std::cerr) {
  validate_common(c.run, false);
  const auto horizons = parse_horizons(c.horizons);
  if (horizons.size() < 4) throw ValidationError("fractal needs at least 4 horizons, got " + std::to_string(horizons.size()));
  HeatMapGenerator gen;
  std::string label;
  if (c.pattern == "filled-cone") {
    gen = [](std::uint64_t t) { return filled_cone(t, static_cast<std::int64_t>(t)); };
    label = "filled-cone";
  } else if (c.pattern == "cqca") {
    const ResolvedRun r = resolve(c.run);
    const RuleMatrix m = instantiate_or_throw(r.source.rule, r.modulus);
    gen = [m, r](std::uint64_t t) { return heat_map(m, r.w, r.v, static_cast<std::int64_t>(t * m.radius()), t); };
    label = m.name();
  } else {
    throw ValidationError("--pattern must be 'cqca' or 'filled-cone'");
  }
  BoxCountSeries series;
  try {
    series = box_count(gen, horizons, c.run.threshold);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  } catch (const std::domain_error& e) {
    throw ConsistencyError(e.what());
  }
  ensure_out_dir(c.run.out_dir);
  {
    auto out = open_output(c.run.out_dir / "boxcount.csv");
    out << "T,sum_f,log_T,log_sum_f\n";
    for (const auto& p : series.points) {
      out << p.horizon << ',' << p.sum_f << ',' << format_g9(p.log_t) << ',' << format_g9(p.log_sum_f) << '\n';
    }
  }
  nlohmann::json fit;
  fit["pattern"] = label;
  fit["threshold"] = series.threshold;
  fit["D"] = series.dimension;
  fit["intercept"] = series.intercept;
  fit["fit_window"] = {{"first_T", series.points[series.fit_begin].horizon},
                       {"last_T", series.points.back().horizon},
                       {"points", series.points.size() - series.fit_begin}};
  write_json(fit, c.run.out_dir / "fit.json");
  return kSuccess;
}

inline int cmd_scar(const ScarConfig& c, std::ostream& log = std::cerr) {
  validate_common(c.run, false);
  RunConfig probe = c.run;
  probe.modulus = 2;  // insertions are checked against p^ell below
  const ResolvedRun r = resolve(probe);
  if (!c.run.modulus) throw ValidationError("scar needs --N");
  std::optional<Insertion> v;
  try {
    if (c.v) v = Insertion::parse(*c.v);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  std::optional<ScarComparison> cmp;
  try {
    cmp.emplace(primal_scar_check(r.source.rule, *c.run.modulus, c.kappa, c.prime, c.ell, r.w, v, c.run.horizon,
                                  c.run.half_width));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  } catch (const std::domain_error& e) {
    throw ValidationError(e.what());
  }
  ensure_out_dir(c.run.out_dir);
  write_heatmap_csv(cmp->composite, c.run.out_dir / "composite_heatmap.csv");
  write_heatmap_pgm(cmp->composite, c.run.out_dir / "composite_heatmap.pgm");
  write_heatmap_csv(cmp->prime_power_map, c.run.out_dir / "prime_power_heatmap.csv");
  write_heatmap_pgm(cmp->prime_power_map, c.run.out_dir / "prime_power_heatmap.pgm");
  nlohmann::json doc;
  doc["N"] = cmp->n_composite;
  doc["kappa"] = cmp->kappa;
  doc["prime"] = cmp->prime;
  doc["ell"] = cmp->ell;
  doc["prime_power"] = cmp->prime_power;
  doc["exact_match"] = cmp->exact_match;
  doc["support_match"] = cmp->support_match;
  doc["mismatched_cells"] = cmp->mismatched_cells;
  doc["max_cell_deviation"] = cmp->max_cell_deviation;
  write_json(doc, c.run.out_dir / "scar.json");
  if (!cmp->exact_match) {
    log << "scar mismatch: " << cmp->mismatched_cells << " cells differ (max |dC| = " << cmp->max_cell_deviation
        << ")\n";
    return kRuntimeFailure;
  }
  return kSuccess;
}

}  // namespace cqca::cli
