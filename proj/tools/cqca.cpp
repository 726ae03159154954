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

// cqca: Clifford QCA scrambling experiments.
//
//   cqca heatmap --rule paper --N 2 --V Q --W Q --L 100 --T 100 --out out/
//   cqca scan    --rule paper --N 2..378 --V Q --W Q
//   cqca whitney --t-max 12
//   cqca fractal --rule paper --N 2 --T 64,128,256,512,1024
//   cqca scar    --rule paper --N 10 --kappa 5 --prime 2 --ell 1 --W Q

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_run_options(CLI::App* sub, cqca::cli::RunConfig& c, bool with_n, bool with_t) {
  sub->add_option("--rule", c.rule, "Built-in rule name ('paper') or path to a rule JSON file")
      ->capture_default_str();
  if (with_n) sub->add_option("--N", c.modulus, "Local dimension N (default: rule file N, else 2)");
  sub->add_option("--V", c.v, "Insertion V: Q, P, QP or 'i,j'")->capture_default_str();
  sub->add_option("--W", c.w, "Insertion W: Q, P, QP or 'i,j'")->capture_default_str();
  sub->add_option("--L", c.half_width, "Window half-width (alpha in [-L, L])")->capture_default_str();
  if (with_t) sub->add_option("--T", c.horizon, "Time horizon")->capture_default_str();
  sub->add_option("--threshold", c.threshold, "Scrambling threshold on C")->capture_default_str();
  sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cqca::cli;
  CLI::App app{"Clifford quantum cellular automaton scrambling simulator"};
  app.require_subcommand(1);

  RunConfig heat;
  auto* heatmap = app.add_subcommand("heatmap", "Squared-commutator space-time map (CSV, PGM, JSON summary)");
  add_run_options(heatmap, heat, true, true);
  heatmap->add_option("--formats", heat.formats, "Comma list of csv,pgm,json")->capture_default_str();

  ScanConfig scan;
  auto* scan_cmd = app.add_subcommand("scan", "Scrambling time t* over a range of N");
  add_run_options(scan_cmd, scan.run, false, false);
  scan_cmd->add_option("--N", scan.moduli, "N range 'a..b' or list 'a,b,c'")->capture_default_str();
  scan_cmd->add_option("--t-max", scan.t_max, "Largest time searched")->capture_default_str();

  WhitneyConfig whit;
  auto* whitney = app.add_subcommand("whitney", "Whitney numbers W_2t with brute-force cross-check");
  whitney->add_option("--t-max", whit.t_max, "Largest t")->capture_default_str();
  whitney->add_option("--oracle-max", whit.oracle_max, "Largest t checked by subset enumeration")
      ->capture_default_str();
  whitney->add_option("--out", whit.out_dir, "Output directory")->capture_default_str();

  FractalConfig frac;
  auto* fractal = app.add_subcommand("fractal", "Box-counting fractal dimension of the scrambled region");
  add_run_options(fractal, frac.run, true, false);
  fractal->add_option("--T", frac.horizons, "Comma list of horizons (>= 4)")->capture_default_str();
  fractal->add_option("--pattern", frac.pattern, "'cqca' or the synthetic 'filled-cone'")->capture_default_str();

  ScarConfig scar;
  auto* scar_cmd = app.add_subcommand("scar", "Primal-scar comparison N = kappa p^ell vs p^ell");
  add_run_options(scar_cmd, scar.run, true, true);
  scar_cmd->remove_option(scar_cmd->get_option("--V"));
  scar_cmd->add_option("--V", scar.v, "Insertion V (defaults to W)");
  scar_cmd->add_option("--kappa", scar.kappa, "kappa, coprime to p")->required();
  scar_cmd->add_option("--prime", scar.prime, "prime p")->required();
  scar_cmd->add_option("--ell", scar.ell, "exponent ell >= 1")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationFailure;
  }

  try {
    if (*heatmap) return cmd_heatmap(heat);
    if (*scan_cmd) return cmd_scan(scan);
    if (*whitney) return cmd_whitney(whit);
    if (*fractal) return cmd_fractal(frac);
    if (*scar_cmd) return cmd_scar(scar);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << '\n';
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kValidationFailure;
}
