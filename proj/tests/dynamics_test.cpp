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

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "cqca/combinatorics.hpp"
#include "cqca/dynamics.hpp"

using namespace cqca;

namespace {

const Insertion kQ{1, 0};
const Insertion kP{0, 1};
const Insertion kQP{1, 1};

RuleMatrix shift_rule(std::uint32_t n) {
  RuleTemplate t;
  t.name = "shift";
  t.entries[0][0] = {{1, 1}};
  t.entries[1][1] = {{0, 1}};
  return t.instantiate(n);
}

}  // namespace

TEST(Insertion, ParseAndValidate) {
  EXPECT_EQ(Insertion::parse("Q"), kQ);
  EXPECT_EQ(Insertion::parse("P"), kP);
  EXPECT_EQ(Insertion::parse("QP"), kQP);
  EXPECT_EQ(Insertion::parse("5,0"), Insertion(5, 0));
  EXPECT_THROW(Insertion::parse("X"), std::invalid_argument);
  EXPECT_THROW(Insertion::parse("1,"), std::invalid_argument);
  EXPECT_THROW(Insertion::parse("0,0"), std::invalid_argument);
  EXPECT_THROW(Insertion(0, 0), std::invalid_argument);
  EXPECT_THROW(Insertion(-1, 1), std::invalid_argument);
  EXPECT_THROW(Insertion(5, 0).check_modulus(5), std::invalid_argument);
  EXPECT_NO_THROW(Insertion(5, 0).check_modulus(10));
}

TEST(Xi, OneStepAtOriginN7) {
  // W(1) = Q_{-1} Q_0 P_0 Q_1: (A, B) = (1, 1) at alpha = 0; V = Q so xi = -B.
  EXPECT_EQ(xi(paper_rule(7), kQ, kQ, 0, 1), 6u);
  EXPECT_NEAR(squared_commutator(6, 7), 4 * std::pow(std::sin(std::numbers::pi / 7), 2), 1e-15);
}

TEST(Xi, EqualInsertionsCommuteAtTimeZero) {
  for (std::uint32_t n : {2u, 3u, 7u, 10u}) {
    for (const auto& w : {kQ, kP, kQP, Insertion(1, 2)}) {
      if (w.q_exp() >= n || w.p_exp() >= n) continue;
      EXPECT_EQ(xi(paper_rule(n), w, w, 0, 0), 0u);
    }
  }
}

TEST(Xi, ZeroOutsideLightCone) {
  EXPECT_EQ(xi(paper_rule(7), kQ, kQ, 2, 1), 0u);
  EXPECT_EQ(xi(paper_rule(7), kQ, kQ, -2, 1), 0u);
}

TEST(Xi, NonPalindromicRuleRejected) {
  EXPECT_THROW(xi(shift_rule(5), kQ, kQ, 0, 1), std::domain_error);
  EXPECT_THROW(heat_map(shift_rule(5), kQ, kQ, 4, 4), std::domain_error);
  EXPECT_THROW(scrambling_time(shift_rule(5), kQ, kQ, 4), std::domain_error);
}

TEST(Xi, OriginWithQQIsMinusPreviousWhitneyNumber) {
  // For V = Q only the P exponent of W(t) matters, and the rule sends the
  // Q exponent at t-1 to the P exponent at t: xi(0,t) = -W_{2(t-1)}.
  const std::uint32_t n = 2147483647u;
  const auto m = paper_rule(n);
  EXPECT_EQ(xi(m, kQ, kQ, 0, 1), n - 1);  // W_0 = 1
  for (unsigned t = 1; t <= 15; ++t) {
    const auto w = whitney_hypergeometric(t);
    EXPECT_EQ(xi(m, kQ, kQ, 0, t + 1), n - static_cast<Coeff>(w)) << "t = " << t;
  }
}

TEST(SquaredCommutator, Examples) {
  for (std::uint32_t n : {2u, 3u, 1000u}) EXPECT_EQ(squared_commutator(0, n), 0.0);
  EXPECT_EQ(squared_commutator(1, 2), 4.0);
  EXPECT_EQ(squared_commutator(5, 10), 4.0);
}

TEST(SquaredCommutator, PeriodicAndSymmetric) {
  for (std::uint32_t n : {2u, 3u, 5u, 10u, 97u, 1000u}) {
    for (std::int64_t x = 0; x < static_cast<std::int64_t>(n); ++x) {
      const double c = squared_commutator(x, n);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 4.0);
      EXPECT_EQ(c, squared_commutator(x + n, n));
      EXPECT_EQ(c, squared_commutator(x - 3 * static_cast<std::int64_t>(n), n));
      EXPECT_EQ(c, squared_commutator(static_cast<std::int64_t>(n) - x, n));
    }
  }
}

TEST(IsScrambled, Examples) {
  EXPECT_TRUE(is_scrambled(1, 6));
  EXPECT_FALSE(is_scrambled(1, 7));
  for (std::uint32_t n : {2u, 6u, 100u}) EXPECT_FALSE(is_scrambled(0, n));
  EXPECT_TRUE(is_scrambled(5, 6));  // 5N/6 edge
}

TEST(IsScrambled, AgreesWithFloatingPointThresholdExhaustively) {
  std::uint64_t disagreements = 0;
  for (std::uint32_t n = 2; n <= 10000; ++n) {
    for (std::uint32_t x = 0; x < n; ++x) {
      if (is_scrambled(x, n) != meets_threshold(squared_commutator(x, n), 1.0)) ++disagreements;
    }
  }
  EXPECT_EQ(disagreements, 0u);
}

TEST(HeatMap, N2CellsAreZeroOrFour) {
  const auto h = heat_map(paper_rule(2), kQ, kQ, 100, 100);
  for (double c : h.values()) EXPECT_TRUE(c == 0.0 || c == 4.0);
  // Row 0: Q commutes with Q everywhere.
  for (double c : h.value_row(0)) EXPECT_EQ(c, 0.0);
  EXPECT_EQ(h.value(1, 0), 4.0);
}

TEST(HeatMap, ValuesDerivedFromXi) {
  const auto h = heat_map(paper_rule(10), kQP, kP, 20, 20);
  for (std::size_t k = 0; k < h.values().size(); ++k) {
    EXPECT_EQ(h.values()[k], squared_commutator(h.xi_grid()[k], 10));
  }
}

TEST(HeatMap, MatchesPointwiseXi) {
  const auto m = paper_rule(5);
  const auto h = heat_map(m, kQ, kQP, 6, 6);
  for (std::uint64_t t = 0; t <= 6; ++t) {
    for (Exponent a = -6; a <= 6; ++a) EXPECT_EQ(h.xi(t, a), xi(m, kQ, kQP, a, t));
  }
}

TEST(HeatMap, LightConeAndReflectionSymmetry) {
  for (std::uint32_t n : {2u, 3u, 5u, 10u}) {
    for (const auto& w : {kQ, kP, kQP}) {
      for (const auto& v : {kQ, kP, kQP}) {
        const auto h = heat_map(paper_rule(n), w, v, 70, 64);
        for (std::uint64_t t = 0; t <= 64; ++t) {
          for (Exponent a = -70; a <= 70; ++a) {
            if (std::abs(a) > static_cast<Exponent>(t)) {
              ASSERT_EQ(h.xi(t, a), 0u) << "N=" << n << " t=" << t << " a=" << a;
            }
            ASSERT_EQ(h.xi(t, a), h.xi(t, -a)) << "N=" << n << " t=" << t << " a=" << a;
          }
        }
      }
    }
  }
}

TEST(HeatMap, Q5AtN10ReproducesN2Pattern) {
  const auto h10 = heat_map(paper_rule(10), Insertion(5, 0), Insertion(5, 0), 100, 100);
  const auto h2 = heat_map(paper_rule(2), kQ, kQ, 100, 100);
  ASSERT_EQ(h10.values().size(), h2.values().size());
  for (std::size_t k = 0; k < h2.values().size(); ++k) ASSERT_EQ(h10.values()[k], h2.values()[k]);
}

TEST(HeatMap, NarrowWindowIsFlagged) {
  const auto h = heat_map(paper_rule(3), kQ, kQ, 5, 10);
  EXPECT_FALSE(h.info().window_covers_cone);
  EXPECT_EQ(h.cols(), 11u);
  EXPECT_TRUE(heat_map(paper_rule(3), kQ, kQ, 10, 10).info().window_covers_cone);
  EXPECT_THROW(h.xi(11, 0), std::out_of_range);
  EXPECT_THROW(h.xi(0, 6), std::out_of_range);
}

TEST(HeatMap, ZeroHorizonIsSingleRow) {
  const auto h = heat_map(paper_rule(2), kQ, kQ, 3, 0);
  EXPECT_EQ(h.rows(), 1u);
  for (double c : h.values()) EXPECT_EQ(c, 0.0);
}

TEST(ScramblingTime, SmallN) {
  const auto r = scrambling_time(paper_rule(2), kQ, kQ, 10);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->t_star, 1u);
  EXPECT_EQ(r->witness, 1u);
}

TEST(ScramblingTime, FollowsXiDefinitionForLargerN) {
  // |xi(0,t)| runs 1, 1, 2, 5, 11, 26, 63 for t = 1..7 with Q/Q, so N = 66
  // first reaches the band N/6 <= |xi| at t = 5 and N = 157 at t = 7.
  const auto r66 = scrambling_time(paper_rule(66), kQ, kQ, 20);
  ASSERT_TRUE(r66.has_value());
  EXPECT_EQ(r66->t_star, 5u);
  EXPECT_EQ(r66->witness, 11u);
  EXPECT_EQ(r66->xi, 66u - 11u);

  const auto r157 = scrambling_time(paper_rule(157), kQ, kQ, 20);
  ASSERT_TRUE(r157.has_value());
  EXPECT_EQ(r157->t_star, 7u);
  EXPECT_EQ(r157->witness, 63u);
}

TEST(ScramblingTime, NotFoundIsExplicit) {
  EXPECT_FALSE(scrambling_time(paper_rule(2147483647u), kQ, kQ, 5).has_value());
  EXPECT_THROW(scrambling_time(paper_rule(5), kQ, kQ, 0), std::invalid_argument);
}

TEST(ScramblingTime, MatchesWhitneyBandCrossModule) {
  // t*(N) = 1 + min{s >= 0 : W_2s in [N/6, 5N/6]}, W_0 = 1.
  std::vector<std::uint64_t> w{1};
  for (unsigned t = 1; t <= 12; ++t) w.push_back(static_cast<std::uint64_t>(whitney_hypergeometric(t)));
  for (std::uint32_t n = 2; n <= 378; ++n) {
    std::uint64_t expected = 0;
    for (std::size_t s = 0; s < w.size(); ++s) {
      if (6 * w[s] >= n && 6 * w[s] <= 5ull * n) {
        expected = s + 1;
        break;
      }
    }
    ASSERT_NE(expected, 0u);
    const auto r = scrambling_time(paper_rule(n), kQ, kQ, 20);
    ASSERT_TRUE(r.has_value()) << n;
    EXPECT_EQ(r->t_star, expected) << "N = " << n;
  }
}

TEST(Scan, JumpBoundariesOverTableRange) {
  std::vector<std::uint64_t> moduli;
  for (std::uint64_t n = 2; n <= 378; ++n) moduli.push_back(n);
  const auto scan = scan_scrambling_times(paper_rule_template(), moduli, kQ, kQ, 64);
  EXPECT_EQ(scan.jump_boundaries(), (std::vector<std::uint32_t>{7, 13, 31, 67, 157}));
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    ASSERT_TRUE(scan.rows[i].result.has_value());
    EXPECT_GE(scan.rows[i].result->t_star, scan.rows[i - 1].result->t_star);
  }
}

TEST(Scan, SingleAndEmpty) {
  const std::vector<std::uint64_t> one{2};
  const auto scan = scan_scrambling_times(paper_rule_template(), one, kQ, kQ, 8);
  ASSERT_EQ(scan.rows.size(), 1u);
  EXPECT_EQ(scan.rows[0].modulus, 2u);
  EXPECT_EQ(scan.rows[0].result->t_star, 1u);
  EXPECT_EQ(scan.rows[0].result->witness, 1u);

  const auto empty = scan_scrambling_times(paper_rule_template(), {}, kQ, kQ, 8);
  EXPECT_TRUE(empty.rows.empty());
  EXPECT_TRUE(empty.jump_boundaries().empty());

  const std::vector<std::uint64_t> bad{1};
  EXPECT_THROW(scan_scrambling_times(paper_rule_template(), bad, kQ, kQ, 8), std::invalid_argument);
}

TEST(Scan, NotFoundRowsCarrySentinel) {
  const std::vector<std::uint64_t> moduli{2, 2147483647};
  const auto scan = scan_scrambling_times(paper_rule_template(), moduli, kQ, kQ, 4);
  EXPECT_TRUE(scan.rows[0].result.has_value());
  EXPECT_FALSE(scan.rows[1].result.has_value());
  EXPECT_TRUE(scan.jump_boundaries().empty());
}

TEST(ButterflyVelocity, N2ConeEdge) {
  const auto h = heat_map(paper_rule(2), kQ, kQ, 100, 100);
  const auto fit = fit_butterfly_velocity(h, 1.0);
  EXPECT_NEAR(fit.v_b, 1.0, 0.05);
  EXPECT_GT(fit.v_b, 0.0);
  EXPECT_LE(fit.v_b, 1.0 + 1e-12);
}

TEST(ButterflyVelocity, EdgeNeverExceedsLightCone) {
  for (std::uint32_t n : {2u, 4u, 10u, 1000u}) {
    const auto h = heat_map(paper_rule(n), kQ, kQ, 120, 120);
    const auto fit = fit_butterfly_velocity(h, 1.0);
    for (const auto& [t, a] : fit.edge_points) EXPECT_LE(a, static_cast<Exponent>(t));
    EXPECT_GT(fit.v_b, 0.0);
  }
}

TEST(ButterflyVelocity, AllZeroMapIsAnError) {
  HeatMapInfo info;
  info.half_width = 5;
  info.horizon = 5;
  const HeatMap zero(info, std::vector<Coeff>(11 * 6, 0));
  EXPECT_THROW(fit_butterfly_velocity(zero, 1.0), std::invalid_argument);
}
