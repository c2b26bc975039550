#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "netsmith/errors.hpp"
#include "netsmith/gain_analysis.hpp"

using namespace netsmith;

namespace {

// Squared worst-case norms at v_bar = 1, frozen from an independent exact
// search over delays and selections (T = 0, 1, 2, ...).
const std::vector<double> kNormTau1{1, 3, 6, 8, 11, 13, 16, 18, 21};
const std::vector<double> kNormTau2{2, 8, 17, 27, 37, 46, 56, 66, 75};
const std::vector<double> kNormTau3{3, 13, 30, 50, 71, 93, 116, 136};
const std::vector<double> kNormTau2From17{162, 172, 182, 191, 201, 211, 220, 230, 240, 249};

const std::vector<double>& frozen(int tau_bar) {
  return tau_bar == 1 ? kNormTau1 : tau_bar == 2 ? kNormTau2 : kNormTau3;
}

}  // namespace

TEST(AlphaFormula, Examples) {
  EXPECT_EQ(alpha_formula(Protocol::p1, 4), 4.0);
  EXPECT_EQ(alpha_formula(Protocol::p2, 1), 1.0);
  EXPECT_NEAR(alpha_formula(Protocol::p3, 2), std::sqrt(58.0 / 6.0), 1e-15);
  EXPECT_NEAR(alpha_formula(Protocol::p3, 2), 3.1091, 1e-4);
  EXPECT_NEAR(alpha_formula(Protocol::p3, 1), std::sqrt(15.0 / 6.0), 1e-15);
  for (Protocol p : {Protocol::p1, Protocol::p2, Protocol::p3}) EXPECT_EQ(alpha_formula(p, 0), 0.0);
  EXPECT_THROW(alpha_formula(Protocol::p1, -1), ValidationError);
}

TEST(AlphaFormula, P2Expression) {
  for (int t = 1; t <= 50; ++t) {
    const double want = std::max(std::sqrt(t * (14.0 * t * t - 9.0 * t + 1.0) / (6.0 * (t + 1))), 1.0);
    EXPECT_NEAR(alpha_formula(Protocol::p2, t), want, 1e-12);
  }
}

TEST(AlphaFormula, OrderingP3Dominates) {
  for (int t = 1; t <= 100; ++t) {
    EXPECT_GE(alpha_formula(Protocol::p3, t), alpha_formula(Protocol::p2, t));
    EXPECT_GE(alpha_formula(Protocol::p3, t), alpha_formula(Protocol::p1, t));
  }
}

TEST(WorstCasePattern, Examples) {
  EXPECT_EQ(worst_case_pattern(3, 9).delays, (std::vector<int>{3, 2, 1, 0, 3, 2, 1, 0, 3, 2}));
  EXPECT_EQ(worst_case_pattern(1, 2).delays, (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(worst_case_pattern(2, 4).delays, (std::vector<int>{2, 1, 0, 2, 1}));
  EXPECT_THROW(worst_case_pattern(0, 3), ValidationError);
}

TEST(WorstCaseNorm, FrozenValues) {
  for (int tau = 1; tau <= 3; ++tau) {
    const auto& want = frozen(tau);
    for (size_t T = 0; T < want.size(); ++T) {
      EXPECT_NEAR(worst_case_norm(tau, static_cast<int>(T), 1.0), want[T], 1e-9) << "tau " << tau << " T " << T;
      EXPECT_NEAR(worst_case_norm(tau, static_cast<int>(T), 1.0, BlockRounding::ceil), want[T], 1e-9);
    }
  }
  for (size_t i = 0; i < kNormTau2From17.size(); ++i)
    EXPECT_NEAR(worst_case_norm(2, 17 + static_cast<int>(i), 1.0), kNormTau2From17[i], 1e-9);
}

TEST(WorstCaseNorm, Examples) {
  EXPECT_NEAR(worst_case_norm(1, 2, 1.0), 6.0, 1e-12);
  EXPECT_NEAR(worst_case_alpha_T(1, 2), std::sqrt(2.0), 1e-12);
  EXPECT_EQ(worst_case_norm(2, 0, 0.0), 0.0);
  EXPECT_NEAR(block_contribution(2, 1.0), 29.0, 1e-12);
}

TEST(WorstCaseNorm, ScalesWithAmplitudeSquared) {
  for (int T : {0, 3, 10, 40}) EXPECT_NEAR(worst_case_norm(3, T, 2.5), 6.25 * worst_case_norm(3, T, 1.0), 1e-9);
}

TEST(WorstCaseNorm, MatchesTraceSimulation) {
  for (int tau = 1; tau <= 4; ++tau) {
    for (int T = 0; T <= 30; ++T) {
      const PacketTrace tr = PacketTrace::worst_case(static_cast<size_t>(T + 2 * tau + 1), 0, tau);
      EXPECT_NEAR(trace_norm(parse_protocol("p3-oldest"), tr, T, 1.0), worst_case_norm(tau, T, 1.0), 1e-9)
          << "tau " << tau << " T " << T;
    }
  }
}

TEST(WorstCaseNorm, BlocksSumToTotal) {
  const NormBlocks b = worst_case_blocks(2, 50, 1.0);
  EXPECT_NEAR(b.total(), worst_case_norm(2, 50, 1.0), 1e-9);
  EXPECT_GE(b.k1, 0);
  EXPECT_NEAR(b.B, b.k1 * block_contribution(2, 1.0), 1e-9);
}

TEST(Oracle, FrozenValuesP3) {
  for (int tau = 1; tau <= 3; ++tau) {
    const auto& want = frozen(tau);
    const int T_max = tau == 3 ? 6 : 7;
    for (int T = 0; T <= T_max; ++T) {
      const OracleResult r = oracle_gain(Protocol::p3, tau, T);
      EXPECT_NEAR(r.norm_sq, want[static_cast<size_t>(T)], 1e-9) << "tau " << tau << " T " << T;
      EXPECT_NEAR(r.alpha_T, std::sqrt(want[static_cast<size_t>(T)] / (T + 1)), 1e-12);
    }
  }
}

TEST(Oracle, ExampleTauOneHorizonTwo) {
  const OracleResult r = oracle_gain(Protocol::p3, 1, 2);
  EXPECT_NEAR(r.alpha_T, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(evaluate_head(Protocol::p3, 1, 2, {1, 0, 1}), r.norm_sq, 1e-9);
  EXPECT_EQ(r.assignments, 8u);
}

TEST(Oracle, ZeroVariationIsIdentity) {
  for (Protocol p : {Protocol::p1, Protocol::p2, Protocol::p3})
    for (int T = 0; T <= 5; ++T) EXPECT_EQ(oracle_gain(p, 0, T).alpha_T, 0.0);
}

TEST(Oracle, PatternAttainsMaximum) {
  for (int tau = 1; tau <= 3; ++tau) {
    for (int T = 0; T <= 5; ++T) {
      const OracleResult r = oracle_gain(Protocol::p3, tau, T);
      const double pat = evaluate_head(Protocol::p3, tau, T, worst_case_pattern(tau, T).delays);
      EXPECT_NEAR(pat, r.norm_sq, 1e-9);
    }
  }
}

TEST(Oracle, SoundAgainstAnalyticBound) {
  for (Protocol p : {Protocol::p1, Protocol::p2, Protocol::p3})
    for (int tau = 1; tau <= 2; ++tau)
      for (int T = 0; T <= 6; ++T) EXPECT_LE(oracle_gain(p, tau, T).alpha_T, alpha_formula(p, tau) + 1e-9);
}

TEST(Oracle, ScaleInvariant) {
  OracleOptions o;
  o.v_bar = 3.0;
  for (Protocol p : {Protocol::p1, Protocol::p2, Protocol::p3})
    EXPECT_NEAR(oracle_gain(p, 2, 4, o).alpha_T, oracle_gain(p, 2, 4).alpha_T, 1e-12);
}

TEST(Oracle, ReplayReproducesNorm) {
  for (Protocol p : {Protocol::p1, Protocol::p2, Protocol::p3}) {
    const int tau = 2, T = 4;
    const OracleResult r = oracle_gain(p, tau, T);
    ASSERT_EQ(r.head_delays.size(), static_cast<size_t>(T + 1));
    ASSERT_EQ(r.tail_delays.size(), static_cast<size_t>(2 * tau));
    EXPECT_NEAR(evaluate_head(p, tau, T, r.head_delays), r.norm_sq, 1e-9);
  }
}

TEST(Oracle, BudgetGuard) {
  OracleOptions o;
  o.budget = 100;
  EXPECT_THROW(oracle_gain(Protocol::p3, 2, 5, o), ValidationError);
  EXPECT_NO_THROW(oracle_gain(Protocol::p3, 2, 3, o));
}

TEST(Oracle, ThreadCountDoesNotChangeResult) {
  OracleOptions one;
  one.threads = 1;
  const OracleResult a = oracle_gain(Protocol::p2, 2, 5, one);
  const OracleResult b = oracle_gain(Protocol::p2, 2, 5);
  EXPECT_EQ(a.norm_sq, b.norm_sq);
  EXPECT_EQ(a.head_delays, b.head_delays);
}

TEST(Asymptote, TauTwoWithinTwoPercentAtTwoHundred) {
  const AsymptoteTable t = alpha_asymptote_check(2, 200);
  ASSERT_EQ(t.rows.size(), 201u);
  EXPECT_NEAR(t.alpha, std::sqrt(58.0 / 6.0), 1e-15);
  EXPECT_LT(t.rows.back().error / t.alpha, 0.02);
  EXPECT_NEAR(t.rows.back().transient + t.rows.back().periodic, t.rows.back().alpha_T * t.rows.back().alpha_T, 1e-9);
}

TEST(Asymptote, PeriodicPartApproachesBlockAverage) {
  const AsymptoteTable t = alpha_asymptote_check(1, 2000);
  EXPECT_NEAR(t.rows.back().periodic, block_contribution(1, 1.0) / 2.0, 0.01);
  EXPECT_NEAR(t.alpha, 1.5811, 1e-4);
}

TEST(Asymptote, SawtoothIsNotMonotone) {
  // The closed form dips whenever a new packet adds less than the running
  // average: tau_bar = 2 drops from T = 19 to T = 20.
  EXPECT_GT(worst_case_alpha_T(2, 19), worst_case_alpha_T(2, 20));
  EXPECT_NEAR(worst_case_alpha_T(2, 19), std::sqrt(182.0 / 20.0), 1e-12);
  EXPECT_NEAR(worst_case_alpha_T(2, 20), std::sqrt(191.0 / 21.0), 1e-12);
  EXPECT_GT(worst_case_alpha_T(1, 4), worst_case_alpha_T(1, 5));
  ASSERT_TRUE(alpha_asymptote_check(1, 10).first_decrease().has_value());
  EXPECT_EQ(*alpha_asymptote_check(1, 10).first_decrease(), 5);
}

TEST(GainReport, ClosedFormAndCsv) {
  const GainReport r = gain_report(parse_protocol("p3"), 2, 5, false);
  ASSERT_EQ(r.alpha_T.size(), 6u);
  for (const auto& pt : r.alpha_T) EXPECT_LE(pt.alpha_T, r.alpha_analytic + 1e-9);
  std::stringstream ss;
  write_gain_csv(ss, r);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "T,alpha_T,alpha_analytic");
  EXPECT_THROW(gain_report(parse_protocol("p1"), 2, 5, false), ValidationError);
  const GainReport o = gain_report(parse_protocol("p1"), 2, 4, true);
  EXPECT_TRUE(o.oracle_used);
}
