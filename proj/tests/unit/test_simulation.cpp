#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "example_system.hpp"
#include "netsmith/errors.hpp"
#include "netsmith/simulation.hpp"
#include "netsmith/stability.hpp"

using namespace netsmith;
using namespace netsmith::lti;

namespace {

SimScenario scenario(const PredictorDesign& d, const char* protocol, PacketTrace trace, int steps) {
  SimScenario s;
  s.design = d;
  s.protocol = parse_protocol(protocol);
  s.trace = std::move(trace);
  s.steps = steps;
  return s;
}

std::vector<double> step_response(const RationalTF& g, int steps, double amp = 1.0) {
  StateSpaceBlock b(realize(g));
  std::vector<double> y;
  for (int k = 0; k < steps; ++k) {
    y.push_back(b.output(amp));
    b.update(amp);
  }
  return y;
}

}  // namespace

TEST(Simulate, DelayFreeNetworkMatchesReferenceTransfer) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 0);
  const SimTrace t = simulate(scenario(d, "p1", PacketTrace::constant(100, 0), 100));
  const auto want = step_response(nominal_closed_loop(d).T_r, 100);
  ASSERT_EQ(t.records.size(), 100u);
  for (size_t k = 0; k < 100; ++k) EXPECT_NEAR(t.records[k].y, want[k], 1e-6) << k;
  EXPECT_FALSE(t.divergence_step.has_value());
}

TEST(Simulate, ConstantNetworkDelayMatchesReferenceTransferAtReceiver) {
  const PredictorDesign d = fixtures::example_design(0.9, 2, 2);
  const SimTrace t = simulate(scenario(d, "p2", PacketTrace::constant(100, 2), 100));
  const auto want = step_response(nominal_closed_loop(d).T_r, 100);
  for (size_t k = 0; k < 100; ++k) EXPECT_NEAR(t.records[k].y_hat, want[k], 1e-6) << k;
}

TEST(Simulate, DisturbanceMatchesNominalTransfer) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 0);
  SimScenario s = scenario(d, "p1", PacketTrace::constant(400, 0), 400);
  s.reference = Signal::zero();
  s.disturbance = Signal::step(1.0);
  const SimTrace t = simulate(s);
  const auto want = step_response(nominal_closed_loop(d).T_d, 400);
  for (size_t k = 0; k < 400; ++k) EXPECT_NEAR(t.records[k].y, want[k], 1e-6) << k;
  EXPECT_LT(std::abs(t.records.back().y), 1e-3);
}

TEST(Simulate, P1WorstCaseIsBoundedAndSettles) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 2);
  const SimTrace t = simulate(scenario(d, "p1", PacketTrace::worst_case(300, 0, 2), 300));
  EXPECT_FALSE(t.divergence_step.has_value());
  EXPECT_NEAR(t.records.back().y, 1.0, 0.05);
  EXPECT_LT(t.max_abs_y(), 3.0);
}

TEST(Simulate, P3OldestWithVariationFourDiverges) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 4);
  const SimTrace t = simulate(scenario(d, "p3-oldest", PacketTrace::worst_case(3000, 0, 4), 3000));
  ASSERT_TRUE(t.divergence_step.has_value());
  EXPECT_EQ(t.records.size(), static_cast<size_t>(*t.divergence_step + 1));
  EXPECT_GT(std::abs(t.records.back().y), kDivergenceThreshold);
}

TEST(Simulate, LinearInReference) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 3);
  for (const char* p : {"p1", "p2", "p3-oldest", "p3-random:4"}) {
    SimScenario a = scenario(d, p, PacketTrace::uniform(200, 0, 3, 11), 200);
    SimScenario b = a;
    b.reference = Signal::step(2.0);
    const SimTrace ta = simulate(a), tb = simulate(b);
    ASSERT_EQ(ta.records.size(), tb.records.size());
    for (size_t k = 0; k < ta.records.size(); ++k)
      EXPECT_NEAR(tb.records[k].y, 2.0 * ta.records[k].y, 1e-9 * std::max(1.0, std::abs(tb.records[k].y)));
  }
}

TEST(Simulate, ProtocolsAgreeUnderConstantDelay) {
  const PredictorDesign d = fixtures::example_design(0.9, 3, 3);
  const SimTrace base = simulate(scenario(d, "p1", PacketTrace::constant(150, 3), 150));
  for (const char* p : {"p2", "p3-oldest", "p3-newest", "p3-random:9"}) {
    const SimTrace t = simulate(scenario(d, p, PacketTrace::constant(150, 3), 150));
    for (size_t k = 0; k < 150; ++k) EXPECT_EQ(t.records[k].y, base.records[k].y) << p;
  }
}

TEST(Simulate, CertifiedScenariosStayBounded) {
  for (const char* p : {"p1", "p2", "p3-oldest", "p3-newest", "p3-random"}) {
    const ProtocolKind pk = parse_protocol(p);
    for (int tb = 1; tb <= 5; ++tb) {
      const PredictorDesign d = fixtures::example_design(0.9, 0, tb);
      if (!check_nominal(d, pk).certified) continue;
      for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SimScenario s = scenario(d, p, PacketTrace::uniform(500, 0, tb, seed), 500);
        s.protocol.seed = seed;
        const SimTrace t = simulate(s);
        EXPECT_FALSE(t.divergence_step.has_value()) << p << " tau_bar " << tb << " seed " << seed;
        EXPECT_LT(t.max_abs_y(), 10.0);
      }
    }
  }
}

TEST(Simulate, RejectsBadScenarios) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 2);
  EXPECT_THROW(simulate(scenario(d, "p1", PacketTrace::constant(10, 0), 20)), ValidationError);
  EXPECT_THROW(simulate(scenario(d, "p1", PacketTrace::constant(10, 3), 10)), ValidationError);
  EXPECT_THROW(simulate(scenario(d, "p1", PacketTrace::constant(10, 0), 0)), ValidationError);
  PredictorDesign bad = d;
  bad.prefilter = RationalTF(Polynomial({1.0, 0.0}), Polynomial::constant(1.0));
  EXPECT_THROW(simulate(scenario(bad, "p1", PacketTrace::constant(10, 0), 10)), ValidationError);
}

TEST(SampleDelay, StableWithoutDelayedTermDecays) {
  AugmentedModel m;
  m.n_xi = 2;
  m.d_hat = 1;
  m.A_tilde = Eigen::MatrixXd{{0.5, 0.1}, {0.0, 0.4}};
  m.A_d_tilde = Eigen::MatrixXd::Zero(2, 2);
  m.B_ref = Eigen::VectorXd::Zero(2);
  m.B_dist = Eigen::VectorXd::Zero(2);
  m.C_out = Eigen::VectorXd::Ones(2);
  m.tau_n_max = 2;
  const std::vector<double> kick{1.0};
  m.B_ref(0) = 1.0;
  const SampleDelayTrace t = simulate_sample_delay(m, std::vector<int>(60, 1), 60, kick);
  EXPECT_LT(t.xi.back().norm(), 1e-15);
  EXPECT_GT(t.xi[1].norm(), 0.5);
  EXPECT_THROW(simulate_sample_delay(m, std::vector<int>(60, 3), 60), ValidationError);
}

TEST(SampleDelay, EquivalentToPacketizedUnderConstantDelay) {
  for (int c : {0, 1, 3}) {
    const PredictorDesign d = fixtures::example_design(0.9, c, c + 2);
    SimScenario s = scenario(d, "p2", PacketTrace::constant(200, c), 200);
    s.disturbance = Signal::step(0.3, 50);
    const SimTrace a = simulate(s);
    s.model = SimModel::sample_delay;
    const SimTrace b = simulate(s);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (size_t k = 0; k < a.records.size(); ++k) {
      EXPECT_NEAR(a.records[k].y, b.records[k].y, 1e-9) << "c " << c << " k " << k;
      EXPECT_NEAR(a.records[k].u, b.records[k].u, 1e-9);
      EXPECT_NEAR(a.records[k].y_hat, b.records[k].y_hat, 1e-9);
    }
  }
}

TEST(SampleDelay, SameDelaysThatBreakP3StayBounded) {
  const PredictorDesign d = fixtures::example_design(0.9, 0, 4);
  SimScenario s = scenario(d, "p3-oldest", PacketTrace::worst_case(3000, 0, 4), 3000);
  s.model = SimModel::sample_delay;
  const SimTrace t = simulate(s);
  EXPECT_FALSE(t.divergence_step.has_value());
  EXPECT_LT(t.max_abs_y(), 3.0);
}

TEST(SimCsv, HeaderAndRows) {
  const SimTrace t = simulate(scenario(fixtures::example_design(0.9, 0, 1), "p1", PacketTrace::constant(5, 1), 5));
  std::stringstream ss;
  write_sim_csv(ss, t);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "k,r,u,y,y_hat,y_F,y_H,selected_index");
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 5);
}

TEST(Signal, Values) {
  EXPECT_EQ(Signal::step(2.0, 3).at(2), 0.0);
  EXPECT_EQ(Signal::step(2.0, 3).at(3), 2.0);
  EXPECT_EQ(Signal::custom({1.0, 2.0}).at(1), 2.0);
  EXPECT_EQ(Signal::custom({1.0, 2.0}).at(5), 0.0);
  EXPECT_EQ(Signal::zero().at(7), 0.0);
}
