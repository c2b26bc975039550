#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "example_system.hpp"
#include "json.hpp"
#include "netsmith/errors.hpp"
#include "netsmith/lmi.hpp"

using namespace netsmith;
using namespace netsmith::lti;
using Eigen::MatrixXd;

namespace {

AugmentedModel random_model(std::mt19937_64& rng, int n, int d_hat, int lo, int hi, double scale = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AugmentedModel m;
  m.n_xi = n;
  m.d_hat = d_hat;
  m.tau_n_min = lo;
  m.tau_n_max = hi;
  m.A_tilde = MatrixXd::NullaryExpr(n, n, [&] { return scale * u(rng); });
  m.A_d_tilde = MatrixXd::Zero(n, n);
  m.A_d_tilde.col(0) = Eigen::VectorXd::NullaryExpr(n, [&] { return scale * u(rng); });
  return m;
}

MatrixXd random_spd(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const MatrixXd a = MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
  return a * a.transpose() + MatrixXd::Identity(n, n);
}

// Solves A^T X A - X = -Q by vectorization.
MatrixXd discrete_lyapunov(const MatrixXd& A, const MatrixXd& Q) {
  const int n = static_cast<int>(A.rows());
  MatrixXd M = MatrixXd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) M(i * n + j, k * n + l) = A(k, i) * A(l, j);
  M -= MatrixXd::Identity(n * n, n * n);
  Eigen::VectorXd q(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q(i * n + j) = -Q(i, j);
  const Eigen::VectorXd x = M.fullPivLu().solve(q);
  MatrixXd X(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X(i, j) = x(i * n + j);
  return 0.5 * (X + X.transpose());
}

}  // namespace

TEST(AugmentedModel, ExampleDimensions) {
  const AugmentedModel m = assemble_augmented(fixtures::example_design());
  EXPECT_EQ(m.n_xi, 9);
  EXPECT_EQ(m.block_orders.n, 1);
  EXPECT_EQ(m.block_orders.n_H, 6);
  EXPECT_EQ(m.block_orders.n_F, 1);
  EXPECT_EQ(m.block_orders.n_C, 1);
  EXPECT_EQ(m.block_orders.total(), 9);
  EXPECT_EQ(m.A_tilde.rows(), 9);
  EXPECT_TRUE(m.A_d_tilde.rightCols(8).isZero(0.0));
  EXPECT_NE(m.A_d_tilde.col(0).norm(), 0.0);
  // The filter block row of A_tilde is A_F only.
  const int o2 = 7;
  EXPECT_TRUE(m.A_tilde.row(o2).head(o2).isZero(0.0));
  EXPECT_TRUE(m.A_tilde.row(o2).tail(1).isZero(0.0));
}

TEST(AugmentedModel, ConstantControllerAndFilterWithZeroPredictor) {
  const RationalTF plant(Polynomial({0.3}), Polynomial({1.0, -0.5}));
  const PredictorDesign d = make_design(plant, RationalTF::gain(0.8), RationalTF::gain(1.0), 0, 0, 1);
  ASSERT_TRUE(d.predictor_block.is_zero());
  const AugmentedModel m = assemble_augmented(d);
  ASSERT_EQ(m.n_xi, 1);
  EXPECT_DOUBLE_EQ(m.A_tilde(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(m.A_d_tilde(0, 0), -1.0 * 0.8 * 1.0 * 0.3);
}

TEST(AugmentedModel, DelayFreeLoopMatchesNominalPoles) {
  // With the delayed column folded back in, the eigenvalues are the
  // closed-loop poles of the realized interconnection at tau = 0.
  const PredictorDesign d = make_design(fixtures::example_plant(), fixtures::example_controller(),
                                        fixtures::example_prefilter(), 0, 0, 0, {0.9, std::nullopt});
  const AugmentedModel m = assemble_augmented(d);
  const Eigen::VectorXcd ev = (m.A_tilde + m.A_d_tilde).eigenvalues();
  int near95 = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(std::abs(ev(i)) - 0.95) < 1e-2) ++near95;
  EXPECT_GE(near95, 2);
  for (int i = 0; i < ev.size(); ++i) EXPECT_LT(std::abs(ev(i)), 1.0);
}

TEST(AugmentedModel, RejectsImproperOrEmptyPlant) {
  PredictorDesign d = fixtures::example_design();
  d.controller = RationalTF(Polynomial({1.0, 0.0, 0.0}), Polynomial({1.0, -1.0}));
  EXPECT_THROW(assemble_augmented(d), ValidationError);
  PredictorDesign e = fixtures::example_design();
  e.plant_nominal = RationalTF::gain(1.0);
  EXPECT_THROW(assemble_augmented(e), ValidationError);
}

TEST(LmiCounts, ExampleCounts) {
  const AugmentedModel m = assemble_augmented(fixtures::example_design(0.9, 0, 8));
  const LmiProblem ii = build_lmi(m, LmiVariant::variant_ii, 0.9);
  EXPECT_EQ(ii.closed_form_unknown_count(), 900);
  EXPECT_EQ(ii.size, 72);
  ASSERT_EQ(ii.unknowns.size(), 6u);
  for (const auto& u : ii.unknowns) EXPECT_EQ(u.dim, 9);
  EXPECT_EQ(ii.generic_unknown_count(), 270);
  const LmiProblem i = build_lmi(m, LmiVariant::variant_i, 0.9);
  EXPECT_EQ(i.closed_form_unknown_count(), 8046);
  EXPECT_EQ(i.generic_unknown_count(), 8046);
  EXPECT_EQ(i.size, (5 + 8 + 2) * 9);
}

TEST(LmiCounts, GSideLength) {
  const AugmentedModel m = assemble_augmented(fixtures::example_design(0.9, 0, 5));
  const LmiProblem p = build_lmi(m, LmiVariant::variant_i, 0.5);
  EXPECT_EQ(p.size, 108);
  EXPECT_EQ(p.constants.at("G").rows(), 108);
  EXPECT_EQ(p.constants.at("G").cols(), 108);
}

TEST(LmiCounts, VariantOneFormulaMatchesGenericCount) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const int d_hat = 1 + static_cast<int>(rng() % 8);
    const int lo = static_cast<int>(rng() % 3);
    const int hi = lo + 1 + static_cast<int>(rng() % 6);
    const LmiProblem p = build_lmi(random_model(rng, n, d_hat, lo, hi), LmiVariant::variant_i, 0.7);
    EXPECT_EQ(p.generic_unknown_count(), closed_form_count_variant_i(n, d_hat, hi)) << n << " " << d_hat << " " << hi;
  }
}

TEST(LmiCounts, VariantTwoFormulaAgreesOnlyAtTwo) {
  for (int n = 1; n <= 12; ++n) {
    const long generic = 6L * n * (n + 1) / 2;
    EXPECT_EQ(closed_form_count_variant_ii(n) == generic, n == 2) << n;
  }
}

TEST(BuildLmi, Errors) {
  std::mt19937_64 rng(1);
  const AugmentedModel m = random_model(rng, 3, 2, 1, 3);
  EXPECT_THROW(build_lmi(m, LmiVariant::variant_i, 1.0), ValidationError);
  EXPECT_THROW(build_lmi(m, LmiVariant::variant_i, 0.0), ValidationError);
  EXPECT_THROW(build_lmi(m, LmiVariant::variant_ii, 0.5, 0), ValidationError);
  EXPECT_THROW(build_lmi(random_model(rng, 3, 2, 2, 2), LmiVariant::variant_i, 0.5), ValidationError);
  EXPECT_NO_THROW(build_lmi(random_model(rng, 3, 2, 2, 2), LmiVariant::variant_ii, 0.5));
  EXPECT_NO_THROW(build_lmi(random_model(rng, 3, 2, 2, 3), LmiVariant::variant_i, 0.5));
  EXPECT_THROW(build_lmi(random_model(rng, 3, 0, 0, 3), LmiVariant::variant_ii, 0.5), ValidationError);
  EXPECT_THROW(parse_lmi_variant("iii"), ValidationError);
}

TEST(AssembleLmi, VariantOneMatchesDenseFormula) {
  std::mt19937_64 rng(12);
  const int n = 2, d_hat = 2, lo = 1, hi = 3;
  const AugmentedModel m = random_model(rng, n, d_hat, lo, hi);
  const LmiProblem p = build_lmi(m, LmiVariant::variant_i, 0.6);
  const int h1 = d_hat + lo, h2 = d_hat + hi, side = (h2 + 2) * n, mp = (h2 + 1) * n;
  // G written out block by block.
  MatrixXd G = MatrixXd::Zero(side, side);
  const MatrixXd& A = m.A_tilde;
  const MatrixXd& Ad = m.A_d_tilde;
  for (int pass = 0; pass < 2; ++pass) {
    const int r = pass == 0 ? 0 : (h2 + 1) * n;
    G.block(r, 0, n, n) = pass == 0 ? A : MatrixXd(A - MatrixXd::Identity(n, n));
    G.block(r, h1 * n, n, n) += 0.5 * Ad;
    G.block(r, h2 * n, n, n) += 0.5 * Ad;
    G.block(r, (h2 + 1) * n, n, n) += 0.5 * (hi - lo) * Ad;
  }
  for (int i = 0; i < h2 * n; ++i) G(n + i, i) = 1.0;
  const MatrixXd P = random_spd(rng, mp), S = random_spd(rng, n);
  MatrixXd T1 = MatrixXd::Zero(side, side), T2 = MatrixXd::Zero(side, side);
  T1.topLeftCorner(mp, mp) = P;
  T1.bottomRightCorner(n, n) = S;
  T2.topLeftCorner(mp, mp) = P;
  T2.bottomRightCorner(n, n) = 0.36 * S;
  const MatrixXd want = G.transpose() * T1 * G - T2;
  const MatrixXd got = assemble_lmi(p, {{"P", P}, {"S", S}});
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AssembleLmi, VariantTwoMatchesDenseFormula) {
  std::mt19937_64 rng(13);
  const int n = 2, d_hat = 1, lo = 1, hi = 4;
  const AugmentedModel m = random_model(rng, n, d_hat, lo, hi);
  const double g = 0.8;
  const LmiProblem p = build_lmi(m, LmiVariant::variant_ii, g);
  std::map<std::string, MatrixXd> v;
  for (const char* k : {"P", "Q1", "Q2", "R1", "R2", "S"}) v[k] = random_spd(rng, n);
  const MatrixXd I = MatrixXd::Identity(n, n), Z = MatrixXd::Zero(n, n);
  const MatrixXd& A = m.A_tilde;
  const MatrixXd& Ad = m.A_d_tilde;
  MatrixXd phi2(n, 4 * n), phi3(n, 4 * n);
  phi2 << A, 0.5 * Ad, 0.5 * Ad, 1.5 * Ad;
  phi3 << A - I, 0.5 * Ad, 0.5 * Ad, 1.5 * Ad;
  MatrixXd phi1(4 * n, 4 * n);
  phi1 << -v["P"] + v["Q1"] + v["Q2"] - v["R1"] - v["R2"], v["R1"], v["R2"], Z,  //
      v["R1"], -v["Q1"] - v["R1"], Z, Z,                                          //
      v["R2"], Z, -v["Q2"] - v["R2"], Z,                                          //
      Z, Z, Z, -g * g * v["S"];
  MatrixXd psi(4 * n, 4 * n);
  psi << phi2.transpose() * v["P"], 2.0 * phi3.transpose() * v["R1"], 5.0 * phi3.transpose() * v["R2"],
      phi3.transpose() * v["S"];
  MatrixXd lower = MatrixXd::Zero(4 * n, 4 * n);
  lower.block(0, 0, n, n) = -v["P"];
  lower.block(n, n, n, n) = -v["R1"];
  lower.block(2 * n, 2 * n, n, n) = -v["R2"];
  lower.block(3 * n, 3 * n, n, n) = -v["S"];
  MatrixXd want(8 * n, 8 * n);
  want << phi1, psi, psi.transpose(), lower;
  const MatrixXd got = assemble_lmi(p, v);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(VerifyCandidate, StableDelayFreeSystemIsFeasible) {
  std::mt19937_64 rng(5);
  const int n = 3, d_hat = 1, lo = 0, hi = 2;
  AugmentedModel m = random_model(rng, n, d_hat, lo, hi, 0.2);
  m.A_d_tilde.setZero();
  const int h2 = d_hat + hi, mp = (h2 + 1) * n;
  const double eps = 1e-3, delta = 1e-3;
  MatrixXd P = MatrixXd::Zero(mp, mp);
  P.topLeftCorner(n, n) = discrete_lyapunov(m.A_tilde, MatrixXd::Identity(n, n)) + eps * (h2 + 1) * MatrixXd::Identity(n, n);
  for (int j = 1; j <= h2; ++j) P.block(j * n, j * n, n, n) = eps * (h2 + 1 - j) * MatrixXd::Identity(n, n);
  const MatrixXd S = delta * MatrixXd::Identity(n, n);
  const FeasibilityReport r = verify_candidate(build_lmi(m, LmiVariant::variant_i, 0.5), {{"P", P}, {"S", S}});
  EXPECT_TRUE(r.feasible);
  EXPECT_LT(r.lambda_max, -1e-9);
  EXPECT_TRUE(r.reasons.empty());
}

TEST(VerifyCandidate, IdentityOnUnstableSystemIsInfeasible) {
  std::mt19937_64 rng(6);
  AugmentedModel m = random_model(rng, 3, 2, 0, 2);
  m.A_tilde = 1.2 * MatrixXd::Identity(3, 3);
  for (LmiVariant v : {LmiVariant::variant_i, LmiVariant::variant_ii}) {
    const LmiProblem p = build_lmi(m, v, 0.5);
    std::map<std::string, MatrixXd> c;
    for (const auto& u : p.unknowns) c[u.name] = MatrixXd::Identity(u.dim, u.dim);
    const FeasibilityReport r = verify_candidate(p, c);
    EXPECT_FALSE(r.feasible);
    EXPECT_GE(r.lambda_max, -1e-9);
  }
}

TEST(VerifyCandidate, ZeroCandidatesRejected) {
  std::mt19937_64 rng(7);
  const LmiProblem p = build_lmi(random_model(rng, 2, 1, 0, 1), LmiVariant::variant_ii, 0.5);
  std::map<std::string, MatrixXd> c;
  for (const auto& u : p.unknowns) c[u.name] = MatrixXd::Zero(u.dim, u.dim);
  const FeasibilityReport r = verify_candidate(p, c);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.reasons.empty());
  EXPECT_EQ(r.lambda_min.size(), 6u);
}

TEST(VerifyCandidate, DimensionAndSymmetryErrors) {
  std::mt19937_64 rng(8);
  const LmiProblem p = build_lmi(random_model(rng, 2, 1, 0, 2), LmiVariant::variant_i, 0.5);
  EXPECT_THROW(verify_candidate(p, {{"P", MatrixXd::Identity(2, 2)}, {"S", MatrixXd::Identity(2, 2)}}), ValidationError);
  EXPECT_THROW(verify_candidate(p, {{"S", MatrixXd::Identity(2, 2)}}), ValidationError);
  MatrixXd asym = MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  EXPECT_THROW(verify_candidate(p, {{"P", MatrixXd::Identity(8, 8)}, {"S", asym}}), ValidationError);
}

TEST(LmiExport, RoundTripIsBitExact) {
  const AugmentedModel m = assemble_augmented(fixtures::example_design(0.9, 0, 3));
  for (LmiVariant v : {LmiVariant::variant_i, LmiVariant::variant_ii}) {
    const LmiProblem p = build_lmi(m, v, 0.9);
    const std::string a = export_lmi_json(p);
    const LmiProblem q = import_lmi_json(a);
    EXPECT_EQ(export_lmi_json(q), a);
    EXPECT_EQ(q.size, p.size);
    EXPECT_EQ(q.terms.size(), p.terms.size());
    std::map<std::string, MatrixXd> c;
    std::mt19937_64 rng(3);
    for (const auto& u : p.unknowns) c[u.name] = random_spd(rng, u.dim);
    EXPECT_EQ((assemble_lmi(p, c) - assemble_lmi(q, c)).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(LmiExport, DocumentMetadata) {
  const AugmentedModel m = assemble_augmented(fixtures::example_design(0.9, 0, 4));
  const auto doc = nlohmann::json::parse(export_lmi_json(build_lmi(m, LmiVariant::variant_ii, 0.85)));
  EXPECT_EQ(doc["format"], "netsmith-lmi");
  EXPECT_EQ(doc["variant"], "ii");
  EXPECT_EQ(doc["gamma"].get<double>(), 0.85);
  EXPECT_EQ(doc["d_hat"], 5);
  EXPECT_EQ(doc["tau_net_min"], 0);
  EXPECT_EQ(doc["tau_net_max"], 4);
  ASSERT_EQ(doc["unknowns"].size(), 6u);
  for (const auto& u : doc["unknowns"]) EXPECT_EQ(u["dim"], 9);
  EXPECT_THROW(import_lmi_json("{\"format\":\"other\"}"), ValidationError);
}

TEST(LmiExport, CandidatesParsing) {
  const auto c = import_candidates_json(R"({"candidates":{"P":[[2,0],[0,3]],"S":{"rows":1,"cols":1,"data":[4]}}})");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.at("P")(1, 1), 3.0);
  EXPECT_EQ(c.at("S")(0, 0), 4.0);
  EXPECT_THROW(import_candidates_json(R"({"P":[[1,2],[3]]})"), ValidationError);
  std::stringstream ss;
  write_matrix_csv(ss, c.at("P"));
  EXPECT_EQ(ss.str(), "2,0\n0,3\n");
}
