#include "netsmith/lmi.hpp"

#include <cmath>

#include "netsmith/errors.hpp"

namespace netsmith {

using Eigen::MatrixXd;
using Eigen::VectorXd;

AugmentedModel assemble_augmented(const PredictorDesign& design) {
  for (const auto* tf : {&design.plant_nominal, &design.predictor_block, &design.filter, &design.controller}) {
    if (!tf->is_proper()) throw ValidationError("all loop transfer functions must be proper");
  }
  AugmentedModel m;
  m.plant = lti::realize(design.plant_nominal);
  m.predictor = lti::realize(design.predictor_block);
  m.filter = lti::realize(design.filter);
  m.controller = lti::realize(design.controller);
  if (m.plant.order() == 0) throw ValidationError("plant realization has order zero");
  if (m.plant.d != 0.0) throw ValidationError("plant must be strictly proper");
  if (m.predictor.d != 0.0) throw ValidationError("predictor block H must be strictly proper");

  const auto& P = m.plant;
  const auto& H = m.predictor;
  const auto& F = m.filter;
  const auto& C = m.controller;
  m.block_orders = {P.order(), H.order(), F.order(), C.order()};
  const int n = m.block_orders.total();
  m.n_xi = n;
  m.d_hat = design.d_hat;
  m.tau_n_min = design.tau_n_min;
  m.tau_n_max = design.tau_n_max;

  const int o0 = 0, o1 = P.order(), o2 = o1 + H.order(), o3 = o2 + F.order();
  const int n0 = P.order(), n1 = H.order(), n2 = F.order(), n3 = C.order();
  const double dC = C.d, dF = F.d;

  MatrixXd A = MatrixXd::Zero(n, n);
  A.block(o0, o0, n0, n0) = P.A;
  A.block(o0, o1, n0, n1) = -P.b * dC * H.c.transpose();
  A.block(o0, o2, n0, n2) = -P.b * dC * F.c.transpose();
  A.block(o0, o3, n0, n3) = P.b * C.c.transpose();
  A.block(o1, o1, n1, n1) = H.A - H.b * dC * H.c.transpose();
  A.block(o1, o2, n1, n2) = -H.b * dC * F.c.transpose();
  A.block(o1, o3, n1, n3) = H.b * C.c.transpose();
  A.block(o2, o2, n2, n2) = F.A;
  A.block(o3, o1, n3, n1) = -C.b * H.c.transpose();
  A.block(o3, o2, n3, n2) = -C.b * F.c.transpose();
  A.block(o3, o3, n3, n3) = C.A;

  MatrixXd Ad = MatrixXd::Zero(n, n);
  Ad.block(o0, o0, n0, n0) = -P.b * dC * dF * P.c.transpose();
  Ad.block(o1, o0, n1, n0) = -H.b * dC * dF * P.c.transpose();
  Ad.block(o2, o0, n2, n0) = F.b * P.c.transpose();
  Ad.block(o3, o0, n3, n0) = -C.b * dF * P.c.transpose();

  m.B_ref = VectorXd::Zero(n);
  m.B_ref.segment(o0, n0) = P.b * dC;
  m.B_ref.segment(o1, n1) = H.b * dC;
  m.B_ref.segment(o3, n3) = C.b;
  m.B_dist = VectorXd::Zero(n);
  m.B_dist.segment(o0, n0) = P.b;
  m.C_out = VectorXd::Zero(n);
  m.C_out.segment(o0, n0) = P.c;
  m.A_tilde = std::move(A);
  m.A_d_tilde = std::move(Ad);
  return m;
}

std::string to_string(LmiVariant v) { return v == LmiVariant::variant_i ? "i" : "ii"; }

LmiVariant parse_lmi_variant(const std::string& s) {
  if (s == "i" || s == "1") return LmiVariant::variant_i;
  if (s == "ii" || s == "2") return LmiVariant::variant_ii;
  throw ValidationError("LMI variant must be 'i' or 'ii'");
}

long LmiProblem::generic_unknown_count() const {
  long s = 0;
  for (const auto& u : unknowns) s += static_cast<long>(u.dim) * (u.dim + 1) / 2;
  return s;
}

long closed_form_count_variant_i(int n_xi, int d_hat, int tau_n_max) {
  const long N = d_hat + tau_n_max;
  const long n = n_xi;
  return ((N * N + 2 * N + 2) * n * n + (N + 2) * n) / 2;
}

long closed_form_count_variant_ii(int n_xi) {
  const long n = n_xi;
  return n * n * n + 2 * n * n + n;
}

long LmiProblem::closed_form_unknown_count() const {
  return variant == LmiVariant::variant_i ? closed_form_count_variant_i(n_xi, d_hat, tau_n_max)
                                                : closed_form_count_variant_ii(n_xi);
}

namespace {

void add_term(LmiProblem& p, int row, int col, int unknown, double scale, MatrixXd left, MatrixXd right) {
  p.terms.push_back({row, col, unknown, scale, std::move(left), std::move(right)});
}

void build_variant_i(LmiProblem& p, const MatrixXd& A, const MatrixXd& Ad) {
  const int n = p.n_xi;
  const int h1 = p.d_hat + p.tau_n_min;
  const int h2 = p.d_hat + p.tau_n_max;
  const int spread = p.tau_n_max - p.tau_n_min;
  if (spread - 1 < 0)
    throw ValidationError("variant i needs tau_net_max >= tau_net_min + 1 (the second zero block would have negative width)");
  const int side = (h2 + 2) * n;
  const int mp = (h2 + 1) * n;

  MatrixXd G = MatrixXd::Zero(side, side);
  const MatrixXd I = MatrixXd::Identity(n, n);
  auto psi_row = [&](int r, const MatrixXd& first) {
    G.block(r, 0, n, n) = first;
    G.block(r, h1 * n, n, n) = 0.5 * Ad;
    G.block(r, h2 * n, n, n) = 0.5 * Ad;
    G.block(r, (h2 + 1) * n, n, n) = 0.5 * spread * Ad;
  };
  psi_row(0, A);
  G.block(n, 0, h2 * n, h2 * n) = MatrixXd::Identity(h2 * n, h2 * n);
  psi_row((h2 + 1) * n, A - I);

  p.size = side;
  p.unknowns = {{"P", mp}, {"S", n}};
  const MatrixXd Gp = G.topRows(mp);
  const MatrixXd Gs = G.bottomRows(n);
  add_term(p, 0, 0, 0, 1.0, Gp.transpose(), Gp);
  add_term(p, 0, 0, 1, 1.0, Gs.transpose(), Gs);
  add_term(p, 0, 0, 0, -1.0, MatrixXd::Identity(mp, mp), MatrixXd::Identity(mp, mp));
  add_term(p, mp, mp, 1, -p.gamma * p.gamma, I, I);
  p.constants["G"] = G;
}

void build_variant_ii(LmiProblem& p, const MatrixXd& A, const MatrixXd& Ad) {
  const int n = p.n_xi;
  const double h1 = p.d_hat + p.tau_n_min;
  const double h2 = p.d_hat + p.tau_n_max;
  const double spread = p.tau_n_max - p.tau_n_min;
  const MatrixXd I = MatrixXd::Identity(n, n);
  MatrixXd phi2(n, 4 * n), phi3(n, 4 * n);
  phi2 << A, 0.5 * Ad, 0.5 * Ad, 0.5 * spread * Ad;
  phi3 << A - I, 0.5 * Ad, 0.5 * Ad, 0.5 * spread * Ad;

  p.size = 8 * n;
  p.unknowns = {{"P", n}, {"Q1", n}, {"Q2", n}, {"R1", n}, {"R2", n}, {"S", n}};
  enum { P, Q1, Q2, R1, R2, S };
  auto at = [&](int br, int bc, int u, double scale, const MatrixXd& l, const MatrixXd& r) {
    add_term(p, br * n, bc * n, u, scale, l, r);
  };
  at(0, 0, P, -1.0, I, I);
  at(0, 0, Q1, 1.0, I, I);
  at(0, 0, Q2, 1.0, I, I);
  at(0, 0, R1, -1.0, I, I);
  at(0, 0, R2, -1.0, I, I);
  at(0, 1, R1, 1.0, I, I);
  at(0, 2, R2, 1.0, I, I);
  at(1, 1, Q1, -1.0, I, I);
  at(1, 1, R1, -1.0, I, I);
  at(2, 2, Q2, -1.0, I, I);
  at(2, 2, R2, -1.0, I, I);
  at(3, 3, S, -p.gamma * p.gamma, I, I);
  at(0, 4, P, 1.0, phi2.transpose(), I);
  at(0, 5, R1, h1, phi3.transpose(), I);
  at(0, 6, R2, h2, phi3.transpose(), I);
  at(0, 7, S, 1.0, phi3.transpose(), I);
  at(4, 4, P, -1.0, I, I);
  at(5, 5, R1, -1.0, I, I);
  at(6, 6, R2, -1.0, I, I);
  at(7, 7, S, -1.0, I, I);
  p.constants["Phi2"] = phi2;
  p.constants["Phi3"] = phi3;
}

}  // namespace

LmiProblem build_lmi(const AugmentedModel& model, LmiVariant variant, double gamma, int tau_n_max) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
  LmiProblem p;
  p.variant = variant;
  p.gamma = gamma;
  p.n_xi = model.n_xi;
  p.d_hat = model.d_hat;
  p.tau_n_min = model.tau_n_min;
  p.tau_n_max = tau_n_max < 0 ? model.tau_n_max : tau_n_max;
  if (p.tau_n_max < p.tau_n_min) throw ValidationError("tau_net_max must not be smaller than tau_net_min");
  if (p.d_hat + p.tau_n_min < 1) throw ValidationError("LMI conditions need d_hat + tau_net_min >= 1");
  p.constants["A_tilde"] = model.A_tilde;
  p.constants["A_d_tilde"] = model.A_d_tilde;
  if (variant == LmiVariant::variant_i) build_variant_i(p, model.A_tilde, model.A_d_tilde);
  else build_variant_ii(p, model.A_tilde, model.A_d_tilde);
  return p;
}

MatrixXd assemble_lmi(const LmiProblem& problem, const std::map<std::string, MatrixXd>& values) {
  std::vector<const MatrixXd*> x;
  for (const auto& u : problem.unknowns) {
    auto it = values.find(u.name);
    if (it == values.end()) throw ValidationError("missing candidate for unknown " + u.name);
    if (it->second.rows() != u.dim || it->second.cols() != u.dim)
      throw ValidationError("candidate " + u.name + " must be " + std::to_string(u.dim) + "x" + std::to_string(u.dim));
    x.push_back(&it->second);
  }
  MatrixXd m = MatrixXd::Zero(problem.size, problem.size);
  for (const LmiTerm& t : problem.terms) {
    const MatrixXd blk = t.scale * t.left * (*x[static_cast<size_t>(t.unknown)]) * t.right;
    if (t.row + blk.rows() > problem.size || t.col + blk.cols() > problem.size)
      throw ValidationError("LMI term exceeds the problem size");
    m.block(t.row, t.col, blk.rows(), blk.cols()) += blk;
    if (t.row != t.col) m.block(t.col, t.row, blk.cols(), blk.rows()) += blk.transpose();
  }
  return 0.5 * (m + m.transpose());
}

FeasibilityReport verify_candidate(const LmiProblem& problem, const std::map<std::string, MatrixXd>& candidates) {
  constexpr double kThreshold = 1e-9;
  for (const auto& u : problem.unknowns) {
    auto it = candidates.find(u.name);
    if (it == candidates.end()) throw ValidationError("missing candidate for unknown " + u.name);
    const MatrixXd& c = it->second;
    if (c.rows() != u.dim || c.cols() != u.dim)
      throw ValidationError("candidate " + u.name + " must be " + std::to_string(u.dim) + "x" + std::to_string(u.dim));
    const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff())) throw ValidationError("candidate " + u.name + " is not symmetric");
  }
  FeasibilityReport r;
  r.feasible = true;
  for (const auto& u : problem.unknowns) {
    const MatrixXd c = candidates.at(u.name);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    r.lambda_min[u.name] = lmin;
    if (!(lmin > kThreshold)) {
      r.feasible = false;
      r.reasons.push_back(u.name + " is not positive definite");
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(assemble_lmi(problem, candidates), Eigen::EigenvaluesOnly);
  r.lambda_max = es.eigenvalues().maxCoeff();
  if (!(r.lambda_max < -kThreshold)) {
    r.feasible = false;
    r.reasons.push_back("assembled matrix is not negative definite");
  }
  return r;
}

}  // namespace netsmith
