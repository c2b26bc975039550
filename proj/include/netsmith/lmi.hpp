#pragma once

// Closed-loop state-space model of the networked predictor with a
// sample-delayed feedback path,
//   xi_{k+1} = A_tilde xi_k + A_d_tilde xi_{k - d_hat - tau_k} + B_ref r_V,k + B_dist w_k,
// xi = [x; x_H; x_F; x_C], and the delay-dependent LMI conditions built on it.
// Solving the LMIs is left to an external SDP solver: problems are exported
// as JSON and candidate solutions can be checked here.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netsmith/lti.hpp"
#include "netsmith/smith_design.hpp"

namespace netsmith {

struct BlockOrders {
  int n = 0;
  int n_H = 0;
  int n_F = 0;
  int n_C = 0;
  int total() const { return n + n_H + n_F + n_C; }
};

struct AugmentedModel {
  Eigen::MatrixXd A_tilde;
  Eigen::MatrixXd A_d_tilde;
  Eigen::VectorXd B_ref;   // input of the prefiltered reference r_V
  Eigen::VectorXd B_dist;  // plant-input disturbance
  Eigen::VectorXd C_out;   // y = C_out^T xi_{k - d_hat}
  int n_xi = 0;
  int d_hat = 0;
  int tau_n_min = 0;
  int tau_n_max = 0;
  BlockOrders block_orders;
  lti::StateSpace plant, predictor, filter, controller;
};

/// Throws ValidationError for improper blocks, a non strictly proper plant
/// or predictor, or a zero-order plant.
AugmentedModel assemble_augmented(const PredictorDesign& design);

enum class LmiVariant { variant_i, variant_ii };
std::string to_string(LmiVariant v);
LmiVariant parse_lmi_variant(const std::string& s);

struct LmiUnknown {
  std::string name;
  int dim = 0;
};

/// Contribution scale * left * X * right placed at (row, col). Terms off the
/// diagonal also contribute their transpose at (col, row).
struct LmiTerm {
  int row = 0;
  int col = 0;
  int unknown = 0;
  double scale = 1.0;
  Eigen::MatrixXd left;
  Eigen::MatrixXd right;
};

struct LmiProblem {
  LmiVariant variant = LmiVariant::variant_i;
  double gamma = 0.5;
  int n_xi = 0;
  int d_hat = 0;
  int tau_n_min = 0;
  int tau_n_max = 0;
  int size = 0;  // side of the assembled symmetric matrix, required negative definite
  std::vector<LmiUnknown> unknowns;
  std::vector<LmiTerm> terms;
  std::map<std::string, Eigen::MatrixXd> constants;  // A_tilde, A_d_tilde and G or Phi2/Phi3

  /// Sum of m(m+1)/2 over the symmetric unknowns.
  long generic_unknown_count() const;
  /// Closed-form count per variant (polynomial in n_xi).
  long closed_form_unknown_count() const;
};

/// Closed-form counts.
long closed_form_count_variant_i(int n_xi, int d_hat, int tau_n_max);
long closed_form_count_variant_ii(int n_xi);

/// Builds the LMI for tau_n_max (defaults to the model's bound when < 0).
LmiProblem build_lmi(const AugmentedModel& model, LmiVariant variant, double gamma, int tau_n_max = -1);

/// Substitutes the unknowns and returns the symmetrized assembled matrix.
Eigen::MatrixXd assemble_lmi(const LmiProblem& problem, const std::map<std::string, Eigen::MatrixXd>& values);

struct FeasibilityReport {
  double lambda_max = 0.0;  // of the assembled matrix
  std::map<std::string, double> lambda_min;  // of each candidate
  bool feasible = false;
  std::vector<std::string> reasons;
};

FeasibilityReport verify_candidate(const LmiProblem& problem, const std::map<std::string, Eigen::MatrixXd>& candidates);

std::string export_lmi_json(const LmiProblem& problem);
LmiProblem import_lmi_json(const std::string& text);
std::map<std::string, Eigen::MatrixXd> import_candidates_json(const std::string& text);
std::string export_report_json(const FeasibilityReport& report);

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace netsmith
