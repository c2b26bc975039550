#pragma once

// Filtered Smith predictor construction for a delayed plant
//   P(z) = P_hat(z) z^{-d_hat}
// measured over a network whose per-packet delay lies in [tau_n_min, tau_n_max].
// The predictor compensates the constant part tau_hat = d_hat + tau_n_min;
// the remaining variation tau_bar = tau_n_max - tau_n_min is left to the
// stability criteria.

#include <optional>
#include <vector>

#include "netsmith/lti.hpp"

namespace netsmith {

struct PredictorDesign {
  lti::RationalTF plant_nominal;    // P_hat, delay-free part
  lti::RationalTF controller;       // C
  lti::RationalTF prefilter;        // V
  lti::RationalTF filter;           // F
  lti::RationalTF predictor_block;  // H
  int d_hat = 0;
  int tau_n_min = 0;
  int tau_n_max = 0;
  double lambda = 0.9;
  std::optional<double> slow_pole_threshold;

  int tau_hat() const { return d_hat + tau_n_min; }
  int tau_bar() const { return tau_n_max - tau_n_min; }
};

struct DesignOptions {
  double lambda = 0.9;
  std::optional<double> slow_pole_threshold;
};

/// Throws ValidationError unless d_hat >= 0 and 0 <= tau_n_min <= tau_n_max.
void validate_delay_bounds(int d_hat, int tau_n_min, int tau_n_max);

/// Interpolation nodes of the filter: z = 1 plus every plant pole with
/// |z| >= 1 (or >= slow_pole_threshold when given), with multiplicities.
struct FilterNode {
  lti::Complex z;
  int multiplicity = 1;
};
std::vector<FilterNode> filter_nodes(const lti::RationalTF& plant, std::optional<double> slow_pole_threshold = {});

/// F = mu_F / (z - lambda)^{n_F} with F(1) = 1 and
/// z^tau_hat nu_F - mu_F vanishing (with multiplicity) at every node.
lti::RationalTF design_filter(const lti::RationalTF& plant, int tau_hat, double lambda,
                              std::optional<double> slow_pole_threshold = {});

/// H = P_hat (1 - z^{-tau_hat} F) with the unstable plant poles deflated.
lti::RationalTF build_H(const lti::RationalTF& plant, const lti::RationalTF& filter, int tau_hat);

/// Builds F and H for the given plant, controller and prefilter.
PredictorDesign make_design(const lti::RationalTF& plant, const lti::RationalTF& controller,
                            const lti::RationalTF& prefilter, int d_hat, int tau_n_min, int tau_n_max,
                            const DesignOptions& options = {});

struct NominalClosedLoop {
  lti::RationalTF T_r;  // reference -> plant output
  lti::RationalTF T_d;  // plant-input disturbance -> plant output
};

/// Constant-delay (tau_bar = 0), exact-plant closed loop. Throws NumericError
/// when the reference loop is unstable.
NominalClosedLoop nominal_closed_loop(const PredictorDesign& design);

/// C P_hat / (1 + C P_hat)
lti::RationalTF complementary_sensitivity(const PredictorDesign& design);
/// 1 / (1 + C P_hat)
lti::RationalTF sensitivity(const PredictorDesign& design);

struct DesignResiduals {
  struct Entry {
    lti::Complex node;
    int derivative = 0;
    double residual = 0.0;
  };
  std::vector<Entry> interpolation;
  double dc_gain_error = 0.0;
  std::vector<double> h_pole_radii;
};

DesignResiduals residuals(const PredictorDesign& design);

}  // namespace netsmith
