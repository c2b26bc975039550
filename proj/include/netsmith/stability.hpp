#pragma once

// Small-gain certificates for the networked predictor loop.
//   nominal:   ||M||_inf * alpha_B < 1,  M = F T (z - 1)/z
//   uncertain: the four loop inequalities built from alpha_A = ||dP||_inf,
//              alpha_B (delay gain) and the nominal loop gains a11..a22.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "netsmith/packet_channel.hpp"
#include "netsmith/smith_design.hpp"

namespace netsmith {

enum class Criterion { nominal, uncertain };
std::string to_string(Criterion c);

struct StabilityVerdict {
  Criterion criterion = Criterion::nominal;
  ProtocolKind protocol;
  int tau_bar = 0;
  double margin = 0.0;  // 1 - binding left-hand side
  std::vector<std::pair<std::string, double>> gains;
  bool certified = false;
  std::string violated;  // empty when certified

  double gain(const std::string& name) const;
};

/// F C P_hat / (1 + C P_hat) * (z - 1)/z. Throws NumericError when the
/// delay-free loop is unstable.
lti::RationalTF build_M(const PredictorDesign& design);

struct LoopGains {
  double a11 = 0.0;  // ||S (z-1)/z||
  double a12 = 0.0;  // ||F T||
  double a21 = 0.0;  // ||F T (z-1)/z|| = ||M||
  double a22 = 0.0;  // ||F T||
};

LoopGains nominal_loop_gains(const PredictorDesign& design);

/// Verdicts from precomputed gains, for scans.
StabilityVerdict nominal_verdict(double m_norm, const ProtocolKind& protocol, int tau_bar);
StabilityVerdict uncertain_verdict(const LoopGains& gains, const ProtocolKind& protocol, int tau_bar, double alpha_A);

StabilityVerdict check_nominal(const PredictorDesign& design, const ProtocolKind& protocol, int tau_bar);
inline StabilityVerdict check_nominal(const PredictorDesign& design, const ProtocolKind& protocol) {
  return check_nominal(design, protocol, design.tau_bar());
}

StabilityVerdict check_uncertain(const PredictorDesign& design, const ProtocolKind& protocol, int tau_bar, double alpha_A);
inline StabilityVerdict check_uncertain(const PredictorDesign& design, const ProtocolKind& protocol, double alpha_A) {
  return check_uncertain(design, protocol, design.tau_bar(), alpha_A);
}

/// Largest tau_bar certified by the nominal test, scanning upward from 0
/// until the first failure (capped at limit).
int max_certified_tau(double m_norm, Protocol protocol, int limit = 1000);
int max_certified_tau(const PredictorDesign& design, Protocol protocol, int limit = 1000);

struct BodePoint {
  double omega;
  double mag_db;
};

/// 20 log10 |alpha M(e^{j omega h})| on a uniform grid over [0, pi/h].
std::vector<BodePoint> bode_sweep(const lti::RationalTF& m, double alpha, int points = 512);
void write_bode_csv(std::ostream& os, const std::vector<BodePoint>& points);

}  // namespace netsmith
