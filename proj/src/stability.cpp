#include "netsmith/stability.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "netsmith/errors.hpp"
#include "netsmith/format.hpp"
#include "netsmith/gain_analysis.hpp"

namespace netsmith {

using lti::RationalTF;

std::string to_string(Criterion c) { return c == Criterion::nominal ? "nominal" : "uncertain"; }

double StabilityVerdict::gain(const std::string& name) const {
  for (const auto& [k, v] : gains) {
    if (k == name) return v;
  }
  throw ValidationError("verdict has no gain named " + name);
}

namespace {

RationalTF stable_T(const PredictorDesign& design) {
  const RationalTF t = complementary_sensitivity(design);
  if (!t.is_stable()) throw NumericError("delay-free nominal loop is unstable");
  return t;
}

}  // namespace

RationalTF build_M(const PredictorDesign& design) {
  const RationalTF t = stable_T(design);
  return design.filter * t * RationalTF::difference(design.plant_nominal.h());
}

LoopGains nominal_loop_gains(const PredictorDesign& design) {
  const RationalTF t = stable_T(design);
  const RationalTF diff = RationalTF::difference(design.plant_nominal.h());
  LoopGains g;
  g.a11 = lti::inf_norm(sensitivity(design) * diff);
  g.a12 = lti::inf_norm(design.filter * t);
  g.a21 = lti::inf_norm(build_M(design));
  g.a22 = g.a12;
  return g;
}

StabilityVerdict nominal_verdict(double m_norm, const ProtocolKind& protocol, int tau_bar) {
  StabilityVerdict v;
  v.criterion = Criterion::nominal;
  v.protocol = protocol;
  v.tau_bar = tau_bar;
  const double alpha = alpha_formula(protocol, tau_bar);
  const double lhs = m_norm * alpha;
  v.gains = {{"M_inf", m_norm}, {"alpha", alpha}};
  v.margin = 1.0 - lhs;
  v.certified = lhs < 1.0;
  if (!v.certified) v.violated = "||M||_inf * alpha < 1";
  return v;
}

StabilityVerdict uncertain_verdict(const LoopGains& g, const ProtocolKind& protocol, int tau_bar, double alpha_A) {
  if (!(alpha_A >= 0.0)) throw ValidationError("alpha_A must be non-negative");
  StabilityVerdict v;
  v.criterion = Criterion::uncertain;
  v.protocol = protocol;
  v.tau_bar = tau_bar;
  const double aB = alpha_formula(protocol, tau_bar);
  const double aA = alpha_A;
  const double inf = std::numeric_limits<double>::infinity();

  const double l2 = aB * g.a21;
  const double l4 = aA * g.a12;
  const double cross = aA * aB * g.a11 * g.a22;
  const double l1 = cross == 0.0 ? l4 : (l2 < 1.0 ? l4 + cross / (1.0 - l2) : inf);
  const double l3 = cross == 0.0 ? l2 : (l4 < 1.0 ? l2 + cross / (1.0 - l4) : inf);

  v.gains = {{"alpha_A", aA}, {"alpha_B", aB}, {"alpha11", g.a11}, {"alpha12", g.a12}, {"alpha21", g.a21}, {"alpha22", g.a22}};
  const std::pair<const char*, double> conds[] = {
      {"alpha_A*alpha12 + alpha_A*alpha_B*alpha11*alpha22/(1 - alpha_B*alpha21) < 1", l1},
      {"alpha_B*alpha21 < 1", l2},
      {"alpha_B*alpha21 + alpha_A*alpha_B*alpha11*alpha22/(1 - alpha_A*alpha12) < 1", l3},
      {"alpha_A*alpha12 < 1", l4},
  };
  double worst = 0.0;
  v.certified = true;
  for (const auto& [name, lhs] : conds) {
    if (!(lhs < 1.0) && v.certified) {
      v.certified = false;
      v.violated = name;
    }
    worst = std::max(worst, lhs);
  }
  v.margin = 1.0 - worst;
  return v;
}

StabilityVerdict check_nominal(const PredictorDesign& design, const ProtocolKind& protocol, int tau_bar) {
  return nominal_verdict(lti::inf_norm(build_M(design)), protocol, tau_bar);
}

StabilityVerdict check_uncertain(const PredictorDesign& design, const ProtocolKind& protocol, int tau_bar, double alpha_A) {
  return uncertain_verdict(nominal_loop_gains(design), protocol, tau_bar, alpha_A);
}

int max_certified_tau(double m_norm, Protocol protocol, int limit) {
  int best = -1;
  for (int t = 0; t <= limit; ++t) {
    if (!nominal_verdict(m_norm, ProtocolKind{protocol}, t).certified) break;
    best = t;
  }
  return best;
}

int max_certified_tau(const PredictorDesign& design, Protocol protocol, int limit) {
  return max_certified_tau(lti::inf_norm(build_M(design)), protocol, limit);
}

std::vector<BodePoint> bode_sweep(const RationalTF& m, double alpha, int points) {
  if (points < 2) throw ValidationError("bode sweep needs at least 2 points");
  std::vector<BodePoint> out;
  const double wmax = std::numbers::pi / m.h();
  for (int i = 0; i < points; ++i) {
    const double w = wmax * i / (points - 1);
    const double mag = std::abs(lti::freq_response(m, w)) * alpha;
    out.push_back({w, 20.0 * std::log10(std::max(mag, 1e-300))});
  }
  return out;
}

void write_bode_csv(std::ostream& os, const std::vector<BodePoint>& points) {
  os << "omega,mag_dB\n";
  for (const auto& p : points) os << fmt17(p.omega) << ',' << fmt17(p.mag_db) << '\n';
}

}  // namespace netsmith
