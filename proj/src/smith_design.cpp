#include "netsmith/smith_design.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "netsmith/errors.hpp"

namespace netsmith {

using lti::Complex;
using lti::Polynomial;
using lti::RationalTF;

namespace {

constexpr double kUnstableRadius = 1.0 - 1e-9;
constexpr double kNodeMergeTol = 1e-6;
constexpr double kDeflateMatchTol = 1e-6;

Polynomial delayed_denominator(const Polynomial& nu_f, int tau_hat) { return Polynomial::monomial(tau_hat) * nu_f; }

Complex eval_derivative(const Polynomial& p, int order, Complex z) {
  Polynomial d = p;
  for (int k = 0; k < order; ++k) d = d.derivative();
  return d(z);
}

bool is_unstable_pole(Complex p, std::optional<double> slow) {
  const double r = std::abs(p);
  if (r >= kUnstableRadius) return true;
  return slow.has_value() && r >= *slow;
}

}  // namespace

void validate_delay_bounds(int d_hat, int tau_n_min, int tau_n_max) {
  if (d_hat < 0) throw ValidationError("plant delay d_hat must be non-negative");
  if (tau_n_min < 0 || tau_n_max < tau_n_min)
    throw ValidationError("network delay bounds violate 0 <= tau_net_min <= tau_net_max (got " +
                          std::to_string(tau_n_min) + ", " + std::to_string(tau_n_max) + ")");
}

std::vector<FilterNode> filter_nodes(const RationalTF& plant, std::optional<double> slow_pole_threshold) {
  std::vector<FilterNode> nodes{{Complex(1.0, 0.0), 1}};
  bool one_from_plant = false;
  for (const Complex& p : plant.poles()) {
    if (!is_unstable_pole(p, slow_pole_threshold)) continue;
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const FilterNode& n) {
      return std::abs(n.z - p) < kNodeMergeTol * std::max(1.0, std::abs(p));
    });
    if (it == nodes.end()) {
      nodes.push_back({p, 1});
    } else if (it == nodes.begin() && !one_from_plant) {
      one_from_plant = true;  // a plant pole at z = 1 coincides with the dc-gain constraint
    } else {
      ++it->multiplicity;
    }
  }
  return nodes;
}

RationalTF design_filter(const RationalTF& plant, int tau_hat, double lambda, std::optional<double> slow_pole_threshold) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ValidationError("filter pole lambda must lie in [0, 1)");
  if (tau_hat < 0) throw ValidationError("tau_hat must be non-negative");
  if (slow_pole_threshold && !(*slow_pole_threshold > 0.0))
    throw ValidationError("slow-pole threshold must be positive");

  const std::vector<FilterNode> nodes = filter_nodes(plant, slow_pole_threshold);
  int count = 0;
  for (const FilterNode& n : nodes) count += n.multiplicity;
  const int n_f = count - 1;

  const std::array<Complex, 1> lam{Complex(lambda, 0.0)};
  Polynomial nu_f = Polynomial::constant(1.0);
  for (int i = 0; i < n_f; ++i) nu_f = nu_f * Polynomial::from_roots(lam);
  const Polynomial q = delayed_denominator(nu_f, tau_hat);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(count, count);
  Eigen::VectorXcd rhs(count);
  int row = 0;
  for (const FilterNode& node : nodes) {
    double fact = 1.0;
    for (int j = 0; j < node.multiplicity; ++j) {
      if (j > 0) fact *= j;
      for (int c = 0; c < count; ++c) {
        const int power = n_f - c;
        if (power < j) continue;
        double falling = 1.0;
        for (int t = 0; t < j; ++t) falling *= power - t;
        m(row, c) = falling / fact * std::pow(node.z, power - j);
      }
      rhs(row) = eval_derivative(q, j, node.z) / fact;
      ++row;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(1e-12);
  if (lu.rank() < count) throw NumericError("filter interpolation system is singular");
  const Eigen::VectorXcd sol = lu.solve(rhs);
  if (!sol.allFinite()) throw NumericError("filter interpolation system is singular");

  std::vector<double> mu(static_cast<size_t>(count));
  for (int c = 0; c < count; ++c) mu[static_cast<size_t>(c)] = sol(c).real();
  return RationalTF(Polynomial(mu), nu_f, plant.h());
}

RationalTF build_H(const RationalTF& plant, const RationalTF& filter, int tau_hat) {
  if (tau_hat < 0) throw ValidationError("tau_hat must be non-negative");
  const Polynomial& nu_f = filter.den();
  const Polynomial q = delayed_denominator(nu_f, tau_hat);
  Polynomial g = q - filter.num();
  // With tau_hat = 0 the solved filter equals 1 up to rounding.
  if (g.is_zero() || g.max_abs_coeff() <= 1e-12 * q.max_abs_coeff()) return RationalTF(Polynomial(), Polynomial::constant(1.0), plant.h());

  Polynomial nu = plant.den();
  std::vector<Complex> unstable;
  for (const Complex& p : plant.poles()) {
    if (std::abs(p) >= kUnstableRadius && p.imag() >= 0.0) unstable.push_back(p);
  }
  for (const Complex& p : unstable) {
    const std::vector<Complex> gr = g.degree() >= 1 ? lti::roots(g) : std::vector<Complex>{};
    const bool matched = std::any_of(gr.begin(), gr.end(), [&](const Complex& r) {
      return std::abs(r - p) < kDeflateMatchTol * std::max(1.0, std::abs(p));
    });
    if (!matched) throw NumericError("H retains an unstable plant pole; the filter violates the interpolation constraint");
    if (p.imag() == 0.0) {
      g = g.deflate(p.real());
      nu = nu.deflate(p.real());
    } else {
      g = g.deflate_pair(p);
      nu = nu.deflate_pair(p);
    }
  }
  RationalTF h = RationalTF(plant.num() * g, delayed_denominator(nu * nu_f, tau_hat), plant.h())
                     .cancel(lti::kArithCancelTol);
  if (!h.is_stable()) throw NumericError("H is unstable after deflation");
  return h;
}

PredictorDesign make_design(const RationalTF& plant, const RationalTF& controller, const RationalTF& prefilter,
                            int d_hat, int tau_n_min, int tau_n_max, const DesignOptions& options) {
  validate_delay_bounds(d_hat, tau_n_min, tau_n_max);
  if (!plant.is_strictly_proper()) throw ValidationError("plant must be strictly proper");
  if (plant.is_zero()) throw ValidationError("plant transfer function is zero");
  if (!controller.is_proper()) throw ValidationError("controller must be proper");
  if (!prefilter.is_proper()) throw ValidationError("prefilter must be proper");
  if (controller.h() != plant.h() || prefilter.h() != plant.h())
    throw ValidationError("plant, controller and prefilter sampling times differ");

  PredictorDesign d;
  d.plant_nominal = plant;
  d.controller = controller;
  d.prefilter = prefilter;
  d.d_hat = d_hat;
  d.tau_n_min = tau_n_min;
  d.tau_n_max = tau_n_max;
  d.lambda = options.lambda;
  d.slow_pole_threshold = options.slow_pole_threshold;
  d.filter = design_filter(plant, d.tau_hat(), options.lambda, options.slow_pole_threshold);
  d.predictor_block = build_H(plant, d.filter, d.tau_hat());
  return d;
}

RationalTF complementary_sensitivity(const PredictorDesign& design) {
  return lti::feedback(design.controller * design.plant_nominal);
}

RationalTF sensitivity(const PredictorDesign& design) {
  const RationalTF& c = design.controller;
  const RationalTF& p = design.plant_nominal;
  const Polynomial den = c.den() * p.den() + c.num() * p.num();
  if (den.is_zero()) throw NumericError("1 + C P_hat is identically zero");
  return RationalTF(c.den() * p.den(), den, p.h()).cancel(lti::kArithCancelTol);
}

NominalClosedLoop nominal_closed_loop(const PredictorDesign& design) {
  const double h = design.plant_nominal.h();
  const RationalTF dhat = RationalTF::delay(design.tau_hat(), h);
  const RationalTF t = complementary_sensitivity(design);
  if (!t.is_stable()) throw NumericError("nominal delay-free loop C P_hat / (1 + C P_hat) is unstable");

  NominalClosedLoop out;
  out.T_r = design.prefilter * t * dhat;
  if (!out.T_r.is_stable()) throw NumericError("reference transfer function is unstable");

  // P_hat (1 - z^-tau F T) = H + z^-tau F P_hat S keeps every factor stable.
  const RationalTF& c = design.controller;
  const RationalTF& p = design.plant_nominal;
  const RationalTF ps(p.num() * c.den(), p.den() * c.den() + p.num() * c.num(), h);
  out.T_d = dhat * (design.predictor_block + dhat * design.filter * ps.cancel(lti::kArithCancelTol));
  return out;
}

DesignResiduals residuals(const PredictorDesign& design) {
  DesignResiduals r;
  const Polynomial g = delayed_denominator(design.filter.den(), design.tau_hat()) - design.filter.num();
  for (const FilterNode& n : filter_nodes(design.plant_nominal, design.slow_pole_threshold)) {
    for (int j = 0; j < n.multiplicity; ++j) r.interpolation.push_back({n.z, j, std::abs(eval_derivative(g, j, n.z))});
  }
  r.dc_gain_error = std::abs(design.filter(Complex(1.0, 0.0)).real() - 1.0);
  for (const Complex& p : design.predictor_block.poles()) r.h_pole_radii.push_back(std::abs(p));
  return r;
}

}  // namespace netsmith
