#include "netsmith/simulation.hpp"

#include <cmath>
#include <ostream>

#include "netsmith/errors.hpp"
#include "netsmith/format.hpp"

namespace netsmith {

double Signal::at(long k) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::step: return k >= start ? amplitude : 0.0;
    case Kind::custom: return k >= 0 && k < static_cast<long>(values.size()) ? values[static_cast<size_t>(k)] : 0.0;
  }
  return 0.0;
}

double SimTrace::max_abs_y() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, std::abs(r.y));
  return m;
}

namespace {

void validate_scenario(const SimScenario& s) {
  if (s.steps < 1) throw ValidationError("simulation horizon must be at least 1 step");
  s.trace.validate();
  if (s.trace.size() < static_cast<size_t>(s.steps)) throw ValidationError("packet trace does not cover the horizon");
  for (int k = 0; k < s.steps; ++k) {
    const int d = s.trace.delays[static_cast<size_t>(k)];
    if (d < s.design.tau_n_min || d > s.design.tau_n_max)
      throw ValidationError("packet delay " + std::to_string(d) + " outside the design bounds [" +
                            std::to_string(s.design.tau_n_min) + ", " + std::to_string(s.design.tau_n_max) + "]");
  }
  for (const auto* tf : {&s.design.plant_nominal, &s.design.controller, &s.design.prefilter, &s.design.filter,
                         &s.design.predictor_block}) {
    if (!tf->is_proper()) throw ValidationError("improper transfer function in design");
  }
}

SimTrace simulate_packetized(const SimScenario& s) {
  const PredictorDesign& d = s.design;
  lti::StateSpaceBlock plant(lti::realize(d.plant_nominal));
  lti::StateSpaceBlock ctrl(lti::realize(d.controller));
  lti::StateSpaceBlock pre(lti::realize(d.prefilter));
  lti::StateSpaceBlock filt(lti::realize(d.filter));
  lti::StateSpaceBlock pred(lti::realize(d.predictor_block));
  if (plant.model().d != 0.0) throw ValidationError("plant must be strictly proper");
  if (pred.model().d != 0.0) throw ValidationError("predictor block H must be strictly proper");

  ChannelState channel(s.protocol.seed);
  std::vector<double> plant_out;
  std::vector<double> samples;
  SimTrace out;
  for (long k = 0; k < s.steps; ++k) {
    plant_out.push_back(plant.output(0.0));
    const double y = k >= d.d_hat ? plant_out[static_cast<size_t>(k - d.d_hat)] : 0.0;
    samples.push_back(y);
    channel.send(k, s.trace.delays[static_cast<size_t>(k)]);
    const ChannelOutput ch = channel_step(channel, s.protocol, k, samples);

    const double r = s.reference.at(k);
    const double yF = filt.output(ch.y_hat);
    const double yH = pred.output(0.0);
    const double e = pre.output(r) - yF - yH;
    const double u = ctrl.output(e);

    filt.update(ch.y_hat);
    pre.update(r);
    ctrl.update(e);
    pred.update(u);
    plant.update(u + s.disturbance.at(k));

    out.records.push_back({k, r, u, y, ch.y_hat, yF, yH, ch.selected_index});
    if (!(std::abs(y) <= kDivergenceThreshold)) {
      out.divergence_step = k;
      break;
    }
  }
  return out;
}

SimTrace simulate_sample_model(const SimScenario& s) {
  const AugmentedModel m = assemble_augmented(s.design);
  const std::vector<double> rv = prefilter_reference(s.design.prefilter, s.reference, s.steps);
  std::vector<double> w(static_cast<size_t>(s.steps));
  for (int k = 0; k < s.steps; ++k) w[static_cast<size_t>(k)] = s.disturbance.at(k);
  std::vector<int> delays(s.trace.delays.begin(), s.trace.delays.begin() + s.steps);
  const SampleDelayTrace st = simulate_sample_delay(m, delays, s.steps, rv, w);

  const auto& P = m.plant;
  const auto& H = m.predictor;
  const auto& F = m.filter;
  const auto& C = m.controller;
  const int o1 = P.order(), o2 = o1 + H.order(), o3 = o2 + F.order();
  SimTrace out;
  for (long k = 0; k < static_cast<long>(st.y.size()); ++k) {
    const Eigen::VectorXd& xi = st.xi[static_cast<size_t>(k)];
    const long lag = k - s.design.d_hat - delays[static_cast<size_t>(k)];
    const double y_hat = lag >= 0 ? m.C_out.dot(st.xi[static_cast<size_t>(lag)]) : 0.0;
    const double yF = F.c.dot(xi.segment(o2, F.order())) + F.d * y_hat;
    const double yH = H.c.dot(xi.segment(o1, H.order()));
    const double e = rv[static_cast<size_t>(k)] - yF - yH;
    const double u = C.c.dot(xi.segment(o3, C.order())) + C.d * e;
    const long sent = k - delays[static_cast<size_t>(k)];
    out.records.push_back({k, s.reference.at(k), u, st.y[static_cast<size_t>(k)], y_hat, yF, yH, sent >= 0 ? sent : -1});
  }
  out.divergence_step = st.divergence_step;
  return out;
}

}  // namespace

SimTrace simulate(const SimScenario& scenario) {
  validate_scenario(scenario);
  return scenario.model == SimModel::packetized ? simulate_packetized(scenario) : simulate_sample_model(scenario);
}

SampleDelayTrace simulate_sample_delay(const AugmentedModel& model, const std::vector<int>& delays, int steps,
                                       const std::vector<double>& r_v, const std::vector<double>& w) {
  if (steps < 1) throw ValidationError("simulation horizon must be at least 1 step");
  if (delays.size() < static_cast<size_t>(steps)) throw ValidationError("delay sequence does not cover the horizon");
  for (int k = 0; k < steps; ++k) {
    const int d = delays[static_cast<size_t>(k)];
    if (d < model.tau_n_min || d > model.tau_n_max)
      throw ValidationError("delay " + std::to_string(d) + " at step " + std::to_string(k) + " outside [" +
                            std::to_string(model.tau_n_min) + ", " + std::to_string(model.tau_n_max) + "]");
  }
  SampleDelayTrace out;
  out.xi.push_back(Eigen::VectorXd::Zero(model.n_xi));
  for (long k = 0; k < steps; ++k) {
    const long lag_y = k - model.d_hat;
    const double y = lag_y >= 0 ? model.C_out.dot(out.xi[static_cast<size_t>(lag_y)]) : 0.0;
    out.y.push_back(y);
    Eigen::VectorXd next = model.A_tilde * out.xi[static_cast<size_t>(k)];
    const long lag = k - model.d_hat - delays[static_cast<size_t>(k)];
    if (lag >= 0) next += model.A_d_tilde * out.xi[static_cast<size_t>(lag)];
    if (k < static_cast<long>(r_v.size())) next += model.B_ref * r_v[static_cast<size_t>(k)];
    if (k < static_cast<long>(w.size())) next += model.B_dist * w[static_cast<size_t>(k)];
    out.xi.push_back(std::move(next));
    if (!(std::abs(y) <= kDivergenceThreshold)) {
      out.divergence_step = k;
      break;
    }
  }
  return out;
}

std::vector<double> prefilter_reference(const lti::RationalTF& V, const Signal& r, int steps) {
  lti::StateSpaceBlock v(lti::realize(V));
  std::vector<double> out;
  out.reserve(static_cast<size_t>(std::max(steps, 0)));
  for (long k = 0; k < steps; ++k) {
    const double rk = r.at(k);
    out.push_back(v.output(rk));
    v.update(rk);
  }
  return out;
}

void write_sim_csv(std::ostream& os, const SimTrace& trace) {
  os << "k,r,u,y,y_hat,y_F,y_H,selected_index\n";
  for (const auto& r : trace.records) {
    os << r.k << ',' << fmt17(r.r) << ',' << fmt17(r.u) << ',' << fmt17(r.y) << ',' << fmt17(r.y_hat) << ','
       << fmt17(r.y_F) << ',' << fmt17(r.y_H) << ',' << r.selected_index << '\n';
  }
}

}  // namespace netsmith
