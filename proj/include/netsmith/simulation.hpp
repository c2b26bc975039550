#pragma once

// Time-domain closed loop of the networked predictor. Per step k:
//   y_k   plant output (plant delayed by d_hat samples)
//   y^_k  channel output after packet transmission of y
//   e_k = V r_k - F y^_k - H u_k,  u_k = C e_k,  plant input u_k + w_k.
// All states start at zero.

#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netsmith/lmi.hpp"
#include "netsmith/packet_channel.hpp"
#include "netsmith/smith_design.hpp"

namespace netsmith {

inline constexpr double kDivergenceThreshold = 1e6;

struct Signal {
  enum class Kind { zero, step, custom };
  Kind kind = Kind::zero;
  double amplitude = 1.0;
  long start = 0;
  std::vector<double> values;  // custom; zero beyond the end

  static Signal zero() { return {}; }
  static Signal step(double amplitude = 1.0, long start = 0) { return {Kind::step, amplitude, start, {}}; }
  static Signal custom(std::vector<double> v) { return {Kind::custom, 1.0, 0, std::move(v)}; }
  double at(long k) const;
};

enum class SimModel { packetized, sample_delay };

struct SimScenario {
  PredictorDesign design;
  ProtocolKind protocol;
  PacketTrace trace;
  Signal reference = Signal::step();
  Signal disturbance;
  int steps = 100;
  SimModel model = SimModel::packetized;
};

struct SimRecord {
  long k = 0;
  double r = 0.0;
  double u = 0.0;
  double y = 0.0;
  double y_hat = 0.0;
  double y_F = 0.0;
  double y_H = 0.0;
  long selected_index = -1;
};

struct SimTrace {
  std::vector<SimRecord> records;
  std::optional<long> divergence_step;  // first k with |y_k| > 1e6; the run stops there
  double max_abs_y() const;
};

/// Packetized or sample-delay run depending on scenario.model. In the
/// sample-delay model packet k's delay is used as the feedback delay at step k
/// and the channel columns report y(k - tau_k).
SimTrace simulate(const SimScenario& scenario);

struct SampleDelayTrace {
  std::vector<Eigen::VectorXd> xi;  // xi_0 .. xi_steps
  std::vector<double> y;            // plant output y_k, k = 0 .. steps-1
  std::optional<long> divergence_step;
};

/// Iterates the augmented recursion with per-step delays tau_k in
/// [tau_n_min, tau_n_max], zero history, optional inputs r_V and w.
SampleDelayTrace simulate_sample_delay(const AugmentedModel& model, const std::vector<int>& delays, int steps,
                                       const std::vector<double>& r_v = {}, const std::vector<double>& w = {});

/// V applied to the reference sequence.
std::vector<double> prefilter_reference(const lti::RationalTF& V, const Signal& r, int steps);

void write_sim_csv(std::ostream& os, const SimTrace& trace);

}  // namespace netsmith
