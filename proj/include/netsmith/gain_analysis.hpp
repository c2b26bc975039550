#pragma once

// l2 gain of the delay uncertainty seen by the predictor loop. A step v of
// amplitude v_bar over k = 0..T is integrated (a_k = min(k+1, T+1) v_bar),
// sent through the packet channel, and w_k = a_k - c_k is collected over
// k = 0..T+2 tau_bar. alpha_T = ||w|| / ||v|| and alpha = sup_T alpha_T.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "netsmith/packet_channel.hpp"

namespace netsmith {

/// Analytic gain bound for a protocol and delay variation tau_bar.
double alpha_formula(Protocol protocol, int tau_bar);
inline double alpha_formula(const ProtocolKind& kind, int tau_bar) { return alpha_formula(kind.variant, tau_bar); }

/// (tau_bar, tau_bar - 1, ..., 0) repeated, T + 1 packets, bounds [0, tau_bar].
PacketTrace worst_case_pattern(int tau_bar, int T);

enum class BlockRounding { floor, ceil };

struct NormBlocks {
  double A = 0.0;  // introductory samples
  double B = 0.0;  // k1 repeating blocks
  double C = 0.0;  // k3 blocks
  double D = 0.0;  // remainder
  int k1 = 0;
  int k2 = 0;
  int k3 = 0;
  double total() const { return A + B + C + D; }
};

/// Block decomposition of the squared worst-case norm.
NormBlocks worst_case_blocks(int tau_bar, int T, double v_bar, BlockRounding rounding = BlockRounding::floor);
/// Squared 2-norm of the worst-case w sequence.
double worst_case_norm(int tau_bar, int T, double v_bar, BlockRounding rounding = BlockRounding::floor);
/// sqrt(worst_case_norm / ((T+1) v_bar^2)).
double worst_case_alpha_T(int tau_bar, int T);
/// Per-block contribution d = (tau_bar+1)(14 tau_bar^2 + tau_bar)/6 v_bar^2.
double block_contribution(int tau_bar, double v_bar);

/// Squared norm of w for one fully specified packet trace (at least
/// T + 2 tau_bar + 1 packets) and a fixed protocol/selector.
double trace_norm(const ProtocolKind& protocol, const PacketTrace& trace, int T, double v_bar);

struct OracleOptions {
  double v_bar = 1.0;
  double budget = 1e9;  // maximum number of head assignments (tau_bar+1)^(T+1)
  unsigned threads = 0;  // 0: one partition per delay of packet 0
};

struct OracleResult {
  double norm_sq = 0.0;
  double alpha_T = 0.0;
  std::vector<int> head_delays;   // packets 0..T of a maximizing assignment
  std::vector<int> tail_delays;   // packets T+1..T+2 tau_bar, -1 = arrives after the horizon
  std::vector<long> selections;   // index used at each instant (-1 = hold)
  std::uint64_t assignments = 0;  // head assignments evaluated
};

/// Exhaustive worst case over all delay assignments of packets 0..T and, for
/// P3, all packet selections. Later packets that can still arrive inside the
/// horizon are maximized exactly. Among equal maxima (within 1e-9 relative)
/// the lexicographically smallest head assignment wins. Throws
/// ValidationError when (tau_bar+1)^(T+1) exceeds the budget.
OracleResult oracle_gain(Protocol protocol, int tau_bar, int T, const OracleOptions& options = {});

/// Best squared norm for one fixed head assignment.
double evaluate_head(Protocol protocol, int tau_bar, int T, const std::vector<int>& head, double v_bar = 1.0);

struct AsymptoteRow {
  int T = 0;
  double alpha_T = 0.0;
  double error = 0.0;      // |alpha_T - alpha|
  double transient = 0.0;  // (A + C + D) / (1 + T)
  double periodic = 0.0;   // B / (1 + T), approaches d / (tau_bar + 1)
};

struct AsymptoteTable {
  int tau_bar = 0;
  double alpha = 0.0;
  std::vector<AsymptoteRow> rows;
  /// First T with alpha_T < alpha_{T-1}, if any.
  std::optional<int> first_decrease() const;
};

AsymptoteTable alpha_asymptote_check(int tau_bar, int T_max);

struct GainReport {
  ProtocolKind protocol;
  int tau_bar = 0;
  double alpha_analytic = 0.0;
  struct Point {
    int T;
    double alpha_T;
  };
  std::vector<Point> alpha_T;
  bool oracle_used = false;
};

/// alpha_T for T = 0..T_max, from the oracle or (P3 only) the closed form.
GainReport gain_report(const ProtocolKind& protocol, int tau_bar, int T_max, bool use_oracle,
                       const OracleOptions& options = {});
void write_gain_csv(std::ostream& os, const GainReport& report);

}  // namespace netsmith
