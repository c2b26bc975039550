#include "netsmith/gain_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "netsmith/errors.hpp"
#include "netsmith/format.hpp"

namespace netsmith {

double alpha_formula(Protocol protocol, int tau_bar) {
  if (tau_bar < 0) throw ValidationError("tau_bar must be non-negative");
  if (tau_bar == 0) return 0.0;
  const double t = tau_bar;
  switch (protocol) {
    case Protocol::p1:
      return t;
    case Protocol::p2:
      return std::max(std::sqrt(t * (14.0 * t * t - 9.0 * t + 1.0) / (6.0 * (t + 1.0))), 1.0);
    case Protocol::p3:
      return std::sqrt(t * (14.0 * t + 1.0) / 6.0);
  }
  throw ValidationError("unknown protocol");
}

PacketTrace worst_case_pattern(int tau_bar, int T) {
  if (tau_bar < 1) throw ValidationError("worst-case pattern requires tau_bar >= 1");
  if (T < 0) throw ValidationError("horizon T must be non-negative");
  return PacketTrace::worst_case(static_cast<size_t>(T) + 1, 0, tau_bar);
}

NormBlocks worst_case_blocks(int tau_bar, int T, double v_bar, BlockRounding rounding) {
  if (tau_bar < 1) throw ValidationError("worst-case norm requires tau_bar >= 1");
  if (T < 0) throw ValidationError("horizon T must be non-negative");
  const int period = tau_bar + 1;
  const int last = T + 2 * tau_bar;
  auto a = [&](int k) { return std::min(k + 1, T + 1) * v_bar; };
  auto block = [&](int j) {
    const int ref = j * period;
    double s = 0.0;
    for (int i = tau_bar + j * period; i <= std::min(2 * tau_bar + j * period, last); ++i) {
      const double w = a(i) - a(ref);
      s += w * w;
    }
    return s;
  };

  NormBlocks nb;
  for (int i = 0; i < tau_bar; ++i) nb.A += a(i) * a(i);

  const int remaining = T + 1 + tau_bar;
  const int excess = remaining - 3 * tau_bar;
  nb.k1 = excess > 0 ? (excess + period - 1) / period : 0;
  nb.k2 = remaining - nb.k1 * period;
  nb.k3 = rounding == BlockRounding::floor ? nb.k2 / period : (nb.k2 + period - 1) / period;

  for (int j = 0; j < nb.k1; ++j) nb.B += block(j);
  for (int j = nb.k1; j < nb.k1 + nb.k3; ++j) nb.C += block(j);
  const int start = tau_bar + (nb.k1 + nb.k3) * period;
  for (int i = start; i <= last; ++i) {
    const double w = a(i) - a(start);
    nb.D += w * w;
  }
  return nb;
}

double worst_case_norm(int tau_bar, int T, double v_bar, BlockRounding rounding) {
  return worst_case_blocks(tau_bar, T, v_bar, rounding).total();
}

double worst_case_alpha_T(int tau_bar, int T) { return std::sqrt(worst_case_norm(tau_bar, T, 1.0) / (T + 1.0)); }

double block_contribution(int tau_bar, double v_bar) {
  const double t = tau_bar;
  return (t + 1.0) * (14.0 * t * t + t) / 6.0 * v_bar * v_bar;
}

double trace_norm(const ProtocolKind& protocol, const PacketTrace& trace, int T, double v_bar) {
  const int tau_bar = trace.tau_max;
  const size_t horizon = static_cast<size_t>(T + 2 * tau_bar + 1);
  if (trace.size() < horizon) throw ValidationError("trace must cover T + 2 tau_bar + 1 packets");
  std::vector<double> a(horizon);
  for (size_t k = 0; k < horizon; ++k) a[k] = std::min<double>(static_cast<double>(k) + 1.0, T + 1.0) * v_bar;
  PacketTrace head = trace;
  head.delays.resize(horizon);
  const std::vector<ChannelRecord> out = run_channel(a, head, protocol);
  double s = 0.0;
  for (size_t k = 0; k < horizon; ++k) {
    const double w = a[k] - out[k].y_hat;
    s += w * w;
  }
  return s;
}

std::optional<int> AsymptoteTable::first_decrease() const {
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].alpha_T < rows[i - 1].alpha_T) return rows[i].T;
  }
  return std::nullopt;
}

AsymptoteTable alpha_asymptote_check(int tau_bar, int T_max) {
  if (tau_bar < 1) throw ValidationError("asymptote check requires tau_bar >= 1");
  if (T_max < 0) throw ValidationError("T_max must be non-negative");
  AsymptoteTable t;
  t.tau_bar = tau_bar;
  t.alpha = alpha_formula(Protocol::p3, tau_bar);
  for (int T = 0; T <= T_max; ++T) {
    const NormBlocks nb = worst_case_blocks(tau_bar, T, 1.0);
    AsymptoteRow r;
    r.T = T;
    r.alpha_T = std::sqrt(nb.total() / (T + 1.0));
    r.error = std::abs(r.alpha_T - t.alpha);
    r.transient = (nb.A + nb.C + nb.D) / (T + 1.0);
    r.periodic = nb.B / (T + 1.0);
    t.rows.push_back(r);
  }
  return t;
}

GainReport gain_report(const ProtocolKind& protocol, int tau_bar, int T_max, bool use_oracle, const OracleOptions& options) {
  if (T_max < 0) throw ValidationError("T_max must be non-negative");
  GainReport r;
  r.protocol = protocol;
  r.tau_bar = tau_bar;
  r.alpha_analytic = alpha_formula(protocol, tau_bar);
  r.oracle_used = use_oracle;
  if (!use_oracle && protocol.variant != Protocol::p3)
    throw ValidationError("closed-form alpha_T is available for P3 only; use the oracle");
  for (int T = 0; T <= T_max; ++T) {
    double a = 0.0;
    if (tau_bar > 0) a = use_oracle ? oracle_gain(protocol.variant, tau_bar, T, options).alpha_T : worst_case_alpha_T(tau_bar, T);
    r.alpha_T.push_back({T, a});
  }
  return r;
}

void write_gain_csv(std::ostream& os, const GainReport& report) {
  os << "T,alpha_T,alpha_analytic\n";
  for (const auto& p : report.alpha_T) os << p.T << ',' << fmt17(p.alpha_T) << ',' << fmt17(report.alpha_analytic) << '\n';
}

}  // namespace netsmith
