#pragma once

// Packetized transmission of a sampled signal. Sample y_j travels in its own
// packet and arrives at instant j + tau_j. At every instant p the receiver
// sees the index set I(p) = { j : j + tau_j = p } and outputs one sample
// according to the protocol, holding the previous output when I(p) is empty:
//   P1  newest arrived index, but only if newer than the last one used
//   P2  newest arrived index
//   P3  any arrived index, chosen by a selector (oldest, newest, seeded random)

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace netsmith {

enum class Protocol { p1, p2, p3 };
enum class Selector { oldest, newest, random };

struct ProtocolKind {
  Protocol variant = Protocol::p2;
  Selector selector = Selector::oldest;
  std::uint64_t seed = 0;

  friend bool operator==(const ProtocolKind&, const ProtocolKind&) = default;
};

/// Accepts p1, p2, p3 (oldest), p3-oldest, p3-newest, p3-random (seed 0) and
/// p3-random:<seed>. Case-insensitive.
ProtocolKind parse_protocol(std::string_view text);
std::string to_string(const ProtocolKind& kind);
std::string to_string(Protocol p);

struct PacketTrace {
  std::vector<int> delays;  // delay of the packet sent at instant j
  int tau_min = 0;
  int tau_max = 0;

  /// Throws ValidationError when a delay is outside [tau_min, tau_max].
  void validate() const;
  size_t size() const { return delays.size(); }

  static PacketTrace constant(size_t count, int delay);
  /// i.i.d. uniform integers on [tau_min, tau_max] from a 64-bit seed.
  static PacketTrace uniform(size_t count, int tau_min, int tau_max, std::uint64_t seed);
  /// tau_min + (tau_bar, tau_bar - 1, ..., 0) repeated, shifted left by offset.
  static PacketTrace worst_case(size_t count, int tau_min, int tau_max, size_t offset = 0);
};

/// Indices j with j + tau_j = p, ascending.
std::vector<long> receive_set(const PacketTrace& trace, long p);

struct ChannelState {
  long last_index = -1;
  double last_output = 0.0;
  struct InFlight {
    long index;
    long arrival;
  };
  std::vector<InFlight> in_flight;
  std::mt19937_64 rng;

  explicit ChannelState(std::uint64_t seed = 0) : rng(seed) {}
  void send(long index, int delay) { in_flight.push_back({index, index + delay}); }
};

struct ChannelOutput {
  double y_hat = 0.0;
  long selected_index = -1;  // -1 when holding
};

/// Delivers every in-flight packet with arrival == p and applies the protocol.
/// samples[j] is the value carried by packet j.
ChannelOutput channel_step(ChannelState& state, const ProtocolKind& protocol, long p, const std::vector<double>& samples);

struct ChannelRecord {
  long p = 0;
  double y_hat = 0.0;
  long selected_index = -1;
};

/// Runs p = 0 .. input.size() - 1 + tau_max from zero initial hold.
std::vector<ChannelRecord> run_channel(const std::vector<double>& input, const PacketTrace& trace,
                                       const ProtocolKind& protocol);

void write_trace_csv(std::ostream& os, const PacketTrace& trace);
/// Reads `j,tau` rows; the bounds are taken from the arguments.
PacketTrace read_trace_csv(std::istream& is, int tau_min, int tau_max);
void write_channel_csv(std::ostream& os, const std::vector<ChannelRecord>& records);

}  // namespace netsmith
