#include "netsmith/packet_channel.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include "netsmith/errors.hpp"
#include "netsmith/format.hpp"

namespace netsmith {

ProtocolKind parse_protocol(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  ProtocolKind k;
  if (s == "p1") {
    k.variant = Protocol::p1;
  } else if (s == "p2") {
    k.variant = Protocol::p2;
  } else if (s == "p3" || s == "p3-oldest") {
    k.variant = Protocol::p3;
    k.selector = Selector::oldest;
  } else if (s == "p3-newest") {
    k.variant = Protocol::p3;
    k.selector = Selector::newest;
  } else if (s.rfind("p3-random", 0) == 0) {
    k.variant = Protocol::p3;
    k.selector = Selector::random;
    const std::string rest = s.substr(9);
    if (!rest.empty()) {
      if (rest[0] != ':' || rest.size() < 2) throw ValidationError("protocol must look like p3-random:<seed>");
      size_t pos = 0;
      try {
        k.seed = std::stoull(rest.substr(1), &pos);
      } catch (const std::exception&) {
        throw ValidationError("invalid P3 random seed: " + rest.substr(1));
      }
      if (pos != rest.size() - 1) throw ValidationError("invalid P3 random seed: " + rest.substr(1));
    }
  } else {
    throw ValidationError("unknown protocol '" + std::string(text) + "' (expected p1, p2, p3-oldest, p3-newest, p3-random:<seed>)");
  }
  return k;
}

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::p1: return "p1";
    case Protocol::p2: return "p2";
    case Protocol::p3: return "p3";
  }
  return "?";
}

std::string to_string(const ProtocolKind& kind) {
  if (kind.variant != Protocol::p3) return to_string(kind.variant);
  switch (kind.selector) {
    case Selector::oldest: return "p3-oldest";
    case Selector::newest: return "p3-newest";
    case Selector::random: return "p3-random:" + std::to_string(kind.seed);
  }
  return "p3";
}

void PacketTrace::validate() const {
  if (tau_min < 0 || tau_max < tau_min) throw ValidationError("packet trace bounds must satisfy 0 <= tau_min <= tau_max");
  for (size_t j = 0; j < delays.size(); ++j) {
    if (delays[j] < tau_min || delays[j] > tau_max)
      throw ValidationError("packet " + std::to_string(j) + " delay " + std::to_string(delays[j]) + " outside [" +
                            std::to_string(tau_min) + ", " + std::to_string(tau_max) + "]");
  }
}

PacketTrace PacketTrace::constant(size_t count, int delay) {
  PacketTrace t{std::vector<int>(count, delay), delay, delay};
  t.validate();
  return t;
}

PacketTrace PacketTrace::uniform(size_t count, int tau_min, int tau_max, std::uint64_t seed) {
  PacketTrace t{{}, tau_min, tau_max};
  t.validate();
  std::mt19937_64 rng(seed);
  const auto span = static_cast<std::uint64_t>(tau_max - tau_min + 1);
  t.delays.reserve(count);
  for (size_t j = 0; j < count; ++j) t.delays.push_back(tau_min + static_cast<int>(rng() % span));
  return t;
}

PacketTrace PacketTrace::worst_case(size_t count, int tau_min, int tau_max, size_t offset) {
  PacketTrace t{{}, tau_min, tau_max};
  t.validate();
  const auto period = static_cast<size_t>(tau_max - tau_min + 1);
  t.delays.reserve(count);
  for (size_t j = 0; j < count; ++j) t.delays.push_back(tau_max - static_cast<int>((j + offset) % period));
  return t;
}

std::vector<long> receive_set(const PacketTrace& trace, long p) {
  std::vector<long> out;
  if (p < 0) return out;
  const long first = std::max(0L, p - trace.tau_max);
  for (long j = first; j <= p && j < static_cast<long>(trace.delays.size()); ++j) {
    if (j + trace.delays[static_cast<size_t>(j)] == p) out.push_back(j);
  }
  return out;
}

ChannelOutput channel_step(ChannelState& state, const ProtocolKind& protocol, long p, const std::vector<double>& samples) {
  std::vector<long> arrived;
  auto& fl = state.in_flight;
  for (auto it = fl.begin(); it != fl.end();) {
    if (it->arrival <= p) {
      arrived.push_back(it->index);
      it = fl.erase(it);
    } else {
      ++it;
    }
  }
  std::sort(arrived.begin(), arrived.end());

  long chosen = -1;
  if (!arrived.empty()) {
    switch (protocol.variant) {
      case Protocol::p1:
        if (arrived.back() > state.last_index) chosen = arrived.back();
        break;
      case Protocol::p2:
        chosen = arrived.back();
        break;
      case Protocol::p3:
        switch (protocol.selector) {
          case Selector::oldest: chosen = arrived.front(); break;
          case Selector::newest: chosen = arrived.back(); break;
          case Selector::random: chosen = arrived[state.rng() % arrived.size()]; break;
        }
        break;
    }
  }
  if (chosen >= 0) {
    if (chosen >= static_cast<long>(samples.size())) throw ValidationError("packet index has no sample value");
    state.last_index = chosen;
    state.last_output = samples[static_cast<size_t>(chosen)];
  }
  return {state.last_output, chosen};
}

std::vector<ChannelRecord> run_channel(const std::vector<double>& input, const PacketTrace& trace,
                                       const ProtocolKind& protocol) {
  trace.validate();
  if (trace.size() < input.size()) throw ValidationError("packet trace is shorter than the input sequence");
  ChannelState state(protocol.seed);
  std::vector<ChannelRecord> out;
  const long last = static_cast<long>(input.size()) - 1 + trace.tau_max;
  for (long p = 0; p <= last; ++p) {
    if (p < static_cast<long>(input.size())) state.send(p, trace.delays[static_cast<size_t>(p)]);
    const ChannelOutput o = channel_step(state, protocol, p, input);
    out.push_back({p, o.y_hat, o.selected_index});
  }
  return out;
}

void write_trace_csv(std::ostream& os, const PacketTrace& trace) {
  os << "j,tau\n";
  for (size_t j = 0; j < trace.delays.size(); ++j) os << j << ',' << trace.delays[j] << '\n';
}

PacketTrace read_trace_csv(std::istream& is, int tau_min, int tau_max) {
  PacketTrace t{{}, tau_min, tau_max};
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("delay trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "j,tau") throw ValidationError("delay trace CSV must start with header 'j,tau'");
  long expected = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    long j = 0;
    int tau = 0;
    char comma = 0;
    if (!(row >> j >> comma >> tau) || comma != ',') throw ValidationError("malformed delay trace row: " + line);
    if (j != expected) throw ValidationError("delay trace rows must be consecutive from j = 0");
    t.delays.push_back(tau);
    ++expected;
  }
  t.validate();
  return t;
}

void write_channel_csv(std::ostream& os, const std::vector<ChannelRecord>& records) {
  os << "p,y_hat,selected_index\n";
  for (const auto& r : records) os << r.p << ',' << fmt17(r.y_hat) << ',' << r.selected_index << '\n';
}

}  // namespace netsmith
