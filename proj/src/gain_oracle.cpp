#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "netsmith/errors.hpp"
#include "netsmith/gain_analysis.hpp"

namespace netsmith {

namespace {

struct KeyHash {
  size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h);
  }
};

struct Pending {
  int index;
  int arrival;
};

bool better(double cand, double best) { return cand > best + 1e-9 * std::max(1.0, std::abs(best)); }

// Exhaustive worst case over the packets that follow a fixed head assignment.
class Search {
 public:
  Search(Protocol protocol, int tau_bar, int T, double v_bar)
      : protocol_(protocol), tau_bar_(tau_bar), T_(T), horizon_(T + 2 * tau_bar + 1) {
    a_.resize(static_cast<size_t>(horizon_));
    for (int k = 0; k < horizon_; ++k) a_[static_cast<size_t>(k)] = std::min(k + 1, T + 1) * v_bar;
  }

  double run(const std::vector<int>& head) {
    head_ = &head;
    return step(0, -1, {});
  }

  // Replays the maximizing branch for the current head and records it.
  void trace(const std::vector<int>& head, OracleResult& out) {
    head_ = &head;
    out.tail_delays.clear();
    out.selections.clear();
    int s = -1;
    std::vector<Pending> pending;
    for (int p = 0; p < horizon_; ++p) {
      Choice c = best_choice(p, s, pending);
      if (p > T_) out.tail_delays.push_back(c.delay);
      out.selections.push_back(c.selected);
      s = c.next_s;
      pending = std::move(c.next_pending);
    }
  }

 private:
  struct Choice {
    double value = -1.0;
    int delay = -1;
    long selected = -1;
    int next_s = -1;
    std::vector<Pending> next_pending;
  };

  double value_of(int s) const { return s < 0 ? 0.0 : a_[static_cast<size_t>(std::min(s, horizon_ - 1))]; }

  std::vector<int> key(int p, int s, const std::vector<Pending>& pending) const {
    const bool by_value = protocol_ == Protocol::p3;
    auto canon = [&](int idx) { return by_value && idx > T_ ? T_ : idx; };
    std::vector<std::pair<int, int>> items;
    items.reserve(pending.size());
    for (const Pending& q : pending) items.emplace_back(q.arrival, canon(q.index));
    std::sort(items.begin(), items.end());
    std::vector<int> k{p, s < 0 ? -1 : canon(s)};
    for (const auto& [arr, idx] : items) {
      k.push_back(arr);
      k.push_back(idx);
    }
    return k;
  }

  // Enumerates the admissible moves at instant p and calls visit for each.
  template <typename Visit>
  void moves(int p, int s, const std::vector<Pending>& pending, Visit&& visit) const {
    std::vector<int> arrivals;
    std::vector<int> delays;
    if (p <= T_) {
      const int d = (*head_)[static_cast<size_t>(p)];
      arrivals.push_back(p + d);
      delays.push_back(d);
    } else {
      bool dropped = false;
      for (int d = 0; d <= tau_bar_; ++d) {
        if (p + d >= horizon_) {
          if (dropped) continue;
          dropped = true;
          arrivals.push_back(horizon_);
          delays.push_back(-1);
        } else {
          arrivals.push_back(p + d);
          delays.push_back(d);
        }
      }
    }
    for (size_t o = 0; o < arrivals.size(); ++o) {
      std::vector<Pending> rest;
      std::vector<int> arrived;
      for (const Pending& q : pending) {
        if (q.arrival == p) arrived.push_back(q.index);
        else rest.push_back(q);
      }
      if (arrivals[o] == p) arrived.push_back(p);
      else if (arrivals[o] < horizon_) rest.push_back({p, arrivals[o]});
      std::sort(arrived.begin(), arrived.end());

      auto emit = [&](int next_s, long selected) {
        const double w = a_[static_cast<size_t>(p)] - value_of(next_s);
        visit(w * w, delays[o], selected, next_s, rest);
      };
      if (arrived.empty()) {
        emit(s, -1);
        continue;
      }
      switch (protocol_) {
        case Protocol::p1:
          if (arrived.back() > s) emit(arrived.back(), arrived.back());
          else emit(s, -1);
          break;
        case Protocol::p2:
          emit(arrived.back(), arrived.back());
          break;
        case Protocol::p3:
          for (int idx : arrived) emit(idx, idx);
          break;
      }
    }
  }

  double step(int p, int s, const std::vector<Pending>& pending) {
    if (p >= horizon_) return 0.0;
    std::vector<int> k;
    if (p > T_) {
      k = key(p, s, pending);
      auto it = memo_.find(k);
      if (it != memo_.end()) return it->second;
    }
    double best = -1.0;
    moves(p, s, pending, [&](double w2, int, long, int next_s, const std::vector<Pending>& rest) {
      const double v = w2 + step(p + 1, next_s, rest);
      if (best < 0.0 || better(v, best)) best = v;
    });
    if (p > T_) memo_.emplace(std::move(k), best);
    return best;
  }

  Choice best_choice(int p, int s, const std::vector<Pending>& pending) {
    Choice best;
    moves(p, s, pending, [&](double w2, int delay, long selected, int next_s, const std::vector<Pending>& rest) {
      const double v = w2 + step(p + 1, next_s, rest);
      if (best.value < 0.0 || better(v, best.value)) {
        best.value = v;
        best.delay = delay;
        best.selected = selected;
        best.next_s = next_s;
        best.next_pending = rest;
      }
    });
    return best;
  }

  Protocol protocol_;
  int tau_bar_;
  int T_;
  int horizon_;
  std::vector<double> a_;
  const std::vector<int>* head_ = nullptr;
  std::unordered_map<std::vector<int>, double, KeyHash> memo_;
};

struct PartitionResult {
  double best = -1.0;
  std::vector<int> head;
  std::uint64_t count = 0;
};

PartitionResult run_partition(Protocol protocol, int tau_bar, int T, double v_bar, int first_delay) {
  Search search(protocol, tau_bar, T, v_bar);
  PartitionResult r;
  std::vector<int> head(static_cast<size_t>(T) + 1, 0);
  head[0] = first_delay;
  while (true) {
    const double v = search.run(head);
    ++r.count;
    if (r.best < 0.0 || better(v, r.best)) {
      r.best = v;
      r.head = head;
    }
    int pos = T;
    while (pos >= 1 && head[static_cast<size_t>(pos)] == tau_bar) head[static_cast<size_t>(pos--)] = 0;
    if (pos < 1) break;
    ++head[static_cast<size_t>(pos)];
  }
  return r;
}

}  // namespace

double evaluate_head(Protocol protocol, int tau_bar, int T, const std::vector<int>& head, double v_bar) {
  if (tau_bar < 0 || T < 0) throw ValidationError("tau_bar and T must be non-negative");
  if (head.size() != static_cast<size_t>(T) + 1) throw ValidationError("head assignment must have T + 1 delays");
  for (int d : head) {
    if (d < 0 || d > tau_bar) throw ValidationError("head delay outside [0, tau_bar]");
  }
  Search s(protocol, tau_bar, T, v_bar);
  return s.run(head);
}

OracleResult oracle_gain(Protocol protocol, int tau_bar, int T, const OracleOptions& options) {
  if (tau_bar < 0) throw ValidationError("tau_bar must be non-negative");
  if (T < 0) throw ValidationError("horizon T must be non-negative");
  if (!(options.v_bar > 0.0)) throw ValidationError("step amplitude v_bar must be positive");
  const double combos = std::pow(tau_bar + 1.0, T + 1.0);
  if (combos > options.budget)
    throw ValidationError("oracle budget exceeded: (tau_bar+1)^(T+1) = " + std::to_string(combos) + " assignments");

  std::vector<PartitionResult> parts(static_cast<size_t>(tau_bar) + 1);
  const unsigned workers = options.threads == 0 ? static_cast<unsigned>(parts.size())
                                                : std::min<unsigned>(options.threads, static_cast<unsigned>(parts.size()));
  if (workers <= 1) {
    for (int d = 0; d <= tau_bar; ++d) parts[static_cast<size_t>(d)] = run_partition(protocol, tau_bar, T, options.v_bar, d);
  } else {
    for (size_t start = 0; start < parts.size(); start += workers) {
      std::vector<std::thread> pool;
      for (size_t d = start; d < std::min(parts.size(), start + workers); ++d) {
        pool.emplace_back([&, d] { parts[d] = run_partition(protocol, tau_bar, T, options.v_bar, static_cast<int>(d)); });
      }
      for (auto& t : pool) t.join();
    }
  }

  OracleResult out;
  double best = -1.0;
  for (const PartitionResult& p : parts) {
    out.assignments += p.count;
    if (best < 0.0 || better(p.best, best)) {
      best = p.best;
      out.head_delays = p.head;
    }
  }
  out.norm_sq = best;
  out.alpha_T = std::sqrt(best / ((T + 1.0) * options.v_bar * options.v_bar));
  Search replay(protocol, tau_bar, T, options.v_bar);
  replay.trace(out.head_delays, out);
  return out;
}

}  // namespace netsmith
