#pragma once

// Exact simulation of the embedded jump chain and of the continuous-time
// chain (event driven, exponential holding times), plus tail-window
// detectors for single-vertex growth, adjacent-pair growth and a numerical
// explosion proxy.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "ibd/errors.hpp"
#include "ibd/graph.hpp"
#include "ibd/model.hpp"

namespace ibd {

enum class Chain { Dtmc, Ctmc };

using Rng = std::mt19937_64;

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Holding times are flushed to zero once the log total rate exceeds this.
inline constexpr double kHoldingUnderflowLogRate = 700.0;
inline constexpr Spin kSpinLimit = Spin{1} << 62;

struct EventRecord {
  std::uint64_t step_index = 0;
  double time = 0.0;  // cumulative, at the jump; 0 for the embedded chain
  Vertex vertex = 0;
  int direction = +1;
  Spin total_spin = 0;  // after the jump

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct Jump {
  Vertex vertex = 0;
  int direction = +1;
  double holding_time = 0.0;
  double log_total_rate = 0.0;
};

// Incremental state of one chain: spins plus cached interaction sums, so a
// step costs O(|V| + deg) instead of O(|E|).
class Stepper {
 public:
  Stepper(const Graph& g, ModelParams params, Configuration initial, std::optional<Spin> spin_cap = {})
      : graph_(&g), params_(params), state_(std::move(initial)), cap_(spin_cap) {
    require_matching(g, state_);
    if (cap_ && *cap_ < 1) throw DomainError("spin cap must be >= 1");
    const std::size_t n = g.vertex_count();
    phi_.resize(n);
    for (Vertex x = 0; x < n; ++x) {
      phi_[x] = interaction_sum(g, state_, x);
      if (cap_ && state_[x] > *cap_) throw DomainError("initial spin exceeds cap");
      if (state_[x] > 0) ++positive_;
    }
    total_ = state_.total();
    log_birth_.resize(n);
    weights_.resize(2 * n);
  }

  const Configuration& state() const noexcept { return state_; }
  Spin total_spin() const noexcept { return total_; }
  const Graph& graph() const noexcept { return *graph_; }

  // Samples the next jump without applying it. Births have weight
  // exp(U(x)) (zero at the cap), deaths weight 1 from positive spins; all
  // weights are shifted by the largest log-weight before exponentiation.
  Jump propose(Rng& rng, Chain chain) {
    const std::size_t n = graph_->vertex_count();
    double top = positive_ > 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    for (Vertex x = 0; x < n; ++x) {
      double lw = params_.alpha * static_cast<double>(state_[x]) + params_.beta * static_cast<double>(phi_[x]);
      if (cap_ && state_[x] >= *cap_) lw = -std::numeric_limits<double>::infinity();
      log_birth_[x] = lw;
      top = std::max(top, lw);
    }
    double total = 0.0;
    for (Vertex x = 0; x < n; ++x) {
      weights_[x] = std::exp(log_birth_[x] - top);
      total += weights_[x];
    }
    const double death_w = std::exp(-top);
    for (Vertex x = 0; x < n; ++x) {
      weights_[n + x] = state_[x] > 0 ? death_w : 0.0;
      total += weights_[n + x];
    }

    double target = uniform01(rng) * total;
    std::size_t pick = 2 * n;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      if (weights_[i] <= 0.0) continue;
      last_positive = i;
      if (target < weights_[i]) {
        pick = i;
        break;
      }
      target -= weights_[i];
    }
    if (pick == 2 * n) pick = last_positive;

    Jump j;
    j.vertex = pick < n ? pick : pick - n;
    j.direction = pick < n ? +1 : -1;
    j.log_total_rate = top + std::log(total);
    if (chain == Chain::Ctmc) {
      const double e = -std::log1p(-uniform01(rng));
      j.holding_time = j.log_total_rate > kHoldingUnderflowLogRate ? 0.0 : e * std::exp(-j.log_total_rate);
    }
    return j;
  }

  void apply(const Jump& j) {
    const Spin before = state_[j.vertex];
    state_.step(j.vertex, j.direction);
    for (Vertex y : graph_->neighbours(j.vertex)) phi_[y] += j.direction;
    total_ += j.direction;
    if (before == 0) ++positive_;
    if (state_[j.vertex] == 0) --positive_;
  }

 private:
  const Graph* graph_;
  ModelParams params_;
  Configuration state_;
  std::optional<Spin> cap_;
  std::vector<Spin> phi_;
  std::vector<double> log_birth_;
  std::vector<double> weights_;
  Spin total_ = 0;
  std::size_t positive_ = 0;
};

// One step of the embedded chain from zeta; zeta is advanced in place.
inline EventRecord dtmc_step(const Graph& g, const ModelParams& p, Configuration& zeta, Rng& rng) {
  Stepper s(g, p, zeta);
  const Jump j = s.propose(rng, Chain::Dtmc);
  s.apply(j);
  zeta = s.state();
  return {0, 0.0, j.vertex, j.direction, zeta.total()};
}

// One step of the continuous-time chain; time carries the holding time.
inline EventRecord ctmc_step(const Graph& g, const ModelParams& p, Configuration& xi, Rng& rng) {
  Stepper s(g, p, xi);
  const Jump j = s.propose(rng, Chain::Ctmc);
  s.apply(j);
  xi = s.state();
  return {0, j.holding_time, j.vertex, j.direction, xi.total()};
}

struct ExplosionProxyParams {
  std::size_t window = 100;          // D
  double tail_inverse_rate = 1e-6;   // epsilon_tail
  Spin min_total_spin = 200;         // M
};

// Heuristic explosion evidence: the last D events were all births, their
// mean holding times 1/R sum below epsilon_tail, and total spin >= M.
class ExplosionProxy {
 public:
  explicit ExplosionProxy(ExplosionProxyParams params = {})
      : params_(params), inverse_rates_(params.window, 0.0), deaths_(params.window, 0) {
    if (params_.window == 0) throw DomainError("explosion proxy window must be >= 1");
  }

  void observe(int direction, double log_total_rate, Spin total_spin) {
    const std::size_t slot = seen_ % params_.window;
    if (seen_ >= params_.window) {
      running_ -= inverse_rates_[slot];
      death_count_ -= deaths_[slot];
    }
    inverse_rates_[slot] = std::exp(-log_total_rate);
    deaths_[slot] = direction < 0 ? 1 : 0;
    running_ += inverse_rates_[slot];
    death_count_ += deaths_[slot];
    ++seen_;
    total_spin_ = total_spin;
  }

  bool triggered() const {
    if (seen_ < params_.window || death_count_ != 0 || total_spin_ < params_.min_total_spin) return false;
    // running sum only screens; the exact sum decides
    if (running_ > 16.0 * params_.tail_inverse_rate + 1e-300) return false;
    double exact = 0.0;
    for (double v : inverse_rates_) exact += v;
    return exact < params_.tail_inverse_rate;
  }

  const ExplosionProxyParams& params() const noexcept { return params_; }

 private:
  ExplosionProxyParams params_;
  std::vector<double> inverse_rates_;
  std::vector<int> deaths_;
  double running_ = 0.0;
  long death_count_ = 0;
  std::uint64_t seen_ = 0;
  Spin total_spin_ = 0;
};

inline bool explosion_proxy(const ExplosionProxy& state) { return state.triggered(); }

struct StopRule {
  std::optional<std::uint64_t> max_steps;
  std::optional<double> max_time;
  std::optional<Spin> max_total_spin;
  std::optional<ExplosionProxyParams> explosion_proxy;
};

struct RunOptions {
  bool record_trajectory = true;
  std::uint64_t thin = 1;
  // Detector window; defaults to the second half of max_steps.
  std::optional<std::uint64_t> tail_window;
  std::size_t memory_budget_events = 20'000'000;
  std::optional<Spin> spin_cap;
};

enum class StopReason { MaxSteps, MaxTime, MaxTotalSpin, ExplosionProxy, SpinOverflow };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::MaxTime: return "max_time";
    case StopReason::MaxTotalSpin: return "max_total_spin";
    case StopReason::ExplosionProxy: return "explosion_proxy";
    case StopReason::SpinOverflow: return "spin_overflow";
  }
  return "?";
}

struct EventB {
  std::uint64_t tau = 0;
  Vertex vertex = 0;
  friend bool operator==(const EventB&, const EventB&) = default;
};

struct PairOutcome {
  enum class Status { None, Match, Anomaly };
  Status status = Status::None;
  Vertex x1 = 0, x2 = 0;
  double rate1 = 0.0, rate2 = 0.0;
  friend bool operator==(const PairOutcome&, const PairOutcome&) = default;
};

inline const char* to_string(PairOutcome::Status s) {
  switch (s) {
    case PairOutcome::Status::None: return "none";
    case PairOutcome::Status::Match: return "match";
    case PairOutcome::Status::Anomaly: return "anomaly";
  }
  return "?";
}

struct RunSummary {
  Configuration initial;
  Configuration final_configuration;
  std::uint64_t step_count = 0;
  double simulated_time = 0.0;
  std::vector<std::uint64_t> increments;
  std::vector<std::uint64_t> decrements;
  std::uint64_t death_count_after_burnin = 0;
  std::uint64_t detector_window = 0;
  bool proxy_triggered = false;
  std::optional<std::uint64_t> proxy_step;
  std::optional<double> proxy_time;
  StopReason stop_reason = StopReason::MaxSteps;
  bool summary_only = false;
  std::optional<EventB> event_b;
  PairOutcome pair;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct RunResult {
  std::vector<EventRecord> trajectory;  // thinned events merged with the full tail window
  RunSummary summary;
};

// Earliest tau from which every recorded event is a birth at one vertex,
// provided the final `window` events all are. Extends backwards only across
// consecutive step indices.
inline std::optional<EventB> detect_event_b(std::span<const EventRecord> trajectory, std::size_t window) {
  if (window == 0 || window > trajectory.size()) {
    throw DomainError("detector window must be in [1, trajectory length]");
  }
  const std::size_t start = trajectory.size() - window;
  const Vertex x = trajectory[start].vertex;
  for (std::size_t i = start; i < trajectory.size(); ++i) {
    if (trajectory[i].direction != +1 || trajectory[i].vertex != x) return std::nullopt;
  }
  std::size_t first = start;
  while (first > 0) {
    const EventRecord& prev = trajectory[first - 1];
    if (prev.direction != +1 || prev.vertex != x || prev.step_index + 1 != trajectory[first].step_index) break;
    --first;
  }
  return EventB{trajectory[first].step_index, x};
}

// Looks for exactly two vertices sharing every event of the final window,
// all of them births. Two non-adjacent vertices are an anomaly.
inline PairOutcome detect_pair_event(const Graph& g, std::span<const EventRecord> trajectory, std::size_t window) {
  if (window == 0 || window > trajectory.size()) {
    throw DomainError("detector window must be in [1, trajectory length]");
  }
  std::array<Vertex, 2> seen{};
  std::array<std::size_t, 2> counts{};
  std::size_t distinct = 0;
  for (std::size_t i = trajectory.size() - window; i < trajectory.size(); ++i) {
    const EventRecord& e = trajectory[i];
    if (e.direction != +1) return {};
    std::size_t k = 0;
    while (k < distinct && seen[k] != e.vertex) ++k;
    if (k == distinct) {
      if (distinct == 2) return {};
      seen[distinct++] = e.vertex;
    }
    ++counts[k];
  }
  if (distinct != 2) return {};
  if (seen[0] > seen[1]) {
    std::swap(seen[0], seen[1]);
    std::swap(counts[0], counts[1]);
  }
  PairOutcome out;
  out.status = g.adjacent(seen[0], seen[1]) ? PairOutcome::Status::Match : PairOutcome::Status::Anomaly;
  out.x1 = seen[0];
  out.x2 = seen[1];
  out.rate1 = static_cast<double>(counts[0]) / static_cast<double>(window);
  out.rate2 = static_cast<double>(counts[1]) / static_cast<double>(window);
  return out;
}

struct NoObserver {
  void operator()(const Configuration&, const EventRecord&, double) const noexcept {}
};

// Runs one chain until the stop rule fires. The observer sees the state
// before each jump, the jump record, and the holding time spent in that
// state. Deterministic in (graph, params, initial, chain, stop, seed, options).
template <class Observer = NoObserver>
RunResult run(const Graph& g, const ModelParams& params, const Configuration& initial, Chain chain,
              const StopRule& stop, std::uint64_t seed, const RunOptions& options = {},
              Observer&& observer = Observer{}) {
  if (!stop.max_steps && !stop.max_time && !stop.max_total_spin) {
    throw DomainError("stop rule needs max_steps, max_time or max_total_spin");
  }
  if (stop.max_time && chain == Chain::Dtmc && !stop.max_steps && !stop.max_total_spin) {
    throw DomainError("the embedded chain has no clock; give max_steps or max_total_spin");
  }
  if (options.thin == 0) throw DomainError("thin must be >= 1");

  Stepper stepper(g, params, initial, options.spin_cap);
  Rng rng(seed);

  const std::uint64_t window =
      options.tail_window.value_or(stop.max_steps ? (*stop.max_steps - *stop.max_steps / 2) : 0);

  RunResult result;
  RunSummary& s = result.summary;
  s.initial = initial;
  s.increments.assign(g.vertex_count(), 0);
  s.decrements.assign(g.vertex_count(), 0);
  s.detector_window = window;

  std::size_t tail_capacity = static_cast<std::size_t>(window);
  if (tail_capacity > options.memory_budget_events) {
    tail_capacity = 0;
    s.summary_only = true;
  }
  std::deque<EventRecord> tail;
  std::vector<EventRecord> thinned;
  bool recording = options.record_trajectory && !s.summary_only;

  std::optional<ExplosionProxy> proxy;
  if (stop.explosion_proxy) proxy.emplace(*stop.explosion_proxy);

  double time = 0.0;
  std::uint64_t step = 0;
  s.stop_reason = StopReason::MaxSteps;
  for (;;) {
    if (stop.max_steps && step >= *stop.max_steps) { s.stop_reason = StopReason::MaxSteps; break; }
    if (stop.max_time && time >= *stop.max_time) { s.stop_reason = StopReason::MaxTime; break; }
    if (stop.max_total_spin && stepper.total_spin() >= *stop.max_total_spin) {
      s.stop_reason = StopReason::MaxTotalSpin;
      break;
    }
    if (stepper.total_spin() >= kSpinLimit) { s.stop_reason = StopReason::SpinOverflow; break; }

    const Jump j = stepper.propose(rng, chain);
    time += j.holding_time;
    const EventRecord ev{step, chain == Chain::Ctmc ? time : 0.0, j.vertex, j.direction,
                         stepper.total_spin() + j.direction};
    observer(stepper.state(), ev, j.holding_time);
    stepper.apply(j);
    ++step;

    if (j.direction > 0) ++s.increments[j.vertex];
    else ++s.decrements[j.vertex];

    if (tail_capacity > 0) {
      if (tail.size() == tail_capacity) tail.pop_front();
      tail.push_back(ev);
    }
    if (recording && ev.step_index % options.thin == 0) {
      if (thinned.size() + tail_capacity >= options.memory_budget_events) {
        recording = false;
        thinned.clear();
        thinned.shrink_to_fit();
        s.summary_only = true;
      } else {
        thinned.push_back(ev);
      }
    }

    if (proxy) {
      proxy->observe(j.direction, j.log_total_rate, stepper.total_spin());
      if (proxy->triggered()) {
        s.proxy_triggered = true;
        s.proxy_step = step;
        s.proxy_time = time;
        s.stop_reason = StopReason::ExplosionProxy;
        break;
      }
    }
  }

  s.final_configuration = stepper.state();
  s.step_count = step;
  s.simulated_time = chain == Chain::Ctmc ? time : 0.0;
  for (const EventRecord& e : tail) {
    if (e.direction < 0) ++s.death_count_after_burnin;
  }

  std::vector<EventRecord> tail_vec(tail.begin(), tail.end());
  if (window > 0 && tail_vec.size() == window) {
    s.event_b = detect_event_b(tail_vec, tail_vec.size());
    s.pair = detect_pair_event(g, tail_vec, tail_vec.size());
  }

  if (options.record_trajectory && !s.summary_only) {
    std::vector<EventRecord> merged;
    merged.reserve(thinned.size() + tail_vec.size());
    std::merge(thinned.begin(), thinned.end(), tail_vec.begin(), tail_vec.end(), std::back_inserter(merged),
               [](const EventRecord& a, const EventRecord& b) { return a.step_index < b.step_index; });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const EventRecord& a, const EventRecord& b) { return a.step_index == b.step_index; }),
                 merged.end());
    result.trajectory = std::move(merged);
  }
  return result;
}

// Independent per-replica seed derived from (base_seed, replica index).
inline std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Runs fn(replica_index, seed) for every replica, spread over worker
// threads. Results are returned in replica order regardless of scheduling.
template <class Fn>
auto replicate(std::size_t n_replicas, std::uint64_t base_seed, Fn&& fn, unsigned threads = 0)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t, std::uint64_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t, std::uint64_t>;
  if (n_replicas == 0) throw DomainError("need at least one replica");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_replicas));

  std::vector<std::optional<Result>> slots(n_replicas);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_replicas; i = next++) {
      if (failed) return;
      try {
        slots[i].emplace(fn(i, replica_seed(base_seed, i)));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Result> out;
  out.reserve(n_replicas);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

// CSV with columns step,time,vertex,direction,total_spin.
inline void write_trajectory_csv(std::ostream& out, std::span<const EventRecord> trajectory) {
  out << "step,time,vertex,direction,total_spin\n";
  char buf[64];
  for (const EventRecord& e : trajectory) {
    std::snprintf(buf, sizeof buf, "%.17g", e.time);
    out << e.step_index << ',' << buf << ',' << e.vertex << ',' << e.direction << ',' << e.total_spin << '\n';
  }
}

}  // namespace ibd
