#include "mecsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "mecsim/rng.hpp"

namespace mecsim {

double MetricsAccumulator::throughput_per_watt() const {
  const double p = operational_power();
  return p > 0.0 ? throughput() / p : 0.0;
}

double MetricsAccumulator::average_delay() const { return completions > 0 ? delay_sum / completions : 0.0; }

double MetricsAccumulator::blocking_rate() const {
  return arrivals > 0 ? static_cast<double>(blocks) / static_cast<double>(arrivals) : 0.0;
}

bool MetricsAccumulator::flow_conserved() const {
  return lifetime_arrivals == lifetime_admissions + lifetime_blocks &&
         lifetime_admissions == lifetime_completions + in_flight;
}

namespace {

struct Event {
  double time = 0.0;
  int kind = 0;  // 0 departure, 1 arrival: departures go first on ties
  std::uint64_t seq = 0;
  int cls = 0;
  ResourceTuple tuple;
  double duration = 0.0;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

constexpr std::uint64_t kPowerResyncPeriod = 4096;

class Replication {
 public:
  Replication(const NetworkConfig& config, Policy& policy, const RunOptions& options)
      : config_(config),
        policy_(policy),
        opt_(options),
        arrivals_(options.arrivals ? *options.arrivals : ArrivalModel::stationary(config.arrival_rate)),
        state_(config) {
    if (!(opt_.horizon > 0.0) || !std::isfinite(opt_.horizon))
      throw std::invalid_argument("run_replication: horizon must be positive and finite");
    warm_up_ = opt_.effective_warm_up();
    if (!(warm_up_ >= 0.0) || !(warm_up_ < opt_.horizon))
      throw std::invalid_argument("run_replication: warm-up must lie in [0, horizon)");
    if (static_cast<int>(arrivals_.base_rate.size()) != config.num_classes)
      throw std::invalid_argument("run_replication: arrival model must cover every class");
    if (opt_.timeline_bin < 0.0) throw std::invalid_argument("run_replication: negative timeline bin width");

    const int J = config.num_classes;
    for (int j = 0; j < J; ++j) {
      arrival_rng_.push_back(make_stream(opt_.seed, opt_.replication, j, StreamPurpose::kArrivals));
      lifespan_rng_.push_back(make_stream(opt_.seed, opt_.replication, j, StreamPurpose::kLifespans));
      thinning_rng_.push_back(make_stream(opt_.seed, opt_.replication, j, StreamPurpose::kThinning));
    }

    m_.seed = opt_.seed;
    m_.replication = opt_.replication;
    m_.warm_up = warm_up_;
    m_.horizon = opt_.horizon;
    m_.arrivals_per_class.assign(J, 0);
    m_.blocks_per_class.assign(J, 0);
    static_power_ = config.total_static_power();

    if (opt_.timeline_bin > 0.0) {
      for (double s = warm_up_; s < opt_.horizon; s += opt_.timeline_bin) {
        TimelineBin b;
        b.start = s;
        b.end = std::min(opt_.horizon, s + opt_.timeline_bin);
        m_.timeline.push_back(b);
      }
    }
  }

  MetricsAccumulator run() {
    for (int j = 0; j < config_.num_classes; ++j) schedule_arrival(j, 0.0);
    while (!queue_.empty() && queue_.top().time <= opt_.horizon) {
      const Event ev = queue_.top();
      queue_.pop();
      integrate(state_.clock, ev.time);
      state_.clock = ev.time;
      if (ev.kind == 0) {
        depart(ev);
      } else {
        arrive(ev);
      }
      ++m_.events;
      check_invariants();
    }
    integrate(state_.clock, opt_.horizon);
    state_.clock = opt_.horizon;
    m_.in_flight = state_.total_tasks();
    if (const LearnerState* l = policy_.learner()) {
      m_.learner_increments = l->increments;
      m_.learner_decrements = l->decrements;
    }
    if (!m_.flow_conserved()) throw std::logic_error("run_replication: flow conservation violated");
    return std::move(m_);
  }

 private:
  void push(Event ev) {
    ev.seq = seq_++;
    queue_.push(ev);
  }

  // Next accepted arrival of class j after `now`, by thinning against the
  // class's maximum rate. Stationary models accept every candidate.
  void schedule_arrival(int j, double now) {
    const double bound = arrivals_.max_rate(j);
    if (!(bound > 0.0)) return;
    double t = now;
    for (;;) {
      t += -std::log1p(-uniform01(arrival_rng_[j])) / bound;
      if (t > opt_.horizon) return;
      const double accept = arrivals_.rate(j, t) / bound;
      if (uniform01(thinning_rng_[j]) < accept) break;
    }
    Event ev;
    ev.time = t;
    ev.kind = 1;
    ev.cls = j;
    push(ev);
  }

  bool in_window(double t) const { return t >= warm_up_; }

  TimelineBin* bin_at(double t) {
    if (m_.timeline.empty() || t < warm_up_) return nullptr;
    auto n = static_cast<std::size_t>((t - warm_up_) / opt_.timeline_bin);
    return &m_.timeline[std::min(n, m_.timeline.size() - 1)];
  }

  void integrate(double t0, double t1) {
    const double a = std::max(t0, warm_up_);
    const double b = std::min(t1, opt_.horizon);
    if (!(b > a)) return;
    const double dt = b - a;
    m_.static_energy += static_power_ * dt;
    m_.edge_energy += edge_power_ * dt;
    m_.cloud_energy += cloud_power_ * dt;
    m_.energy += (static_power_ + edge_power_ + cloud_power_) * dt;
    if (m_.timeline.empty()) return;
    const double op = edge_power_ + cloud_power_;
    for (auto* bin = bin_at(a); bin != nullptr;) {
      const double lo = std::max(a, bin->start);
      const double hi = std::min(b, bin->end);
      if (hi > lo) {
        bin->energy += (static_power_ + op) * (hi - lo);
        bin->operational_energy += op * (hi - lo);
      }
      if (bin->end >= b || bin == &m_.timeline.back()) break;
      ++bin;
    }
  }

  void add_power(int cls, const ResourceTuple& t, double sign) {
    const double p = sign * task_power(config_, cls, t);
    if (config_.is_cloud(t.group)) {
      cloud_power_ += p;
    } else {
      edge_power_ += p;
    }
  }

  void arrive(const Event& ev) {
    const int j = ev.cls;
    const double u_life = uniform01(lifespan_rng_[j]);  // drawn for every arrival
    ++m_.lifetime_arrivals;
    const bool counted = in_window(ev.time);
    if (counted) {
      ++m_.arrivals;
      ++m_.arrivals_per_class[j];
      if (auto* b = bin_at(ev.time)) ++b->arrivals;
    }

    const PolicyDecision d = policy_.decide(j, state_);
    if (d.admitted()) {
      const ResourceTuple& t = *d.tuple;
      const double rate = config_.service_rate(j, t);
      if (!(rate > 0.0))
        throw PolicyViolation(std::string(policy_.name()) + " admitted class " + std::to_string(j + 1) +
                              " on ineligible tuple " + to_string(t));
      if (!tuple_available(state_, j, t))
        throw PolicyViolation(std::string(policy_.name()) + " admitted class " + std::to_string(j + 1) +
                              " on unavailable tuple " + to_string(t));
      state_.admit(j, t);
      add_power(j, t, +1.0);
      ++m_.lifetime_admissions;
      if (counted) {
        ++m_.admissions;
        ++m_.admitted_per_tuple[{j, t}];
      }
      Event dep;
      dep.kind = 0;
      dep.cls = j;
      dep.tuple = t;
      dep.duration = lifespan_quantile(LifespanModel{opt_.lifespan, 1.0 / rate}, u_life);
      dep.time = ev.time + dep.duration;
      push(dep);
      if (opt_.record_trace) m_.trace.push_back({ev.time, TraceEvent::Kind::kArrival, j, t});
    } else {
      if (!available_tuples(state_, j).empty())
        throw PolicyViolation(std::string(policy_.name()) + " blocked class " + std::to_string(j + 1) +
                              " while a tuple was available");
      ++m_.lifetime_blocks;
      if (counted) {
        ++m_.blocks;
        ++m_.blocks_per_class[j];
        if (auto* b = bin_at(ev.time)) ++b->blocks;
      }
      if (opt_.record_trace) m_.trace.push_back({ev.time, TraceEvent::Kind::kArrival, j, std::nullopt});
    }
    schedule_arrival(j, ev.time);
  }

  void depart(const Event& ev) {
    state_.release(ev.cls, ev.tuple);
    add_power(ev.cls, ev.tuple, -1.0);
    ++m_.lifetime_completions;
    if (in_window(ev.time)) {
      ++m_.completions;
      m_.delay_sum += ev.duration;
      if (auto* b = bin_at(ev.time)) {
        ++b->completions;
        b->delay_sum += ev.duration;
      }
    }
    if (opt_.record_trace) m_.trace.push_back({ev.time, TraceEvent::Kind::kDeparture, ev.cls, ev.tuple});
  }

  void check_invariants() {
    if (opt_.audit) {
      if (!state_.within_capacity()) throw std::logic_error("capacity constraint violated at t=" +
                                                            std::to_string(state_.clock));
      if (!state_.loads_consistent()) throw std::logic_error("incremental loads diverged at t=" +
                                                             std::to_string(state_.clock));
    }
    if (opt_.audit || m_.events % kPowerResyncPeriod == 0) {
      const double exact = instantaneous_power(state_) - static_power_;
      const double tracked = edge_power_ + cloud_power_;
      if (std::abs(exact - tracked) > 1e-6 * std::max(1.0, std::abs(exact)))
        throw std::logic_error("incremental power diverged at t=" + std::to_string(state_.clock));
      // Re-anchor to the exact split to keep rounding drift bounded.
      double cloud = 0.0;
      for (int j = 0; j < config_.num_classes; ++j)
        for (const auto& e : config_.eligible[j])
          if (config_.is_cloud(e.tuple.group)) cloud += state_.occupancy(j, e.tuple) * task_power(config_, j, e.tuple);
      cloud_power_ = cloud;
      edge_power_ = exact - cloud;
    }
  }

  const NetworkConfig& config_;
  Policy& policy_;
  RunOptions opt_;
  ArrivalModel arrivals_;
  SystemState state_;
  double warm_up_ = 0.0;
  double static_power_ = 0.0;
  double edge_power_ = 0.0;
  double cloud_power_ = 0.0;
  std::vector<Rng> arrival_rng_;
  std::vector<Rng> lifespan_rng_;
  std::vector<Rng> thinning_rng_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  MetricsAccumulator m_;
};

}  // namespace

MetricsAccumulator run_replication(const NetworkConfig& config, Policy& policy, const RunOptions& options) {
  return Replication(config, policy, options).run();
}

MetricsAccumulator run_replication(const NetworkConfig& config, const PolicySpec& spec, const RunOptions& options) {
  auto policy = make_policy(spec, config);
  return run_replication(config, *policy, options);
}

}  // namespace mecsim
