// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance [criterion ...]   (default: all)

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "mecsim/appendix.hpp"
#include "mecsim/bandit.hpp"
#include "mecsim/engine.hpp"
#include "mecsim/experiment.hpp"
#include "support.hpp"

using namespace mecsim;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

NetworkConfig reference(double rho) { return appendix_network(1, std::vector<double>(4, rho)); }

const std::vector<std::string> kCompared{"hee-alrn", "hee-acc-zero", "mrr", "nrm-vne"};

ExperimentReport desk_experiment(double rho, LifespanFamily lifespan, const std::vector<std::string>& names,
                                 bool relative) {
  const auto scenario = generate_appendix_scenario(1, rho);
  std::vector<PolicySpec> specs;
  for (const auto& name : names)
    for (const auto& p : scenario.policies)
      if (p.name == name) specs.push_back(p);
  ExperimentOptions o;
  o.run.horizon = 20000.0;
  o.run.seed = 2024;
  o.run.lifespan = lifespan;
  o.replications = 20;
  o.relative = relative;
  return run_experiment(scenario.network, specs, o);
}

std::map<LifespanFamily, ExperimentReport> exp_cache;

const ExperimentReport& exponential_rho75() {
  auto it = exp_cache.find(LifespanFamily::kExponential);
  if (it == exp_cache.end())
    it = exp_cache.emplace(LifespanFamily::kExponential, desk_experiment(7.5, LifespanFamily::kExponential, kCompared, true))
             .first;
  return it->second;
}

std::string conservation_line(const ExperimentReport& r) {
  std::string s;
  for (const auto& name : {"hee-alrn", "hee-acc-zero", "mrr"}) {
    const auto& c = *r.at(name).conservation;
    s += fmt("%s %.4f+/-%.4f ", name, c.mean, c.half_width);
  }
  return s;
}

// 1. Conservation at rho = 7.5.
Outcome criterion1() {
  const auto& r = exponential_rho75();
  const double alrn = r.at("hee-alrn").conservation->mean;
  const double zero = r.at("hee-acc-zero").conservation->mean;
  const double mrr = r.at("mrr").conservation->mean;
  const bool pass = alrn > 0.10 && zero > 0.10 && mrr > 0.10 && alrn >= zero - 0.02;
  return {pass, conservation_line(r) + "(need each > 0.10, alrn >= zero - 0.02)"};
}

// 2. Heavy traffic ordering at rho = 10.
Outcome criterion2() {
  const auto r = desk_experiment(10.0, LifespanFamily::kExponential, kCompared, true);
  const double alrn = r.at("hee-alrn").conservation->mean;
  const double zero = r.at("hee-acc-zero").conservation->mean;
  const double mrr = r.at("mrr").conservation->mean;
  const bool pass = alrn - zero >= 0.01 && alrn - mrr >= 0.01;
  return {pass, conservation_line(r) + "(need alrn ahead of both by >= 0.01)"};
}

// 3. Lifespan robustness of average power.
Outcome criterion3() {
  const auto& base = exponential_rho75();
  bool pass = true;
  std::string detail;
  for (auto f : {LifespanFamily::kDeterministic, LifespanFamily::kParetoFiniteVar, LifespanFamily::kParetoInfiniteVar}) {
    const auto r = desk_experiment(7.5, f, {"hee-acc-zero", "hee-alrn"}, false);
    for (const auto& name : {"hee-acc-zero", "hee-alrn"}) {
      const double e = base.at(name).average_power.mean;
      const double dev = r.at(name).average_power.mean / e - 1.0;
      pass = pass && std::abs(dev) <= 0.04;
      detail += fmt("%s/%s %+.4f ", lifespan_family_name(f).c_str(), name, dev);
    }
  }
  return {pass, detail + "(need |dev| <= 0.04)"};
}

// 4. Erlang-B oracle on a single loss station.
Outcome criterion4() {
  std::string detail;
  bool pass = true;
  const int reps = 10;
  for (int c : {1, 2, 3}) {
    auto n = testing::single_tuple_system(c, 1.0, 1.0);
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
      RunOptions o;
      o.horizon = 1e5;
      o.seed = 77;
      o.replication = r;
      sum += run_replication(n, PolicySpec{"hee-acc-zero"}, o).blocking_rate();
    }
    const double got = sum / reps;
    const double want = testing::erlang_b(c, 1.0);
    const bool ok = c == 1 ? std::abs(got - 0.5) <= 0.02 : std::abs(got / want - 1.0) <= 0.02;
    pass = pass && ok;
    detail += fmt("c=%d blocking %.5f erlang %.5f; ", c, got, want);
  }
  return {pass, detail + "(c=1: 0.5 +/- 0.02; c=2,3: within 2% relative)"};
}

// Solved in long double: at high load the double-precision QR of the
// generator loses about 1e-8, which would mask the comparison.
std::vector<double> generator_solve(const std::vector<double>& alpha, double lambda, double u) {
  using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const int n = static_cast<int>(alpha.size());
  Matrix Q = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    if (x + 1 < n) Q(x, x + 1) = static_cast<long double>(lambda) * alpha[x];
    if (x > 0) Q(x, x - 1) = static_cast<long double>(x) * u;
    Q(x, x) = -Q.row(x).sum();
  }
  Matrix A(n + 1, n);
  A.topRows(n) = Q.transpose();
  A.row(n).setOnes();
  Vector b = Vector::Zero(n + 1);
  b(n) = 1.0L;
  const Vector pi = A.colPivHouseholderQr().solve(b);
  std::vector<double> out(n);
  for (int x = 0; x < n; ++x) out[x] = static_cast<double>(pi(x));
  return out;
}

// 5. Birth-death stationary law against a linear solve.
Outcome criterion5() {
  std::mt19937_64 rng(505);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int cap = std::uniform_int_distribution<int>(0, 50)(rng);
    std::vector<double> alpha(cap + 1);
    for (auto& a : alpha) a = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (trial % 4 == 0) alpha[std::uniform_int_distribution<int>(0, cap)(rng)] = 0.0;
    if (trial % 7 == 0) std::fill(alpha.begin(), alpha.end(), 1.0);
    const double lambda = std::uniform_real_distribution<double>(0.05, 20.0)(rng);
    const double u = std::uniform_real_distribution<double>(0.05, 5.0)(rng);
    const auto got = stationary_distribution(alpha, lambda, u);
    const auto want = generator_solve(alpha, lambda, u);
    for (int x = 0; x <= cap; ++x) worst = std::max(worst, std::abs(got[x] - want[x]));
  }
  return {worst <= 1e-9, fmt("200 instances, max |diff| %.3g (need <= 1e-9)", worst)};
}

// 6. Index identities on the reference scenario.
Outcome criterion6() {
  const auto n = reference(7.5);
  const auto zero = CapacityCoefficients::zero(n);
  long tuples = 0, mismatched = 0;
  double worst = 0.0;
  for (int j = 0; j < n.num_classes; ++j)
    for (const auto& e : n.eligible[j]) {
      ++tuples;
      const double psi0 = index(n, j, e.tuple, zero);
      if (psi0 != energy_efficiency_ratio(n, j, e.tuple)) ++mismatched;
      const double factor = 1.0 + n.arrival_rate[j] / e.rate;
      const bool edge = !n.is_cloud(e.tuple.group);
      for (int k = 0; k < n.num_sc_groups; ++k) {
        auto c = zero;
        c.set_gamma(k, 1.0);
        const double slope = index(n, j, e.tuple, c) - psi0;
        const double want = edge && e.tuple.group == k ? factor * n.requirement(j, k) : 0.0;
        worst = std::max(worst, std::abs(slope - want));
      }
      for (int i = 0; i < n.num_channels; ++i) {
        auto c = zero;
        c.set_eta(i, 1.0);
        const double slope = index(n, j, e.tuple, c) - psi0;
        const double want = factor * ((e.tuple.start == i) + (e.tuple.end == i));
        worst = std::max(worst, std::abs(slope - want));
      }
    }
  return {mismatched == 0 && worst <= 1e-8,
          fmt("%ld tuples, %ld ratio mismatches, max slope error %.3g (need 0, <= 1e-8)", tuples, mismatched, worst)};
}

// 7. Relaxed-problem solver contract.
Outcome criterion7() {
  std::mt19937_64 rng(707);
  int saturated = 0, violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int K = std::uniform_int_distribution<int>(1, 3)(rng);
    const int I = std::uniform_int_distribution<int>(2, 4)(rng);
    const int J = std::uniform_int_distribution<int>(1, 3)(rng);
    const auto n = testing::random_system(rng, K, I, J);
    CapacityCoefficients c(K, I);
    for (int k = 0; k < K; ++k) c.set_gamma(k, std::uniform_real_distribution<double>(0.0, 3.0)(rng));
    for (int i = 0; i < I; ++i) c.set_eta(i, std::uniform_real_distribution<double>(0.0, 3.0)(rng));
    for (auto mode : {RelaxedConstraints::kAll, RelaxedConstraints::kActionOnly}) {
      const auto d = compute_nu_star(n, c, mode);
      std::vector<double> mass(J, 0.0);
      std::vector<bool> closed(J, false);
      double prev_psi = -1.0;
      for (const auto& ch : d.chains) {
        if (ch.psi < prev_psi) ++violations;  // ranking must be ascending
        prev_psi = ch.psi;
        const bool positive = std::any_of(ch.alpha.begin(), ch.alpha.end(), [](double a) { return a > 0.0; });
        if (closed[ch.cls] && positive) ++violations;
        mass[ch.cls] += ch.action_mass(n.arrival_rate[ch.cls]);
        if (mass[ch.cls] >= 1.0 - 1e-6) closed[ch.cls] = true;
      }
      for (int j = 0; j < J; ++j) {
        const double lhs = d.action_constraint_lhs(j, n);
        if (d.saturation[j] == 0) {
          ++saturated;
          worst = std::max(worst, std::abs(lhs - 1.0));
        } else if (lhs > 1.0 + 1e-6) {
          ++violations;
        }
      }
    }
  }
  return {worst <= 1e-6 && violations == 0 && saturated > 0,
          fmt("%d saturated classes, max |lhs - 1| %.3g, %d ordering violations", saturated, worst, violations)};
}

// 8. Learning with zero steps reproduces the fixed-coefficient policy.
Outcome criterion8() {
  const auto n = reference(7.5);
  PolicySpec acc{"hee-acc"};
  acc.initial_gamma = {0.8, 1.5, 0.3};
  acc.initial_eta.resize(n.num_channels);
  for (int i = 0; i < n.num_channels; ++i) acc.initial_eta[i] = 0.1 * (i % 5);
  PolicySpec alrn = acc;
  alrn.name = "hee-alrn";
  alrn.learner.delta_gamma = alrn.learner.delta_eta = alrn.learner.delta_gamma_plus = alrn.learner.delta_eta_plus = 0.0;
  RunOptions o;
  o.horizon = 3000.0;
  o.seed = 808;
  o.record_trace = true;
  const auto a = run_replication(n, acc, o);
  const auto b = run_replication(n, alrn, o);
  long blocks = 0;
  for (const auto& e : a.trace) blocks += e.kind == TraceEvent::Kind::kArrival && !e.tuple;
  const bool pass = a.trace == b.trace && a.trace.size() >= 10000 && a.energy == b.energy;
  return {pass, fmt("%zu vs %zu events (%ld blocks), traces %s (need identical, >= 10^4 events)", a.trace.size(),
                    b.trace.size(), blocks, a.trace == b.trace ? "identical" : "differ")};
}

// Independent replay of a recorded trace: capacity after every admission, and
// every block must face a system where no eligible tuple fits.
long replay_violations(const NetworkConfig& n, const std::vector<TraceEvent>& trace) {
  std::vector<int> sc(n.num_sc_groups, 0), ch(n.num_channels, 0);
  std::map<std::pair<int, ResourceTuple>, int> live;
  long bad = 0;
  auto apply = [&](int j, const ResourceTuple& t, int sign) {
    if (!n.is_cloud(t.group)) sc[t.group] += sign * *n.occupancy[j][t.group];
    ch[t.start] += sign;
    ch[t.end] += sign;
  };
  auto fits = [&]() {
    for (int k = 0; k < n.num_sc_groups; ++k)
      if (sc[k] > n.sc_capacity[k]) return false;
    for (int i = 0; i < n.num_channels; ++i)
      if (ch[i] > n.channel_capacity[i]) return false;
    return true;
  };
  for (const auto& e : trace) {
    if (e.kind == TraceEvent::Kind::kDeparture) {
      auto it = live.find({e.cls, *e.tuple});
      if (it == live.end() || it->second == 0) {
        ++bad;
        continue;
      }
      --it->second;
      apply(e.cls, *e.tuple, -1);
    } else if (e.tuple) {
      if (n.service_rate(e.cls, *e.tuple) <= 0.0) ++bad;
      apply(e.cls, *e.tuple, +1);
      ++live[{e.cls, *e.tuple}];
      if (!fits()) ++bad;
    } else {
      for (const auto& el : n.eligible[e.cls]) {
        apply(e.cls, el.tuple, +1);
        const bool room = fits();
        apply(e.cls, el.tuple, -1);
        if (room) {
          ++bad;
          break;
        }
      }
    }
  }
  return bad;
}

// 9. Safety over random scenarios, audited by the engine and by replay.
Outcome criterion9() {
  std::mt19937_64 rng(909);
  std::uint64_t events = 0;
  long violations = 0, blocks = 0, runs = 0;
  while (events < 1000000) {
    const int K = std::uniform_int_distribution<int>(1, 3)(rng);
    const int I = std::uniform_int_distribution<int>(2, 5)(rng);
    const int J = std::uniform_int_distribution<int>(1, 4)(rng);
    auto n = testing::random_system(rng, K, I, J);
    for (auto& l : n.arrival_rate) l *= 4.0;  // push into the blocking regime
    for (const auto& name : known_policies()) {
      RunOptions o;
      o.horizon = 800.0;
      o.seed = rng();
      o.audit = true;
      o.record_trace = true;
      o.lifespan = static_cast<LifespanFamily>(runs % 4);
      try {
        const auto m = run_replication(n, PolicySpec{name}, o);
        events += m.events;
        blocks += m.lifetime_blocks;
        violations += replay_violations(n, m.trace);
        if (!m.flow_conserved()) ++violations;
      } catch (const std::exception& e) {
        std::fprintf(stderr, "criterion 9: %s: %s\n", name.c_str(), e.what());
        ++violations;
      }
      ++runs;
    }
  }
  return {violations == 0, fmt("%llu events over %ld runs, %ld blocks checked, %ld violations",
                               static_cast<unsigned long long>(events), runs, blocks, violations)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  std::set<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.insert(std::atoi(argv[a]));
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    if (!wanted.empty() && !wanted.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[c]();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s: %s [%.1fs]\n", id, r.pass ? "PASS" : "FAIL", r.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}
