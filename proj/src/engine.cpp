#include "comex/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace comex {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::ucb_share: return "ucb_share";
    case Variant::mp_ucb: return "mp_ucb";
    case Variant::lf_ucb: return "lf_ucb";
    case Variant::est_ucb: return "est_ucb";
    case Variant::mp_thompson: return "mp_thompson";
  }
  return "?";
}

std::string to_string(Gate g) { return g == Gate::comex ? "comex" : "full"; }
std::string to_string(EstCost c) { return c == EstCost::per_bundle ? "per_bundle" : "per_arm"; }

std::optional<Variant> parse_variant(const std::string& s) {
  for (Variant v : {Variant::ucb_share, Variant::mp_ucb, Variant::lf_ucb, Variant::est_ucb, Variant::mp_thompson})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::optional<Gate> parse_gate(const std::string& s) {
  if (s == "comex") return Gate::comex;
  if (s == "full") return Gate::full;
  return std::nullopt;
}

std::optional<EstCost> parse_est_cost(const std::string& s) {
  if (s == "per_bundle") return EstCost::per_bundle;
  if (s == "per_arm") return EstCost::per_arm;
  return std::nullopt;
}

std::string file_tag(Variant v) {
  switch (v) {
    case Variant::ucb_share: return "ucb";
    case Variant::mp_ucb: return "mpucb";
    case Variant::lf_ucb: return "lfucb";
    case Variant::est_ucb: return "estucb";
    case Variant::mp_thompson: return "mpthompson";
  }
  return "?";
}

bool uses_relay(Variant v) {
  return v == Variant::mp_ucb || v == Variant::lf_ucb || v == Variant::mp_thompson;
}

int effective_gamma(const SimConfig& cfg) { return uses_relay(cfg.variant) ? cfg.gamma : 1; }

std::vector<std::string> validation_warnings(const SimConfig& cfg) {
  std::vector<std::string> out;
  if (cfg.xi <= 1.0) out.push_back("xi <= 1 gives no regret guarantee");
  else if (cfg.xi < 1.1) out.push_back("xi < 1.1: theorem bounds do not apply (xi >= 1.1 required)");
  return out;
}

SimInstance prepare(const SimConfig& cfg) {
  if (cfg.horizon < 1) throw ConfigError("horizon", "must be >= 1");
  if (cfg.runs < 1) throw ConfigError("runs", "must be >= 1");
  if (cfg.gamma < 1) throw ConfigError("gamma", "must be >= 1");
  if (!(cfg.xi > 0.0)) throw ConfigError("xi", "must be > 0");
  if (!(cfg.prior.variance > 0.0)) throw ConfigError("thompson_prior_variance", "must be > 0");

  std::optional<BanditEnv> env;
  try {
    env.emplace(make_env(cfg.arms, cfg.sigma));
  } catch (const EnvError& e) {
    throw ConfigError("arms", e.what());
  }

  Topology topology;
  try {
    Rng graph_rng = make_stream(cfg.seed, 0, Stream::graph);
    topology = generate_topology(cfg.graph, graph_rng, cfg.require_connected);
  } catch (const GraphError& e) {
    throw ConfigError("graph", e.what());
  }

  const int gamma = effective_gamma(cfg);
  GraphAnalysis analysis = analyze(topology, gamma);
  if (uses_relay(cfg.variant) && gamma > std::max(1, analysis.diameter) && !cfg.allow_gamma_beyond_diameter)
    throw ConfigError("gamma", "gamma " + std::to_string(gamma) + " exceeds graph diameter " +
                                   std::to_string(analysis.diameter));

  std::vector<LeaderLink> leaders;
  if (cfg.variant == Variant::lf_ucb) {
    try {
      leaders = leader_assignment(analysis);
    } catch (const GraphError& e) {
      throw ConfigError("graph", e.what());
    }
  }
  ConsensusWeights weights;
  if (cfg.variant == Variant::est_ucb) weights = metropolis_weights(topology);

  UcbParams ucb{cfg.xi, env->sigma()};
  return SimInstance{cfg, std::move(*env), std::move(topology), std::move(analysis), std::move(leaders),
                     std::move(weights), ucb};
}

RunMetrics run_simulation(const SimConfig& cfg, int run_index) { return run_simulation(prepare(cfg), run_index); }

RunMetrics run_simulation(const SimInstance& inst, int run_index, RunObserver* obs) {
  const SimConfig& cfg = inst.config;
  const Topology& g = inst.topology;
  const BanditEnv& env = inst.env;
  const int n = g.size();
  const int arms = env.arm_count();
  const int horizon = cfg.horizon;
  const int gamma = effective_gamma(cfg);
  const auto& gaps = env.gaps();
  const Variant variant = cfg.variant;
  const bool full = cfg.gate == Gate::full;
  const bool thompson = variant == Variant::mp_thompson;
  const bool estimate_sharing = variant == Variant::est_ucb;
  const bool leader_follower = variant == Variant::lf_ucb;

  std::vector<Rng> reward_rng, boot_rng, ts_rng;
  for (int i = 0; i < n; ++i) {
    reward_rng.push_back(make_stream(cfg.seed, run_index, Stream::rewards, i));
    boot_rng.push_back(make_stream(cfg.seed, run_index, Stream::bootstrap, i));
    if (thompson) ts_rng.push_back(make_stream(cfg.seed, run_index, Stream::thompson, i));
  }

  std::vector<AgentEstimates> est(n, AgentEstimates(arms));
  std::vector<ThompsonState> posterior;
  if (thompson) posterior.assign(n, ThompsonState(arms, cfg.prior, env.sigma() * env.sigma()));
  std::vector<ConsensusEstimates> consensus;
  if (estimate_sharing) consensus.assign(n, ConsensusEstimates(arms));

  std::vector<MessageBuffer<RewardMessage>> reward_buf(n, MessageBuffer<RewardMessage>(n, gamma));
  std::vector<MessageBuffer<LeaderActionMessage>> control_buf;
  std::vector<LeaderLog> leader_log;
  std::vector<char> is_leader(n, 0);
  if (leader_follower) {
    control_buf.assign(n, MessageBuffer<LeaderActionMessage>(n, gamma));
    leader_log.assign(n, LeaderLog(static_cast<std::size_t>(horizon) + 1));
    for (int i = 0; i < n; ++i) is_leader[i] = inst.leaders[i].leader == i;
  }

  RunMetrics m;
  m.regret.resize(horizon);
  m.comm_cost.resize(horizon);
  m.control_msgs.resize(horizon);
  m.comm_cost_per_arm.resize(horizon);

  std::vector<int> pulled(n);
  std::vector<double> reward(n);
  std::vector<std::optional<RewardMessage>> own(n);
  std::vector<std::optional<LeaderActionMessage>> own_control(n);
  std::vector<std::optional<EstimateSnapshot>> snapshots(n);
  std::vector<std::vector<int>> averaged_arms(n);
  std::vector<std::vector<RewardMessage>> bundles(n);
  std::vector<std::vector<LeaderActionMessage>> control_bundles(n);
  std::vector<int> all_arms(arms);
  for (int k = 0; k < arms; ++k) all_arms[k] = k;

  double regret = 0.0;
  std::int64_t cost = 0, control = 0, cost_per_arm = 0;

  for (int t = 1; t <= horizon; ++t) {
    // Sampling and message creation, from estimates as of the end of t-1.
    for (int i = 0; i < n; ++i) {
      own[i].reset();
      own_control[i].reset();
      snapshots[i].reset();
      int arm = 0;
      bool initiate = false;
      switch (variant) {
        case Variant::ucb_share:
        case Variant::mp_ucb:
          arm = t == 1 ? uniform_index(boot_rng[i], arms) : select_arm_ucb(est[i], t - 1, inst.ucb);
          initiate = t == 1 || full || comex_gate(est[i], arm);
          break;
        case Variant::mp_thompson:
          arm = t == 1 ? uniform_index(boot_rng[i], arms) : thompson_select(posterior[i], ts_rng[i]);
          initiate = t == 1 || full || comex_gate(est[i], arm);
          break;
        case Variant::lf_ucb:
          if (is_leader[i]) {
            arm = t == 1 ? uniform_index(boot_rng[i], arms) : select_arm_ucb(est[i], t - 1, inst.ucb);
            own_control[i] = LeaderActionMessage{i, t, arm, t == 1 || comex_gate(est[i], arm)};
          } else {
            FollowerDecision d = follower_action(inst.leaders[i], leader_log[i], t, arms, boot_rng[i]);
            arm = d.arm;
            initiate = full || d.initiate;
          }
          break;
        case Variant::est_ucb: {
          const std::vector<double> means = consensus[i].means();
          arm = t == 1 ? uniform_index(boot_rng[i], arms)
                       : select_arm_ucb(means, consensus[i].count_hat, t - 1, inst.ucb);
          averaged_arms[i] = full ? all_arms : instantaneously_suboptimal_arms(means);
          initiate = t == 1 || full || arm != argmax_lowest(means);
          if (initiate) snapshots[i] = make_snapshot(i, t, consensus[i], averaged_arms[i]);
          break;
        }
      }
      const double x = env.sample(arm, reward_rng[i]);
      pulled[i] = arm;
      reward[i] = x;
      regret += gaps[arm];
      if (initiate && !estimate_sharing) own[i] = RewardMessage{i, t, arm, x};
      if (obs) {
        obs->on_pull(t, i, arm, x);
        if (initiate) obs->on_initiate(t, i);
      }
    }

    // Bundles. A send event costs its message count; isolated agents send nothing.
    for (int i = 0; i < n; ++i) {
      const bool connected = g.degree(i) > 0;
      if (!estimate_sharing) {
        bundles[i] = reward_buf[i].outgoing_bundle(own[i], t);
        if (connected && !bundles[i].empty()) {
          cost += static_cast<std::int64_t>(bundles[i].size());
          if (obs) obs->on_send(t, i, bundles[i].size(), false);
        }
      } else if (snapshots[i] && connected) {
        const auto flagged = static_cast<std::int64_t>(snapshots[i]->flagged_arms.size());
        cost += cfg.est_cost == EstCost::per_bundle ? 1 : flagged;
        cost_per_arm += flagged;
        if (obs) obs->on_send(t, i, 1, false);
      }
      if (leader_follower) {
        control_bundles[i] = control_buf[i].outgoing_bundle(own_control[i], t);
        if (connected && !control_bundles[i].empty()) {
          control += static_cast<std::int64_t>(control_bundles[i].size());
          if (obs) obs->on_send(t, i, control_bundles[i].size(), true);
        }
      }
    }

    // Synchronous delivery and incorporation.
    if (!estimate_sharing) {
      deliver(g, bundles, reward_buf, t, [&](int j, const RewardMessage& msg) {
        update_estimates(est[j], msg.arm, msg.reward, false);
        if (thompson) thompson_update(posterior[j], msg.arm, msg.reward);
        if (obs) obs->on_incorporate({t, msg.origin, msg.origin_time, msg.arm, t - msg.origin_time + 1, j});
      });
    } else {
      consensus = consensus_step(g, consensus, snapshots, averaged_arms, inst.weights);
    }
    if (leader_follower) {
      deliver(g, control_bundles, control_buf, t, [&](int j, const LeaderActionMessage& msg) {
        if (!is_leader[j] && inst.leaders[j].leader == msg.origin) leader_log[j][msg.origin_time] = msg;
      });
    }

    // Own pulls.
    for (int i = 0; i < n; ++i) {
      update_estimates(est[i], pulled[i], reward[i], true);
      if (thompson) thompson_update(posterior[i], pulled[i], reward[i]);
      if (estimate_sharing) {
        consensus[i].count_hat[pulled[i]] += 1.0;
        consensus[i].sum_hat[pulled[i]] += reward[i];
      }
    }

    m.regret[t - 1] = regret;
    m.comm_cost[t - 1] = cost;
    m.control_msgs[t - 1] = control;
    m.comm_cost_per_arm[t - 1] = cost_per_arm;
    if (obs) obs->on_step_end(t, est);
  }

  m.final_pulls.resize(n);
  for (int i = 0; i < n; ++i) m.final_pulls[i] = est[i].pull_count;
  return m;
}

int default_thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("COMEX_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) return cap;
  }
  return hw;
}

Trajectory pointwise_stats(const std::vector<std::vector<double>>& series) {
  Trajectory out;
  if (series.empty()) return out;
  const std::size_t len = series.front().size();
  out.mean.assign(len, 0.0);
  out.stddev.assign(len, 0.0);
  const double count = static_cast<double>(series.size());
  for (std::size_t t = 0; t < len; ++t) {
    double sum = 0.0;
    for (const auto& s : series) sum += s[t];
    const double mean = sum / count;
    double sq = 0.0;
    for (const auto& s : series) sq += (s[t] - mean) * (s[t] - mean);
    out.mean[t] = mean;
    out.stddev[t] = std::sqrt(sq / count);
  }
  return out;
}

namespace {

template <class T>
std::vector<double> as_double(const std::vector<T>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

Aggregate aggregate_runs(const SimInstance& inst, int threads) {
  const int runs = inst.config.runs;
  if (threads <= 0) threads = default_thread_count();
  threads = std::max(1, std::min(threads, runs));

  Aggregate agg;
  agg.runs.resize(runs);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < runs; r = next++) agg.runs[r] = run_simulation(inst, r);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
  }

  std::vector<std::vector<double>> regret, cost, control, per_arm;
  for (const auto& r : agg.runs) {
    regret.push_back(r.regret);
    cost.push_back(as_double(r.comm_cost));
    control.push_back(as_double(r.control_msgs));
    per_arm.push_back(as_double(r.comm_cost_per_arm));
  }
  agg.regret = pointwise_stats(regret);
  agg.comm_cost = pointwise_stats(cost);
  agg.control_msgs = pointwise_stats(control);
  agg.comm_cost_per_arm = pointwise_stats(per_arm);
  return agg;
}

Aggregate aggregate_runs(const SimConfig& cfg, int threads) { return aggregate_runs(prepare(cfg), threads); }

}  // namespace comex
