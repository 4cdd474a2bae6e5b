#include "owm/matchers.hpp"

#include <algorithm>
#include <utility>

#include "owm/rng.hpp"

namespace owm {

GreedyReport run_greedy(const Instance& inst) {
  const int m = inst.num_impressions();
  const int n = inst.num_advertisers;
  GreedyReport out;
  out.trace.assigned.assign(m, -1);
  std::vector<double> maxw(n, 0.0);
  for (int i = 0; i < m; ++i) {
    int best = 0;
    double best_gain = gain(inst.weight(i, 0), maxw[0]);
    for (int a = 1; a < n; ++a) {
      double g = gain(inst.weight(i, a), maxw[a]);
      if (g > best_gain) {
        best = a;
        best_gain = g;
      }
    }
    out.trace.assigned[i] = best;
    out.marginal_gain.push_back(best_gain);
    maxw[best] = std::max(maxw[best], inst.weight(i, best));
  }
  out.value = allocation_value(inst, out.trace);
  OWM_ASSERT(out.value >= offline_optimum(inst).value / 2.0 - 1e-9,
             "greedy with free disposal keeps at least half the optimum");
  return out;
}

namespace {

SampledRun replay_decisions(const Instance& inst, std::vector<StepDecision> decisions,
                            std::vector<CoinOutcome> coins) {
  const int m = inst.num_impressions();
  const int n = inst.num_advertisers;
  OWM_ASSERT(static_cast<int>(coins.size()) == m, "one coin outcome per impression");
  SampledRun out;
  out.trace.assigned.assign(m, -1);
  std::vector<double> maxw(n, 0.0);
  std::vector<std::uint8_t> mark(n, 3);
  for (int i = 0; i < m; ++i) {
    out.trace.assigned[i] = apply_assignment(decisions[i], coins[i], maxw, mark, inst);
  }
  out.value = allocation_value(inst, out.trace);
  out.decisions = std::move(decisions);
  out.coins = std::move(coins);
  return out;
}

}  // namespace

SampledRun sample_run(const Instance& inst, const AlgoParams& params, Variant variant,
                      std::uint64_t seed, std::uint64_t replica) {
  std::vector<StepDecision> decisions = propagate(inst, params, variant).decisions;
  std::vector<CoinOutcome> coins;
  for (const StepDecision& d : decisions) {
    CoinOutcome c = draw_coins(seed, replica, d.t);
    if (d.branch != Branch::AdaptiveCapable && d.a2 >= 0) {
      double f = draw_unit(seed, replica, static_cast<std::uint64_t>(d.t), DrawKind::FallbackCoin);
      c.fallback_bit = f < d.prob_a1 ? 0 : 1;
    }
    coins.push_back(c);
  }
  return replay_decisions(inst, std::move(decisions), std::move(coins));
}

SampledRun replay_run(const Instance& inst, const AlgoParams& params, Variant variant,
                      const std::vector<CoinOutcome>& coins) {
  std::vector<StepDecision> decisions = propagate(inst, params, variant).decisions;
  return replay_decisions(inst, std::move(decisions), coins);
}

RunReport expected_value(const Instance& inst, const RunConfig& config) {
  RunReport out;
  out.variant = config.variant;
  out.engine = config.engine;
  out.opt = offline_optimum(inst).value;

  if (config.variant == Variant::Greedy) {
    GreedyReport g = run_greedy(inst);
    out.value = g.value;
    out.marginal_gain = std::move(g.marginal_gain);
  } else {
    switch (config.engine) {
      case Engine::Enum: {
        EngineTables t = enumerate_exact(inst, config.algo, config.variant);
        out.value = t.stoch_alloc;
        out.marginal_gain = std::move(t.marginal_gain);
        break;
      }
      case Engine::Dist: {
        EngineTables t = propagate(inst, config.algo, config.variant);
        out.value = t.stoch_alloc;
        out.marginal_gain = std::move(t.marginal_gain);
        break;
      }
      case Engine::MC: {
        McTables t = mc_estimate(inst, config.algo, config.variant, config.replicas, config.seed);
        out.value = t.stoch_alloc_mean;
        out.stderr_value = t.stoch_alloc_stderr;
        out.marginal_gain = std::move(t.marginal_mean);
        out.replicas = t.replicas;
        break;
      }
    }
  }
  out.ratio = out.opt > 0.0 ? out.value / out.opt : 1.0;
  return out;
}

}  // namespace owm
