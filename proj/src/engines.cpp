#include "owm/engines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

#include "owm/rng.hpp"

namespace owm {

namespace {

// Realized-maximum state of one coin branch. Meta state is coin-independent and
// lives once in PolicyState, not per branch.
struct EnumBranch {
  double prob = 1.0;
  std::vector<double> maxw;
  std::vector<std::uint8_t> mark;
};

DiscreteDistribution branch_marginal(const std::vector<EnumBranch>& branches, int a) {
  std::vector<double> w, p;
  w.reserve(branches.size());
  p.reserve(branches.size());
  for (const auto& b : branches) {
    w.push_back(b.maxw[a]);
    p.push_back(b.prob);
  }
  normalize_support(w, p);
  DiscreteDistribution d;
  d.w = std::move(w);
  d.p = std::move(p);
  d.validate();
  return d;
}

// Two-point layer {0 w.p. 1-q, v w.p. q} used for fallback tails.
DiscreteDistribution bernoulli_layer(double v, double q) {
  std::vector<double> w{0.0, v};
  std::vector<double> p{1.0 - q, q};
  normalize_support(w, p);
  DiscreteDistribution d;
  d.w = std::move(w);
  d.p = std::move(p);
  d.validate();
  return d;
}

}  // namespace

DiscreteDistribution AnchorBelief::unconditional() const {
  if (!split) {
    return max_convolve(cond[0], tail);
  }
  DiscreteDistribution c0 = max_convolve(cond[0], tail);
  DiscreteDistribution c1 = max_convolve(cond[1], tail);
  DiscreteDistribution c2 = max_convolve(cond[2], tail);
  return mix({{1.0 / 3.0, &c0}, {1.0 / 3.0, &c1}, {1.0 / 3.0, &c2}});
}

std::array<double, 3> AnchorBelief::mark_probs() const {
  if (!split) return {0.0, 0.0, 1.0};
  // Bucket b corresponds to mark: role 1 maps Low,Mid,High -> 1,2,3; role 2 swaps 1 and 2.
  return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
}

CoinOutcome draw_coins(std::uint64_t seed, std::uint64_t replica, int t) {
  CoinOutcome c;
  double u = draw_unit(seed, replica, static_cast<std::uint64_t>(t), DrawKind::UBucket);
  if (u <= 1.0 / 3.0) {
    c.bucket = UBucket::Low;
  } else if (u <= 2.0 / 3.0) {
    c.bucket = UBucket::Mid;
  } else {
    c.bucket = UBucket::High;
  }
  double aux = draw_unit(seed, replica, static_cast<std::uint64_t>(t), DrawKind::AuxCoin);
  c.aux_bit = aux < 0.5 ? 0 : 1;
  c.fallback_bit = -1;  // bias applied against the decision at replay time
  return c;
}

int apply_assignment(const StepDecision& d, const CoinOutcome& coins, std::vector<double>& maxw,
                     std::vector<std::uint8_t>& mark, const Instance& inst) {
  const int i = d.t - 1;
  int assigned = -1;
  if (d.branch == Branch::AdaptiveCapable) {
    const int a_ell = d.ell == 1 ? d.a1 : d.a2;
    const int a_oth = d.ell == 1 ? d.a2 : d.a1;
    const double ag = d.adapt_gain[a_ell];
    switch (coins.bucket) {
      case UBucket::Low:
        assigned = d.a1;
        mark[d.a1] = 1;
        mark[d.a2] = 2;
        break;
      case UBucket::Mid:
        assigned = d.a2;
        mark[d.a2] = 1;
        mark[d.a1] = 2;
        break;
      case UBucket::High:
        if (ag > 0.0 && mark[a_ell] == 1) {
          assigned = a_oth;
        } else if (ag > 0.0 && mark[a_ell] == 2) {
          assigned = a_ell;
        } else {
          assigned = coins.aux_bit == 0 ? d.a1 : d.a2;
        }
        mark[d.a1] = 3;
        mark[d.a2] = 3;
        break;
    }
  } else if (d.a2 < 0) {
    assigned = d.a1;
  } else {
    assigned = coins.fallback_bit == 0 ? d.a1 : d.a2;
  }
  OWM_ASSERT(assigned >= 0, "assignment must name an advertiser");
  maxw[assigned] = std::max(maxw[assigned], inst.weight(i, assigned));
  return assigned;
}

EngineTables enumerate_exact(const Instance& inst, const AlgoParams& params, Variant variant,
                             int cap) {
  const int m = inst.num_impressions();
  const int n = inst.num_advertisers;
  if (m > cap) {
    throw CapExceeded("instance with " + std::to_string(m) +
                      " impressions exceeds the enumeration cap of " + std::to_string(cap));
  }

  EngineTables out;
  PolicyState state(n);
  std::vector<EnumBranch> branches(1);
  branches[0].maxw.assign(n, 0.0);
  branches[0].mark.assign(n, 3);

  out.dist.resize(m + 1);
  for (int a = 0; a < n; ++a) out.dist[0].push_back(DiscreteDistribution::point(0.0));

  for (int i = 0; i < m; ++i) {
    std::vector<double> e_gains(n, 0.0);
    for (int a = 0; a < n; ++a) {
      double e = 0.0;
      for (const auto& b : branches) e += b.prob * gain(inst.weight(i, a), b.maxw[a]);
      e_gains[a] = e;
    }
    StepDecision d = step_decision(state, inst, i, e_gains, params, variant);

    std::vector<EnumBranch> next;
    next.reserve(branches.size() * 4);
    double marginal = 0.0;
    std::array<double, 2> prob{0.0, 0.0};
    auto emit = [&](const EnumBranch& parent, double frac, int assigned, int mark_a1,
                    int mark_a2) {
      EnumBranch child = parent;
      child.prob = parent.prob * frac;
      if (child.prob <= 0.0) return;
      if (mark_a1 != 0) child.mark[d.a1] = static_cast<std::uint8_t>(mark_a1);
      if (mark_a2 != 0) child.mark[d.a2] = static_cast<std::uint8_t>(mark_a2);
      marginal += child.prob * gain(inst.weight(i, assigned), parent.maxw[assigned]);
      prob[assigned == d.a1 ? 0 : 1] += child.prob;
      child.maxw[assigned] = std::max(child.maxw[assigned], inst.weight(i, assigned));
      next.push_back(std::move(child));
    };

    for (const auto& b : branches) {
      if (d.branch == Branch::AdaptiveCapable) {
        const int a_ell = d.ell == 1 ? d.a1 : d.a2;
        const int a_oth = d.ell == 1 ? d.a2 : d.a1;
        const double ag = d.adapt_gain[a_ell];
        emit(b, 1.0 / 3.0, d.a1, 1, 2);
        emit(b, 1.0 / 3.0, d.a2, 2, 1);
        if (ag > 0.0 && b.mark[a_ell] == 1) {
          emit(b, 1.0 / 3.0, a_oth, 3, 3);
        } else if (ag > 0.0 && b.mark[a_ell] == 2) {
          emit(b, 1.0 / 3.0, a_ell, 3, 3);
        } else {
          emit(b, 1.0 / 6.0, d.a1, 3, 3);
          emit(b, 1.0 / 6.0, d.a2, 3, 3);
        }
      } else if (d.a2 < 0) {
        emit(b, 1.0, d.a1, 0, 0);
      } else {
        emit(b, d.prob_a1, d.a1, 0, 0);
        emit(b, 1.0 - d.prob_a1, d.a2, 0, 0);
      }
    }
    branches = std::move(next);

    out.decisions.push_back(std::move(d));
    out.e_gain.push_back(std::move(e_gains));
    out.marginal_gain.push_back(marginal);
    out.assign_prob.push_back(prob);
    for (int a = 0; a < n; ++a) out.dist[i + 1].push_back(branch_marginal(branches, a));
  }

  out.stoch_alloc = 0.0;
  for (int a = 0; a < n; ++a) out.stoch_alloc += out.dist[m][a].expectation();
  return out;
}

PropagationTrace propagate_with_beliefs(const Instance& inst, const AlgoParams& params,
                                        Variant variant) {
  const int m = inst.num_impressions();
  const int n = inst.num_advertisers;

  PropagationTrace trace;
  EngineTables& out = trace.tables;
  PolicyState state(n);
  std::vector<AnchorBelief> bel(n);

  out.dist.resize(m + 1);
  std::vector<DiscreteDistribution> cur(n, DiscreteDistribution::point(0.0));
  out.dist[0] = cur;
  trace.beliefs.push_back(bel);

  for (int i = 0; i < m; ++i) {
    const int t = i + 1;
    std::vector<double> e_gains(n, 0.0);
    for (int a = 0; a < n; ++a) e_gains[a] = cur[a].expected_gain(inst.weight(i, a));
    StepDecision d = step_decision(state, inst, i, e_gains, params, variant);

    std::array<double, 2> prob{0.0, 0.0};
    if (d.branch == Branch::AdaptiveCapable) {
      const int a_ell = d.ell == 1 ? d.a1 : d.a2;
      const int a_oth = d.ell == 1 ? d.a2 : d.a1;
      const double w1 = inst.weight(i, d.a1);
      const double w2 = inst.weight(i, d.a2);
      const double w_ell = d.ell == 1 ? w1 : w2;
      const double w_oth = d.ell == 1 ? w2 : w1;
      const double ag = d.adapt_gain[a_ell];
      const DiscreteDistribution prev1 = cur[d.a1];
      const DiscreteDistribution prev2 = cur[d.a2];
      const DiscreteDistribution& prev_oth = d.ell == 1 ? prev2 : prev1;

      AnchorBelief nb1, nb2;
      nb1.cond[0] = max_with_point(prev1, w1);
      nb1.cond[1] = prev1;
      nb2.cond[0] = prev2;
      nb2.cond[1] = max_with_point(prev2, w2);

      if (ag > 0.0) {
        const AnchorBelief& bl = bel[a_ell];
        OWM_ASSERT(bl.split, "positive adaptivity gain requires an anchored advertiser");
        // Bucket of the anchor's u realization that produced mark value k for a_ell.
        auto bucket_of_mark = [&bl](int k) {
          if (k == 3) return 2;
          return (bl.role == 1) == (k == 1) ? 0 : 1;
        };
        std::array<DiscreteDistribution, 3> dl;
        for (int k = 1; k <= 3; ++k) {
          dl[k - 1] = max_convolve(bl.cond[bucket_of_mark(k)], bl.tail);
        }
        DiscreteDistribution l2 = max_with_point(dl[1], w_ell);
        DiscreteDistribution l3 = max_with_point(dl[2], w_ell);
        DiscreteDistribution cond_ell = mix({{1.0 / 3.0, &dl[0]},
                                             {1.0 / 3.0, &l2},
                                             {1.0 / 6.0, &dl[2]},
                                             {1.0 / 6.0, &l3}});

        const AnchorBelief& bo = bel[a_oth];
        const bool shared = bo.split && bo.anchor_time == bl.anchor_time;
        if (shared) {
          OWM_ASSERT(bl.partner == a_oth && bo.partner == a_ell,
                     "same-time anchors must name each other");
        }
        std::array<DiscreteDistribution, 3> dofb;
        for (int k = 1; k <= 3; ++k) {
          dofb[k - 1] =
              shared ? max_convolve(bo.cond[bucket_of_mark(k)], bo.tail) : prev_oth;
        }
        DiscreteDistribution o1 = max_with_point(dofb[0], w_oth);
        DiscreteDistribution o3 = max_with_point(dofb[2], w_oth);
        DiscreteDistribution cond_oth = mix({{1.0 / 3.0, &o1},
                                             {1.0 / 3.0, &dofb[1]},
                                             {1.0 / 6.0, &dofb[2]},
                                             {1.0 / 6.0, &o3}});
        (d.ell == 1 ? nb1 : nb2).cond[2] = std::move(cond_ell);
        (d.ell == 1 ? nb2 : nb1).cond[2] = std::move(cond_oth);

        const auto pm = bl.mark_probs();
        const double p_ell = 1.0 / 3.0 + (pm[1] + pm[2] / 2.0) / 3.0;
        const double p_oth = 1.0 / 3.0 + (pm[0] + pm[2] / 2.0) / 3.0;
        prob[d.ell == 1 ? 0 : 1] = p_ell;
        prob[d.ell == 1 ? 1 : 0] = p_oth;
      } else {
        DiscreteDistribution b1 = max_with_point(prev1, w1);
        DiscreteDistribution b2 = max_with_point(prev2, w2);
        nb1.cond[2] = mix({{0.5, &prev1}, {0.5, &b1}});
        nb2.cond[2] = mix({{0.5, &prev2}, {0.5, &b2}});
        prob = {0.5, 0.5};
      }

      nb1.anchor_time = t;
      nb1.partner = d.a2;
      nb1.role = 1;
      nb1.split = true;
      nb1.tail = DiscreteDistribution::point(0.0);
      nb2.anchor_time = t;
      nb2.partner = d.a1;
      nb2.role = 2;
      nb2.split = true;
      nb2.tail = DiscreteDistribution::point(0.0);
      bel[d.a1] = std::move(nb1);
      bel[d.a2] = std::move(nb2);
      cur[d.a1] = bel[d.a1].unconditional();
      cur[d.a2] = bel[d.a2].unconditional();
    } else {
      const double q = d.prob_a1;
      bel[d.a1].tail = max_convolve(bel[d.a1].tail, bernoulli_layer(inst.weight(i, d.a1), q));
      cur[d.a1] = bel[d.a1].unconditional();
      prob[0] = q;
      if (d.a2 >= 0) {
        bel[d.a2].tail =
            max_convolve(bel[d.a2].tail, bernoulli_layer(inst.weight(i, d.a2), 1.0 - q));
        cur[d.a2] = bel[d.a2].unconditional();
        prob[1] = 1.0 - q;
      }
    }

    double marginal = 0.0;
    for (int a = 0; a < n; ++a) marginal += cur[a].expectation() - out.dist[i][a].expectation();
    out.decisions.push_back(std::move(d));
    out.e_gain.push_back(std::move(e_gains));
    out.marginal_gain.push_back(marginal);
    out.assign_prob.push_back(prob);
    out.dist[t] = cur;
    trace.beliefs.push_back(bel);
  }

  out.stoch_alloc = 0.0;
  for (int a = 0; a < n; ++a) out.stoch_alloc += cur[a].expectation();
  return trace;
}

EngineTables propagate(const Instance& inst, const AlgoParams& params, Variant variant) {
  return std::move(propagate_with_beliefs(inst, params, variant).tables);
}

McTables mc_estimate(const Instance& inst, const AlgoParams& params, Variant variant,
                     int replicas, std::uint64_t seed) {
  if (replicas <= 0) throw std::invalid_argument("replicas must be positive");
  const int m = inst.num_impressions();
  const int n = inst.num_advertisers;

  McTables out;
  out.replicas = replicas;
  out.decisions = propagate(inst, params, variant).decisions;

  std::vector<std::vector<double>> sum(m, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> sumsq(m, std::vector<double>(n, 0.0));
  std::vector<double> msum(m, 0.0), msumsq(m, 0.0);
  double vsum = 0.0, vsumsq = 0.0;

  std::vector<double> maxw(n);
  std::vector<std::uint8_t> mark(n);
  std::vector<double> realized(n);
  for (int r = 0; r < replicas; ++r) {
    std::fill(maxw.begin(), maxw.end(), 0.0);
    std::fill(mark.begin(), mark.end(), 3);
    for (int i = 0; i < m; ++i) {
      const StepDecision& d = out.decisions[i];
      for (int a = 0; a < n; ++a) {
        double g = gain(inst.weight(i, a), maxw[a]);
        realized[a] = g;
        sum[i][a] += g;
        sumsq[i][a] += g * g;
      }
      CoinOutcome coins = draw_coins(seed, static_cast<std::uint64_t>(r), d.t);
      if (d.branch != Branch::AdaptiveCapable && d.a2 >= 0) {
        double f = draw_unit(seed, static_cast<std::uint64_t>(r),
                             static_cast<std::uint64_t>(d.t), DrawKind::FallbackCoin);
        coins.fallback_bit = f < d.prob_a1 ? 0 : 1;
      }
      int assigned = apply_assignment(d, coins, maxw, mark, inst);
      msum[i] += realized[assigned];
      msumsq[i] += realized[assigned] * realized[assigned];
    }
    double value = 0.0;
    for (int a = 0; a < n; ++a) value += maxw[a];
    vsum += value;
    vsumsq += value * value;
  }

  auto finish = [replicas](double s, double sq) {
    double mean = s / replicas;
    if (replicas < 2) return std::pair<double, double>(mean, 0.0);
    double var = (sq - s * s / replicas) / (replicas - 1);
    if (var < 0.0) var = 0.0;
    return std::pair<double, double>(mean, std::sqrt(var / replicas));
  };

  out.e_gain_mean.assign(m, std::vector<double>(n, 0.0));
  out.e_gain_stderr.assign(m, std::vector<double>(n, 0.0));
  out.marginal_mean.assign(m, 0.0);
  out.marginal_stderr.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < n; ++a) {
      auto [mean, se] = finish(sum[i][a], sumsq[i][a]);
      out.e_gain_mean[i][a] = mean;
      out.e_gain_stderr[i][a] = se;
    }
    auto [mmean, mse] = finish(msum[i], msumsq[i]);
    out.marginal_mean[i] = mmean;
    out.marginal_stderr[i] = mse;
  }
  auto [vmean, vse] = finish(vsum, vsumsq);
  out.stoch_alloc_mean = vmean;
  out.stoch_alloc_stderr = vse;
  return out;
}

}  // namespace owm
