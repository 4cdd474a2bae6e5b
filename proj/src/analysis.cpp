#include "owm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace owm {

double Decomposition::xyz_total() const {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] + y[i] + z[i];
  return s;
}

double Decomposition::identity_residual() const {
  return 2.0 * stoch_alloc - opt_value - xyz_total();
}

double ExcessLedger::total() const { return std::accumulate(excess.begin(), excess.end(), 0.0); }

Decomposition decompose(const Instance& inst, const AlgoParams& params, Variant variant,
                        Engine engine) {
  const int m = inst.num_impressions();
  const int n = inst.num_advertisers;
  if (m != n) {
    throw std::invalid_argument(
        "decomposition needs a square instance; pad it so every impression has an "
        "offline partner");
  }

  Decomposition dec;
  dec.variant = variant;
  switch (engine) {
    case Engine::Enum:
      dec.tables = enumerate_exact(inst, params, variant);
      break;
    case Engine::Dist:
      dec.tables = propagate(inst, params, variant);
      break;
    case Engine::MC:
      throw std::invalid_argument("the decomposition needs an exact engine");
  }
  dec.opt = offline_optimum(inst);
  dec.opt_value = dec.opt.value;
  dec.stoch_alloc = dec.tables.stoch_alloc;

  dec.a_star.assign(m, -1);
  dec.opt_impression.assign(n, -1);
  for (int i = 0; i < m; ++i) {
    int a = dec.opt.match[i];
    OWM_ASSERT(a >= 0, "square instance must admit a perfect matching");
    dec.a_star[i] = a;
    dec.opt_impression[a] = i;
  }

  const auto& dist = dec.tables.dist;
  dec.x.assign(m, 0.0);
  dec.y.assign(m, 0.0);
  dec.z.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    int a = dec.a_star[i];
    dec.x[i] = dec.tables.marginal_gain[i] - dec.tables.e_gain[i][a];
    dec.y[i] = dist[m][a].expectation() - dist[i][a].expectation();
    dec.z[i] = dist[i][a].expected_excess(inst.weight(i, a));
  }

  dec.delta_y.assign(m + 1, std::vector<double>(m, 0.0));
  dec.delta_z.assign(m + 1, std::vector<double>(m, 0.0));
  for (int ip = 0; ip < m; ++ip) {
    int a = dec.a_star[ip];
    double w = inst.weight(ip, a);
    for (int t = 1; t <= m; ++t) {
      if (t >= ip + 1) {
        dec.delta_y[t][ip] = dist[t][a].expectation() - dist[t - 1][a].expectation();
      } else {
        dec.delta_z[t][ip] =
            dist[t][a].expected_excess(w) - dist[t - 1][a].expected_excess(w);
      }
    }
  }
  return dec;
}

ExcessLedger run_mechanism(const Decomposition& dec, const Instance& inst,
                           const AlgoParams& algo, const ChargeParams& charge) {
  const int m = inst.num_impressions();
  OWM_ASSERT(m == inst.num_advertisers, "mechanism runs on the padded instance");
  const bool optimized = dec.variant == Variant::OSG;

  ExcessLedger led;
  led.excess.assign(m, 0.0);
  auto credit = [&led](int t, const char* rule, int impression, double amount) {
    if (amount == 0.0) return;
    led.excess[impression] += amount;
    led.audit.push_back({t, rule, impression, amount});
  };

  for (int t = 1; t <= m; ++t) {
    const int i = t - 1;
    const StepDecision& d = dec.tables.decisions[i];
    std::vector<int> cands{d.a1};
    if (d.a2 >= 0) cands.push_back(d.a2);

    for (int a : cands) {
      const int ip = dec.opt_impression[a];
      const int idx = d.meta_before[a].index;
      if (ip + 1 <= t) {
        std::set<int> recipients{i, ip};
        if (idx >= 0) recipients.insert(idx);
        const double share = dec.delta_y[t][ip] / static_cast<double>(recipients.size());
        for (int r : recipients) credit(t, "y-split", r, share);
      } else if (inst.weight(i, a) > inst.weight(ip, a)) {
        credit(t, "z-arriving", i, (1.0 - charge.zeta) * dec.delta_z[t][ip]);
        credit(t, "z-partner", ip, charge.zeta * dec.delta_z[t][ip]);
      }
    }

    if (d.branch == Branch::AdaptiveCapable) {
      std::set<int> ads{d.a1, d.a2, dec.a_star[i]};
      double deduction = 0.0;
      for (int a : ads) {
        const double amt = 2.0 * d.adapt_gain[a] / 3.0;
        const int idx = d.meta_before[a].index;
        if (idx >= 0) {
          credit(t, "adaptive-index", idx, amt);
          deduction += amt;
        } else {
          OWM_ASSERT(amt == 0.0, "an unanchored advertiser has no adaptivity gain");
        }
      }
      credit(t, "adaptive-net", i, dec.x[i] - deduction);
    } else {
      const double big_m = d.m_i;
      double share1, share2;
      if (optimized) {
        share1 = d.a2 >= 0 ? algo.p * charge.sigma * big_m : charge.sigma * big_m;
        share2 = d.a2 >= 0 ? (1.0 - algo.p) * charge.sigma * big_m : 0.0;
      } else {
        share1 = d.a2 >= 0 ? charge.sigma * big_m / 2.0 : charge.sigma * big_m;
        share2 = d.a2 >= 0 ? charge.sigma * big_m / 2.0 : 0.0;
      }
      const double share_star = charge.beta * big_m;
      const int idx1 = d.meta_before[d.a1].index;
      const int idx2 = d.a2 >= 0 ? d.meta_before[d.a2].index : -1;
      const int idxs = d.meta_before[dec.a_star[i]].index;

      double pool1 = share1;
      double delivered = 0.0;
      if (d.a2 >= 0) {
        if (idx2 >= 0) {
          credit(t, "fallback-index2", idx2, share2);
          delivered += share2;
        } else {
          pool1 += share2;
        }
      }
      if (idxs >= 0) {
        credit(t, "fallback-star", idxs, share_star);
        delivered += share_star;
      } else {
        pool1 += share_star;
      }
      if (idx1 >= 0) {
        credit(t, "fallback-index1", idx1, pool1);
        delivered += pool1;
      } else if (pool1 > 0.0) {
        led.dropped += pool1;
        led.audit.push_back({t, "fallback-drop", -1, pool1});
      }
      credit(t, "fallback-net", i, dec.x[i] - delivered);
    }
  }
  return led;
}

BoundsReport verify_bounds(const Decomposition& dec, const ExcessLedger& ledger, double lambda) {
  const int m = static_cast<int>(dec.x.size());
  BoundsReport rep;
  rep.ledger_residual = ledger.total() - dec.xyz_total();
  rep.identity_residual = dec.identity_residual();
  for (int i = 0; i < m; ++i) {
    BoundRow row;
    row.impression = i;
    row.x = dec.x[i];
    row.y = dec.y[i];
    row.z = dec.z[i];
    row.excess = ledger.excess[i];
    if (dec.variant == Variant::OSG) {
      row.bound = lambda * dec.tables.e_gain[i][dec.a_star[i]];
    } else {
      row.bound = lambda * dec.tables.decisions[i].m_i;
    }
    row.margin = row.excess - row.bound;
    row.pass = row.margin >= -kBoundTolerance;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace owm
