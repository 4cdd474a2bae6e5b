#include "owm/policy.hpp"

#include <algorithm>
#include <sstream>

namespace owm {

std::string decision_trace(const std::vector<StepDecision>& decisions) {
  std::ostringstream os;
  os.precision(17);
  for (const StepDecision& d : decisions) {
    os << "t=" << d.t << " M=" << d.m_i << " B=[";
    for (size_t k = 0; k < d.set_b.size(); ++k) os << (k ? " " : "") << d.set_b[k];
    os << "] a1=" << d.a1 << " a2=" << d.a2 << " ell=" << d.ell << " branch=";
    switch (d.branch) {
      case Branch::AdaptiveCapable:
        os << "adaptive";
        break;
      case Branch::FallbackSingle:
        os << "single";
        break;
      case Branch::FallbackPair:
        os << "pair";
        break;
    }
    os << " p1=" << d.prob_a1 << " ag=[";
    for (size_t a = 0; a < d.adapt_gain.size(); ++a) os << (a ? " " : "") << d.adapt_gain[a];
    os << "]\n";
  }
  return os.str();
}

double adapt_gain(const AdvertiserMeta& meta, double w_cur, double w_index,
                  double e_gain_index, double m_i, double delta) {
  if (meta.color != AdColor::Blue) return 0.0;
  if (w_cur < w_index - delta * m_i) return 0.0;
  return pos_part(e_gain_index / 3.0 - pos_part(w_index - w_cur) / 3.0 - meta.s_accum) / 12.0;
}

CandidateSets candidate_sets(const Instance& inst, int i, const std::vector<double>& e_gains,
                             const std::vector<double>& adapt_gains, double m_i, double eps,
                             double delta, const std::vector<AdvertiserMeta>& metas) {
  CandidateSets out;
  int n = inst.num_advertisers;
  double threshold = (1.0 - eps) * m_i;
  for (int a = 0; a < n; ++a) {
    bool weight_ok = inst.weight(i, a) >= metas[a].w_index - delta * m_i;
    if (weight_ok && e_gains[a] + 2.0 * adapt_gains[a] / 3.0 >= threshold) out.b.push_back(a);
    if (weight_ok && e_gains[a] >= threshold) out.bp.push_back(a);
    if (!weight_ok && e_gains[a] >= threshold) out.c.push_back(a);
  }
  return out;
}

namespace {

// Highest value wins, ties to the lowest advertiser id; skip < 0 disables skipping.
int argmax_over(const std::vector<int>& ids, const std::vector<double>& value, int skip = -1) {
  int best = -1;
  for (int a : ids) {
    if (a == skip) continue;
    if (best < 0 || value[a] > value[best]) best = a;
  }
  return best;
}

int argmax_all(const std::vector<double>& value) {
  int best = 0;
  for (int a = 1; a < static_cast<int>(value.size()); ++a)
    if (value[a] > value[best]) best = a;
  return best;
}

}  // namespace

StepDecision step_decision(PolicyState& state, const Instance& inst, int i,
                           const std::vector<double>& e_gains, const AlgoParams& params,
                           Variant variant) {
  int n = inst.num_advertisers;
  OWM_ASSERT(n > 0 && static_cast<int>(e_gains.size()) == n);
  OWM_ASSERT(variant == Variant::SG || variant == Variant::OSG);

  StepDecision d;
  d.t = i + 1;
  d.e_gain = e_gains;
  d.meta_before = state.meta;
  d.m_i = *std::max_element(e_gains.begin(), e_gains.end());

  d.adapt_gain.assign(n, 0.0);
  for (int a = 0; a < n; ++a) {
    const AdvertiserMeta& meta = state.meta[a];
    d.adapt_gain[a] =
        adapt_gain(meta, inst.weight(i, a), meta.w_index, meta.e_gain_index, d.m_i, params.delta);
    OWM_ASSERT(d.adapt_gain[a] <= e_gains[a] / 12.0 + 1e-12 || meta.color != AdColor::Blue);
  }

  CandidateSets sets = candidate_sets(inst, i, e_gains, d.adapt_gain, d.m_i, params.eps,
                                      params.delta, state.meta);
  d.set_b = sets.b;
  d.set_bp = sets.bp;
  d.set_c = sets.c;

  if (static_cast<int>(sets.b.size()) >= 2) {
    d.branch = Branch::AdaptiveCapable;
    std::vector<double> score(n, 0.0);
    for (int a : sets.b) score[a] = e_gains[a] + 2.0 * d.adapt_gain[a] / 3.0;
    d.a1 = argmax_over(sets.b, score);
    d.a2 = argmax_over(sets.b, score, d.a1);
    d.ell = d.adapt_gain[d.a2] > d.adapt_gain[d.a1] ? 2 : 1;
    for (int a : {d.a1, d.a2}) {
      int old_partner = state.meta[a].partner;
      if (old_partner >= 0 && old_partner != d.a1 && old_partner != d.a2)
        state.meta[old_partner].color = AdColor::Green;
      state.meta[a].color = AdColor::Blue;
      state.meta[a].s_accum = 0.0;
      state.meta[a].index = i;
      state.meta[a].w_index = inst.weight(i, a);
      state.meta[a].e_gain_index = e_gains[a];
      state.meta[a].anchor_role = (a == d.a1) ? 1 : 2;
    }
    state.meta[d.a1].partner = d.a2;
    state.meta[d.a2].partner = d.a1;
    return d;
  }

  if (variant == Variant::SG) {
    size_t union_size = sets.bp.size() + sets.c.size();  // B' and C are disjoint
    if (union_size == 1) {
      d.branch = Branch::FallbackSingle;
      d.a1 = argmax_all(e_gains);
      // The global argmax meets the (1 - eps) M_i threshold, so it is the unique member.
      OWM_ASSERT((sets.bp.empty() ? sets.c[0] : sets.bp[0]) == d.a1);
      d.prob_a1 = 1.0;
      state.meta[d.a1].s_accum += d.m_i;
    } else {
      d.branch = Branch::FallbackPair;
      OWM_ASSERT(sets.bp.size() <= 1);
      d.a1 = sets.bp.empty() ? argmax_over(sets.c, e_gains) : sets.bp[0];
      d.a2 = argmax_over(sets.c, e_gains, d.a1);
      OWM_ASSERT(d.a2 >= 0);
      d.prob_a1 = 0.5;
      state.meta[d.a1].s_accum += d.m_i / 2.0;
      state.meta[d.a2].s_accum += d.m_i / 2.0;
    }
    return d;
  }

  // OSG fallback: the global argmax is always a candidate; a second candidate exists
  // only when B' holds a different advertiser. S increments are the expected amounts
  // and are applied unconditionally, keeping the state coin-independent.
  d.a1 = argmax_all(e_gains);
  bool pair = !sets.bp.empty() && sets.bp[0] != d.a1;
  if (pair) {
    d.branch = Branch::FallbackPair;
    d.a2 = sets.bp[0];
    d.prob_a1 = params.p;
    state.meta[d.a1].s_accum += params.p * e_gains[d.a1];
    state.meta[d.a2].s_accum += (1.0 - params.p) * e_gains[d.a2];
  } else {
    d.branch = Branch::FallbackSingle;
    d.prob_a1 = 1.0;
    state.meta[d.a1].s_accum += e_gains[d.a1];
  }
  return d;
}

}  // namespace owm
