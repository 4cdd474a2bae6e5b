#pragma once

#include <vector>

#include "owm/instance.hpp"
#include "owm/params.hpp"

namespace owm {

enum class AdColor { Green, Blue };

// Coin-independent bookkeeping for one advertiser. index == -1 plays the role of the
// dummy impression 0: it carries weight 0 and expected gain 0.
struct AdvertiserMeta {
  AdColor color = AdColor::Green;
  int index = -1;    // impression that last chose this advertiser adaptively
  int partner = -1;  // advertiser it was paired with at that step
  double s_accum = 0.0;
  double w_index = 0.0;       // weight of the index impression to this advertiser
  double e_gain_index = 0.0;  // its expected gain, frozen at indexing time
  int anchor_role = 0;        // 1 if this advertiser was a1 at its last indexing, 2 if a2
};

enum class Branch { AdaptiveCapable, FallbackSingle, FallbackPair };

// Everything about one arrival that does not depend on coin tosses.
struct StepDecision {
  int t = 0;  // arrival time, 1-based
  double m_i = 0.0;
  std::vector<double> e_gain;      // per advertiser, at this arrival
  std::vector<double> adapt_gain;  // per advertiser
  std::vector<int> set_b, set_bp, set_c;
  Branch branch = Branch::FallbackSingle;
  int a1 = -1;
  int a2 = -1;        // -1 when no second candidate
  int ell = 0;        // 1 or 2 in the adaptive branch, else 0
  double prob_a1 = 1.0;  // fallback assignment probability of a1 (1, 1/2, or p)
  std::vector<AdvertiserMeta> meta_before;  // snapshot at the beginning of the step
};

struct PolicyState {
  std::vector<AdvertiserMeta> meta;
  explicit PolicyState(int num_advertisers) : meta(num_advertisers) {}
};

// Extra gain obtainable by conditioning on the index impression's coin, zero unless
// the advertiser is Blue and the weight condition w_cur >= w_index - delta * m_i holds.
double adapt_gain(const AdvertiserMeta& meta, double w_cur, double w_index,
                  double e_gain_index, double m_i, double delta);

struct CandidateSets {
  std::vector<int> b, bp, c;
};

// B:  weight condition and E[Gain] + 2 AdaptGain / 3 >= (1 - eps) M_i.
// B': weight condition and E[Gain] >= (1 - eps) M_i (subset of B).
// C:  weight condition fails and E[Gain] >= (1 - eps) M_i.
CandidateSets candidate_sets(const Instance& inst, int i, const std::vector<double>& e_gains,
                             const std::vector<double>& adapt_gains, double m_i, double eps,
                             double delta, const std::vector<AdvertiserMeta>& metas);

// Applies one arrival: computes the decision record and updates the meta state
// (Color, index, Partner, S) exactly as the algorithm's bookkeeping lines do.
// One line per arrival (t, M_i, B, a1, a2, ell, branch, AdaptGain values); used for
// golden-file comparisons and cross-seed determinism checks.
std::string decision_trace(const std::vector<StepDecision>& decisions);

StepDecision step_decision(PolicyState& state, const Instance& inst, int i,
                           const std::vector<double>& e_gains, const AlgoParams& params,
                           Variant variant);

}  // namespace owm
