#pragma once

#include <cstdint>
#include <vector>

#include "owm/engines.hpp"
#include "owm/instance.hpp"
#include "owm/params.hpp"

namespace owm {

// Deterministic baseline: each arrival goes to the advertiser with the largest
// realized gain, ties to the lowest id.
struct GreedyReport {
  AssignmentTrace trace;
  double value = 0.0;
  std::vector<double> marginal_gain;  // realized gain per impression
};
GreedyReport run_greedy(const Instance& inst);

// One sampled trajectory of the randomized policy: decisions are computed first
// (coin-independent), then coins drive the assignments.
struct SampledRun {
  AssignmentTrace trace;
  double value = 0.0;
  std::vector<StepDecision> decisions;
  std::vector<CoinOutcome> coins;
};
SampledRun sample_run(const Instance& inst, const AlgoParams& params, Variant variant,
                      std::uint64_t seed, std::uint64_t replica = 0);

// Same trajectory logic with caller-supplied coins; used to force specific branches.
SampledRun replay_run(const Instance& inst, const AlgoParams& params, Variant variant,
                      const std::vector<CoinOutcome>& coins);

// Expected allocation of a policy under the chosen engine, with the offline optimum
// and competitive ratio attached.
struct RunReport {
  Variant variant = Variant::SG;
  Engine engine = Engine::Dist;
  double value = 0.0;
  double stderr_value = 0.0;  // zero for exact engines
  double opt = 0.0;
  double ratio = 0.0;  // value / opt, defined as 1 when opt == 0
  std::vector<double> marginal_gain;
  int replicas = 0;
};
RunReport expected_value(const Instance& inst, const RunConfig& config);

}  // namespace owm
