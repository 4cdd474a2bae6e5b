#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "owm/distribution.hpp"
#include "owm/instance.hpp"
#include "owm/params.hpp"
#include "owm/policy.hpp"

namespace owm {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One impression's random inputs. The u bucket drives the adaptive branch, the aux
// coin settles its 50/50 case, the fallback bit settles two-candidate fallbacks.
enum class UBucket : std::uint8_t { Low, Mid, High };
struct CoinOutcome {
  UBucket bucket = UBucket::Low;
  int aux_bit = 0;       // 0 picks a1, 1 picks a2
  int fallback_bit = 0;  // 0 picks a1, 1 picks a2; bias comes from the decision
};

// Exact per-time tables produced by the two exact engines.
struct EngineTables {
  std::vector<StepDecision> decisions;                  // one per arrival
  std::vector<std::vector<double>> e_gain;              // [t-1][a], at arrival t
  std::vector<std::vector<DiscreteDistribution>> dist;  // [t][a], t = 0..m, after step t
  std::vector<double> marginal_gain;                    // per impression
  std::vector<std::array<double, 2>> assign_prob;       // per impression: P(a1), P(a2)
  double stoch_alloc = 0.0;
};

inline constexpr int kDefaultEnumCap = 8;

// Walks every coin branch of the run; exact reference for small instances.
EngineTables enumerate_exact(const Instance& inst, const AlgoParams& params, Variant variant,
                             int cap = kDefaultEnumCap);

// Polynomial-time exact engine: per-advertiser maximum distributions conditioned on
// the last adaptive step's u bucket, plus an independent tail of fallback layers.
EngineTables propagate(const Instance& inst, const AlgoParams& params, Variant variant);

// Per-advertiser belief state of the propagation engine, exposed for invariant tests.
struct AnchorBelief {
  int anchor_time = 0;  // arrival time of the last adaptive step naming it, 0 = never
  int partner = -1;
  int role = 1;  // 1 when the advertiser was the step's a1, 2 when a2
  bool split = false;
  std::array<DiscreteDistribution, 3> cond{DiscreteDistribution::point(0.0),
                                           DiscreteDistribution::point(0.0),
                                           DiscreteDistribution::point(0.0)};
  DiscreteDistribution tail = DiscreteDistribution::point(0.0);

  // Mixture over the anchor's u bucket, max-convolved with the tail.
  DiscreteDistribution unconditional() const;
  // P(Mark = 1..3): uniform over buckets once anchored, else Mark is 3 surely.
  std::array<double, 3> mark_probs() const;
};

struct PropagationTrace {
  EngineTables tables;
  std::vector<std::vector<AnchorBelief>> beliefs;  // [t][a], t = 0..m
};
PropagationTrace propagate_with_beliefs(const Instance& inst, const AlgoParams& params,
                                        Variant variant);

struct McTables {
  std::vector<StepDecision> decisions;  // frozen before sampling
  std::vector<std::vector<double>> e_gain_mean;    // [t-1][a]
  std::vector<std::vector<double>> e_gain_stderr;  // [t-1][a]
  std::vector<double> marginal_mean;               // realized gain of the assigned advertiser
  std::vector<double> marginal_stderr;
  double stoch_alloc_mean = 0.0;
  double stoch_alloc_stderr = 0.0;
  int replicas = 0;
};

// Two-phase sampling: decisions come from the propagation engine and are frozen;
// replicas then draw coins only. Deterministic for a fixed seed.
McTables mc_estimate(const Instance& inst, const AlgoParams& params, Variant variant,
                     int replicas, std::uint64_t seed);

CoinOutcome draw_coins(std::uint64_t seed, std::uint64_t replica, int t);

// Applies one impression's assignment given its decision and coins. Updates maxw and
// mark in place and returns the advertiser assigned.
int apply_assignment(const StepDecision& d, const CoinOutcome& coins, std::vector<double>& maxw,
                     std::vector<std::uint8_t>& mark, const Instance& inst);

}  // namespace owm
