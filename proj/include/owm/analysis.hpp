#pragma once

#include <string>
#include <vector>

#include "owm/engines.hpp"
#include "owm/instance.hpp"
#include "owm/params.hpp"

namespace owm {

// Per-impression split of 2 * StochAlloc - OPT into X + Y + Z, computed from exact
// engine tables. Requires a square (padded) instance so every impression has an
// offline partner a*_i.
struct Decomposition {
  Variant variant = Variant::SG;
  EngineTables tables;
  OfflineMatching opt;
  std::vector<int> a_star;        // offline partner per impression
  std::vector<int> opt_impression;  // inverse: impression matched to each advertiser
  std::vector<double> x, y, z;
  // delta_y[t][i']: increase of E[MaxW_a] at time t for a = a*_{i'}, t >= t_{i'}.
  // delta_z[t][i']: increase of E[(MaxW_a - w_{i',a})^+] at time t, t < t_{i'}.
  // Both are zero outside their time ranges; t runs 1..m.
  std::vector<std::vector<double>> delta_y, delta_z;
  double stoch_alloc = 0.0;
  double opt_value = 0.0;

  double xyz_total() const;
  // 2 * StochAlloc - OPT - sum(X + Y + Z); zero up to float error for exact engines.
  double identity_residual() const;
};

// The verifier runs on exact tables only; the default enumeration engine refuses
// instances beyond the cap instead of falling back to estimates.
Decomposition decompose(const Instance& inst, const AlgoParams& params, Variant variant,
                        Engine engine = Engine::Enum);

// Redistribution weights of the charging mechanism.
struct ChargeParams {
  double zeta = 0.955;
  double beta = 0.00337198;
  double sigma = 0.03362;
};

struct AuditEntry {
  int t = 0;                // time of the charge
  std::string rule;         // which mechanism line produced it
  int impression = -1;      // recipient, -1 for dropped amounts
  double amount = 0.0;
};

struct ExcessLedger {
  std::vector<double> excess;  // per impression
  std::vector<AuditEntry> audit;
  double dropped = 0.0;  // undeliverable fallback shares (no indexed recipient)
  double total() const;
};

// Distributes sum(X + Y + Z) into per-impression Excess using the variant's charging
// rules; the grand total matches xyz_total() by construction.
ExcessLedger run_mechanism(const Decomposition& dec, const Instance& inst,
                           const AlgoParams& algo, const ChargeParams& charge);

struct BoundRow {
  int impression = 0;
  double x = 0.0, y = 0.0, z = 0.0;
  double excess = 0.0;
  double bound = 0.0;  // lambda * M_i, or lambda * E[Gain_{i, a*_i}] for the optimized variant
  double margin = 0.0;
  bool pass = false;
};

struct BoundsReport {
  std::vector<BoundRow> rows;
  bool all_pass = true;
  double ledger_residual = 0.0;  // sum(Excess) - sum(X + Y + Z)
  double identity_residual = 0.0;
};

inline constexpr double kBoundTolerance = 1e-9;

BoundsReport verify_bounds(const Decomposition& dec, const ExcessLedger& ledger, double lambda);

}  // namespace owm
