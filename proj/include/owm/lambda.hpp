#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace owm {

// Parameters of the per-impression excess guarantee. p participates only in the
// optimized variant, which also requires p >= beta + sigma.
struct LambdaParams {
  double eps = 0.082;
  double delta = 0.445;
  double zeta = 0.955;
  double beta = 0.00337198;
  double sigma = 0.03362;
  double p = 0.8613;
};

inline constexpr int kNumLambdaTerms = 11;

struct TermBreakdown {
  std::array<std::string, kNumLambdaTerms> name;
  std::array<double, kNumLambdaTerms> value{};
  double min_value = 0.0;
  int binding = 0;  // index of the smallest term
};

// The guarantee of the base policy: min of 11 closed-form terms; may be negative.
TermBreakdown lambda_terms(const LambdaParams& params);

// The optimized policy's guarantee, relative to E[Gain_{i,a*_i}] instead of M_i.
// Throws std::invalid_argument when p < beta + sigma.
TermBreakdown lambda_opt_terms(const LambdaParams& params);

// (1/2 + lambda/2) / (1 + lambda/2); throws std::invalid_argument for negative lambda.
double competitive_ratio(double lambda);

enum class LambdaKind { Base, Optimized };

struct MaximizeResult {
  LambdaParams params;
  TermBreakdown breakdown;
};

// Multi-start simplex search over the parameter box, p >= beta + sigma enforced by
// projection. Deterministic for a fixed seed; ties keep the earliest restart.
MaximizeResult maximize_lambda(LambdaKind kind, int restarts, int iters, std::uint64_t seed);

// Axis order everywhere: eps, delta, zeta, beta, sigma, p.
struct ScanBox {
  std::array<double, 6> lo{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  std::array<double, 6> hi{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
};

// No parameter setting pushes the optimized guarantee above this value.
inline constexpr double kImpossibilityCeiling = 0.00762899;

struct ScanResult {
  double max_value = 0.0;
  LambdaParams argmax;
  bool below_ceiling = false;  // max_value < kImpossibilityCeiling + 1e-6
};

// Coarse grid over the box (restricted by default to the region where every term can
// be positive) followed by simplex refinement from the best cells.
ScanResult impossibility_scan(int resolution, int refine_iters, int restarts = 32,
                              const ScanBox* box = nullptr);

}  // namespace owm
