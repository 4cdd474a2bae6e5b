#pragma once

#include <vector>

namespace owm {

// Finite distribution of a running-maximum value. Support is strictly increasing;
// probabilities sum to 1 within 1e-12. Support points closer than 1e-12 are merged.
struct DiscreteDistribution {
  std::vector<double> w;  // support, strictly increasing, nonnegative
  std::vector<double> p;  // probabilities, same length

  static DiscreteDistribution point(double value);

  double expectation() const;
  // E[(x - X)^+]: expected gain of bringing weight x against this maximum.
  double expected_gain(double x) const;
  // E[(X - x)^+]: expected part of the maximum exceeding x.
  double expected_excess(double x) const;
  // True when this is stochastically >= other (CDF pointwise <=), up to 1e-12 slack.
  bool dominates(const DiscreteDistribution& other) const;
  void validate() const;
};

// Distribution of max(X, Y) for independent X, Y.
DiscreteDistribution max_convolve(const DiscreteDistribution& a, const DiscreteDistribution& b);

// Distribution of max(X, v): mass below v collapses onto v.
DiscreteDistribution max_with_point(const DiscreteDistribution& d, double v);

// Sum of scaled distributions; coefficients must total 1 within 1e-12.
DiscreteDistribution mix(const std::vector<std::pair<double, const DiscreteDistribution*>>& parts);

// Sorts, merges support points within 1e-12, drops zero-probability points.
void normalize_support(std::vector<double>& w, std::vector<double>& p);

}  // namespace owm
