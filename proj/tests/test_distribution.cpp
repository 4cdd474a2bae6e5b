#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "owm/distribution.hpp"
#include "owm/rng.hpp"

using namespace owm;

namespace {

DiscreteDistribution from_pairs(std::vector<double> w, std::vector<double> p) {
  normalize_support(w, p);
  DiscreteDistribution d;
  d.w = std::move(w);
  d.p = std::move(p);
  d.validate();
  return d;
}

DiscreteDistribution random_dist(std::uint64_t seed, int atoms) {
  std::vector<double> w(atoms), p(atoms);
  double total = 0.0;
  for (int k = 0; k < atoms; ++k) {
    w[k] = draw_unit(seed, k, 0, DrawKind::UBucket) * 5.0;
    p[k] = 0.05 + draw_unit(seed, k, 1, DrawKind::UBucket);
    total += p[k];
  }
  for (double& q : p) q /= total;
  return from_pairs(std::move(w), std::move(p));
}

// Independent oracle: P(max(X,Y) = v) accumulated pair by pair.
DiscreteDistribution slow_max_convolve(const DiscreteDistribution& a,
                                       const DiscreteDistribution& b) {
  std::vector<double> w, p;
  for (size_t i = 0; i < a.w.size(); ++i) {
    for (size_t j = 0; j < b.w.size(); ++j) {
      w.push_back(std::max(a.w[i], b.w[j]));
      p.push_back(a.p[i] * b.p[j]);
    }
  }
  return from_pairs(std::move(w), std::move(p));
}

double slow_moment(const DiscreteDistribution& d, double x, bool excess) {
  double s = 0.0;
  for (size_t k = 0; k < d.w.size(); ++k)
    s += d.p[k] * (excess ? std::max(d.w[k] - x, 0.0) : std::max(x - d.w[k], 0.0));
  return s;
}

void check_equal(const DiscreteDistribution& got, const DiscreteDistribution& want) {
  REQUIRE(got.w.size() == want.w.size());
  for (size_t k = 0; k < got.w.size(); ++k) {
    CHECK(got.w[k] == doctest::Approx(want.w[k]).epsilon(1e-12));
    CHECK(got.p[k] == doctest::Approx(want.p[k]).epsilon(1e-12));
  }
}

}  // namespace

TEST_CASE("point distribution") {
  DiscreteDistribution d = DiscreteDistribution::point(2.5);
  REQUIRE(d.w.size() == 1);
  CHECK(d.w[0] == 2.5);
  CHECK(d.p[0] == 1.0);
  CHECK(d.expectation() == 2.5);
  CHECK(d.expected_gain(4.0) == 1.5);
  CHECK(d.expected_gain(1.0) == 0.0);
  CHECK(d.expected_excess(1.0) == 1.5);
  CHECK(d.expected_excess(4.0) == 0.0);
}

TEST_CASE("validation catches broken invariants") {
  DiscreteDistribution d;
  d.w = {1.0, 0.5};
  d.p = {0.5, 0.5};
  CHECK_THROWS(d.validate());
  d.w = {0.5};
  CHECK_THROWS(d.validate());
  d.w = {0.5, 1.0};
  d.p = {0.7, 0.7};
  CHECK_THROWS(d.validate());
  d.p = {0.5, 0.5};
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("normalize_support merges near-duplicates and drops dead atoms") {
  std::vector<double> w{1.0, 1.0 + 1e-13, 0.25, 3.0};
  std::vector<double> p{0.25, 0.25, 0.5, 0.0};
  normalize_support(w, p);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == 0.25);
  CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);

  // A distribution must keep at least one atom even if every probability is zero.
  std::vector<double> w1{2.0};
  std::vector<double> p1{1.0};
  normalize_support(w1, p1);
  REQUIRE(w1.size() == 1);
}

TEST_CASE("gain and excess satisfy the signed identity") {
  // (x - X)^+ - (X - x)^+ = x - X pointwise, so the expectations obey the same.
  for (int k = 0; k < 100; ++k) {
    DiscreteDistribution d = random_dist(900 + k, 1 + k % 6);
    double x = draw_unit(901, k, 0, DrawKind::UBucket) * 6.0;
    double lhs = d.expected_gain(x) - d.expected_excess(x);
    CHECK(lhs == doctest::Approx(x - d.expectation()).epsilon(1e-12));
    CHECK(d.expected_gain(x) == doctest::Approx(slow_moment(d, x, false)).epsilon(1e-12));
    CHECK(d.expected_excess(x) == doctest::Approx(slow_moment(d, x, true)).epsilon(1e-12));
    // Monotonicity in the probe point.
    CHECK(d.expected_gain(x + 0.25) >= d.expected_gain(x));
    CHECK(d.expected_excess(x + 0.25) <= d.expected_excess(x));
  }
}

TEST_CASE("max convolution against the pairwise oracle") {
  for (int k = 0; k < 120; ++k) {
    DiscreteDistribution a = random_dist(700 + k, 1 + k % 5);
    DiscreteDistribution b = random_dist(800 + k, 1 + (k / 5) % 5);
    DiscreteDistribution got = max_convolve(a, b);
    DiscreteDistribution want = slow_max_convolve(a, b);
    CAPTURE(k);
    check_equal(got, want);
    // max(X, Y) dominates both inputs.
    CHECK(got.dominates(a));
    CHECK(got.dominates(b));
    CHECK(got.expectation() >= a.expectation() - 1e-12);
  }
}

TEST_CASE("max convolution with a point mass") {
  for (int k = 0; k < 60; ++k) {
    DiscreteDistribution d = random_dist(650 + k, 1 + k % 6);
    double v = draw_unit(651, k, 0, DrawKind::UBucket) * 6.0;
    DiscreteDistribution got = max_with_point(d, v);
    DiscreteDistribution want = slow_max_convolve(d, DiscreteDistribution::point(v));
    check_equal(got, want);
  }
  // All mass below the point collapses onto it.
  DiscreteDistribution d = from_pairs({0.0, 1.0, 2.0}, {0.25, 0.25, 0.5});
  DiscreteDistribution up = max_with_point(d, 1.5);
  REQUIRE(up.w.size() == 2);
  CHECK(up.w[0] == 1.5);
  CHECK(up.p[0] == 0.5);
  CHECK(up.w[1] == 2.0);
  CHECK(up.p[1] == 0.5);
}

TEST_CASE("convolution with zero is the identity") {
  for (int k = 0; k < 20; ++k) {
    DiscreteDistribution d = random_dist(600 + k, 1 + k % 6);
    check_equal(max_convolve(d, DiscreteDistribution::point(0.0)), d);
    check_equal(max_with_point(d, 0.0), d);
  }
}

TEST_CASE("mixtures") {
  DiscreteDistribution a = from_pairs({0.0, 2.0}, {0.5, 0.5});
  DiscreteDistribution b = from_pairs({1.0}, {1.0});
  DiscreteDistribution got = mix({{0.25, &a}, {0.75, &b}});
  REQUIRE(got.w.size() == 3);
  CHECK(got.p[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(got.w[1] == 1.0);
  CHECK(got.p[1] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(got.p[2] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(got.expectation() ==
        doctest::Approx(0.25 * a.expectation() + 0.75 * b.expectation()).epsilon(1e-12));

  // Coefficients must total one.
  CHECK_THROWS(mix({{0.5, &a}, {0.25, &b}}));

  // Expected gain is linear under mixtures.
  for (int k = 0; k < 40; ++k) {
    DiscreteDistribution u = random_dist(300 + k, 1 + k % 5);
    DiscreteDistribution v = random_dist(400 + k, 1 + (k / 5) % 5);
    double c = draw_unit(301, k, 0, DrawKind::UBucket);
    DiscreteDistribution m = mix({{c, &u}, {1.0 - c, &v}});
    double x = draw_unit(302, k, 0, DrawKind::UBucket) * 5.0;
    CHECK(m.expected_gain(x) ==
          doctest::Approx(c * u.expected_gain(x) + (1.0 - c) * v.expected_gain(x))
              .epsilon(1e-12));
  }
}

TEST_CASE("stochastic dominance") {
  DiscreteDistribution lo = from_pairs({0.0, 1.0}, {0.5, 0.5});
  DiscreteDistribution hi = from_pairs({0.0, 1.0}, {0.25, 0.75});
  CHECK(hi.dominates(lo));
  CHECK(!lo.dominates(hi));
  CHECK(lo.dominates(lo));
  DiscreteDistribution shifted = from_pairs({0.5, 1.5}, {0.5, 0.5});
  CHECK(shifted.dominates(lo));
}
