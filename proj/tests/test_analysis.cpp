#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "owm/analysis.hpp"
#include "owm/engines.hpp"
#include "owm/generators.hpp"
#include "owm/instance.hpp"
#include "owm/params.hpp"
#include "test_support.hpp"

using namespace owm;
using owm_test::random_suite_instance;

namespace {

Instance make(int n, std::vector<std::vector<double>> rows) {
  Instance inst;
  inst.num_advertisers = n;
  inst.weights = std::move(rows);
  inst.validate();
  return inst;
}

AlgoParams optimized_algo() {
  AlgoParams algo;
  algo.eps = 0.0805;
  algo.delta = 0.4009;
  algo.p = 0.8613;
  return algo;
}

ChargeParams optimized_charge() {
  ChargeParams charge;
  charge.zeta = 0.9216;
  charge.beta = 0.0062;
  charge.sigma = 0.0555;
  return charge;
}

double rule_sum(const ExcessLedger& led, const std::string& prefix) {
  double s = 0.0;
  for (const AuditEntry& e : led.audit)
    if (e.rule.rfind(prefix, 0) == 0) s += e.amount;
  return s;
}

}  // namespace

TEST_CASE("single impression decomposes into pure partner growth") {
  Instance inst = pad_with_dummies(make(2, {{1.0, 0.3}}));
  REQUIRE(inst.num_impressions() == 2);
  AlgoParams params;
  Decomposition dec = decompose(inst, params, Variant::SG);
  CHECK(dec.a_star == std::vector<int>{0, 1});
  CHECK(dec.x[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.y[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dec.z[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.x[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.y[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.z[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.xyz_total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(dec.identity_residual()) <= 1e-12);

  ChargeParams charge;
  ExcessLedger led = run_mechanism(dec, inst, params, charge);
  CHECK(led.excess[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(led.excess[1] == doctest::Approx(0.0).epsilon(1e-12));
  // The lone fallback step has no indexed recipient yet, so the whole share pool
  // is dropped rather than deducted from anyone.
  CHECK(led.dropped == doctest::Approx(charge.beta + charge.sigma).epsilon(1e-12));
  CHECK(led.total() == doctest::Approx(dec.xyz_total()).epsilon(1e-12));

  BoundsReport ok = verify_bounds(dec, led, 0.00400802);
  CHECK(ok.all_pass);
  CHECK(std::abs(ok.ledger_residual) <= 1e-12);
  CHECK(std::abs(ok.identity_residual) <= 1e-12);
  CHECK(ok.rows[0].bound == doctest::Approx(0.00400802).epsilon(1e-12));
  CHECK(ok.rows[1].bound == 0.0);

  BoundsReport bad = verify_bounds(dec, led, 10.0);
  CHECK_FALSE(bad.all_pass);
  CHECK(bad.rows[0].margin < 0.0);
}

TEST_CASE("figure3 decomposition and ledger match the hand computation") {
  Instance inst = pad_with_dummies(generate({.family = "figure3"}));
  REQUIRE(inst.num_impressions() == 4);
  AlgoParams params;
  Decomposition dec = decompose(inst, params, Variant::SG);

  CHECK(dec.a_star == std::vector<int>{0, 3, 2, 1});
  CHECK(dec.opt_value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(dec.stoch_alloc == doctest::Approx(23.0 / 9.0).epsilon(1e-12));

  // Worked by hand from the branch tree: the anchored advertiser keeps an
  // anti-correlated second chance (29/36 instead of the independent 3/4).
  CHECK(dec.x[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.x[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.x[2] == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
  CHECK(dec.x[3] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.y[0] == doctest::Approx(29.0 / 36.0).epsilon(1e-12));
  CHECK(dec.y[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dec.y[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dec.y[3] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.z[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.z[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.z[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.z[3] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dec.xyz_total() == doctest::Approx(19.0 / 9.0).epsilon(1e-12));
  CHECK(std::abs(dec.identity_residual()) <= 1e-12);

  // Spot deltas: the first arrival lifts its partner's maximum by 1/2 at t=1,
  // and the dummy impression's z mass accrues at t=1 on advertiser 1.
  CHECK(dec.delta_y[1][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dec.delta_y[3][0] == doctest::Approx(11.0 / 36.0).epsilon(1e-12));
  CHECK(dec.delta_y[2][1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dec.delta_z[1][3] == doctest::Approx(0.5).epsilon(1e-12));

  ChargeParams charge;
  ExcessLedger led = run_mechanism(dec, inst, params, charge);
  const double zeta = charge.zeta;
  CHECK(led.excess[0] ==
        doctest::Approx(0.5 + (1.0 - zeta) * 0.5 + 11.0 / 72.0 + 1.0 / 54.0).epsilon(1e-12));
  CHECK(led.excess[1] == doctest::Approx(0.5 + 1.0 / 8.0 + 1.0 / 54.0).epsilon(1e-12));
  CHECK(led.excess[2] == doctest::Approx(11.0 / 72.0 + 1.0 / 8.0 + 1.0 / 54.0).epsilon(1e-12));
  CHECK(led.excess[3] == doctest::Approx(zeta * 0.5).epsilon(1e-12));
  CHECK(led.total() == doctest::Approx(19.0 / 9.0).epsilon(1e-12));
  CHECK(led.dropped == 0.0);

  BoundsReport rep = verify_bounds(dec, led, 0.00400802);
  CHECK(rep.all_pass);
  for (const BoundRow& row : rep.rows) CHECK(row.margin >= -kBoundTolerance);
}

TEST_CASE("decomposition identity holds across the random family") {
  for (int k = 0; k < 100; ++k) {
    CAPTURE(k);
    Instance inst = pad_with_dummies(random_suite_instance(k));
    for (Variant variant : {Variant::SG, Variant::OSG}) {
      CAPTURE(to_string(variant));
      AlgoParams algo = variant == Variant::OSG ? optimized_algo() : AlgoParams{};
      for (Engine engine : {Engine::Enum, Engine::Dist}) {
        Decomposition dec = decompose(inst, algo, variant, engine);
        CHECK(std::abs(dec.identity_residual()) <= 1e-9);
        const int m = inst.num_impressions();
        for (int i = 0; i < m; ++i) {
          CAPTURE(i);
          CHECK(dec.z[i] >= -1e-12);
          CHECK(dec.y[i] >= -1e-12);
          double ysum = 0.0, zsum = 0.0;
          for (int t = 0; t <= m; ++t) {
            CHECK(dec.delta_y[t][i] >= -1e-12);
            CHECK(dec.delta_z[t][i] >= -1e-12);
            if (t < i + 1) CHECK(dec.delta_y[t][i] == 0.0);
            if (t >= i + 1) CHECK(dec.delta_z[t][i] == 0.0);
            ysum += dec.delta_y[t][i];
            zsum += dec.delta_z[t][i];
          }
          CHECK(ysum == doctest::Approx(dec.y[i]).epsilon(1e-10));
          CHECK(zsum == doctest::Approx(dec.z[i]).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("both exact engines produce the same decomposition") {
  for (int k = 0; k < 20; ++k) {
    CAPTURE(k);
    Instance inst = pad_with_dummies(random_suite_instance(k));
    AlgoParams params;
    Decomposition a = decompose(inst, params, Variant::SG, Engine::Enum);
    Decomposition b = decompose(inst, params, Variant::SG, Engine::Dist);
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) {
      CHECK(a.x[i] == doctest::Approx(b.x[i]).epsilon(5e-12));
      CHECK(a.y[i] == doctest::Approx(b.y[i]).epsilon(5e-12));
      CHECK(a.z[i] == doctest::Approx(b.z[i]).epsilon(5e-12));
    }
  }
}

TEST_CASE("mechanism ledgers balance and audits group cleanly") {
  for (int k = 0; k < 100; ++k) {
    CAPTURE(k);
    Instance inst = pad_with_dummies(random_suite_instance(k));
    for (Variant variant : {Variant::SG, Variant::OSG}) {
      CAPTURE(to_string(variant));
      AlgoParams algo = variant == Variant::OSG ? optimized_algo() : AlgoParams{};
      ChargeParams charge = variant == Variant::OSG ? optimized_charge() : ChargeParams{};
      Decomposition dec = decompose(inst, algo, variant);
      ExcessLedger led = run_mechanism(dec, inst, algo, charge);
      CHECK(led.total() == doctest::Approx(dec.xyz_total()).epsilon(1e-9));

      double xsum = 0.0, ysum = 0.0, zsum = 0.0;
      for (std::size_t i = 0; i < dec.x.size(); ++i) {
        xsum += dec.x[i];
        ysum += dec.y[i];
        zsum += dec.z[i];
      }
      CHECK(rule_sum(led, "y-split") == doctest::Approx(ysum).epsilon(1e-10));
      CHECK(rule_sum(led, "z-") == doctest::Approx(zsum).epsilon(1e-10));
      double xrules = rule_sum(led, "adaptive-") + rule_sum(led, "fallback-index") +
                      rule_sum(led, "fallback-star") + rule_sum(led, "fallback-net");
      CHECK(xrules == doctest::Approx(xsum).epsilon(1e-10));
      CHECK(rule_sum(led, "fallback-drop") == doctest::Approx(led.dropped).epsilon(1e-12));
    }
  }
}

TEST_CASE("per-impression excess clears the certified bound on the random family") {
  const double lambda_base = 0.00400802;
  const double lambda_opt = 0.0076;
  for (int k = 0; k < 100; ++k) {
    CAPTURE(k);
    Instance inst = pad_with_dummies(random_suite_instance(k));
    for (Variant variant : {Variant::SG, Variant::OSG}) {
      CAPTURE(to_string(variant));
      AlgoParams algo = variant == Variant::OSG ? optimized_algo() : AlgoParams{};
      ChargeParams charge = variant == Variant::OSG ? optimized_charge() : ChargeParams{};
      double lambda = variant == Variant::OSG ? lambda_opt : lambda_base;
      Decomposition dec = decompose(inst, algo, variant);
      ExcessLedger led = run_mechanism(dec, inst, algo, charge);
      BoundsReport rep = verify_bounds(dec, led, lambda);
      CHECK(std::abs(rep.ledger_residual) <= 1e-9);
      CHECK(std::abs(rep.identity_residual) <= 1e-9);
      for (const BoundRow& row : rep.rows) {
        CAPTURE(row.impression);
        CHECK(row.margin >= -kBoundTolerance);
      }
      CHECK(rep.all_pass);
    }
  }
}

TEST_CASE("decompose rejects unpadded instances and sampling engines") {
  AlgoParams params;
  Instance wide = make(3, {{1.0, 2.0, 3.0}, {0.5, 0.5, 0.5}});
  CHECK_THROWS_AS(decompose(wide, params, Variant::SG), std::invalid_argument);
  Instance square = pad_with_dummies(wide);
  CHECK_NOTHROW(decompose(square, params, Variant::SG));
  CHECK_THROWS_AS(decompose(square, params, Variant::SG, Engine::MC), std::invalid_argument);
}
