#include "owm/generators.hpp"

#include <cmath>
#include <stdexcept>

#include "owm/rng.hpp"

namespace owm {

namespace {

Instance fixed(int n, std::vector<std::vector<double>> rows, std::vector<std::string> cols) {
  Instance inst;
  inst.num_advertisers = n;
  inst.weights = std::move(rows);
  inst.col_labels = std::move(cols);
  for (size_t i = 0; i < inst.weights.size(); ++i) inst.row_labels.push_back("i" + std::to_string(i + 1));
  inst.validate();
  return inst;
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  if (spec.family == "figure1") {
    // One advertiser pair; the first arrival's realized gain is 2, and the greedy
    // trace collects 2, 5, 7 on the first advertiser and 3 on the second (value 10).
    return fixed(2, {{2, 0}, {0, 3}, {5, 0}, {7, 0}}, {"a", "a2"});
  }
  if (spec.family == "figure2") {
    // Three arrivals build prior maxima (3, 9, 8); the last row offers (9, 12, 7),
    // so the realized gains at that arrival are (6, 3, 0).
    return fixed(3, {{3, 0, 0}, {0, 9, 0}, {0, 0, 8}, {9, 12, 7}}, {"a", "b", "c"});
  }
  if (spec.family == "figure3") {
    // Six weight-1 edges: i1 -> {a1, a1'}, i2 -> {a2, a2'}, i -> {a1, a2}.
    return fixed(4, {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}}, {"a1", "a1p", "a2", "a2p"});
  }
  if (spec.family == "cascade") {
    // Chained adaptive pairs: the last arrival's candidates were both anchored by
    // earlier arrivals that partner outside the pair.
    return fixed(4, {{1, 0, 0, 1}, {1, 1, 0, 0}, {1, 0, 1, 0}}, {"a1", "a1p", "a2", "aux"});
  }
  if (spec.family == "worstcase_pair") {
    return fixed(2, {{1, 1}, {1, 0}}, {"a", "b"});
  }
  if (spec.family == "triangular") {
    if (spec.n < 1) throw std::invalid_argument("triangular needs a positive size");
    Instance inst;
    inst.num_advertisers = spec.n;
    for (int i = 0; i < spec.n; ++i) {
      std::vector<double> row(spec.n, 0.0);
      for (int a = i; a < spec.n; ++a) row[a] = 1.0;
      inst.weights.push_back(std::move(row));
    }
    inst.validate();
    return inst;
  }
  if (spec.family == "random") {
    if (spec.n < 1 || spec.m < 1) throw std::invalid_argument("random needs positive m and n");
    Instance inst;
    inst.num_advertisers = spec.n;
    for (int i = 0; i < spec.m; ++i) {
      std::vector<double> row(spec.n);
      for (int a = 0; a < spec.n; ++a) {
        double u = draw_unit(spec.seed, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(a), DrawKind::UBucket);
        if (spec.weight_law == "uniform") {
          row[a] = u;
        } else if (spec.weight_law == "ints") {
          row[a] = std::floor(u * 10.0);
        } else {
          throw std::invalid_argument("unknown weight law: " + spec.weight_law);
        }
      }
      inst.weights.push_back(std::move(row));
    }
    inst.validate();
    return inst;
  }
  throw std::invalid_argument("unknown instance family: " + spec.family);
}

}  // namespace owm
