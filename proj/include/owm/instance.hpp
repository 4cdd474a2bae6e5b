#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace owm {

// Internal invariant violations throw; correctness checks stay on in release builds.
[[noreturn]] void assert_fail(const char* expr, const char* file, int line,
                              const char* msg = nullptr);
#define OWM_ASSERT(expr, ...)                                                      \
  do {                                                                             \
    if (!(expr)) ::owm::assert_fail(#expr, __FILE__, __LINE__ __VA_OPT__(, ) __VA_ARGS__); \
  } while (0)

inline double pos_part(double x) { return x > 0.0 ? x : 0.0; }

// Marginal value of assigning weight w to an advertiser whose current maximum is maxw.
inline double gain(double w, double maxw) { return pos_part(w - maxw); }

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bipartite instance: rows are impressions in arrival order, columns are advertisers.
struct Instance {
  int num_advertisers = 0;
  std::vector<std::vector<double>> weights;  // weights[i][a] >= 0, finite
  std::vector<std::string> row_labels;       // optional, empty or one per row
  std::vector<std::string> col_labels;       // optional

  int num_impressions() const { return static_cast<int>(weights.size()); }
  double weight(int i, int a) const { return weights[i][a]; }
  void validate() const;  // throws ParseError on negative or non-finite entries
};

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// Appends zero rows or zero columns until the matrix is square, so the offline
// optimum becomes a perfect matching. Original arrival order is preserved.
Instance pad_with_dummies(const Instance& inst);

// One full assignment: every impression mapped to exactly one advertiser.
struct AssignmentTrace {
  std::vector<int> assigned;  // per impression, advertiser id

  // Running maxima after each arrival; max_weights()[t][a] = MaxW at time t, t in 0..m.
  std::vector<std::vector<double>> max_weights(const Instance& inst) const;
};

// Objective under free disposal: each advertiser counts only its heaviest assigned edge.
double allocation_value(const Instance& inst, const AssignmentTrace& trace);

struct OfflineMatching {
  double value = 0.0;
  std::vector<int> match;  // per impression, advertiser id or -1 if unmatched
};

// Maximum-weight bipartite matching. Ties are broken canonically: row by row, each
// impression takes the lowest advertiser id that still extends to an optimum (leaving
// an impression unmatched counts as an id past the real ones).
OfflineMatching offline_optimum(const Instance& inst);

}  // namespace owm
