#pragma once

#include <string>
#include <utility>
#include <vector>

#include "owm/instance.hpp"
#include "owm/matchers.hpp"
#include "owm/params.hpp"

namespace owm {

struct SuiteConfig {
  std::string name;  // printed in the report's config column
  RunConfig run;
};

struct SuiteRow {
  std::string instance;
  std::string config;
  std::string engine;
  double value = 0.0;
  double opt = 0.0;
  double ratio = 0.0;
  double runtime_ms = 0.0;
};

// One report row per (instance, config), sorted by (instance, config).
std::vector<SuiteRow> run_suite(const std::vector<std::pair<std::string, Instance>>& instances,
                                const std::vector<SuiteConfig>& configs);

// Fixed header order; 12 significant digits. The runtime column is opt-in because the
// report must be byte-identical across runs with the same seed.
std::string suite_csv(const std::vector<SuiteRow>& rows, bool include_runtime = false);
void write_suite_csv(const std::vector<SuiteRow>& rows, const std::string& path,
                     bool include_runtime = false);

// (instance, algorithm, ratio) columns for external plotting, same ordering and digits.
void emit_plot_data(const std::vector<SuiteRow>& rows, const std::string& path);

std::string format_sig(double v, int digits = 12);

}  // namespace owm
