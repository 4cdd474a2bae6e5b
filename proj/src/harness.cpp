#include "owm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace owm {

std::string format_sig(double v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::vector<SuiteRow> run_suite(const std::vector<std::pair<std::string, Instance>>& instances,
                                const std::vector<SuiteConfig>& configs) {
  std::vector<SuiteRow> rows;
  for (const auto& [name, inst] : instances) {
    for (const SuiteConfig& cfg : configs) {
      auto start = std::chrono::steady_clock::now();
      RunReport rep = expected_value(inst, cfg.run);
      auto stop = std::chrono::steady_clock::now();
      SuiteRow row;
      row.instance = name;
      row.config = cfg.name;
      row.engine = cfg.run.variant == Variant::Greedy ? "greedy" : to_string(cfg.run.engine);
      row.value = rep.value;
      row.opt = rep.opt;
      row.ratio = rep.ratio;
      row.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SuiteRow& a, const SuiteRow& b) {
    if (a.instance != b.instance) return a.instance < b.instance;
    return a.config < b.config;
  });
  return rows;
}

std::string suite_csv(const std::vector<SuiteRow>& rows, bool include_runtime) {
  std::ostringstream os;
  os << "instance,config,engine,value,opt,ratio";
  if (include_runtime) os << ",runtime_ms";
  os << "\n";
  for (const SuiteRow& r : rows) {
    os << r.instance << ',' << r.config << ',' << r.engine << ',' << format_sig(r.value) << ','
       << format_sig(r.opt) << ',' << format_sig(r.ratio);
    if (include_runtime) os << ',' << format_sig(r.runtime_ms, 4);
    os << "\n";
  }
  return os.str();
}

void write_suite_csv(const std::vector<SuiteRow>& rows, const std::string& path,
                     bool include_runtime) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << suite_csv(rows, include_runtime);
  if (!out) throw std::runtime_error("failed writing: " + path);
}

void emit_plot_data(const std::vector<SuiteRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "instance,algorithm,ratio\n";
  for (const SuiteRow& r : rows) {
    out << r.instance << ',' << r.config << ',' << format_sig(r.ratio) << "\n";
  }
  if (!out) throw std::runtime_error("failed writing: " + path);
}

}  // namespace owm
