#include "owm/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace owm {

void assert_fail(const char* expr, const char* file, int line, const char* msg) {
  std::ostringstream os;
  os << "invariant violated: " << expr << " at " << file << ":" << line;
  if (msg != nullptr) os << " (" << msg << ")";
  throw std::logic_error(os.str());
}

void Instance::validate() const {
  if (num_advertisers <= 0) throw ParseError("instance has no advertisers");
  for (size_t i = 0; i < weights.size(); ++i) {
    if (static_cast<int>(weights[i].size()) != num_advertisers)
      throw ParseError("row " + std::to_string(i + 1) + " has wrong length");
    for (double w : weights[i]) {
      if (!std::isfinite(w) || w < 0.0)
        throw ParseError("row " + std::to_string(i + 1) + " has a negative or non-finite weight");
    }
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Instance inst;
  std::string line;
  int line_no = 0;
  int m = -1;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++line_no;
      size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };
  std::string content;
  if (!next_content_line(content)) throw ParseError(path + ": missing 'advertisers' header");
  {
    std::istringstream ss(content);
    std::string key;
    ss >> key >> inst.num_advertisers;
    if (key != "advertisers" || ss.fail() || inst.num_advertisers <= 0)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'advertisers <n>'");
  }
  if (!next_content_line(content)) throw ParseError(path + ": missing 'impressions' header");
  {
    std::istringstream ss(content);
    std::string key;
    ss >> key >> m;
    if (key != "impressions" || ss.fail() || m < 0)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'impressions <m>'");
  }
  for (int i = 0; i < m; ++i) {
    if (!next_content_line(content))
      throw ParseError(path + ": expected " + std::to_string(m) + " weight rows, got " + std::to_string(i));
    std::istringstream ss(content);
    std::vector<double> row;
    double w;
    while (ss >> w) row.push_back(w);
    if (!ss.eof()) {
      ss.clear();
      std::string rest;
      if (ss >> rest && !rest.empty())
        throw ParseError(path + ":" + std::to_string(line_no) + ": malformed weight '" + rest + "'");
    }
    if (static_cast<int>(row.size()) != inst.num_advertisers)
      throw ParseError(path + ":" + std::to_string(line_no) + ": row has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(inst.num_advertisers));
    for (double v : row)
      if (!std::isfinite(v) || v < 0.0)
        throw ParseError(path + ":" + std::to_string(line_no) + ": negative or non-finite weight");
    inst.weights.push_back(std::move(row));
  }
  inst.validate();
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out.precision(17);
  out << "advertisers " << inst.num_advertisers << "\n";
  out << "impressions " << inst.num_impressions() << "\n";
  for (const auto& row : inst.weights) {
    for (size_t a = 0; a < row.size(); ++a) out << (a ? " " : "") << row[a];
    out << "\n";
  }
  if (!out) throw ParseError("write failed for " + path);
}

Instance pad_with_dummies(const Instance& inst) {
  Instance out = inst;
  int m = out.num_impressions();
  int n = out.num_advertisers;
  int side = std::max(m, n);
  for (auto& row : out.weights) row.resize(side, 0.0);
  out.num_advertisers = side;
  while (static_cast<int>(out.weights.size()) < side)
    out.weights.emplace_back(side, 0.0);
  return out;
}

std::vector<std::vector<double>> AssignmentTrace::max_weights(const Instance& inst) const {
  int m = inst.num_impressions();
  int n = inst.num_advertisers;
  OWM_ASSERT(static_cast<int>(assigned.size()) == m);
  std::vector<std::vector<double>> mw(m + 1, std::vector<double>(n, 0.0));
  for (int t = 1; t <= m; ++t) {
    mw[t] = mw[t - 1];
    int a = assigned[t - 1];
    OWM_ASSERT(a >= 0 && a < n);
    mw[t][a] = std::max(mw[t][a], inst.weight(t - 1, a));
  }
  return mw;
}

double allocation_value(const Instance& inst, const AssignmentTrace& trace) {
  std::vector<double> best(inst.num_advertisers, 0.0);
  for (size_t i = 0; i < trace.assigned.size(); ++i) {
    int a = trace.assigned[i];
    if (a < 0 || a >= inst.num_advertisers) throw std::out_of_range("trace references unknown advertiser");
    best[a] = std::max(best[a], inst.weight(static_cast<int>(i), a));
  }
  double total = 0.0;
  for (double b : best) total += b;
  return total;
}

namespace {

// Max-weight assignment on a square matrix via the potentials method; O(side^3).
// rows/cols select the live submatrix so the lexicographic fixing below can re-solve
// shrinking subproblems without copying.
double solve_assignment(const std::vector<std::vector<double>>& w,
                        const std::vector<int>& rows, const std::vector<int>& cols) {
  int nr = static_cast<int>(rows.size());
  int nc = static_cast<int>(cols.size());
  if (nr == 0 || nc == 0) return 0.0;
  OWM_ASSERT(nr <= nc);
  const double inf = std::numeric_limits<double>::infinity();
  // Minimize negated weights; u/v are dual potentials, standard row-by-row growth.
  std::vector<double> u(nr + 1, 0.0), v(nc + 1, 0.0);
  std::vector<int> p(nc + 1, -1);   // p[j] = row matched to column j (indices into rows)
  std::vector<int> way(nc + 1, 0);
  for (int r = 0; r < nr; ++r) {
    int j0 = nc;  // virtual column holding the unassigned row
    p[j0] = r;
    std::vector<double> minv(nc + 1, inf);
    std::vector<char> used(nc + 1, 0);
    do {
      used[j0] = 1;
      int r0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 0; j < nc; ++j) {
        if (used[j]) continue;
        double cur = -w[rows[r0]][cols[j]] - u[r0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      OWM_ASSERT(j1 >= 0);
      for (int j = 0; j <= nc; ++j) {
        if (used[j]) {
          if (p[j] >= 0) u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != -1);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != nc);
  }
  double total = 0.0;
  for (int j = 0; j < nc; ++j)
    if (p[j] >= 0) total += w[rows[p[j]]][cols[j]];
  return total;
}

}  // namespace

OfflineMatching offline_optimum(const Instance& inst) {
  Instance sq = pad_with_dummies(inst);
  int side = sq.num_advertisers;
  int m = inst.num_impressions();
  int n = inst.num_advertisers;

  std::vector<int> all_rows(side), all_cols(side);
  for (int k = 0; k < side; ++k) all_rows[k] = all_cols[k] = k;
  double best = solve_assignment(sq.weights, all_rows, all_cols);

  // Fix the assignment row by row, lowest advertiser first, keeping total optimal.
  // Sums on both sides of the comparison are over the same weights, so the relative
  // tolerance only has to absorb reassociation error.
  OfflineMatching out;
  out.match.assign(m, -1);
  std::vector<char> used(side, 0);
  double fixed = 0.0;
  const double tol = 1e-9 * std::max(1.0, std::abs(best));
  for (int i = 0; i < side && i < m; ++i) {  // rows past m are dummies, any completion works
    std::vector<int> rest_rows;
    for (int r = i + 1; r < side; ++r) rest_rows.push_back(r);
    int chosen = -1;
    for (int a = 0; a < side && chosen < 0; ++a) {
      if (used[a]) continue;
      std::vector<int> rest_cols;
      for (int c = 0; c < side; ++c)
        if (!used[c] && c != a) rest_cols.push_back(c);
      double completion = solve_assignment(sq.weights, rest_rows, rest_cols);
      if (fixed + sq.weight(i, a) + completion >= best - tol) chosen = a;
    }
    OWM_ASSERT(chosen >= 0);
    used[chosen] = 1;
    fixed += sq.weight(i, chosen);
    if (i < m && chosen < n) out.match[i] = chosen;
    if (i < m && chosen >= n) out.match[i] = -1;  // matched to a dummy column
  }
  out.value = 0.0;
  for (int i = 0; i < m; ++i)
    if (out.match[i] >= 0) out.value += inst.weight(i, out.match[i]);
  return out;
}

}  // namespace owm
