#include "owm/lambda.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "owm/rng.hpp"

namespace owm {

namespace {

TermBreakdown finish(TermBreakdown t) {
  t.binding = 0;
  for (int k = 1; k < kNumLambdaTerms; ++k) {
    if (t.value[k] < t.value[t.binding]) t.binding = k;
  }
  t.min_value = t.value[t.binding];
  return t;
}

std::array<double, kNumLambdaTerms> base_values(const LambdaParams& q) {
  const double e = q.eps, d = q.delta, z = q.zeta, b = q.beta, s = q.sigma;
  const double quad = (324.0 * (1.0 - e) * (1.0 - e) - 361.0 * d) / (18468.0 * (1.0 - e));
  return {(e - 2.0 * b - 2.0 * s) / 2.0,
          (1.0 - 3.0 * e - 4.0 * b - 4.0 * s) / 4.0,
          (2.0 * z * d - 3.0 * e - 6.0 * b - 6.0 * s) / 6.0,
          (2.0 - 21.0 * e) / 19.0,
          (6.0 * z * d - 1.0 - 18.0 * e) / 18.0,
          quad,
          quad * 18.0 * s,
          2.0 * (1.0 - e) / 19.0,
          (1.0 - z) * d / (1.0 + d) * 6.0 * (1.0 - e) / 19.0,
          18.0 * (1.0 - e) / 19.0 * s,
          2.0 * b / (1.0 + d) * 18.0 * (1.0 - e) / 19.0};
}

std::array<double, kNumLambdaTerms> optimized_values(const LambdaParams& q) {
  const double e = q.eps, d = q.delta, z = q.zeta, b = q.beta, s = q.sigma, p = q.p;
  const double quad = (324.0 * (1.0 - e) * (1.0 - e) - 361.0 * d) / (18468.0 * (1.0 - e));
  return {p * e - b - s,
          (1.0 - p) / 2.0 - b - s,
          7.0 * z * d / 18.0 - (1.0 - p) * e - b - s,
          (2.0 - 21.0 * e) / 19.0,
          7.0 * z * d / 18.0 - 1.0 / 18.0 - e,
          quad,
          quad * 18.0 * s,
          2.0 * (1.0 - e) / 19.0,
          (1.0 - z) * d / (1.0 + d) * 7.0 * (1.0 - e) / 19.0,
          18.0 * (1.0 - e) / 19.0 * s,
          2.0 * b / (1.0 + d) * 18.0 * (1.0 - e) / 19.0};
}

TermBreakdown base_terms(const LambdaParams& q) {
  TermBreakdown t;
  t.name = {"(eps - 2 beta - 2 sigma)/2",
            "(1 - 3 eps - 4 beta - 4 sigma)/4",
            "(2 zeta delta - 3 eps - 6 beta - 6 sigma)/6",
            "(2 - 21 eps)/19",
            "(6 zeta delta - 1 - 18 eps)/18",
            "(324 (1-eps)^2 - 361 delta)/(18468 (1-eps))",
            "(324 (1-eps)^2 - 361 delta)/(18468 (1-eps)) * 18 sigma",
            "2 (1-eps)/19",
            "(1-zeta) delta/(1+delta) * 6 (1-eps)/19",
            "18 (1-eps)/19 * sigma",
            "2 beta/(1+delta) * 18 (1-eps)/19"};
  t.value = base_values(q);
  return finish(t);
}

TermBreakdown optimized_terms(const LambdaParams& q) {
  TermBreakdown t;
  t.name = {"p eps - beta - sigma",
            "(1-p)/2 - beta - sigma",
            "7 zeta delta/18 - (1-p) eps - beta - sigma",
            "(2 - 21 eps)/19",
            "7 zeta delta/18 - 1/18 - eps",
            "(324 (1-eps)^2 - 361 delta)/(18468 (1-eps))",
            "(324 (1-eps)^2 - 361 delta)/(18468 (1-eps)) * 18 sigma",
            "2 (1-eps)/19",
            "(1-zeta) delta/(1+delta) * 7 (1-eps)/19",
            "18 (1-eps)/19 * sigma",
            "2 beta/(1+delta) * 18 (1-eps)/19"};
  t.value = optimized_values(q);
  return finish(t);
}

using Point = std::array<double, 6>;

Point to_point(const LambdaParams& q) { return {q.eps, q.delta, q.zeta, q.beta, q.sigma, q.p}; }

LambdaParams to_params(const Point& x) {
  LambdaParams q;
  q.eps = x[0];
  q.delta = x[1];
  q.zeta = x[2];
  q.beta = x[3];
  q.sigma = x[4];
  q.p = x[5];
  return q;
}

// Clip into the box; for the optimized variant lift p to beta + sigma when possible.
Point project(Point x, const ScanBox& box, bool optimized) {
  for (int j = 0; j < 6; ++j) x[j] = std::clamp(x[j], box.lo[j], box.hi[j]);
  if (optimized) x[5] = std::clamp(std::max(x[5], x[3] + x[4]), box.lo[5], box.hi[5]);
  return x;
}

double objective(const Point& x, bool optimized) {
  const auto v = optimized ? optimized_values(to_params(x)) : base_values(to_params(x));
  return *std::min_element(v.begin(), v.end());
}

// Standard reflect/expand/contract/shrink simplex descent on -objective, projected
// into the box after every move. Returns the best point found.
std::pair<Point, double> simplex_search(Point start, const ScanBox& box, bool optimized,
                                        int iters) {
  const int dim = optimized ? 6 : 5;
  const double kTol = 1e-10;
  std::vector<Point> xs;
  std::vector<double> fs;
  xs.push_back(project(start, box, optimized));
  fs.push_back(objective(xs[0], optimized));
  for (int j = 0; j < dim; ++j) {
    Point v = start;
    double step = 0.08 * (box.hi[j] - box.lo[j]);  // zero on a collapsed axis
    v[j] += (v[j] + step <= box.hi[j]) ? step : -step;
    xs.push_back(project(v, box, optimized));
    fs.push_back(objective(xs.back(), optimized));
  }

  auto order = [&]() {
    std::vector<int> idx(xs.size());
    for (size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
    std::stable_sort(idx.begin(), idx.end(), [&](int u, int v) { return fs[u] > fs[v]; });
    std::vector<Point> nx;
    std::vector<double> nf;
    for (int k : idx) {
      nx.push_back(xs[k]);
      nf.push_back(fs[k]);
    }
    xs = std::move(nx);
    fs = std::move(nf);
  };

  for (int it = 0; it < iters; ++it) {
    order();
    if (fs.front() - fs.back() < kTol) break;
    const size_t worst = xs.size() - 1;
    Point centroid{};
    for (size_t k = 0; k < worst; ++k)
      for (int j = 0; j < 6; ++j) centroid[j] += xs[k][j] / static_cast<double>(worst);

    auto blend = [&](double coef) {
      Point v;
      for (int j = 0; j < 6; ++j) v[j] = centroid[j] + coef * (centroid[j] - xs[worst][j]);
      return project(v, box, optimized);
    };

    Point xr = blend(1.0);
    double fr = objective(xr, optimized);
    if (fr > fs[0]) {
      Point xe = blend(2.0);
      double fe = objective(xe, optimized);
      if (fe > fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr > fs[worst - 1]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      Point xc = blend(fr > fs[worst] ? 0.5 : -0.5);
      double fc = objective(xc, optimized);
      if (fc > std::max(fr, fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (size_t k = 1; k < xs.size(); ++k) {
          for (int j = 0; j < 6; ++j) xs[k][j] = xs[0][j] + 0.5 * (xs[k][j] - xs[0][j]);
          xs[k] = project(xs[k], box, optimized);
          fs[k] = objective(xs[k], optimized);
        }
      }
    }
  }
  order();
  return {xs.front(), fs.front()};
}

LambdaParams paper_point(LambdaKind kind) {
  LambdaParams q;
  if (kind == LambdaKind::Optimized) {
    q.eps = 0.0805;
    q.delta = 0.4009;
    q.zeta = 0.9216;
    q.beta = 0.0062;
    q.sigma = 0.0555;
    q.p = 0.8613;
  }
  return q;  // defaults are the base point
}

bool inside(const Point& x, const ScanBox& box) {
  for (int j = 0; j < 6; ++j) {
    if (x[j] < box.lo[j] || x[j] > box.hi[j]) return false;
  }
  return true;
}

}  // namespace

TermBreakdown lambda_terms(const LambdaParams& params) { return base_terms(params); }

TermBreakdown lambda_opt_terms(const LambdaParams& params) {
  if (params.p < params.beta + params.sigma) {
    throw std::invalid_argument("optimized guarantee needs p >= beta + sigma");
  }
  return optimized_terms(params);
}

double competitive_ratio(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("the guarantee value must be nonnegative");
  return (0.5 + lambda / 2.0) / (1.0 + lambda / 2.0);
}

MaximizeResult maximize_lambda(LambdaKind kind, int restarts, int iters, std::uint64_t seed) {
  if (restarts <= 0 || iters <= 0) throw std::invalid_argument("search budgets must be positive");
  const bool optimized = kind == LambdaKind::Optimized;
  ScanBox box;  // the full unit box
  Point best{};
  double best_f = -1e300;
  for (int r = 0; r < restarts; ++r) {
    Point start;
    if (r == 0) {
      start = to_point(paper_point(kind));
    } else {
      for (int j = 0; j < 6; ++j) {
        start[j] = draw_unit(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(j),
                             DrawKind::UBucket);
      }
    }
    auto [x, f] = simplex_search(project(start, box, optimized), box, optimized, iters);
    if (f > best_f) {
      best_f = f;
      best = x;
    }
  }
  MaximizeResult out;
  out.params = to_params(best);
  out.breakdown = optimized ? optimized_terms(out.params) : base_terms(out.params);
  return out;
}

ScanResult impossibility_scan(int resolution, int refine_iters, int restarts,
                              const ScanBox* box_override) {
  if (resolution < 1 || refine_iters < 0 || restarts < 1) {
    throw std::invalid_argument("scan budgets must be positive");
  }
  ScanBox box;
  if (box_override != nullptr) {
    box = *box_override;
  } else {
    // Any point with a positive guarantee satisfies eps <= 2/21 (term (2-21 eps)/19),
    // beta + sigma <= p eps <= eps (first term), and 361 delta <= 324 (second-order
    // term), so restricting the grid to this sub-box loses no positive candidate.
    box.hi = {2.0 / 21.0, 0.9, 1.0, 2.0 / 21.0, 2.0 / 21.0, 1.0};
  }

  auto coord = [&](int j, int k) {
    if (resolution == 1) return (box.lo[j] + box.hi[j]) / 2.0;
    return box.lo[j] + (box.hi[j] - box.lo[j]) * k / static_cast<double>(resolution - 1);
  };

  std::vector<std::pair<double, Point>> cells;
  std::array<int, 6> ix{};
  while (true) {
    Point x;
    for (int j = 0; j < 6; ++j) x[j] = coord(j, ix[j]);
    if (x[5] >= x[3] + x[4]) cells.emplace_back(objective(x, true), x);
    int j = 0;
    while (j < 6 && ++ix[j] == resolution) ix[j++] = 0;
    if (j == 6) break;
  }
  if (cells.empty()) {
    // Pathological box with no feasible grid point: fall back to projected points.
    Point mid;
    for (int j = 0; j < 6; ++j) mid[j] = (box.lo[j] + box.hi[j]) / 2.0;
    mid = project(mid, box, true);
    cells.emplace_back(objective(mid, true), mid);
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const auto& u, const auto& v) { return u.first > v.first; });

  std::vector<Point> starts;
  const int top = std::min<int>(restarts, static_cast<int>(cells.size()));
  for (int k = 0; k < top; ++k) starts.push_back(cells[k].second);
  Point warm = to_point(paper_point(LambdaKind::Optimized));
  if (inside(warm, box)) starts.push_back(warm);

  double best_f = cells.front().first;
  Point best = cells.front().second;
  for (const Point& s : starts) {
    auto [x, f] = simplex_search(s, box, true, refine_iters);
    if (f > best_f) {
      best_f = f;
      best = x;
    }
  }

  ScanResult out;
  out.max_value = best_f;
  out.argmax = to_params(best);
  out.below_ceiling = best_f < kImpossibilityCeiling + 1e-6;
  return out;
}

}  // namespace owm
