#include "owm/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "owm/instance.hpp"

namespace owm {

namespace {
constexpr double kSupportEps = 1e-12;
constexpr double kProbEps = 1e-12;
}  // namespace

DiscreteDistribution DiscreteDistribution::point(double value) {
  return DiscreteDistribution{{value}, {1.0}};
}

double DiscreteDistribution::expectation() const {
  double s = 0.0;
  for (size_t k = 0; k < w.size(); ++k) s += w[k] * p[k];
  return s;
}

double DiscreteDistribution::expected_gain(double x) const {
  double s = 0.0;
  for (size_t k = 0; k < w.size(); ++k) s += p[k] * pos_part(x - w[k]);
  return s;
}

double DiscreteDistribution::expected_excess(double x) const {
  double s = 0.0;
  for (size_t k = 0; k < w.size(); ++k) s += p[k] * pos_part(w[k] - x);
  return s;
}

bool DiscreteDistribution::dominates(const DiscreteDistribution& other) const {
  // CDF of *this must not exceed CDF of other anywhere on the union support.
  size_t i = 0, j = 0;
  double ci = 0.0, cj = 0.0;
  while (i < w.size() || j < other.w.size()) {
    double x;
    if (j >= other.w.size() || (i < w.size() && w[i] <= other.w[j]))
      x = w[i];
    else
      x = other.w[j];
    while (i < w.size() && w[i] <= x + kSupportEps) ci += p[i++];
    while (j < other.w.size() && other.w[j] <= x + kSupportEps) cj += other.p[j++];
    if (ci > cj + 1e-9) return false;
  }
  return true;
}

void DiscreteDistribution::validate() const {
  OWM_ASSERT(w.size() == p.size());
  OWM_ASSERT(!w.empty());
  double total = 0.0;
  for (size_t k = 0; k < w.size(); ++k) {
    OWM_ASSERT(std::isfinite(w[k]) && w[k] >= 0.0);
    OWM_ASSERT(p[k] >= 0.0 && p[k] <= 1.0 + kProbEps);
    if (k > 0) OWM_ASSERT(w[k] > w[k - 1]);
    total += p[k];
  }
  OWM_ASSERT(std::abs(total - 1.0) <= 1e-12);
}

void normalize_support(std::vector<double>& w, std::vector<double>& p) {
  std::vector<size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return w[a] < w[b]; });
  std::vector<double> nw, np;
  for (size_t idx : order) {
    if (!nw.empty() && w[idx] - nw.back() <= kSupportEps) {
      np.back() += p[idx];
    } else {
      nw.push_back(w[idx]);
      np.push_back(p[idx]);
    }
  }
  // Drop zero-mass points but keep at least one so the object stays a distribution.
  std::vector<double> fw, fp;
  for (size_t k = 0; k < nw.size(); ++k) {
    if (np[k] > 0.0) {
      fw.push_back(nw[k]);
      fp.push_back(np[k]);
    }
  }
  if (fw.empty()) {
    fw.push_back(nw.empty() ? 0.0 : nw[0]);
    fp.push_back(1.0);
  }
  w = std::move(fw);
  p = std::move(fp);
}

DiscreteDistribution max_convolve(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  // P(max <= x) = Fa(x) * Fb(x); evaluate on the union support and difference.
  std::vector<double> support = a.w;
  support.insert(support.end(), b.w.begin(), b.w.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end(),
                            [](double x, double y) { return y - x <= kSupportEps; }),
                support.end());
  DiscreteDistribution out;
  size_t ia = 0, ib = 0;
  double fa = 0.0, fb = 0.0, prev = 0.0;
  for (double x : support) {
    while (ia < a.w.size() && a.w[ia] <= x + kSupportEps) fa += a.p[ia++];
    while (ib < b.w.size() && b.w[ib] <= x + kSupportEps) fb += b.p[ib++];
    double cdf = fa * fb;
    double mass = cdf - prev;
    prev = cdf;
    out.w.push_back(x);
    out.p.push_back(mass < 0.0 ? 0.0 : mass);
  }
  normalize_support(out.w, out.p);
  return out;
}

DiscreteDistribution max_with_point(const DiscreteDistribution& d, double v) {
  DiscreteDistribution out;
  double below = 0.0;
  for (size_t k = 0; k < d.w.size(); ++k) {
    if (d.w[k] <= v + kSupportEps) {
      below += d.p[k];
    } else {
      out.w.push_back(d.w[k]);
      out.p.push_back(d.p[k]);
    }
  }
  out.w.insert(out.w.begin(), v);
  out.p.insert(out.p.begin(), below);
  normalize_support(out.w, out.p);
  return out;
}

DiscreteDistribution mix(const std::vector<std::pair<double, const DiscreteDistribution*>>& parts) {
  DiscreteDistribution out;
  double coeff_total = 0.0;
  for (const auto& [c, d] : parts) {
    OWM_ASSERT(c >= 0.0);
    coeff_total += c;
    for (size_t k = 0; k < d->w.size(); ++k) {
      out.w.push_back(d->w[k]);
      out.p.push_back(c * d->p[k]);
    }
  }
  OWM_ASSERT(std::abs(coeff_total - 1.0) <= 1e-12);
  normalize_support(out.w, out.p);
  return out;
}

}  // namespace owm
