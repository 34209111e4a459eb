#include "shacon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "shacon/rng.hpp"

namespace shacon {

namespace {

double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw StatError("correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double student_t_two_sided_p(double t, double df) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  boost::math::students_t_distribution<double> dist(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))), 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

StatResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw StatError("length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  if (x.size() < 3) throw StatError("spearman needs at least 3 pairs");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double rho = pearson(rx, ry);
  const double df = static_cast<double>(x.size()) - 2.0;
  double p = 0.0;
  if (std::fabs(rho) < 1.0) {
    const double t = rho * std::sqrt(df / ((1.0 - rho) * (1.0 + rho)));
    p = student_t_two_sided_p(t, df);
  }
  return {rho, p, x.size(), df};
}

double spearman_permutation_p(std::span<const double> x, std::span<const double> y, int iterations,
                              std::uint64_t seed) {
  const double observed = std::fabs(spearman(x, y).statistic);
  const auto rx = average_ranks(x);
  auto ry = average_ranks(y);
  SplitMix64 rng(seed);
  int extreme = 0;
  for (int it = 0; it < iterations; ++it) {
    shuffle(ry, rng);
    if (std::fabs(pearson(rx, ry)) >= observed - 1e-12) ++extreme;
  }
  return (static_cast<double>(extreme) + 1.0) / (static_cast<double>(iterations) + 1.0);
}

StatResult t_test(std::span<const double> a, std::span<const double> b, bool paired) {
  if (a.size() < 2 || b.size() < 2) throw StatError("t-test needs at least 2 values per sample");
  if (paired) {
    if (a.size() != b.size()) throw StatError("paired t-test needs equal sample sizes");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const double md = mean(diff);
    const double sd = stddev(diff);
    const double df = static_cast<double>(diff.size()) - 1.0;
    if (sd == 0.0) {
      if (md == 0.0) return {0.0, 1.0, diff.size(), df};
      throw StatError("degenerate variance: all paired differences are equal and non-zero");
    }
    const double t = md / (sd / std::sqrt(static_cast<double>(diff.size())));
    return {t, student_t_two_sided_p(t, df), diff.size(), df};
  }

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = stddev(a) * stddev(a) / na;
  const double vb = stddev(b) * stddev(b) / nb;
  const double diff = mean(a) - mean(b);
  if (va + vb == 0.0) {
    if (diff == 0.0) return {0.0, 1.0, a.size() + b.size(), na + nb - 2.0};
    throw StatError("degenerate variance: both samples are constant");
  }
  const double t = diff / std::sqrt(va + vb);
  const double df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  return {t, student_t_two_sided_p(t, df), a.size() + b.size(), df};
}

}  // namespace shacon
