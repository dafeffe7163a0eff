#include "nvm/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace nvm {

double sample_mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / xs.size();
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / (xs.size() - 1);
}

double std_normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

double ks_statistic_normal(std::vector<double> xs) {
  if (xs.empty()) throw std::runtime_error("empty sample");
  std::sort(xs.begin(), xs.end());
  double m = static_cast<double>(xs.size());
  double d = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double f = std_normal_cdf(xs[i]);
    d = std::max(d, f - static_cast<double>(i) / m);
    d = std::max(d, static_cast<double>(i + 1) / m - f);
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::runtime_error("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                             static_cast<double>(j) / b.size()));
  }
  return d;
}

double ks_critical(double alpha, std::int64_t m) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(m));
}

double ks_critical_two_sample(double alpha, std::int64_t m, std::int64_t n) {
  double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c * std::sqrt((static_cast<double>(m) + n) / (static_cast<double>(m) * n));
}

double tv_distance(const std::vector<std::int64_t>& counts, const std::vector<double>& pmf) {
  if (counts.size() != pmf.size()) throw std::runtime_error("size mismatch");
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  double d = 0.0;
  for (size_t i = 0; i < counts.size(); ++i)
    d += std::abs(static_cast<double>(counts[i]) / total - pmf[i]);
  return d / 2.0;
}

ChiSquareResult chi_square_test(const std::vector<std::int64_t>& counts,
                                const std::vector<double>& pmf, double min_expected) {
  if (counts.size() != pmf.size()) throw std::runtime_error("size mismatch");
  std::int64_t total = 0;
  for (auto c : counts) total += c;

  ChiSquareResult res;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  int kept = 0;
  double stat = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    double e = pmf[i] * total;
    if (e < min_expected) {
      pooled_obs += static_cast<double>(counts[i]);
      pooled_exp += e;
      ++res.pooled_cells;
      continue;
    }
    double d = counts[i] - e;
    stat += d * d / e;
    ++kept;
  }
  if (pooled_exp > 0.0) {
    double d = pooled_obs - pooled_exp;
    stat += d * d / pooled_exp;
    ++kept;
  }
  res.stat = stat;
  res.dof = std::max(1, kept - 1);
  res.p_value = boost::math::gamma_q(res.dof / 2.0, stat / 2.0);
  return res;
}

}  // namespace nvm
