// Test-only reference implementations, independent of the library code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace testref {

// On the complete graph the ones-count k evolves as a birth-death chain:
//   P(k -> k+1) = ((n-k)/n) * (p/2 + (1-p) * k/(n-1))
//   P(k -> k-1) = (k/n)     * (p/2 + (1-p) * (n-k)/(n-1))
// Its stationary law follows from detailed balance and gives exact moments
// of S = k/n for sizes far beyond the direct 2^n solver.
class CompleteOnesLaw {
 public:
  CompleteOnesLaw(int n, double p) : n_(n), p_(p), pmf_(n + 1) {
    if (n < 2 || p <= 0.0 || p > 1.0) throw std::invalid_argument("bad (n,p)");
    const double q = 1.0 - p;
    std::vector<double> logw(n + 1, 0.0);
    for (int k = 0; k < n; ++k) {
      double up = (double(n - k) / n) * (p / 2 + q * k / (n - 1));
      double down = (double(k + 1) / n) * (p / 2 + q * (n - k - 1) / (n - 1));
      logw[k + 1] = logw[k] + std::log(up) - std::log(down);
    }
    double mx = *std::max_element(logw.begin(), logw.end());
    double z = 0.0;
    for (int k = 0; k <= n; ++k) z += (pmf_[k] = std::exp(logw[k] - mx));
    for (auto& v : pmf_) v /= z;
  }

  int n() const { return n_; }
  const std::vector<double>& pmf() const { return pmf_; }

  double sigma_sq() const {
    double v = 0.0;
    for (int k = 0; k <= n_; ++k) {
      double d = double(k) / n_ - 0.5;
      v += pmf_[k] * d * d;
    }
    return v;
  }

  // Psi(k) = 2k(n-k)/(n(n-1)) on the complete graph
  double var_psi() const {
    double m1 = 0.0, m2 = 0.0;
    for (int k = 0; k <= n_; ++k) {
      double psi = 2.0 * k * (n_ - k) / (double(n_) * (n_ - 1));
      m1 += pmf_[k] * psi;
      m2 += pmf_[k] * psi * psi;
    }
    return m2 - m1 * m1;
  }

  double endpoint_mass(double eps) const {
    double m = 0.0;
    for (int k = 0; k <= n_; ++k) {
      double s = double(k) / n_;
      if (s <= eps || s >= 1.0 - eps) m += pmf_[k];
    }
    return m;
  }

  // exact sup-distance between the law of (S-1/2)/sigma and the standard normal
  double ks_to_gaussian() const {
    double sigma = std::sqrt(sigma_sq());
    double cdf = 0.0, worst = 0.0;
    for (int k = 0; k <= n_; ++k) {
      double z = (double(k) / n_ - 0.5) / sigma;
      double phi = 0.5 * std::erfc(-z / std::sqrt(2.0));
      worst = std::max(worst, std::abs(cdf - phi));  // just below the atom
      cdf += pmf_[k];
      worst = std::max(worst, std::abs(cdf - phi));  // at the atom
    }
    return worst;
  }

 private:
  int n_;
  double p_;
  std::vector<double> pmf_;
};

// P(two coalescing-or-absorbed walkers on K_n meet before absorption);
// per event: absorb with prob p, else the mover lands on its partner
// with prob 1/(n-1).
inline double complete_meet_prob(int n, double p) {
  const double q = 1.0 - p;
  return q / (n - 1 - q * (n - 2));
}

// binomial pmf via Pascal's triangle, exact for small t
inline double binom_pmf_exact(int t, int j) {
  std::vector<double> row = {1.0};
  for (int i = 1; i <= t; ++i) {
    std::vector<double> next(i + 1, 0.0);
    for (int a = 0; a < i; ++a) {
      next[a] += row[a] / 2;
      next[a + 1] += row[a] / 2;
    }
    row.swap(next);
  }
  return (j >= 0 && j <= t) ? row[j] : 0.0;
}

}  // namespace testref
