#include "nvm/rwlab.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvm {

std::vector<double> hitting_times_to(const TransitionKernel& kernel, int target) {
  int n = kernel.n();
  if (target < 0 || target >= n) throw std::runtime_error("target out of range");
  if (n == 1) return {0.0};
  // (I - P restricted to V \ {target}) h = 1
  std::vector<int> idx(n, -1);
  int m = 0;
  for (int x = 0; x < n; ++x)
    if (x != target) idx[x] = m++;
  std::vector<Eigen::Triplet<double>> trips;
  for (int x = 0; x < n; ++x) {
    if (x == target) continue;
    double diag = 1.0;
    kernel.for_each_entry(x, [&](int y, double w) {
      if (y == x)
        diag -= w;
      else if (y != target)
        trips.emplace_back(idx[x], idx[y], -w);
    });
    trips.emplace_back(idx[x], idx[x], diag);
  }
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("hitting-time solve failed");
  Eigen::VectorXd h = lu.solve(b);
  double resid = (A * h - b).cwiseAbs().maxCoeff();
  if (resid > 1e-8) throw std::runtime_error("hitting-time residual too large");
  std::vector<double> out(n, 0.0);
  for (int x = 0; x < n; ++x)
    if (x != target) out[x] = h[idx[x]];
  return out;
}

HittingTime hitting_time(const TransitionKernel& kernel, int exact_cap,
                         std::int64_t mc_reps, std::uint64_t seed) {
  int n = kernel.n();
  HittingTime res;
  if (kernel.family() == GraphFamily::Complete) {
    // from any x != y the walk hits y with chance 1/(n-1) per step
    res.t_hit = n - 1;
    res.argmax_from = 1;
    res.argmax_to = 0;
    return res;
  }
  if (n <= exact_cap) {
    int targets = kernel.transitive() ? 1 : n;
    for (int y = 0; y < targets; ++y) {
      auto h = hitting_times_to(kernel, y);
      for (int x = 0; x < n; ++x)
        if (h[x] > res.t_hit) {
          res.t_hit = h[x];
          res.argmax_from = x;
          res.argmax_to = y;
        }
    }
    return res;
  }
  // rough fallback: max over sampled pairs of simulated expectations
  res.exact = false;
  Rng rng(seed, 0);
  int pairs = 32;
  for (int i = 0; i < pairs; ++i) {
    int x = static_cast<int>(rng.below(n));
    int y = static_cast<int>(rng.below(n));
    if (x == y) continue;
    double total = 0.0;
    for (std::int64_t r = 0; r < mc_reps; ++r) {
      int cur = x;
      std::int64_t steps = 0;
      while (cur != y) {
        cur = kernel.sample_next(cur, rng);
        ++steps;
      }
      total += static_cast<double>(steps);
    }
    double est = total / mc_reps;
    if (est > res.t_hit) {
      res.t_hit = est;
      res.argmax_from = x;
      res.argmax_to = y;
    }
  }
  return res;
}

McEstimate meeting_time(const TransitionKernel& kernel, std::int64_t reps, Rng& rng) {
  PiSampler pi(kernel);
  double total = 0.0, total2 = 0.0;
  for (std::int64_t r = 0; r < reps; ++r) {
    int a = pi.draw(rng);
    int b = pi.draw(rng);
    double t = 0.0;
    while (a != b) {
      t += rng.exponential(2.0);
      if (rng.coin()) {
        a = kernel.sample_next(a, rng);
      } else {
        b = kernel.sample_next(b, rng);
      }
    }
    total += t;
    total2 += t * t;
  }
  double mean = total / reps;
  double var = (total2 - total * mean) / std::max<std::int64_t>(1, reps - 1);
  return {mean, std::sqrt(std::max(0.0, var) / reps), reps};
}

std::vector<McEstimate> meeting_cdf(const TransitionKernel& kernel,
                                    const std::vector<double>& t_grid,
                                    std::int64_t reps, Rng& rng) {
  PiSampler pi(kernel);
  double t_max = *std::max_element(t_grid.begin(), t_grid.end());
  std::vector<std::int64_t> met_by(t_grid.size(), 0);
  for (std::int64_t r = 0; r < reps; ++r) {
    int a = pi.draw(rng);
    int b = pi.draw(rng);
    double t = 0.0;
    double met_at = a == b ? 0.0 : -1.0;
    while (met_at < 0.0) {
      t += rng.exponential(2.0);
      if (t > t_max) break;
      if (rng.coin()) {
        a = kernel.sample_next(a, rng);
      } else {
        b = kernel.sample_next(b, rng);
      }
      if (a == b) met_at = t;
    }
    if (met_at >= 0.0)
      for (size_t i = 0; i < t_grid.size(); ++i)
        if (met_at <= t_grid[i]) ++met_by[i];
  }
  std::vector<McEstimate> out(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) {
    double f = static_cast<double>(met_by[i]) / reps;
    out[i] = {f, std::sqrt(f * (1.0 - f) / reps), reps};
  }
  return out;
}

double theta(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::runtime_error("p must lie in [0,1]");
  if (p == 1.0) return 0.0;  // continuous extension
  if (p == 0.0) return 1.0;
  return (1.0 - std::sqrt(p * (2.0 - p))) / (1.0 - p);
}

double gambler_gf(int k, int n, double p) {
  if (n < 1 || k < 0 || k > n) throw std::runtime_error("need 0 <= k <= n, n >= 1");
  if (k == 0 || k == n) return 1.0;  // T = 0
  if (p == 1.0) return 0.0;          // interior start, (1-p)^T = 0^T
  if (p == 0.0) return 1.0;          // T < infinity a.s.
  double th = theta(p);
  double lt = std::log(th);
  // powers in log space; theta < 1 so the terms only shrink
  double tk = std::exp(k * lt);
  double tnk = std::exp((n - k) * lt);
  double tn = std::exp(n * lt);
  return (tk + tnk) / (1.0 + tn);
}

McEstimate gambler_gf_mc(int k, int n, double p, std::int64_t reps, Rng& rng) {
  if (n < 1 || k < 0 || k > n) throw std::runtime_error("need 0 <= k <= n, n >= 1");
  // E[(1-p)^T] = P(walk reaches the boundary before a geometric(p) kill)
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    int pos = k;
    for (;;) {
      if (pos == 0 || pos == n) {
        ++hits;
        break;
      }
      if (p > 0.0 && rng.uniform01() < p) break;
      pos += rng.coin() ? 1 : -1;
    }
  }
  double f = static_cast<double>(hits) / reps;
  return {f, std::sqrt(f * (1.0 - f) / reps), reps};
}

double binom_point_mass(int t, int up) {
  if (up < 0 || up > t) return 0.0;
  double lg = std::lgamma(t + 1.0) - std::lgamma(up + 1.0) - std::lgamma(t - up + 1.0);
  return std::exp(lg - t * std::log(2.0));
}

std::vector<FirstPassageCell> first_passage_identity(int k, int t_max,
                                                     std::int64_t reps, Rng& rng) {
  if (k <= 0 || t_max < k) throw std::runtime_error("need 0 < k <= t_max");
  std::vector<std::int64_t> first_hit(t_max + 1, 0);  // T_0 == t counts
  std::vector<std::int64_t> at_zero(t_max + 1, 0);    // X_t == 0 counts
  for (std::int64_t r = 0; r < reps; ++r) {
    int pos = k;
    bool hit = false;
    std::uint64_t bits = 0;
    int left = 0;
    for (int t = 1; t <= t_max; ++t) {
      if (left == 0) {
        bits = rng.u64();
        left = 64;
      }
      pos += (bits & 1) ? 1 : -1;
      bits >>= 1;
      --left;
      if (pos == 0) {
        ++at_zero[t];
        if (!hit) {
          hit = true;
          ++first_hit[t];
        }
      }
    }
  }
  std::vector<FirstPassageCell> out;
  for (int t = k; t <= t_max; t += 2) {  // parity: walk from k reaches 0 only at t = k mod 2
    FirstPassageCell cell;
    cell.t = t;
    double fl = static_cast<double>(first_hit[t]) / reps;
    double fz = static_cast<double>(at_zero[t]) / reps;
    cell.lhs = fl;
    cell.rhs = (static_cast<double>(k) / t) * fz;
    double se_l = std::sqrt(fl * (1.0 - fl) / reps);
    double se_z = std::sqrt(fz * (1.0 - fz) / reps) * (static_cast<double>(k) / t);
    cell.se = std::sqrt(se_l * se_l + se_z * se_z);
    cell.lhs_exact = (static_cast<double>(k) / t) * binom_point_mass(t, (t - k) / 2);
    out.push_back(cell);
  }
  return out;
}

}  // namespace nvm
