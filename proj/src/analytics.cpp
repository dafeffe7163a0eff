#include "nvm/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "nvm/rwlab.hpp"
#include "nvm/stats.hpp"

namespace nvm {

double cycle_sigma_sq(int n, double p) {
  if (n < 2) throw std::runtime_error("cycle closed form needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw std::runtime_error("p must lie in (0,1]");
  if (p == 1.0) return 1.0 / (4.0 * n);
  double th = theta(p);
  double lt = std::log(th);
  // 1 - theta^(n-1) via expm1 keeps precision when theta is near 1
  double one_minus_tn1 = -std::expm1((n - 1) * lt);
  double tn = std::exp(n * lt);
  double corr = 2.0 * th * one_minus_tn1 / ((1.0 - th) * (1.0 + tn));
  return (1.0 + corr) / (4.0 * n);
}

VarianceBounds variance_lower_bounds(const TransitionKernel& kernel, double p, double t_hit) {
  VarianceBounds b{kernel.nu_sq() / 4.0, std::nullopt};
  if (p <= 0.5) b.hit_bound = 1.0 / (4.0 * (1.0 + 4.0 * p * t_hit));
  return b;
}

double psi_value(const OpinionConfig& cfg, const TransitionKernel& kernel) {
  int n = kernel.n();
  if (cfg.n() != n) throw std::runtime_error("config size mismatch");
  if (kernel.family() == GraphFamily::Complete) {
    double k = cfg.ones_count();
    return 2.0 * k * (n - k) / (static_cast<double>(n) * (n - 1));
  }
  const auto& pi = kernel.pi();
  double acc = 0.0;
  for (int x = 0; x < n; ++x) {
    bool bx = cfg.get(x);
    double w = pi[x] * pi[x];
    kernel.for_each_entry(x, [&](int y, double pw) {
      if (cfg.get(y) != bx) acc += w * pw;
    });
  }
  return acc / kernel.nu_sq();
}

SteinBracket stein_bracket(const TransitionKernel& kernel, double p, double sigma_sq,
                           double var_psi) {
  if (sigma_sq <= 0.0) throw std::runtime_error("sigma_sq must be positive");
  double sigma = std::sqrt(sigma_sq);
  double a = kernel.pi_star() / sigma;
  double n_over_p = kernel.n() / p;
  SteinBracket b;
  b.term1 = a * a * a * n_over_p;
  b.term2 = a * a * std::sqrt(n_over_p);
  b.term3 = kernel.nu_sq() / (p * sigma_sq) * std::sqrt(std::max(0.0, var_psi));
  return b;
}

double psi_variance_bound(const TransitionKernel& kernel, double sigma_sq) {
  double ps = kernel.pi_star();
  double nu4 = kernel.nu_sq() * kernel.nu_sq();
  return 16.0 * sigma_sq * ps * ps / nu4;
}

GaussianCondition gaussian_condition(const TransitionKernel& kernel, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::runtime_error("p must lie in (0,1]");
  GaussianCondition g;
  double ratio = kernel.pi_star() / std::sqrt(kernel.nu_sq());
  g.value = ratio * ratio * ratio * kernel.n() / p;
  g.degree_based = kernel.degree_based();
  g.holds = g.value < 1.0;
  return g;
}

double ks_to_gaussian(const std::vector<double>& s_samples, double sigma) {
  if (sigma <= 0.0) throw std::runtime_error("sigma must be positive");
  std::vector<double> w(s_samples.size());
  for (size_t i = 0; i < s_samples.size(); ++i) w[i] = (s_samples[i] - 0.5) / sigma;
  return ks_statistic_normal(std::move(w));
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::GaussianTrend: return "gaussian";
    case Verdict::BernoulliTrend: return "bernoulli";
    default: return "indeterminate";
  }
}

LimitVerdict limit_verdict(const std::vector<double>& s_samples, double sigma,
                           const VerdictThresholds& thr) {
  if (s_samples.empty()) throw std::runtime_error("empty sample");
  LimitVerdict v;
  v.sigma_hat_sq = sample_variance(s_samples);
  std::int64_t extreme = 0;
  for (double s : s_samples)
    if (s <= thr.eps || s >= 1.0 - thr.eps) ++extreme;
  v.endpoint_mass = static_cast<double>(extreme) / s_samples.size();
  v.ks = ks_to_gaussian(s_samples, sigma);
  if (v.sigma_hat_sq > thr.bernoulli_var && v.endpoint_mass > thr.bernoulli_endpoint)
    v.verdict = Verdict::BernoulliTrend;
  else if (v.ks < thr.gaussian_ks && v.endpoint_mass < thr.gaussian_endpoint)
    v.verdict = Verdict::GaussianTrend;
  else
    v.verdict = Verdict::Indeterminate;
  return v;
}

}  // namespace nvm
