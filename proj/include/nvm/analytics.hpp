#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nvm/forward.hpp"
#include "nvm/graph.hpp"

namespace nvm {

// Closed-form stationary variance of S on the n-cycle:
// sigma^2 = (1/(4n)) (1 + 2 theta (1 - theta^(n-1)) / ((1-theta)(1+theta^n))).
double cycle_sigma_sq(int n, double p);

// Lower bounds on 4 sigma^2: nu^2 always; 1/(1 + 4 p t_hit) when p <= 1/2.
struct VarianceBounds {
  double nu_bound;                    // on sigma^2 directly: nu^2 / 4
  std::optional<double> hit_bound;    // 1 / (4 (1 + 4 p t_hit)), p <= 1/2 only
};
VarianceBounds variance_lower_bounds(const TransitionKernel& kernel, double p, double t_hit);

// Psi(xi) = sum_{x,y} mu(x,y) 1{xi(x) != xi(y)} with mu the squared-pi edge
// measure. The complete graph gets a popcount shortcut.
double psi_value(const OpinionConfig& cfg, const TransitionKernel& kernel);

// Normal-approximation error bracket (unit constant):
//   term1 = (pi*/sigma)^3 n/p
//   term2 = (pi*/sigma)^2 sqrt(n/p)
//   term3 = (nu^2/(p sigma^2)) sqrt(Var Psi)
struct SteinBracket {
  double term1 = 0.0, term2 = 0.0, term3 = 0.0;
  double total() const { return term1 + term2 + term3; }
};
SteinBracket stein_bracket(const TransitionKernel& kernel, double p, double sigma_sq,
                           double var_psi);

// Var Psi <= 16 sigma^2 (pi*)^2 / nu^4
double psi_variance_bound(const TransitionKernel& kernel, double sigma_sq);

// Asymptotic normality proxy (pi*/nu)^3 n / p; small means the Gaussian
// regime, order-one-or-larger means the CLT scaling is broken (star-like).
struct GaussianCondition {
  double value = 0.0;
  bool degree_based = false;  // value equals (d_max / sqrt(sum d^2))^3 n/p
  bool holds = false;         // value below 1
};
GaussianCondition gaussian_condition(const TransitionKernel& kernel, double p);

// KS distance of standardized samples (s - 1/2)/sigma against N(0,1)
double ks_to_gaussian(const std::vector<double>& s_samples, double sigma);

enum class Verdict { GaussianTrend, BernoulliTrend, Indeterminate };
std::string verdict_name(Verdict v);

struct VerdictThresholds {
  double eps = 0.05;               // endpoint window half-width
  double bernoulli_var = 0.23;     // sample variance above this
  double bernoulli_endpoint = 0.9; // endpoint mass above this
  double gaussian_ks = 0.12;       // KS below this
  double gaussian_endpoint = 0.5;  // endpoint mass below this
};

struct LimitVerdict {
  double ks = 0.0;
  double sigma_hat_sq = 0.0;   // sample variance of S
  double endpoint_mass = 0.0;  // fraction within eps of {0,1}
  Verdict verdict = Verdict::Indeterminate;
};

// Classify a sample of S values against the two limit shapes. `sigma` is the
// standardization scale used for the KS statistic.
LimitVerdict limit_verdict(const std::vector<double>& s_samples, double sigma,
                           const VerdictThresholds& thr = {});

}  // namespace nvm
