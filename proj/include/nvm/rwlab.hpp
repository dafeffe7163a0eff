#pragma once

#include <cstdint>
#include <vector>

#include "nvm/dual.hpp"
#include "nvm/graph.hpp"

namespace nvm {

// Worst-case expected hitting time max_{x,y} E_x(T_y) of the discrete walk.
// Solved exactly (one sparse solve per target; vertex-transitive kernels need
// a single target) up to `exact_cap` vertices, Monte Carlo above that.
struct HittingTime {
  double t_hit = 0.0;
  int argmax_from = -1;
  int argmax_to = -1;
  bool exact = true;
};
HittingTime hitting_time(const TransitionKernel& kernel, int exact_cap = 4096,
                         std::int64_t mc_reps = 20000, std::uint64_t seed = 1);

// expected hitting times onto `target` for every start vertex
std::vector<double> hitting_times_to(const TransitionKernel& kernel, int target);

// Mean meeting time of two independent continuous-time (rate-1) walkers
// started from pi x pi; meetings count only at jump instants, co-located
// starts meet at time 0.
McEstimate meeting_time(const TransitionKernel& kernel, std::int64_t reps, Rng& rng);

// empirical P(M <= t) at the given time grid (continuous pair walk)
std::vector<McEstimate> meeting_cdf(const TransitionKernel& kernel,
                                    const std::vector<double>& t_grid,
                                    std::int64_t reps, Rng& rng);

// theta(p) = (1 - sqrt(p(2-p))) / (1 - p), continuously extended by
// theta(1) = 0; satisfies theta + 1/theta = 2/(1-p) on (0,1).
double theta(double p);

// E_k[(1-p)^T] for the gambler's walk on {0..n} killed at the boundary:
// (theta^k + theta^(n-k)) / (1 + theta^n).
double gambler_gf(int k, int n, double p);

// Monte Carlo companion: simulate the lazy-free simple walk from k with
// per-step survival weight (1-p), estimate E[(1-p)^T].
McEstimate gambler_gf_mc(int k, int n, double p, std::int64_t reps, Rng& rng);

// First-passage identity check for the simple walk on Z started at k > 0:
// P(T_0 = t) = (k/t) P(X_t = 0). One free-walk simulation estimates both
// sides; exact binomials are available for cross-checks.
struct FirstPassageCell {
  int t;
  double lhs;       // empirical P(T_0 = t)
  double rhs;       // (k/t) * empirical P(X_t = 0)
  double se;        // combined standard error of lhs - rhs
  double lhs_exact; // binomial closed form
};
std::vector<FirstPassageCell> first_passage_identity(int k, int t_max,
                                                     std::int64_t reps, Rng& rng);

double binom_point_mass(int t, int up);  // C(t,up)/2^t via lgamma

}  // namespace nvm
