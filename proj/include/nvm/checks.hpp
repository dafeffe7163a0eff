#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nvm/stats.hpp"

namespace nvm {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;                // one-line summary
  std::vector<std::string> lines;    // per-instance breakdown
};

struct CheckInstance {
  std::string graph;
  double p;
};

// {Cycle(4), Cycle(6), K_4, Star(5), Torus 3x3} x {0.1, 0.5, 0.9}
std::vector<CheckInstance> small_suite();

// Empirical law of 10^6 (default) stationary samples against the exact law:
// total variation below tv_threshold and chi-square p-value above chi_alpha
// on every instance. tv_noise_floor=true replaces the fixed threshold by a
// per-instance floor keyed to the estimator's own sampling noise (used by
// quick verification; the fixed threshold is the strict contract).
CheckResult check_duality(const std::vector<CheckInstance>& instances, std::int64_t samples,
                          double tv_threshold, double chi_alpha, bool tv_noise_floor,
                          std::uint64_t seed);

// E(S) = 1/2 from the oracle (tolerance 1e-12) and the dual-sample mean
// within 3 standard errors on every instance.
CheckResult check_mean_identity(const std::vector<CheckInstance>& instances,
                                std::int64_t samples, std::uint64_t seed);

// closed-form cycle variance against the oracle, |diff| <= tol
CheckResult check_cycle_closed_form(int n_lo, int n_hi, const std::vector<double>& ps,
                                    double tol);

// sigma^2 >= nu^2/4 always and sigma^2 >= 1/(4(1+4 p t_hit)) for p <= 1/2
CheckResult check_variance_bounds(const std::vector<CheckInstance>& instances);

// Var Psi <= 16 sigma^2 (pi*)^2 / nu^4 on every instance
CheckResult check_psi_variance_bound(const std::vector<CheckInstance>& instances);

// contraction identity per state, residual <= tol
CheckResult check_contraction(const std::vector<CheckInstance>& instances, double tol);

// pair-trajectory sigma^2 estimator within `se_window` standard errors of
// the exact value on Cycle(8) and K_6
CheckResult check_sigma_via_dual(std::int64_t reps, double se_window, std::uint64_t seed);

// gambler generating function: closed form within 3 SE of Monte Carlo
CheckResult check_gambler(std::int64_t reps, std::uint64_t seed);

// exact h0 <= four-term dual Monte Carlo bound + se_window * SE, random
// distinct quadruples on Cycle(6) and K_5 at p in {0.2, 0.5}
CheckResult check_h0_bound(int quadruples_per_instance, std::int64_t reps,
                           double se_window, std::uint64_t seed);

// first-passage identity for the simple walk, all parity cells within
// se_window combined standard errors
CheckResult check_first_passage(int k, int t_max, std::int64_t reps, double se_window,
                                std::uint64_t seed);

// P(M <= t) <= (2t+1) nu^2 (+3 SE) on the 8x8 torus at t in {0,1,4,16}
CheckResult check_torus_meeting_cdf(std::int64_t reps, std::uint64_t seed);

// full property suite as run by `verify`; quick=true shrinks the budgets
// and switches the duality TV threshold to the sampling-noise floor
std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed);

}  // namespace nvm
