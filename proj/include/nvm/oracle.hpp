#pragma once

#include <cstdint>
#include <vector>

#include "nvm/forward.hpp"

namespace nvm {

// Exact stationary distribution on {0,1}^n, n small. States are bitmasks:
// bit x of the index is vertex x's opinion.
struct ExactDistribution {
  std::shared_ptr<const TransitionKernel> kernel;
  double p = 0.0;
  std::vector<double> gamma;       // 2^n entries
  std::vector<double> s_of_state;  // S value per state

  int n() const { return kernel->n(); }

  double mean_s() const;
  double sigma_sq() const;

  // aggregated S-pmf over achieved values (values merged within 1e-12)
  std::vector<std::pair<double, double>> s_pmf() const;

  // P_Gamma(xi(x) != xi(y)) for all pairs
  std::vector<std::vector<double>> pair_disagreement() const;
};

inline constexpr int kOracleDefaultMaxN = 12;
inline constexpr int kOracleHardMaxN = 14;

// Dense-in-states sparse-in-transitions row representation of Q.
// row s holds the n single-flip probabilities; diagonal is implicit.
std::vector<double> oracle_q_row(const NvmParams& params, std::uint64_t state);

// Stationary law of Q, solved directly (sparse LU on the balance system with
// a normalization row). max_n guards the 2^n blowup.
ExactDistribution exact_gamma(const NvmParams& params, int max_n = kOracleDefaultMaxN);

// Power-iteration solver, used as an independent cross-check of exact_gamma.
ExactDistribution exact_gamma_power(const NvmParams& params, double tol = 1e-13,
                                    std::int64_t max_iters = -1, int max_n = kOracleDefaultMaxN);

// Cov(1{xi(x) != xi(u)}, 1{xi(y) != xi(v)}) under the exact law.
double exact_h(const ExactDistribution& dist, int u, int v, int x, int y);

// Variance of Psi(xi) = sum_{x,y} mu(x,y) 1{xi(x) != xi(y)} under the exact law.
double exact_psi_variance(const ExactDistribution& dist);

// Contraction residual: max over states of
// |E[S' | xi] - ((1 - p/n) S(xi) + p/(2n))|.
double contraction_residual(const NvmParams& params, int max_n = kOracleDefaultMaxN);

}  // namespace nvm
