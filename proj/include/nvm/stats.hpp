#pragma once

#include <cstdint>
#include <vector>

namespace nvm {

double sample_mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  // unbiased

double std_normal_cdf(double t);

// One-sample Kolmogorov distance of `xs` against the standard normal after
// the caller's standardization. xs is copied and sorted.
double ks_statistic_normal(std::vector<double> xs);

// Two-sample Kolmogorov statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

// asymptotic two-sided critical value for the one-sample test
double ks_critical(double alpha, std::int64_t m);
// two-sample version: scale by sqrt((m+n)/(m*n))
double ks_critical_two_sample(double alpha, std::int64_t m, std::int64_t n);

// total variation distance between empirical counts and a reference pmf
double tv_distance(const std::vector<std::int64_t>& counts, const std::vector<double>& pmf);

// Pearson chi-square p-value of counts against pmf; cells with expected
// count below `min_expected` are pooled into one cell first.
struct ChiSquareResult {
  double stat = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int pooled_cells = 0;
};
ChiSquareResult chi_square_test(const std::vector<std::int64_t>& counts,
                                const std::vector<double>& pmf, double min_expected = 5.0);

}  // namespace nvm
