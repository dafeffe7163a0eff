#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "nvm/analytics.hpp"
#include "nvm/oracle.hpp"
#include "nvm/rwlab.hpp"
#include "nvm/stats.hpp"
#include "oracles.hpp"

using namespace nvm;

namespace {

TransitionKernel make(const std::string& spec) {
  return TransitionKernel::from_graph(GraphSpec::parse(spec));
}

NvmParams params_of(const std::string& spec, double p) {
  return NvmParams(std::make_shared<const TransitionKernel>(make(spec)), p);
}

}  // namespace

TEST_CASE("cycle variance closed form") {
  // p=1 is iid bits: sigma^2 = 1/(4n)
  CHECK(cycle_sigma_sq(10, 1.0) == doctest::Approx(0.025).epsilon(1e-13));
  // frozen spot value, cross-checked against the exact solver elsewhere
  CHECK(cycle_sigma_sq(6, 0.4) == doctest::Approx(0.08310502283105).epsilon(1e-11));
  // slow-noise limit approaches the consensus variance 1/4
  CHECK(cycle_sigma_sq(8, 1e-9) == doctest::Approx(0.25).epsilon(1e-3));
  // decreasing in p
  double prev = 1.0;
  for (double p : {0.01, 0.1, 0.3, 0.6, 1.0}) {
    double v = cycle_sigma_sq(12, p);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("cycle variance equals the killed-gambler average") {
  // sigma^2 = (1/(4n)) sum_{k=0}^{n-1} E_k[(1-p)^T]; both sides computed
  // through entirely different code paths
  for (int n : {5, 12, 30}) {
    for (double p : {0.05, 0.5, 0.95}) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += gambler_gf(k, n, p);
      CHECK_MESSAGE(cycle_sigma_sq(n, p) == doctest::Approx(acc / (4 * n)).epsilon(1e-12),
                    "n=" << n << " p=" << p);
    }
  }
}

TEST_CASE("variance lower bounds") {
  auto k = make("cycle:6");
  auto b = variance_lower_bounds(k, 0.3, 9.0);  // t_hit = 9 for cycle:6
  CHECK(b.nu_bound == doctest::Approx((1.0 / 6) / 4).epsilon(1e-13));
  REQUIRE(b.hit_bound.has_value());
  CHECK(*b.hit_bound == doctest::Approx(1.0 / (4 * (1 + 4 * 0.3 * 9))).epsilon(1e-13));
  CHECK_FALSE(variance_lower_bounds(k, 0.51, 9.0).hit_bound.has_value());
  // at p=1 the nu bound is tight
  auto dist = exact_gamma(params_of("cycle:6", 1.0));
  CHECK(4 * dist.sigma_sq() == doctest::Approx(k.nu_sq()).epsilon(1e-12));
}

TEST_CASE("psi values on hand-built configurations") {
  auto cyc = make("cycle:4");
  // alternating opinions disagree across every edge
  CHECK(psi_value(OpinionConfig::from_mask(4, 0b0101), cyc) == doctest::Approx(1.0));
  // two blocks disagree across 4 of the 8 directed edges
  CHECK(psi_value(OpinionConfig::from_mask(4, 0b0011), cyc) == doctest::Approx(0.5));
  CHECK(psi_value(OpinionConfig::zeros(4), cyc) == doctest::Approx(0.0));

  // the complete-graph shortcut equals the generic edge sum
  auto komplete = make("complete:8");
  auto cfg = OpinionConfig::from_mask(8, 0b10110100);
  int ones = cfg.ones_count();
  CHECK(psi_value(cfg, komplete) ==
        doctest::Approx(2.0 * ones * (8 - ones) / (8.0 * 7.0)).epsilon(1e-13));
}

TEST_CASE("psi variance bound formula") {
  auto star = make("star:5");
  double sigma_sq = 0.1;
  double expect = 16 * sigma_sq * 0.25 / (star.nu_sq() * star.nu_sq());
  CHECK(psi_variance_bound(star, sigma_sq) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("stein bracket terms") {
  auto k = make("cycle:8");  // pi* = 1/8, nu^2 = 1/8, n = 8
  double sigma_sq = 0.04, var_psi = 0.01, p = 0.25;
  auto b = stein_bracket(k, p, sigma_sq, var_psi);
  double sigma = std::sqrt(sigma_sq);
  CHECK(b.term1 == doctest::Approx(std::pow(0.125 / sigma, 3) * 8 / p).epsilon(1e-12));
  CHECK(b.term2 == doctest::Approx(std::pow(0.125 / sigma, 2) * std::sqrt(8 / p)).epsilon(1e-12));
  CHECK(b.term3 ==
        doctest::Approx(0.125 / (p * sigma_sq) * std::sqrt(var_psi)).epsilon(1e-12));
  CHECK(b.total() == doctest::Approx(b.term1 + b.term2 + b.term3));
}

TEST_CASE("gaussian condition") {
  // complete:1024 at p = 0.125: (pi*/nu)^3 n/p = n^(-1/2)/p = 1/4
  auto k = make("complete:1024");
  auto c = gaussian_condition(k, 0.125);
  CHECK(c.value == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(c.holds);
  // a star concentrates pi on the hub and breaks the condition
  auto s = gaussian_condition(make("star:16"), 0.125);
  CHECK_FALSE(s.holds);
  CHECK(s.value > 1.0);
}

TEST_CASE("ks statistic detects fit and misfit") {
  // deterministic normal quantile grid standardized by sigma
  std::vector<double> good;
  const int m = 4000;
  for (int i = 0; i < m; ++i) {
    double u = (i + 0.5) / m;
    // quantile via bisection on the erfc-based cdf
    double lo = -8, hi = 8;
    for (int it = 0; it < 80; ++it) {
      double mid = (lo + hi) / 2;
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < u ? lo : hi) = mid;
    }
    good.push_back(0.5 + 0.05 * lo);
  }
  CHECK(ks_to_gaussian(good, 0.05) < 0.01);
  CHECK(ks_to_gaussian(good, 0.10) > 0.1);  // wrong scale is visible
}

TEST_CASE("limit verdicts on synthetic samples") {
  // fair endpoint mixture = the Bernoulli limit shape
  std::vector<double> bern;
  for (int i = 0; i < 2000; ++i) bern.push_back(i % 2 ? 1.0 : 0.0);
  auto vb = limit_verdict(bern, 0.5);
  CHECK(vb.verdict == Verdict::BernoulliTrend);
  CHECK(vb.sigma_hat_sq == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(vb.endpoint_mass == doctest::Approx(1.0));

  // near-normal samples around 1/2
  std::vector<double> gauss;
  for (int i = 0; i < 4000; ++i) {
    double u = (i + 0.5) / 4000;
    double lo = -8, hi = 8;
    for (int it = 0; it < 80; ++it) {
      double mid = (lo + hi) / 2;
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < u ? lo : hi) = mid;
    }
    gauss.push_back(0.5 + 0.03 * lo);
  }
  auto vg = limit_verdict(gauss, 0.03);
  CHECK(vg.verdict == Verdict::GaussianTrend);
  CHECK(vg.endpoint_mass < 0.1);

  // a three-atom law is too lumpy for the KS gate yet far from the
  // endpoint shape: neither verdict fires
  std::vector<double> atoms;
  for (int i = 0; i < 1800; ++i) atoms.push_back(i % 3 == 0 ? 0.1 : (i % 3 == 1 ? 0.5 : 0.9));
  auto va = limit_verdict(atoms, std::sqrt(0.32 / 3));
  CHECK(va.verdict == Verdict::Indeterminate);

  CHECK(verdict_name(Verdict::GaussianTrend) == "gaussian");
  CHECK(verdict_name(Verdict::BernoulliTrend) == "bernoulli");
  CHECK(verdict_name(Verdict::Indeterminate) == "indeterminate");
}

TEST_CASE("verdicts match exact complete-graph laws") {
  // fast noise: the exact stationary law of S is nearly Gaussian
  testref::CompleteOnesLaw fast(256, 0.25);
  CHECK(fast.ks_to_gaussian() < 0.05);
  CHECK(fast.endpoint_mass(0.05) < 0.01);
  // slow noise: mass piles onto the endpoints
  testref::CompleteOnesLaw slow(256, 1e-4);
  CHECK(slow.endpoint_mass(0.05) > 0.9);
  CHECK(slow.sigma_sq() > 0.23);
}

TEST_CASE("sample statistics") {
  std::vector<double> xs = {1, 2, 3, 4};
  CHECK(sample_mean(xs) == doctest::Approx(2.5));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3).epsilon(1e-13));
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std_normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
}
