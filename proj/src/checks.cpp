#include "nvm/checks.hpp"

#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <set>

#include "nvm/analytics.hpp"
#include "nvm/dual.hpp"
#include "nvm/io.hpp"
#include "nvm/oracle.hpp"
#include "nvm/rwlab.hpp"

namespace nvm {

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

NvmParams make_params(const CheckInstance& inst) {
  auto kernel = std::make_shared<const TransitionKernel>(
      TransitionKernel::from_graph(GraphSpec::parse(inst.graph)));
  return NvmParams(kernel, inst.p);
}

// stream ids are tag hashes; the master seed enters through Rng's first arg
std::uint64_t stream_of(std::uint64_t, const std::string& tag) { return fnv1a64(tag); }

// mean TV between the empirical law of `samples` draws and the exact pmf,
// if the sampler were perfect: sum_s sqrt(2 pmf(s)(1-pmf(s)) / (pi m)) / 2
double expected_tv(const std::vector<double>& pmf, std::int64_t samples) {
  double acc = 0.0;
  for (double g : pmf) acc += std::sqrt(2.0 * g * (1.0 - g) / (3.14159265358979323846 * samples));
  return acc / 2.0;
}

}  // namespace

std::vector<CheckInstance> small_suite() {
  std::vector<CheckInstance> out;
  for (const char* g : {"cycle:4", "cycle:6", "complete:4", "star:5", "torus:3x3"})
    for (double p : {0.1, 0.5, 0.9}) out.push_back({g, p});
  return out;
}

CheckResult check_duality(const std::vector<CheckInstance>& instances, std::int64_t samples,
                          double tv_threshold, double chi_alpha, bool tv_noise_floor,
                          std::uint64_t seed) {
  CheckResult res;
  res.name = "duality";
  res.pass = true;
  double worst_tv = 0.0, worst_chi = 1.0;
  for (const auto& inst : instances) {
    auto params = make_params(inst);
    auto dist = exact_gamma(params);
    int n = params.n();
    std::vector<std::int64_t> counts(std::size_t{1} << n, 0);
    Rng rng(seed, stream_of(seed, "duality:" + inst.graph + ":" + format_double(inst.p)));
    StationarySampler sampler(params);
    OpinionConfig cfg(n);
    for (std::int64_t r = 0; r < samples; ++r) {
      sampler.sample_into(cfg, rng);
      ++counts[cfg.mask()];
    }
    double tv = tv_distance(counts, dist.gamma);
    auto chi = chi_square_test(counts, dist.gamma);
    double floor = expected_tv(dist.gamma, samples);
    double threshold = tv_noise_floor ? 1.25 * floor + 0.004 : tv_threshold;
    bool ok = tv < threshold && chi.p_value > chi_alpha;
    res.pass = res.pass && ok;
    worst_tv = std::max(worst_tv, tv);
    worst_chi = std::min(worst_chi, chi.p_value);
    res.lines.push_back(fmt("%-12s p=%.1f  tv=%.5f (limit %.5f, sampler noise floor %.5f)  "
                            "chi2 p=%.4f (dof %d)  %s",
                            inst.graph.c_str(), inst.p, tv, threshold, floor, chi.p_value,
                            chi.dof, ok ? "ok" : "FAIL"));
  }
  res.detail = fmt("worst tv=%.5f, worst chi2 p=%.4f over %zu instances at %lld samples",
                   worst_tv, worst_chi, instances.size(),
                   static_cast<long long>(samples));
  return res;
}

CheckResult check_mean_identity(const std::vector<CheckInstance>& instances,
                                std::int64_t samples, std::uint64_t seed) {
  CheckResult res;
  res.name = "mean-identity";
  res.pass = true;
  double worst_exact = 0.0, worst_z = 0.0;
  for (const auto& inst : instances) {
    auto params = make_params(inst);
    auto dist = exact_gamma(params);
    double exact_dev = std::abs(dist.mean_s() - 0.5);
    Rng rng(seed, stream_of(seed, "mean:" + inst.graph + ":" + format_double(inst.p)));
    auto s = sample_s(params, samples, rng);
    double mean = sample_mean(s);
    double se = std::sqrt(sample_variance(s) / samples);
    double z = se > 0.0 ? std::abs(mean - 0.5) / se : 0.0;
    bool ok = exact_dev <= 1e-12 && z <= 3.0;
    res.pass = res.pass && ok;
    worst_exact = std::max(worst_exact, exact_dev);
    worst_z = std::max(worst_z, z);
    res.lines.push_back(fmt("%-12s p=%.1f  oracle |E(S)-1/2|=%.2e  sample mean %.5f (%.2f se)  %s",
                            inst.graph.c_str(), inst.p, exact_dev, mean, z,
                            ok ? "ok" : "FAIL"));
  }
  res.detail = fmt("worst oracle deviation %.2e (tol 1e-12), worst sample z %.2f (limit 3)",
                   worst_exact, worst_z);
  return res;
}

CheckResult check_cycle_closed_form(int n_lo, int n_hi, const std::vector<double>& ps,
                                    double tol) {
  CheckResult res;
  res.name = "cycle-closed-form";
  res.pass = true;
  double worst = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    auto kernel = std::make_shared<const TransitionKernel>(
        TransitionKernel::from_graph(GraphSpec::cycle(n)));
    for (double p : ps) {
      NvmParams params(kernel, p);
      double closed = cycle_sigma_sq(n, p);
      double exact = exact_gamma(params).sigma_sq();
      double diff = std::abs(closed - exact);
      worst = std::max(worst, diff);
      if (diff > tol) {
        res.pass = false;
        res.lines.push_back(fmt("cycle:%d p=%.2f closed=%.15g oracle=%.15g diff=%.2e FAIL",
                                n, p, closed, exact, diff));
      }
    }
  }
  res.detail = fmt("max |closed - oracle| = %.2e over n in [%d,%d] x %zu p-values (tol %.0e)",
                   worst, n_lo, n_hi, ps.size(), tol);
  return res;
}

CheckResult check_variance_bounds(const std::vector<CheckInstance>& instances) {
  CheckResult res;
  res.name = "variance-bounds";
  res.pass = true;
  for (const auto& inst : instances) {
    auto params = make_params(inst);
    double sigma_sq = exact_gamma(params).sigma_sq();
    double t_hit = hitting_time(*params.kernel).t_hit;
    auto bounds = variance_lower_bounds(*params.kernel, inst.p, t_hit);
    bool ok = sigma_sq >= bounds.nu_bound - 1e-12;
    double hit = 0.0;
    if (bounds.hit_bound) {
      hit = *bounds.hit_bound;
      ok = ok && sigma_sq >= hit - 1e-12;
    }
    res.pass = res.pass && ok;
    res.lines.push_back(fmt("%-12s p=%.1f  sigma^2=%.6f  nu-bound=%.6f  hit-bound=%s  %s",
                            inst.graph.c_str(), inst.p, sigma_sq, bounds.nu_bound,
                            bounds.hit_bound ? fmt("%.6f", hit).c_str() : "n/a (p>1/2)",
                            ok ? "ok" : "FAIL"));
  }
  res.detail = fmt("both lower bounds hold on %zu instances", instances.size());
  return res;
}

CheckResult check_psi_variance_bound(const std::vector<CheckInstance>& instances) {
  CheckResult res;
  res.name = "psi-variance-bound";
  res.pass = true;
  double worst_ratio = 0.0;
  for (const auto& inst : instances) {
    auto params = make_params(inst);
    auto dist = exact_gamma(params);
    double var_psi = exact_psi_variance(dist);
    double bound = psi_variance_bound(*params.kernel, dist.sigma_sq());
    bool ok = var_psi <= bound + 1e-12;
    res.pass = res.pass && ok;
    worst_ratio = std::max(worst_ratio, var_psi / bound);
    if (!ok)
      res.lines.push_back(fmt("%-12s p=%.1f var_psi=%.3e bound=%.3e FAIL",
                              inst.graph.c_str(), inst.p, var_psi, bound));
  }
  res.detail = fmt("Var(Psi) within bound on %zu instances (worst ratio %.3f)",
                   instances.size(), worst_ratio);
  return res;
}

CheckResult check_contraction(const std::vector<CheckInstance>& instances, double tol) {
  CheckResult res;
  res.name = "contraction";
  res.pass = true;
  double worst = 0.0;
  for (const auto& inst : instances) {
    auto params = make_params(inst);
    double resid = contraction_residual(params);
    worst = std::max(worst, resid);
    if (resid > tol) {
      res.pass = false;
      res.lines.push_back(fmt("%-12s p=%.1f residual=%.2e FAIL", inst.graph.c_str(),
                              inst.p, resid));
    }
  }
  res.detail = fmt("max per-state residual %.2e over %zu instances (tol %.0e)", worst,
                   instances.size(), tol);
  return res;
}

CheckResult check_sigma_via_dual(std::int64_t reps, double se_window, std::uint64_t seed) {
  CheckResult res;
  res.name = "sigma-via-dual";
  res.pass = true;
  struct Case {
    const char* graph;
    double p;
  };
  for (const Case& c : {Case{"cycle:8", 0.3}, Case{"complete:6", 0.3}}) {
    auto params = make_params({c.graph, c.p});
    double exact = params.kernel->family() == GraphFamily::Cycle
                       ? cycle_sigma_sq(params.n(), c.p)
                       : exact_gamma(params).sigma_sq();
    Rng rng(seed, stream_of(seed, std::string("sigma-dual:") + c.graph));
    auto est = sigma_sq_via_dual(params, reps, rng);
    double z = est.se > 0.0 ? std::abs(est.estimate - exact) / est.se : 0.0;
    bool ok = z <= se_window;
    res.pass = res.pass && ok;
    res.lines.push_back(fmt("%-12s p=%.1f exact=%.6f dual=%.6f (%.2f se)  %s", c.graph,
                            c.p, exact, est.estimate, z, ok ? "ok" : "FAIL"));
  }
  res.detail = fmt("pair estimator within %.0f se at %lld trajectories", se_window,
                   static_cast<long long>(reps));
  return res;
}

CheckResult check_gambler(std::int64_t reps, std::uint64_t seed) {
  CheckResult res;
  res.name = "gambler-gf";
  res.pass = true;
  struct Case {
    int n, k;
    double p;
  };
  double worst_z = 0.0;
  for (const Case& c : {Case{10, 3, 0.2}, Case{20, 10, 0.05}, Case{8, 1, 0.5}}) {
    double closed = gambler_gf(c.k, c.n, c.p);
    Rng rng(seed, stream_of(seed, fmt("gambler:%d:%d:%g", c.n, c.k, c.p)));
    auto mc = gambler_gf_mc(c.k, c.n, c.p, reps, rng);
    double z = mc.se > 0.0 ? std::abs(mc.estimate - closed) / mc.se : 0.0;
    worst_z = std::max(worst_z, z);
    bool ok = z <= 3.0;
    res.pass = res.pass && ok;
    res.lines.push_back(fmt("n=%-3d k=%-3d p=%.2f  closed=%.6f mc=%.6f (%.2f se)  %s", c.n,
                            c.k, c.p, closed, mc.estimate, z, ok ? "ok" : "FAIL"));
  }
  res.detail = fmt("worst deviation %.2f se (limit 3) at %lld reps", worst_z,
                   static_cast<long long>(reps));
  return res;
}

CheckResult check_h0_bound(int quadruples_per_instance, std::int64_t reps,
                           double se_window, std::uint64_t seed) {
  CheckResult res;
  res.name = "h0-bound";
  res.pass = true;
  int checked = 0, slack_min_idx = -1;
  double min_slack = 1e9;
  for (const char* graph : {"cycle:6", "complete:5"}) {
    for (double p : {0.2, 0.5}) {
      auto params = make_params({graph, p});
      auto dist = exact_gamma(params);
      int n = params.n();
      Rng pick(seed, stream_of(seed, fmt("h0-pick:%s:%g", graph, p)));
      Rng mc_rng(seed, stream_of(seed, fmt("h0-mc:%s:%g", graph, p)));
      std::set<std::array<int, 4>> used;
      for (int qi = 0; qi < quadruples_per_instance; ++qi) {
        std::array<int, 4> quad;
        do {
          std::set<int> vs;
          while (static_cast<int>(vs.size()) < 4) vs.insert(static_cast<int>(pick.below(n)));
          std::copy(vs.begin(), vs.end(), quad.begin());
          // shuffle the 4 roles
          for (int i = 3; i > 0; --i) std::swap(quad[i], quad[pick.below(i + 1)]);
        } while (!used.insert(quad).second);
        auto [u, v, x, y] = quad;
        double h0 = std::max(0.0, exact_h(dist, u, v, x, y));
        auto est = four_particle_orderings(params, u, v, x, y, reps, mc_rng);
        double bound = est.sum_est + se_window * est.sum_se;
        double slack = bound - h0;
        ++checked;
        if (slack < min_slack) {
          min_slack = slack;
          slack_min_idx = checked;
        }
        if (slack < 0.0) {
          res.pass = false;
          res.lines.push_back(fmt("%s p=%.1f quad=(%d,%d,%d,%d) h0=%.5f bound=%.5f FAIL",
                                  graph, p, u, v, x, y, h0, bound));
        }
      }
    }
  }
  res.detail = fmt("h0 <= 4-term bound + %.0f se on %d quadruples (min slack %.5f at #%d)",
                   se_window, checked, min_slack, slack_min_idx);
  return res;
}

CheckResult check_first_passage(int k, int t_max, std::int64_t reps, double se_window,
                                std::uint64_t seed) {
  CheckResult res;
  res.name = "first-passage-identity";
  Rng rng(seed, stream_of(seed, "first-passage"));
  auto cells = first_passage_identity(k, t_max, reps, rng);
  double worst = 0.0;
  res.pass = true;
  for (const auto& cell : cells) {
    double z = cell.se > 0.0 ? std::abs(cell.lhs - cell.rhs) / cell.se : 0.0;
    worst = std::max(worst, z);
    if (z > se_window) {
      res.pass = false;
      res.lines.push_back(fmt("t=%d lhs=%.6f rhs=%.6f (%.2f se) FAIL", cell.t, cell.lhs,
                              cell.rhs, z));
    }
  }
  res.detail = fmt("k=%d, t<=%d, %lld reps: worst |P(T=t) - (k/t)P(X_t=0)| = %.2f se (limit %.0f)",
                   k, t_max, static_cast<long long>(reps), worst, se_window);
  return res;
}

CheckResult check_torus_meeting_cdf(std::int64_t reps, std::uint64_t seed) {
  CheckResult res;
  res.name = "torus-meeting-cdf";
  res.pass = true;
  auto kernel = TransitionKernel::from_graph(GraphSpec::parse("torus:8x8"));
  std::vector<double> grid = {0.0, 1.0, 4.0, 16.0};
  Rng rng(seed, stream_of(seed, "torus-meet"));
  auto cdf = meeting_cdf(kernel, grid, reps, rng);
  for (size_t i = 0; i < grid.size(); ++i) {
    double bound = (2.0 * grid[i] + 1.0) * kernel.nu_sq();
    double limit = std::min(1.0, bound) + 3.0 * cdf[i].se;
    bool ok = cdf[i].estimate <= limit;
    res.pass = res.pass && ok;
    res.lines.push_back(fmt("t=%-4g P(M<=t)=%.5f  bound=%.5f (+3se %.5f)  %s", grid[i],
                            cdf[i].estimate, bound, limit, ok ? "ok" : "FAIL"));
  }
  res.detail = fmt("pair-meeting cdf within (2t+1)nu^2 at %zu grid points, %lld reps",
                   grid.size(), static_cast<long long>(reps));
  return res;
}

std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed) {
  auto suite = small_suite();
  std::vector<CheckResult> out;
  if (quick) {
    out.push_back(check_duality(suite, 100000, 0.005, 0.001, true, seed));
    out.push_back(check_mean_identity(suite, 20000, seed));
    out.push_back(check_cycle_closed_form(3, 10, {0.01, 0.1, 0.5, 0.9, 1.0}, 1e-10));
    out.push_back(check_variance_bounds(suite));
    out.push_back(check_psi_variance_bound(suite));
    out.push_back(check_contraction(suite, 1e-12));
    out.push_back(check_sigma_via_dual(20000, 4.0, seed));
    out.push_back(check_gambler(100000, seed));
    out.push_back(check_h0_bound(4, 20000, 4.0, seed));
    out.push_back(check_first_passage(3, 41, 1000000, 5.0, seed));
    out.push_back(check_torus_meeting_cdf(200000, seed));
  } else {
    out.push_back(check_duality(suite, 1000000, 0.005, 0.01, false, seed));
    out.push_back(check_mean_identity(suite, 100000, seed));
    out.push_back(check_cycle_closed_form(3, 12, {0.01, 0.1, 0.5, 0.9, 1.0}, 1e-10));
    out.push_back(check_variance_bounds(suite));
    out.push_back(check_psi_variance_bound(suite));
    out.push_back(check_contraction(suite, 1e-12));
    out.push_back(check_sigma_via_dual(100000, 4.0, seed));
    out.push_back(check_gambler(1000000, seed));
    out.push_back(check_h0_bound(20, 100000, 4.0, seed));
    out.push_back(check_first_passage(3, 41, 10000000, 5.0, seed));
    out.push_back(check_torus_meeting_cdf(1000000, seed));
  }
  return out;
}

}  // namespace nvm
