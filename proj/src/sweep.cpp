#include "nvm/sweep.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nvm/dual.hpp"
#include "nvm/io.hpp"
#include "nvm/oracle.hpp"
#include "nvm/rwlab.hpp"
#include "nvm/stats.hpp"

namespace nvm {

namespace {

SweepPlan complete_transition() {
  SweepPlan plan{"complete-transition", {}};
  for (int n : {64, 256, 1024})
    plan.rows.push_back({"complete:" + std::to_string(n), 4.0 / std::sqrt(n), 10000});
  return plan;
}

SweepPlan cycle_transition() {
  SweepPlan plan{"cycle-transition", {}};
  for (int n : {64, 256, 1024}) {
    plan.rows.push_back({"cycle:" + std::to_string(n), std::pow(n, -2.5), 2000});
    plan.rows.push_back({"cycle:" + std::to_string(n), 10.0 / std::pow(n, 1.5), 2000});
  }
  return plan;
}

SweepPlan torus2d_transition() {
  SweepPlan plan{"torus2d-transition", {}};
  for (int L : {8, 16, 32}) {
    double n = static_cast<double>(L) * L;
    std::string g = "torus:" + std::to_string(L) + "x" + std::to_string(L);
    plan.rows.push_back({g, 20.0 / (n * std::log(n)), 2000});
    plan.rows.push_back({g, 1.0 / (n * std::log(n) * std::log(n)), 2000});
  }
  return plan;
}

SweepPlan conjecture_meeting(std::uint64_t seed) {
  // p scaled against the measured mean meeting time: p * E(M) crossing 1
  // is the conjectured Gaussian/Bernoulli boundary on any family
  SweepPlan plan{"conjecture-meeting", {}};
  for (const std::string& g : {std::string("cycle:48"), std::string("torus:8x8")}) {
    auto kernel = TransitionKernel::from_graph(GraphSpec::parse(g));
    Rng rng(seed, fnv1a64("conjecture-meeting:" + g));
    double tm = meeting_time(kernel, 20000, rng).estimate;
    for (double c : {0.2, 1.0, 5.0}) plan.rows.push_back({g, std::min(1.0, c / tm), 2000});
  }
  return plan;
}

}  // namespace

std::vector<std::string> sweep_preset_names() {
  return {"complete-transition", "cycle-transition", "torus2d-transition",
          "conjecture-meeting"};
}

SweepPlan sweep_preset(const std::string& name, std::uint64_t seed) {
  if (name == "complete-transition") return complete_transition();
  if (name == "cycle-transition") return cycle_transition();
  if (name == "torus2d-transition") return torus2d_transition();
  if (name == "conjecture-meeting") return conjecture_meeting(seed);
  throw std::runtime_error("unknown preset '" + name + "'");
}

SweepPlan load_sweep_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan " + path);
  SweepPlan plan{path, {}};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::stringstream ss(line);
    SweepRow row;
    if (!(ss >> row.graph)) continue;
    if (!(ss >> row.p >> row.reps))
      throw std::runtime_error("plan row needs: graph p reps");
    plan.rows.push_back(row);
  }
  if (plan.rows.empty()) throw std::runtime_error("plan has no rows");
  return plan;
}

SweepResult run_sweep_row(const SweepRow& row, std::uint64_t seed, std::uint64_t stream_base,
                          const SweepOptions& options) {
  auto kernel = std::make_shared<const TransitionKernel>(
      TransitionKernel::from_graph(GraphSpec::parse(row.graph)));
  NvmParams params(kernel, row.p);
  int n = kernel->n();

  SweepResult res;
  res.row = row;
  res.n = n;

  // bracket inputs are collected when the edge count is manageable
  bool dense_psi = kernel->family() == GraphFamily::Complete;
  std::int64_t entries = 0;
  if (!dense_psi)
    for (int x = 0; x < n; ++x) entries += kernel->degree(x);
  bool want_psi = dense_psi || entries <= options.bracket_edge_cap;

  Rng sample_rng(seed, stream_base);
  StationarySampler sampler(params);
  OpinionConfig cfg(n);
  std::vector<double> s_samples(row.reps);
  std::vector<double> psi_samples;
  if (want_psi) psi_samples.reserve(row.reps);
  for (std::int64_t r = 0; r < row.reps; ++r) {
    sampler.sample_into(cfg, sample_rng);
    s_samples[r] = weighted_share(cfg, *kernel);
    if (want_psi) psi_samples.push_back(psi_value(cfg, *kernel));
  }

  double var_psi = -1.0;
  if (n <= options.oracle_max_n) {
    auto dist = exact_gamma(params, options.oracle_max_n);
    res.sigma_sq = dist.sigma_sq();
    res.sigma_src = "oracle";
    var_psi = exact_psi_variance(dist);
  } else if (kernel->family() == GraphFamily::Cycle) {
    res.sigma_sq = cycle_sigma_sq(n, row.p);
    res.sigma_src = "cycle";
  } else {
    Rng pair_rng(seed, stream_base + 1);
    res.sigma_sq = sigma_sq_via_dual(params, options.sigma_pair_reps, pair_rng).estimate;
    res.sigma_src = "dual";
  }
  if (var_psi < 0.0 && want_psi) var_psi = sample_variance(psi_samples);

  res.verdict = limit_verdict(s_samples, std::sqrt(res.sigma_sq));
  if (var_psi >= 0.0) res.bracket = stein_bracket(*kernel, row.p, res.sigma_sq, var_psi);
  if (options.keep_samples) res.s_samples = std::move(s_samples);
  return res;
}

std::vector<SweepResult> run_sweep(const SweepPlan& plan, std::uint64_t seed,
                                   const SweepOptions& options) {
  std::vector<SweepResult> out;
  out.reserve(plan.rows.size());
  for (size_t i = 0; i < plan.rows.size(); ++i)
    out.push_back(run_sweep_row(plan.rows[i], seed, i * 16, options));
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& results) {
  os << "n,p,sigma_sq,sigma_src,ks,endpoint_mass,term1,term2,term3,bracket_total,verdict\n";
  for (const auto& r : results) {
    std::vector<std::string> cells;
    cells.push_back(std::to_string(r.n));
    cells.push_back(format_double(r.row.p));
    cells.push_back(format_double(r.sigma_sq));
    cells.push_back(r.sigma_src);
    cells.push_back(format_double(r.verdict.ks));
    cells.push_back(format_double(r.verdict.endpoint_mass));
    if (r.bracket) {
      cells.push_back(format_double(r.bracket->term1));
      cells.push_back(format_double(r.bracket->term2));
      cells.push_back(format_double(r.bracket->term3));
      cells.push_back(format_double(r.bracket->total()));
    } else {
      cells.insert(cells.end(), {"", "", "", ""});
    }
    cells.push_back(verdict_name(r.verdict.verdict));
    write_csv_row(os, cells);
  }
}

}  // namespace nvm
