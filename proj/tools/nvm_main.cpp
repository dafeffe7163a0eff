// nvm: simulation and verification toolkit for the noisy voter model.
#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "nvm/analytics.hpp"
#include "nvm/checks.hpp"
#include "nvm/dual.hpp"
#include "nvm/io.hpp"
#include "nvm/oracle.hpp"
#include "nvm/rwlab.hpp"
#include "nvm/stats.hpp"
#include "nvm/sweep.hpp"

namespace {

using nvm::format_double;

// every emitted stream starts with "# version=... seed=... config=..."
class Output {
 public:
  Output(const std::string& path, std::uint64_t seed,
         const std::vector<std::pair<std::string, std::string>>& config) {
    if (path.empty() || path == "-") {
      os_ = &std::cout;
    } else {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output " + path);
      os_ = &file_;
    }
    canonical_ = nvm::canonical_config(config);
    *os_ << nvm::metadata_header(seed, canonical_) << '\n';
  }
  std::ostream& os() { return *os_; }
  const std::string& canonical() const { return canonical_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
  std::string canonical_;
};

std::shared_ptr<const nvm::TransitionKernel> load_kernel(const std::string& spec) {
  return std::make_shared<const nvm::TransitionKernel>(
      nvm::TransitionKernel::from_graph(nvm::GraphSpec::parse(spec)));
}

std::string bits_string(const nvm::OpinionConfig& cfg) {
  std::string s(cfg.n(), '0');
  for (int x = 0; x < cfg.n(); ++x)
    if (cfg.get(x)) s[x] = '1';
  return s;
}

int cmd_simulate(const std::string& graph, double p, std::int64_t steps, int replicas,
                 std::uint64_t seed, const std::string& init, bool allow_consensus,
                 const std::string& out_path) {
  auto kernel = load_kernel(graph);
  auto params = allow_consensus && p == 0.0 ? nvm::NvmParams::consensus_demo(kernel)
                                            : nvm::NvmParams(kernel, p);
  Output out(out_path, seed,
             {{"cmd", "simulate"},
              {"graph", graph},
              {"p", format_double(p)},
              {"steps", std::to_string(steps)},
              {"replicas", std::to_string(replicas)},
              {"init", init}});
  out.os() << "replica,steps,s_final,ones_final\n";
  for (int r = 0; r < replicas; ++r) {
    nvm::Rng rng(seed, r);
    nvm::OpinionConfig cfg;
    if (init == "zeros")
      cfg = nvm::OpinionConfig::zeros(kernel->n());
    else if (init == "ones")
      cfg = nvm::OpinionConfig::ones(kernel->n());
    else
      cfg = nvm::OpinionConfig::random(kernel->n(), rng);
    cfg = nvm::run(params, steps, std::move(cfg), rng);
    nvm::write_csv_row(out.os(), {std::to_string(r), std::to_string(steps),
                                  format_double(nvm::weighted_share(cfg, *kernel)),
                                  std::to_string(cfg.ones_count())});
  }
  return 0;
}

int cmd_dual_sample(const std::string& graph, double p, std::int64_t reps,
                    std::uint64_t seed, const std::string& emit,
                    const std::string& out_path) {
  auto kernel = load_kernel(graph);
  nvm::NvmParams params(kernel, p);
  Output out(out_path, seed,
             {{"cmd", "dual-sample"},
              {"graph", graph},
              {"p", format_double(p)},
              {"reps", std::to_string(reps)},
              {"emit", emit}});
  nvm::StationarySampler sampler(params);
  nvm::OpinionConfig cfg(kernel->n());
  if (emit == "bits") {
    out.os() << "replica,bits\n";
    for (std::int64_t r = 0; r < reps; ++r) {
      nvm::Rng rng(seed, r);
      sampler.sample_into(cfg, rng);
      nvm::write_csv_row(out.os(), {std::to_string(r), bits_string(cfg)});
    }
  } else {
    out.os() << "replica,s\n";
    for (std::int64_t r = 0; r < reps; ++r) {
      nvm::Rng rng(seed, r);
      sampler.sample_into(cfg, rng);
      nvm::write_csv_row(out.os(), {std::to_string(r),
                                    format_double(nvm::weighted_share(cfg, *kernel))});
    }
  }
  return 0;
}

int cmd_exact(const std::string& graph, double p, const std::string& emit, int max_n,
              const std::string& out_path) {
  auto kernel = load_kernel(graph);
  nvm::NvmParams params(kernel, p);
  auto dist = nvm::exact_gamma(params, max_n);
  Output out(out_path, 0,
             {{"cmd", "exact"}, {"graph", graph}, {"p", format_double(p)}, {"emit", emit}});
  if (emit == "moments") {
    out.os() << "n,p,e_s,sigma_sq,var_psi\n";
    nvm::write_csv_row(out.os(),
                       {std::to_string(kernel->n()), format_double(p),
                        format_double(dist.mean_s()), format_double(dist.sigma_sq()),
                        format_double(nvm::exact_psi_variance(dist))});
  } else if (emit == "spmf") {
    out.os() << "s,prob\n";
    for (const auto& [s, prob] : dist.s_pmf())
      nvm::write_csv_row(out.os(), {format_double(s), format_double(prob)});
  } else if (emit == "pairs") {
    out.os() << "x,y,p_disagree\n";
    auto pairs = dist.pair_disagreement();
    for (int x = 0; x < kernel->n(); ++x)
      for (int y = 0; y < kernel->n(); ++y)
        nvm::write_csv_row(out.os(), {std::to_string(x), std::to_string(y),
                                      format_double(pairs[x][y])});
  } else {  // gamma
    nlohmann::json j;
    j["version"] = nvm::kVersion;
    j["config"] = out.canonical();
    j["n"] = kernel->n();
    j["p"] = p;
    j["gamma"] = dist.gamma;
    out.os() << j.dump(2) << '\n';
  }
  return 0;
}

int cmd_rw(const std::string& what, const std::string& graph, int k, int n, double p,
           std::int64_t reps, int t_max, const std::string& tgrid, std::uint64_t seed,
           const std::string& out_path) {
  std::vector<std::pair<std::string, std::string>> cfg = {{"cmd", "rw"}, {"what", what}};
  if (!graph.empty()) cfg.emplace_back("graph", graph);
  Output out(out_path, seed, cfg);
  if (what == "thit") {
    auto kernel = load_kernel(graph);
    auto h = nvm::hitting_time(*kernel);
    out.os() << "t_hit,argmax_from,argmax_to,exact\n";
    nvm::write_csv_row(out.os(), {format_double(h.t_hit), std::to_string(h.argmax_from),
                                  std::to_string(h.argmax_to), h.exact ? "1" : "0"});
  } else if (what == "tmeet") {
    auto kernel = load_kernel(graph);
    nvm::Rng rng(seed, 0);
    auto m = nvm::meeting_time(*kernel, reps, rng);
    out.os() << "mean,se,reps\n";
    nvm::write_csv_row(out.os(), {format_double(m.estimate), format_double(m.se),
                                  std::to_string(m.reps)});
  } else if (what == "tail") {
    auto kernel = load_kernel(graph);
    std::vector<double> grid;
    std::stringstream ss(tgrid);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
    if (grid.empty()) throw std::runtime_error("--tgrid needs comma-separated times");
    nvm::Rng rng(seed, 0);
    auto cdf = nvm::meeting_cdf(*kernel, grid, reps, rng);
    out.os() << "t,p_meet_le_t,se,pair_bound\n";
    for (size_t i = 0; i < grid.size(); ++i)
      nvm::write_csv_row(out.os(),
                         {format_double(grid[i]), format_double(cdf[i].estimate),
                          format_double(cdf[i].se),
                          format_double((2.0 * grid[i] + 1.0) * kernel->nu_sq())});
  } else if (what == "gambler") {
    double closed = nvm::gambler_gf(k, n, p);
    out.os() << "k,n,p,closed,mc,mc_se\n";
    std::vector<std::string> cells = {std::to_string(k), std::to_string(n),
                                      format_double(p), format_double(closed)};
    if (reps > 0) {
      nvm::Rng rng(seed, 0);
      auto mc = nvm::gambler_gf_mc(k, n, p, reps, rng);
      cells.push_back(format_double(mc.estimate));
      cells.push_back(format_double(mc.se));
    } else {
      cells.push_back("");
      cells.push_back("");
    }
    nvm::write_csv_row(out.os(), cells);
  } else if (what == "fpt") {
    nvm::Rng rng(seed, 0);
    auto cells = nvm::first_passage_identity(k, t_max, reps, rng);
    out.os() << "t,first_passage,scaled_occupation,se,exact\n";
    for (const auto& c : cells)
      nvm::write_csv_row(out.os(), {std::to_string(c.t), format_double(c.lhs),
                                    format_double(c.rhs), format_double(c.se),
                                    format_double(c.lhs_exact)});
  } else {
    throw std::runtime_error("unknown --what '" + what + "'");
  }
  return 0;
}

int cmd_sweep(const std::string& preset, const std::string& plan_path, std::uint64_t seed,
              std::int64_t pair_reps, int threads, const std::string& out_path) {
  nvm::SweepPlan plan = !plan_path.empty() ? nvm::load_sweep_plan(plan_path)
                                           : nvm::sweep_preset(preset, seed);
  nvm::SweepOptions options;
  if (pair_reps > 0) options.sigma_pair_reps = pair_reps;

  std::vector<nvm::SweepResult> results(plan.rows.size());
  if (threads <= 1 || plan.rows.size() <= 1) {
    for (size_t i = 0; i < plan.rows.size(); ++i)
      results[i] = nvm::run_sweep_row(plan.rows[i], seed, i * 16, options);
  } else {
    // row-indexed streams make the outcome independent of the thread count
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= plan.rows.size()) return;
          results[i] = nvm::run_sweep_row(plan.rows[i], seed, i * 16, options);
        }
      });
    for (auto& th : pool) th.join();
  }

  Output out(out_path, seed,
             {{"cmd", "sweep"}, {"plan", plan.name}, {"rows", std::to_string(plan.rows.size())}});
  nvm::write_sweep_csv(out.os(), results);
  return 0;
}

int cmd_verify(bool quick, std::uint64_t seed, const std::string& out_path) {
  auto results = nvm::run_verification(quick, seed);
  bool all = true;
  std::ostringstream report;
  for (const auto& r : results) {
    all = all && r.pass;
    report << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    if (!r.pass)
      for (const auto& line : r.lines) report << "  " << line << '\n';
  }
  report << (all ? "verification passed" : "verification FAILED") << '\n';
  Output out(out_path, seed, {{"cmd", "verify"}, {"quick", quick ? "1" : "0"}});
  out.os() << report.str();
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy voter model toolkit"};
  app.require_subcommand(1);

  std::string graph, out_path = "-", init = "random", emit_dual = "s", emit_exact = "moments";
  std::string what, tgrid, preset, plan_path;
  double p = 0.5;
  std::int64_t steps = 0, reps = 0;
  int replicas = 1, max_n = nvm::kOracleDefaultMaxN, k = 1, n_param = 2, t_max = 41;
  int threads = 1;
  std::uint64_t seed = 0;
  bool allow_consensus = false, quick = false;

  const std::string graph_help =
      "graph spec: cycle:N, complete:N, star:N, hypercube:D, torus:AxB, "
      "edgelist:FILE, or config:FILE";
  const std::string out_help = "output file ('-' or omitted: stdout)";

  auto* sim = app.add_subcommand("simulate", "run the forward chain");
  sim->add_option("--graph", graph, graph_help)->required();
  sim->add_option("--p", p, "noise probability in (0,1]")->required();
  sim->add_option("--steps", steps, "voter-model steps per replica")->required();
  sim->add_option("--replicas", replicas, "independent replicas (default 1)");
  sim->add_option("--seed", seed, "RNG seed; replica r uses stream r")->required();
  sim->add_option("--init", init, "initial opinions (default random)")
      ->check(CLI::IsMember({"random", "zeros", "ones"}));
  sim->add_flag("--allow-consensus", allow_consensus,
                "accept p=0 (absorbing consensus demo)");
  sim->add_option("--out", out_path, out_help);

  auto* dual = app.add_subcommand("dual-sample", "exact stationary samples");
  dual->add_option("--graph", graph, graph_help)->required();
  dual->add_option("--p", p, "noise probability in (0,1]")->required();
  dual->add_option("--reps", reps, "number of stationary draws")->required();
  dual->add_option("--seed", seed, "RNG seed; draw r uses stream r")->required();
  dual->add_option("--emit", emit_dual, "s: weighted share per draw; bits: full 0/1 string")
      ->check(CLI::IsMember({"s", "bits"}));
  dual->add_option("--out", out_path, out_help);

  auto* exact = app.add_subcommand("exact", "small-instance stationary law");
  exact->add_option("--graph", graph, graph_help)->required();
  exact->add_option("--p", p, "noise probability in (0,1]")->required();
  exact->add_option("--emit", emit_exact,
                    "moments: mean/variance row; spmf: law of the weighted share; "
                    "gamma: full state law as JSON; pairs: disagreement matrix")
      ->check(CLI::IsMember({"moments", "spmf", "gamma", "pairs"}));
  exact->add_option("--max-n", max_n, "refuse graphs larger than this (guards 2^n memory)")
      ->check(CLI::Range(1, nvm::kOracleHardMaxN));
  exact->add_option("--out", out_path, out_help);

  auto* rw = app.add_subcommand("rw", "random-walk measurements");
  rw->add_option("--what", what,
                 "thit: worst-case hitting time; tmeet: mean pair meeting time; "
                 "tail: meeting-time cdf vs pair bound; gambler: interval "
                 "survival weight; fpt: first-passage identity table")
      ->required()
      ->check(CLI::IsMember({"thit", "tmeet", "tail", "gambler", "fpt"}));
  rw->add_option("--graph", graph, graph_help + " (thit/tmeet/tail)");
  rw->add_option("--k", k, "start offset (gambler: position in (0,n); fpt: distance)");
  rw->add_option("--n", n_param, "interval length for gambler");
  rw->add_option("--p", p, "per-step stopping weight for gambler");
  rw->add_option("--reps", reps, "Monte Carlo trajectories (gambler: 0 = closed form only)");
  rw->add_option("--tmax", t_max, "largest time in the fpt table");
  rw->add_option("--tgrid", tgrid, "comma-separated times for tail");
  rw->add_option("--seed", seed, "RNG seed");
  rw->add_option("--out", out_path, out_help);

  auto* sweep = app.add_subcommand("sweep", "phase-transition scans");
  auto* opt_preset =
      sweep->add_option("--preset", preset,
                        "built-in plan: cycle-transition, complete-transition, "
                        "torus2d-transition, conjecture-meeting");
  auto* opt_plan = sweep->add_option("--plan", plan_path,
                                     "plan file: one 'graph,p,samples' row per line");
  opt_preset->excludes(opt_plan);
  sweep->add_option("--seed", seed, "RNG seed; row i uses streams [16i, 16i+16)")->required();
  sweep->add_option("--pair-reps", reps, "pair trajectories for the variance estimate");
  sweep->add_option("--threads", threads, "worker threads (result independent of count)");
  sweep->add_option("--out", out_path, out_help);

  auto* verify = app.add_subcommand("verify", "run the property suite");
  verify->add_flag("--quick", quick, "smaller sample sizes, a few seconds total");
  verify->add_option("--seed", seed, "RNG seed for the sampled checks");
  verify->add_option("--out", out_path, out_help);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(graph, p, steps, replicas, seed, init, allow_consensus, out_path);
    if (dual->parsed()) return cmd_dual_sample(graph, p, reps, seed, emit_dual, out_path);
    if (exact->parsed()) return cmd_exact(graph, p, emit_exact, max_n, out_path);
    if (rw->parsed())
      return cmd_rw(what, graph, k, n_param, p, reps, t_max, tgrid, seed, out_path);
    if (sweep->parsed()) {
      if (preset.empty() && plan_path.empty())
        throw std::runtime_error("sweep needs --preset or --plan");
      return cmd_sweep(preset, plan_path, seed, reps, threads, out_path);
    }
    if (verify->parsed()) return cmd_verify(quick, seed, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
