// Acceptance gate: thirteen numbered criteria, one PASS/FAIL line each.
//
//   acceptance          run all criteria
//   acceptance <index>  run one criterion (1..13)
//
// Exit code is the number of failed criteria. Tolerances and budgets are
// pinned here; per-instance breakdowns print under a failing line.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "nvm/analytics.hpp"
#include "nvm/checks.hpp"
#include "nvm/sweep.hpp"

namespace {

constexpr std::uint64_t kSeed = 20260816;

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> lines;
};

Outcome from_check(const nvm::CheckResult& r, double budget_s = 0.0, double elapsed_s = 0.0) {
  Outcome o{r.pass, r.detail, r.lines};
  if (budget_s > 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " [%.1fs, budget %.0fs]", elapsed_s, budget_s);
    o.detail += buf;
    if (elapsed_s > budget_s) {
      o.pass = false;
      o.detail += " OVER BUDGET";
    }
  }
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criteria 1..9, 11, 12: property checks at pinned budgets ----

Outcome criterion_duality() {
  auto t0 = std::chrono::steady_clock::now();
  auto r = nvm::check_duality(nvm::small_suite(), 1000000, 0.005, 0.01, false, kSeed);
  return from_check(r, 300.0, seconds_since(t0));
}

Outcome criterion_mean() {
  return from_check(nvm::check_mean_identity(nvm::small_suite(), 100000, kSeed));
}

Outcome criterion_cycle_closed_form() {
  auto t0 = std::chrono::steady_clock::now();
  auto r = nvm::check_cycle_closed_form(3, 12, {0.01, 0.1, 0.5, 0.9, 1.0}, 1e-10);
  return from_check(r, 120.0, seconds_since(t0));
}

Outcome criterion_variance_bounds() {
  return from_check(nvm::check_variance_bounds(nvm::small_suite()));
}

Outcome criterion_psi_bound() {
  return from_check(nvm::check_psi_variance_bound(nvm::small_suite()));
}

Outcome criterion_contraction() {
  return from_check(nvm::check_contraction(nvm::small_suite(), 1e-12));
}

Outcome criterion_sigma_dual() {
  return from_check(nvm::check_sigma_via_dual(100000, 4.0, kSeed));
}

Outcome criterion_gambler() {
  return from_check(nvm::check_gambler(1000000, kSeed));
}

Outcome criterion_h0() {
  return from_check(nvm::check_h0_bound(20, 100000, 4.0, kSeed));
}

Outcome criterion_first_passage() {
  return from_check(nvm::check_first_passage(3, 41, 10000000, 5.0, kSeed));
}

Outcome criterion_torus_tail() {
  return from_check(nvm::check_torus_meeting_cdf(1000000, kSeed));
}

// ---- criterion 10: four trend scans across the noise phase boundary ----

std::vector<nvm::SweepResult> run_rows(const std::vector<nvm::SweepRow>& rows,
                                       std::uint64_t stream_base,
                                       const nvm::SweepOptions& opts = {}) {
  std::vector<nvm::SweepResult> out;
  for (size_t i = 0; i < rows.size(); ++i)
    out.push_back(nvm::run_sweep_row(rows[i], kSeed, stream_base + i * 16, opts));
  return out;
}

std::string fmt3(const std::vector<nvm::SweepResult>& rs, const char* what) {
  std::ostringstream os;
  os << what << "=(";
  for (size_t i = 0; i < rs.size(); ++i) {
    if (i) os << ", ";
    char buf[32];
    if (std::string(what) == "ks")
      std::snprintf(buf, sizeof buf, "%.4f", rs[i].verdict.ks);
    else
      std::snprintf(buf, sizeof buf, "%.4f", rs[i].verdict.sigma_hat_sq);
    os << buf;
  }
  os << ")";
  return os.str();
}

Outcome criterion_transitions() {
  Outcome o;
  o.pass = true;
  auto t0 = std::chrono::steady_clock::now();

  // (a) complete graphs, p = 4/sqrt(n): Gaussian limit, KS strictly down.
  // The three distances sit near (0.036, 0.013, 0.005), so the last gap is
  // under 0.01: 1e5 samples push the KS sampling floor to ~0.003 and 2e5
  // pair trajectories keep the sigma estimate (which standardizes the KS
  // statistic) within ~1%, keeping both trend gaps above the noise.
  {
    std::vector<nvm::SweepRow> rows;
    for (int n : {64, 256, 1024})
      rows.push_back({"complete:" + std::to_string(n), 4.0 / std::sqrt(double(n)), 100000});
    nvm::SweepOptions opts;
    opts.sigma_pair_reps = 200000;
    auto rs = run_rows(rows, 0, opts);
    bool ok = rs[0].verdict.ks > rs[1].verdict.ks && rs[1].verdict.ks > rs[2].verdict.ks;
    o.pass = o.pass && ok;
    o.lines.push_back(std::string(ok ? "ok   " : "FAIL ") +
                      "complete p=4/sqrt(n): " + fmt3(rs, "ks") + " strictly decreasing");
  }

  // (b) cycles, p = n^-2.5, 2000 samples: variance climbs toward 1/4 and the
  // endpoint mass dominates at n=1024
  {
    std::vector<nvm::SweepRow> rows;
    for (int n : {64, 256, 1024})
      rows.push_back({"cycle:" + std::to_string(n), std::pow(double(n), -2.5), 2000});
    auto rs = run_rows(rows, 100);
    bool up = rs[0].verdict.sigma_hat_sq < rs[1].verdict.sigma_hat_sq &&
              rs[1].verdict.sigma_hat_sq < rs[2].verdict.sigma_hat_sq;
    bool toward = std::abs(rs[2].verdict.sigma_hat_sq - 0.25) <
                  std::abs(rs[0].verdict.sigma_hat_sq - 0.25);
    bool ends = rs[2].verdict.endpoint_mass > 0.9;
    bool ok = up && toward && ends;
    o.pass = o.pass && ok;
    char buf[64];
    std::snprintf(buf, sizeof buf, "endpoint(1024)=%.4f", rs[2].verdict.endpoint_mass);
    o.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + "cycle p=n^-2.5: " +
                      fmt3(rs, "sigma_hat_sq") + " rising toward 1/4, " + buf + " > 0.9");
  }

  // (c) cycles, p = 10 n^-1.5: Gaussian limit, KS strictly down (20000
  // samples lift the trend above the KS sampling floor)
  {
    std::vector<nvm::SweepRow> rows;
    for (int n : {64, 256, 1024})
      rows.push_back({"cycle:" + std::to_string(n), 10.0 * std::pow(double(n), -1.5), 20000});
    auto rs = run_rows(rows, 200);
    bool ok = rs[0].verdict.ks > rs[1].verdict.ks && rs[1].verdict.ks > rs[2].verdict.ks;
    o.pass = o.pass && ok;
    o.lines.push_back(std::string(ok ? "ok   " : "FAIL ") +
                      "cycle p=10/n^1.5: " + fmt3(rs, "ks") + " strictly decreasing");
  }

  // (d) tori at the same size, fast vs slow noise: verdicts diverge at L=32
  {
    std::vector<nvm::SweepRow> rows;
    for (int L : {8, 16, 32}) {
      double n = double(L) * L;
      rows.push_back({"torus:" + std::to_string(L) + "x" + std::to_string(L),
                      20.0 / (n * std::log(n)), 10000});
      rows.push_back({"torus:" + std::to_string(L) + "x" + std::to_string(L),
                      1.0 / (n * std::log(n) * std::log(n)), 10000});
    }
    auto rs = run_rows(rows, 300);
    const auto& fast32 = rs[4].verdict;
    const auto& slow32 = rs[5].verdict;
    bool ok = fast32.verdict == nvm::Verdict::GaussianTrend &&
              slow32.verdict == nvm::Verdict::BernoulliTrend;
    o.pass = o.pass && ok;
    o.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + "torus 32x32: fast-noise " +
                      nvm::verdict_name(fast32.verdict) + " vs slow-noise " +
                      nvm::verdict_name(slow32.verdict));
  }

  double elapsed = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "four trend scans [%.1fs, budget 3600s]", elapsed);
  o.detail = buf;
  if (elapsed > 3600.0) {
    o.pass = false;
    o.detail += " OVER BUDGET";
  }
  return o;
}

// ---- criterion 13: byte-identical CLI reruns ----

#ifdef NVM_CLI_PATH

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome criterion_determinism() {
  Outcome o;
  o.pass = true;
  const std::string cli = NVM_CLI_PATH;
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"dual-sample", "dual-sample --graph cycle:6 --p 0.3 --reps 2000 --seed 11"},
      {"simulate", "simulate --graph torus:3x3 --p 0.2 --steps 20000 --replicas 5 --seed 12"},
      {"exact", "exact --graph star:5 --p 0.5 --emit gamma"},
      {"rw-fpt", "rw --what fpt --k 3 --tmax 21 --reps 100000 --seed 14"},
      {"sweep", "sweep --preset complete-transition --seed 15"},
      {"verify", "verify --quick --seed 16"},
  };
  for (const auto& [name, args] : cases) {
    std::string out1 = "accept_det_" + name + "_1.tmp";
    std::string out2 = "accept_det_" + name + "_2.tmp";
    for (const auto& out : {out1, out2}) {
      std::string cmd = cli + " " + args + " --out " + out;
      int rc = std::system(cmd.c_str());
      // verify reports its own pass/fail through the exit code; here only
      // the reproducibility of its report is under test
      if (rc != 0 && name != "verify") {
        o.pass = false;
        o.lines.push_back("FAIL " + name + ": exit code " + std::to_string(rc));
      }
    }
    std::string a = read_file(out1), b = read_file(out2);
    bool ok = !a.empty() && a == b;
    if (!ok) {
      o.pass = false;
      o.lines.push_back("FAIL " + name + ": reruns differ (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + " bytes)");
    } else {
      o.lines.push_back("ok   " + name + ": " + std::to_string(a.size()) +
                        " bytes, byte-identical rerun");
    }
    std::remove(out1.c_str());
    std::remove(out2.c_str());
  }
  o.detail = "six subcommands rerun with fixed seeds";
  return o;
}

#else

Outcome criterion_determinism() {
  return {false, "CLI binary not built; determinism unverifiable", {}};
}

#endif

struct Criterion {
  int index;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "duality-exactness", criterion_duality},
    {2, "mean-identity", criterion_mean},
    {3, "cycle-closed-form", criterion_cycle_closed_form},
    {4, "variance-lower-bounds", criterion_variance_bounds},
    {5, "psi-variance-bound", criterion_psi_bound},
    {6, "contraction-identity", criterion_contraction},
    {7, "sigma-sq-dual-identity", criterion_sigma_dual},
    {8, "gambler-generating-function", criterion_gambler},
    {9, "four-point-bound", criterion_h0},
    {10, "phase-transition-trends", criterion_transitions},
    {11, "first-passage-identity", criterion_first_passage},
    {12, "torus-meeting-tail", criterion_torus_tail},
    {13, "cli-determinism", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 13) {
      std::fprintf(stderr, "usage: %s [1..13]\n", argv[0]);
      return 64;
    }
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only && c.index != only) continue;
    Outcome o = c.run();
    std::printf("%s criterion %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.index, c.name,
                o.detail.c_str());
    if (!o.pass || only)
      for (const auto& line : o.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures;
}
