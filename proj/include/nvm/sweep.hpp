#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nvm/analytics.hpp"

namespace nvm {

struct SweepRow {
  std::string graph;
  double p = 0.5;
  std::int64_t reps = 2000;
};

struct SweepPlan {
  std::string name;
  std::vector<SweepRow> rows;
};

// built-in plans: complete-transition, cycle-transition, torus2d-transition,
// conjecture-meeting (rows keyed on a measured mean meeting time)
SweepPlan sweep_preset(const std::string& name, std::uint64_t seed);
std::vector<std::string> sweep_preset_names();

// plan file: one "graph p reps" row per line, comma or whitespace separated
SweepPlan load_sweep_plan(const std::string& path);

struct SweepOptions {
  std::int64_t sigma_pair_reps = 10000;  // pair trajectories for the dual sigma^2
  std::int64_t bracket_edge_cap = 1 << 22;  // skip bracket when kernel entries exceed this
  bool keep_samples = false;
  int oracle_max_n = 12;
};

struct SweepResult {
  SweepRow row;
  int n = 0;
  double sigma_sq = 0.0;
  std::string sigma_src;  // oracle | cycle | dual
  LimitVerdict verdict;
  std::optional<SteinBracket> bracket;
  std::vector<double> s_samples;  // kept when options.keep_samples
};

// Each row consumes its own seeded streams, so results do not depend on row
// order or on other rows being present.
std::vector<SweepResult> run_sweep(const SweepPlan& plan, std::uint64_t seed,
                                   const SweepOptions& options = {});

SweepResult run_sweep_row(const SweepRow& row, std::uint64_t seed, std::uint64_t stream_base,
                          const SweepOptions& options = {});

// column header plus one line per row (fixed column set); callers prepend
// their own metadata line
void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& results);

}  // namespace nvm
