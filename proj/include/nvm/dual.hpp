#pragma once

#include <cstdint>
#include <vector>

#include "nvm/forward.hpp"

namespace nvm {

// Union-find over particle ids with path compression.
class UnionFind {
 public:
  explicit UnionFind(int n = 0) { reset(n); }
  void reset(int n) {
    parent_.resize(n);
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  int unite(int a, int b) {  // returns surviving root
    a = find(a);
    b = find(b);
    if (a != b) parent_[b] = a;
    return a;
  }

 private:
  std::vector<int> parent_;
};

// Backward (dual) process: one particle per vertex, all particles on the
// chosen vertex move together, each move either steps through the kernel or
// absorbs into one of two stubborn labels (fair split). Once every class is
// absorbed, the label vector is an exact stationary sample.
//
// step() performs one effective transition: idle picks of unoccupied
// vertices change nothing, so they are skipped (the embedded chain, and
// hence the law of the labels, is unchanged).
class DualState {
 public:
  DualState(std::shared_ptr<const TransitionKernel> kernel, double p);

  void reset();
  void step(Rng& rng);
  bool finished() const { return classes_ == 0; }
  int classes_alive() const { return classes_; }
  std::int64_t clock() const { return clock_; }

  int find(int particle) { return uf_.find(particle); }
  int position_of_class(int root) const { return class_pos_[root]; }  // -1 absorbed
  int label_of_class(int root) const { return label_[root]; }         // -1 alive

  // Runs to absorption. When one class remains no meeting can ever happen
  // again, so its label is a fair coin; the shortcut draws it directly.
  void run_to_absorption(Rng& rng, bool single_class_shortcut = true);

  void write_labels(OpinionConfig& out);

 private:
  std::shared_ptr<const TransitionKernel> kernel_;
  double p_;
  int n_;
  UnionFind uf_;
  std::vector<int> cls_at_;     // vertex -> class root, -1 empty
  std::vector<int> class_pos_;  // class root -> vertex, -1 absorbed
  std::vector<signed char> label_;
  std::vector<int> occ_;        // occupied vertices, swap-removed
  std::vector<int> occ_idx_;    // vertex -> index in occ_
  int classes_ = 0;
  std::int64_t clock_ = 0;

  void remove_occupied(int v);
  void absorb(int root, int v, bool bit);
};

struct McEstimate {
  double estimate = 0.0;
  double se = 0.0;
  std::int64_t reps = 0;
};

// Exact stationary sample via the discrete dual. Reuses scratch state.
class StationarySampler {
 public:
  explicit StationarySampler(const NvmParams& params);
  OpinionConfig sample(Rng& rng);
  void sample_into(OpinionConfig& out, Rng& rng);

 private:
  DualState state_;
  int n_;
};

OpinionConfig sample_stationary(const NvmParams& params, Rng& rng);

// Continuous-time variant: per-class exponential jump clocks (rate 1) and
// absorption clocks (rate p/(1-p)) raced through a priority queue. Same
// label law as the discrete dual; kept as an independent implementation.
OpinionConfig sample_stationary_continuous(const NvmParams& params, Rng& rng);

// S = sum pi(x) B(x) for `reps` independent stationary samples.
std::vector<double> sample_s(const NvmParams& params, std::int64_t reps, Rng& rng);

// P(two dual particles from x and y meet in V before either is absorbed).
// Estimated from the embedded race: each event is an absorption with
// probability p, otherwise a uniformly chosen walker jumps. x == y returns
// exactly 1; p == 1 returns exactly 0 for x != y.
McEstimate meet_before_absorption(const NvmParams& params, int x, int y,
                                  std::int64_t reps, Rng& rng);

// sigma^2 = (1/4) P_{pi x pi}(meet before absorption); Monte Carlo over
// pair trajectories with pi-distributed endpoints.
McEstimate sigma_sq_via_dual(const NvmParams& params, std::int64_t reps, Rng& rng);

struct FourPointEstimate {
  double pair_est[4] = {0, 0, 0, 0};  // (x,y), (x,v), (u,v), (u,y)
  double sum_est = 0.0;
  double sum_se = 0.0;
  std::int64_t reps = 0;
};

// Four coalescing/absorbing dual particles started at (u,v,x,y); estimates
// the four meet-before-both-absorbed probabilities that bound the positive
// part of the pair covariance h(u,v,x,y).
FourPointEstimate four_particle_orderings(const NvmParams& params, int u, int v, int x,
                                          int y, std::int64_t reps, Rng& rng);

// draw a pi-distributed vertex (alias-free: inverse CDF for non-uniform pi)
class PiSampler {
 public:
  explicit PiSampler(const TransitionKernel& kernel);
  int draw(Rng& rng) const;

 private:
  int n_;
  bool uniform_;
  std::vector<double> cum_;
};

}  // namespace nvm
