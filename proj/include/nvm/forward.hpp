#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "nvm/graph.hpp"
#include "nvm/rng.hpp"

namespace nvm {

// Model parameters: a kernel plus the re-randomization probability p.
// p must lie in (0,1]; consensus_demo() is the only way to get p = 0 and
// such params are accepted by the forward chain only (the stationary-law
// machinery refuses them, absorbing consensus has no unique stationary law).
struct NvmParams {
  std::shared_ptr<const TransitionKernel> kernel;
  double p = 0.5;

  NvmParams(std::shared_ptr<const TransitionKernel> k, double p_);
  static NvmParams consensus_demo(std::shared_ptr<const TransitionKernel> k);

  double q() const { return 1.0 - p; }
  int n() const { return kernel->n(); }
  bool absorbing() const { return p == 0.0; }

 private:
  NvmParams() = default;
};

// Packed opinion vector with a popcount cache.
class OpinionConfig {
 public:
  OpinionConfig() = default;
  explicit OpinionConfig(int n) : n_(n), w_((n + 63) / 64, 0), ones_(0) {}

  static OpinionConfig zeros(int n) { return OpinionConfig(n); }
  static OpinionConfig ones(int n);
  static OpinionConfig random(int n, Rng& rng);      // iid fair bits
  static OpinionConfig from_mask(int n, std::uint64_t mask);

  int n() const { return n_; }
  int ones_count() const { return ones_; }

  bool get(int x) const { return (w_[x >> 6] >> (x & 63)) & 1; }

  void set(int x, bool v) {
    std::uint64_t bit = 1ull << (x & 63);
    std::uint64_t& word = w_[x >> 6];
    bool cur = word & bit;
    if (cur == v) return;
    word ^= bit;
    ones_ += v ? 1 : -1;
  }

  std::uint64_t mask() const { return w_.empty() ? 0 : w_[0]; }  // n <= 64 only

  int hamming(const OpinionConfig& other) const;

  bool operator==(const OpinionConfig& other) const {
    return n_ == other.n_ && w_ == other.w_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
  int ones_ = 0;
};

// S = sum_x pi(x) xi(x)
double weighted_share(const OpinionConfig& cfg, const TransitionKernel& kernel);

// One chain step: pick a uniform vertex, re-randomize with prob p, else copy
// a P-neighbor. Mutates cfg; returns the updated vertex.
int step_inplace(OpinionConfig& cfg, const NvmParams& params, Rng& rng);

inline OpinionConfig step(OpinionConfig cfg, const NvmParams& params, Rng& rng) {
  step_inplace(cfg, params, rng);
  return cfg;
}

OpinionConfig run(const NvmParams& params, std::int64_t steps, OpinionConfig init, Rng& rng);

// Single-step transition probability Q(cfg, cfg2); zero when the configs
// differ in two or more coordinates.
double transition_prob(const OpinionConfig& cfg, const OpinionConfig& cfg2,
                       const NvmParams& params);

// Uniformization of a continuous-time rate matrix with re-randomization
// rate delta: P = I + R / r_max, p = delta / (r_max + delta).
NvmParams from_rates(const RateMatrix& rates, double delta);

}  // namespace nvm
