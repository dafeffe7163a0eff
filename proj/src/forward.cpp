#include "nvm/forward.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace nvm {

NvmParams::NvmParams(std::shared_ptr<const TransitionKernel> k, double p_) {
  if (!k) throw std::runtime_error("params need a kernel");
  if (!(p_ > 0.0 && p_ <= 1.0)) throw std::runtime_error("p must lie in (0,1]");
  kernel = std::move(k);
  p = p_;
}

NvmParams NvmParams::consensus_demo(std::shared_ptr<const TransitionKernel> k) {
  if (!k) throw std::runtime_error("params need a kernel");
  NvmParams params;
  params.kernel = std::move(k);
  params.p = 0.0;
  return params;
}

OpinionConfig OpinionConfig::ones(int n) {
  OpinionConfig c(n);
  for (int x = 0; x < n; ++x) c.set(x, true);
  return c;
}

OpinionConfig OpinionConfig::random(int n, Rng& rng) {
  OpinionConfig c(n);
  for (size_t i = 0; i < c.w_.size(); ++i) c.w_[i] = rng.u64();
  int spare = static_cast<int>(c.w_.size()) * 64 - n;
  if (spare > 0) c.w_.back() &= ~0ull >> spare;
  c.ones_ = 0;
  for (std::uint64_t word : c.w_) c.ones_ += std::popcount(word);
  return c;
}

OpinionConfig OpinionConfig::from_mask(int n, std::uint64_t mask) {
  if (n > 64) throw std::runtime_error("from_mask handles n <= 64");
  OpinionConfig c(n);
  if (n < 64) mask &= (1ull << n) - 1;
  c.w_[0] = mask;
  c.ones_ = std::popcount(mask);
  return c;
}

int OpinionConfig::hamming(const OpinionConfig& other) const {
  if (n_ != other.n_) throw std::runtime_error("config size mismatch");
  int d = 0;
  for (size_t i = 0; i < w_.size(); ++i) d += std::popcount(w_[i] ^ other.w_[i]);
  return d;
}

double weighted_share(const OpinionConfig& cfg, const TransitionKernel& kernel) {
  if (kernel.uniform_pi())
    return static_cast<double>(cfg.ones_count()) / cfg.n();
  const auto& pi = kernel.pi();
  double s = 0.0;
  for (int x = 0; x < cfg.n(); ++x)
    if (cfg.get(x)) s += pi[x];
  return s;
}

int step_inplace(OpinionConfig& cfg, const NvmParams& params, Rng& rng) {
  const auto& kernel = *params.kernel;
  int x = static_cast<int>(rng.below(kernel.n()));
  bool bit;
  if (rng.uniform01() < params.p) {
    bit = rng.coin();
  } else {
    bit = cfg.get(kernel.sample_next(x, rng));
  }
  cfg.set(x, bit);
  return x;
}

OpinionConfig run(const NvmParams& params, std::int64_t steps, OpinionConfig init, Rng& rng) {
  if (init.n() != params.n()) throw std::runtime_error("init size mismatch");
  for (std::int64_t t = 0; t < steps; ++t) step_inplace(init, params, rng);
  return init;
}

double transition_prob(const OpinionConfig& cfg, const OpinionConfig& cfg2,
                       const NvmParams& params) {
  const auto& kernel = *params.kernel;
  int n = kernel.n();
  if (cfg.n() != n || cfg2.n() != n) throw std::runtime_error("config size mismatch");
  int d = cfg.hamming(cfg2);
  if (d >= 2) return 0.0;

  auto flip_mass = [&](int x, bool target) {
    // P(chosen vertex x adopts value `target`), given x was chosen
    double nbr = 0.0;
    kernel.for_each_entry(x, [&](int y, double w) {
      if (cfg.get(y) == target) nbr += w;
    });
    return params.p / 2.0 + params.q() * nbr;
  };

  if (d == 1) {
    int x = 0;
    while (cfg.get(x) == cfg2.get(x)) ++x;
    return flip_mass(x, cfg2.get(x)) / n;
  }
  // diagonal: 1 - total mass of actual flips
  double off = 0.0;
  for (int x = 0; x < n; ++x) off += flip_mass(x, !cfg.get(x));
  return 1.0 - off / n;
}

NvmParams from_rates(const RateMatrix& rates, double delta) {
  int n = rates.n;
  if (n < 1 || static_cast<int>(rates.r.size()) != n)
    throw std::runtime_error("bad rate matrix");
  if (delta <= 0.0) throw std::runtime_error("delta must be positive");
  double r_max = 0.0;
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(rates.r[x].size()) != n)
      throw std::runtime_error("bad rate matrix row");
    double out = 0.0;
    for (int y = 0; y < n; ++y) {
      if (y == x) continue;
      if (rates.r[x][y] < 0.0) throw std::runtime_error("negative rate");
      out += rates.r[x][y];
    }
    if (std::abs(rates.r[x][x] + out) > 1e-9 * std::max(1.0, out))
      throw std::runtime_error("rate matrix rows must sum to 0");
    r_max = std::max(r_max, out);
  }
  if (r_max <= 0.0) throw std::runtime_error("rate matrix is identically zero");

  std::vector<std::vector<KernelEntry>> rows(n);
  for (int x = 0; x < n; ++x) {
    double out = 0.0;
    for (int y = 0; y < n; ++y)
      if (y != x && rates.r[x][y] > 0.0) {
        rows[x].push_back({y, rates.r[x][y] / r_max});
        out += rates.r[x][y];
      }
    double stay = 1.0 - out / r_max;
    if (stay > 1e-15) rows[x].push_back({x, stay});
  }
  auto kernel = std::make_shared<TransitionKernel>(
      TransitionKernel::from_rows(n, std::move(rows), "uniformized"));
  return NvmParams(std::move(kernel), delta / (r_max + delta));
}

}  // namespace nvm
