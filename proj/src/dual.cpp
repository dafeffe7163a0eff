#include "nvm/dual.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace nvm {

namespace {
constexpr std::int64_t kStepCap = 1'000'000'000;

void require_ergodic(const NvmParams& params) {
  if (params.absorbing())
    throw std::runtime_error("p = 0 has no stationary law to sample");
}
}  // namespace

DualState::DualState(std::shared_ptr<const TransitionKernel> kernel, double p)
    : kernel_(std::move(kernel)), p_(p), n_(kernel_->n()) {
  if (!(p_ > 0.0 && p_ <= 1.0)) throw std::runtime_error("p must lie in (0,1]");
  cls_at_.resize(n_);
  class_pos_.resize(n_);
  label_.resize(n_);
  occ_.resize(n_);
  occ_idx_.resize(n_);
  reset();
}

void DualState::reset() {
  uf_.reset(n_);
  for (int v = 0; v < n_; ++v) {
    cls_at_[v] = v;
    class_pos_[v] = v;
    label_[v] = -1;
    occ_[v] = v;
    occ_idx_[v] = v;
  }
  classes_ = n_;
  clock_ = 0;
}

void DualState::remove_occupied(int v) {
  int idx = occ_idx_[v];
  int last = occ_[classes_ - 1];  // occ_ front section holds `classes_` entries
  occ_[idx] = last;
  occ_idx_[last] = idx;
  cls_at_[v] = -1;
}

void DualState::absorb(int root, int v, bool bit) {
  label_[root] = bit ? 1 : 0;
  class_pos_[root] = -1;
  remove_occupied(v);
  --classes_;
}

void DualState::step(Rng& rng) {
  if (classes_ == 0) return;
  if (++clock_ > kStepCap) throw std::runtime_error("dual step cap exceeded");
  int x = occ_[rng.below(classes_)];
  int root = cls_at_[x];
  if (rng.uniform01() < p_) {
    absorb(root, x, rng.coin());
    return;
  }
  int y = kernel_->sample_next(x, rng);
  if (y == x) return;  // self-loop kernels
  int other = cls_at_[y];
  if (other >= 0) {
    remove_occupied(x);
    uf_.unite(other, root);  // meeting: classes coalesce, resident root survives
    class_pos_[root] = -1;
    --classes_;
  } else {
    remove_occupied(x);
    cls_at_[y] = root;
    class_pos_[root] = y;
    occ_[classes_ - 1] = y;  // slot freed by remove_occupied
    occ_idx_[y] = classes_ - 1;
  }
}

void DualState::run_to_absorption(Rng& rng, bool single_class_shortcut) {
  while (classes_ > 1) step(rng);
  if (classes_ == 1) {
    int v = occ_[0];
    if (single_class_shortcut) {
      absorb(cls_at_[v], v, rng.coin());
    } else {
      while (classes_ > 0) step(rng);
    }
  }
}

void DualState::write_labels(OpinionConfig& out) {
  for (int v = 0; v < n_; ++v) out.set(v, label_[uf_.find(v)] == 1);
}

StationarySampler::StationarySampler(const NvmParams& params)
    : state_(params.kernel, params.p), n_(params.n()) {
  require_ergodic(params);
}

OpinionConfig StationarySampler::sample(Rng& rng) {
  OpinionConfig out(n_);
  sample_into(out, rng);
  return out;
}

void StationarySampler::sample_into(OpinionConfig& out, Rng& rng) {
  if (out.n() != n_) out = OpinionConfig(n_);
  state_.reset();
  state_.run_to_absorption(rng);
  state_.write_labels(out);
}

OpinionConfig sample_stationary(const NvmParams& params, Rng& rng) {
  StationarySampler sampler(params);
  return sampler.sample(rng);
}

OpinionConfig sample_stationary_continuous(const NvmParams& params, Rng& rng) {
  require_ergodic(params);
  const auto& kernel = *params.kernel;
  int n = kernel.n();
  OpinionConfig out(n);
  if (params.p == 1.0) {  // absorption clock fires instantly relative to jumps
    for (int v = 0; v < n; ++v) out.set(v, rng.coin());
    return out;
  }
  double delta = params.p / (1.0 - params.p);

  struct Event {
    double t;
    int root;
    int gen;
    bool absorb;
    bool operator>(const Event& o) const { return t > o.t; }
  };
  UnionFind uf(n);
  std::vector<int> cls_at(n), pos(n), gen(n, 0);
  std::vector<signed char> label(n, -1);
  for (int v = 0; v < n; ++v) {
    cls_at[v] = v;
    pos[v] = v;
  }
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> pq;
  auto arm = [&](int root, double now) {
    ++gen[root];
    pq.push({now + rng.exponential(1.0), root, gen[root], false});
    pq.push({now + rng.exponential(delta), root, gen[root], true});
  };
  for (int v = 0; v < n; ++v) arm(v, 0.0);

  int alive = n;
  while (alive > 0) {
    Event ev = pq.top();
    pq.pop();
    if (ev.gen != gen[ev.root] || label[ev.root] != -1) continue;
    if (ev.absorb) {
      label[ev.root] = rng.coin() ? 1 : 0;
      ++gen[ev.root];
      cls_at[pos[ev.root]] = -1;
      --alive;
      continue;
    }
    int x = pos[ev.root];
    int y = kernel.sample_next(x, rng);
    if (y == x) {
      arm(ev.root, ev.t);
      continue;
    }
    cls_at[x] = -1;
    int other = cls_at[y];
    if (other >= 0) {
      ++gen[ev.root];
      ++gen[other];
      int surv = uf.unite(other, ev.root);
      pos[surv] = y;
      cls_at[y] = surv;
      arm(surv, ev.t);
      --alive;
    } else {
      pos[ev.root] = y;
      cls_at[y] = ev.root;
      arm(ev.root, ev.t);
    }
  }
  for (int v = 0; v < n; ++v) out.set(v, label[uf.find(v)] == 1);
  return out;
}

std::vector<double> sample_s(const NvmParams& params, std::int64_t reps, Rng& rng) {
  require_ergodic(params);
  StationarySampler sampler(params);
  std::vector<double> out(reps);
  OpinionConfig cfg(params.n());
  for (std::int64_t r = 0; r < reps; ++r) {
    sampler.sample_into(cfg, rng);
    out[r] = weighted_share(cfg, *params.kernel);
  }
  return out;
}

McEstimate meet_before_absorption(const NvmParams& params, int x, int y,
                                  std::int64_t reps, Rng& rng) {
  require_ergodic(params);
  const auto& kernel = *params.kernel;
  if (x < 0 || y < 0 || x >= kernel.n() || y >= kernel.n())
    throw std::runtime_error("vertex out of range");
  if (x == y) return {1.0, 0.0, reps};
  if (params.p == 1.0) return {0.0, 0.0, reps};
  double p = params.p;
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    int a = x, b = y;
    for (;;) {
      if (rng.uniform01() < p) break;  // one of the absorption clocks fired
      if (rng.coin()) {
        a = kernel.sample_next(a, rng);
      } else {
        b = kernel.sample_next(b, rng);
      }
      if (a == b) {
        ++hits;
        break;
      }
    }
  }
  double f = static_cast<double>(hits) / reps;
  return {f, std::sqrt(f * (1.0 - f) / reps), reps};
}

PiSampler::PiSampler(const TransitionKernel& kernel)
    : n_(kernel.n()), uniform_(kernel.uniform_pi()) {
  if (!uniform_) {
    cum_.resize(n_);
    double acc = 0.0;
    for (int x = 0; x < n_; ++x) cum_[x] = (acc += kernel.pi()[x]);
    cum_.back() = 1.0;
  }
}

int PiSampler::draw(Rng& rng) const {
  if (uniform_) return static_cast<int>(rng.below(n_));
  double u = rng.uniform01();
  return static_cast<int>(std::lower_bound(cum_.begin(), cum_.end(), u) - cum_.begin());
}

McEstimate sigma_sq_via_dual(const NvmParams& params, std::int64_t reps, Rng& rng) {
  require_ergodic(params);
  const auto& kernel = *params.kernel;
  PiSampler pi(kernel);
  double p = params.p;
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < reps; ++r) {
    int a = pi.draw(rng);
    int b = pi.draw(rng);
    if (a == b) {
      ++hits;
      continue;
    }
    if (p == 1.0) continue;
    for (;;) {
      if (rng.uniform01() < p) break;
      if (rng.coin()) {
        a = kernel.sample_next(a, rng);
      } else {
        b = kernel.sample_next(b, rng);
      }
      if (a == b) {
        ++hits;
        break;
      }
    }
  }
  double f = static_cast<double>(hits) / reps;
  return {f / 4.0, std::sqrt(f * (1.0 - f) / reps) / 4.0, reps};
}

FourPointEstimate four_particle_orderings(const NvmParams& params, int u, int v, int x,
                                          int y, std::int64_t reps, Rng& rng) {
  require_ergodic(params);
  const auto& kernel = *params.kernel;
  double p = params.p;
  // particles 0..3 sit at (u, v, x, y); bound pairs (x,y) (x,v) (u,v) (u,y)
  constexpr int kPairs[4][2] = {{2, 3}, {2, 1}, {0, 1}, {0, 3}};
  const int start[4] = {u, v, x, y};
  for (int s : start)
    if (s < 0 || s >= kernel.n()) throw std::runtime_error("vertex out of range");

  std::int64_t pair_hits[4] = {0, 0, 0, 0};
  std::int64_t sum_z = 0, sum_z2 = 0;

  for (std::int64_t r = 0; r < reps; ++r) {
    int cls[4];         // particle -> class id
    int pos[4];         // class id -> vertex (-1 dead)
    bool alive[4];
    int alive_ids[4], alive_count = 0;
    for (int i = 0; i < 4; ++i) {
      cls[i] = i;
      pos[i] = start[i];
      alive[i] = true;
    }
    // merge particles that start co-located
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < i; ++j)
        if (alive[cls[i]] && alive[cls[j]] && cls[i] != cls[j] && pos[cls[i]] == pos[cls[j]]) {
          int dead = cls[i];
          for (int k = 0; k < 4; ++k)
            if (cls[k] == dead) cls[k] = cls[j];
          alive[dead] = false;
        }
    for (int c = 0; c < 4; ++c)
      if (alive[c]) alive_ids[alive_count++] = c;

    // pair status: -1 pending, 0 failed, 1 met
    int status[4];
    for (int k = 0; k < 4; ++k) {
      int a = kPairs[k][0], b = kPairs[k][1];
      status[k] = (cls[a] == cls[b]) ? 1 : -1;  // co-located start counts as met
    }
    int pending = 0;
    for (int k = 0; k < 4; ++k)
      if (status[k] == -1) ++pending;

    while (pending > 0 && alive_count > 0) {
      int pick = static_cast<int>(rng.below(alive_count));
      int c = alive_ids[pick];
      if (p == 1.0 || rng.uniform01() < p) {
        // absorption: any pending pair touching this class fails
        alive[c] = false;
        alive_ids[pick] = alive_ids[--alive_count];
        for (int k = 0; k < 4; ++k)
          if (status[k] == -1 && (cls[kPairs[k][0]] == c || cls[kPairs[k][1]] == c)) {
            status[k] = 0;
            --pending;
          }
        continue;
      }
      int to = kernel.sample_next(pos[c], rng);
      pos[c] = to;
      for (int i = 0; i < alive_count; ++i) {
        int o = alive_ids[i];
        if (o != c && pos[o] == to) {
          // meeting: classes merge, pending pairs across them are met
          for (int k = 0; k < 4; ++k)
            if (status[k] == -1) {
              int ca = cls[kPairs[k][0]], cb = cls[kPairs[k][1]];
              if ((ca == c && cb == o) || (ca == o && cb == c)) {
                status[k] = 1;
                --pending;
              }
            }
          for (int k = 0; k < 4; ++k)
            if (cls[k] == o) cls[k] = c;
          alive[o] = false;
          for (int i2 = 0; i2 < alive_count; ++i2)
            if (alive_ids[i2] == o) {
              alive_ids[i2] = alive_ids[--alive_count];
              break;
            }
          break;
        }
      }
    }
    int z = 0;
    for (int k = 0; k < 4; ++k)
      if (status[k] == 1) {
        ++pair_hits[k];
        ++z;
      }
    sum_z += z;
    sum_z2 += z * z;
  }

  FourPointEstimate est;
  est.reps = reps;
  for (int k = 0; k < 4; ++k) est.pair_est[k] = static_cast<double>(pair_hits[k]) / reps;
  est.sum_est = static_cast<double>(sum_z) / reps;
  double var_z = (static_cast<double>(sum_z2) - static_cast<double>(sum_z) * sum_z / reps) /
                 std::max<std::int64_t>(1, reps - 1);
  est.sum_se = std::sqrt(std::max(0.0, var_z) / reps);
  return est;
}

}  // namespace nvm
