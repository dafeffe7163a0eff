#include "nvm/oracle.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvm {

namespace {

void check_oracle_size(const NvmParams& params, int max_n) {
  if (params.absorbing()) throw std::runtime_error("p = 0 has no unique stationary law");
  if (max_n > kOracleHardMaxN) max_n = kOracleHardMaxN;
  if (params.n() > max_n)
    throw std::runtime_error("exact solve limited to n <= " + std::to_string(max_n));
}

std::vector<double> state_shares(const NvmParams& params) {
  int n = params.n();
  std::size_t states = std::size_t{1} << n;
  const auto& pi = params.kernel->pi();
  std::vector<double> s(states, 0.0);
  for (std::size_t st = 0; st < states; ++st) {
    double acc = 0.0;
    for (int x = 0; x < n; ++x)
      if ((st >> x) & 1) acc += pi[x];
    s[st] = acc;
  }
  return s;
}

void finish_distribution(ExactDistribution& dist, const NvmParams& params) {
  // clamp solver noise, renormalize, and verify stationarity + 0/1 symmetry
  double total = 0.0;
  for (double& g : dist.gamma) {
    if (g < 0.0) {
      if (g < -1e-12) throw std::runtime_error("stationary solve produced negative mass");
      g = 0.0;
    }
    total += g;
  }
  for (double& g : dist.gamma) g /= total;

  int n = params.n();
  std::size_t states = dist.gamma.size();
  std::uint64_t full = states - 1;
  double residual = 0.0;
  std::vector<double> out(states, 0.0);
  for (std::size_t st = 0; st < states; ++st) {
    auto row = oracle_q_row(params, st);
    double off = 0.0;
    for (int x = 0; x < n; ++x) {
      out[st ^ (std::uint64_t{1} << x)] += dist.gamma[st] * row[x];
      off += row[x];
    }
    out[st] += dist.gamma[st] * (1.0 - off);
  }
  for (std::size_t st = 0; st < states; ++st) residual += std::abs(out[st] - dist.gamma[st]);
  if (residual > 1e-10)
    throw std::runtime_error("stationary solve residual " + std::to_string(residual));
  for (std::size_t st = 0; st < states; ++st)
    if (std::abs(dist.gamma[st] - dist.gamma[full ^ st]) > 1e-11)
      throw std::runtime_error("stationary law lost 0/1 symmetry");
}

}  // namespace

std::vector<double> oracle_q_row(const NvmParams& params, std::uint64_t state) {
  const auto& kernel = *params.kernel;
  int n = kernel.n();
  std::vector<double> row(n);
  for (int x = 0; x < n; ++x) {
    bool target = !((state >> x) & 1);
    double nbr = 0.0;
    kernel.for_each_entry(x, [&](int y, double w) {
      if (((state >> y) & 1) == static_cast<std::uint64_t>(target)) nbr += w;
    });
    row[x] = (params.p / 2.0 + params.q() * nbr) / n;
  }
  return row;
}

ExactDistribution exact_gamma(const NvmParams& params, int max_n) {
  check_oracle_size(params, max_n);
  int n = params.n();
  std::size_t states = std::size_t{1} << n;

  // balance system (Q^T - I) gamma = 0 with the last row replaced by sum = 1
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(states * (n + 2));
  for (std::size_t st = 0; st < states; ++st) {
    auto row = oracle_q_row(params, st);
    double off = 0.0;
    for (int x = 0; x < n; ++x) {
      std::size_t to = st ^ (std::size_t{1} << x);
      off += row[x];
      if (to + 1 != states) trips.emplace_back(static_cast<int>(to), static_cast<int>(st), row[x]);
    }
    if (st + 1 != states)
      trips.emplace_back(static_cast<int>(st), static_cast<int>(st), (1.0 - off) - 1.0);
  }
  for (std::size_t st = 0; st < states; ++st)
    trips.emplace_back(static_cast<int>(states - 1), static_cast<int>(st), 1.0);

  Eigen::SparseMatrix<double> A(states, states);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(states);
  b[states - 1] = 1.0;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    // singular-to-working-precision corner: fall back to power iteration
    return exact_gamma_power(params, 1e-13, -1, max_n);
  }
  Eigen::VectorXd g = lu.solve(b);

  ExactDistribution dist;
  dist.kernel = params.kernel;
  dist.p = params.p;
  dist.gamma.assign(g.data(), g.data() + states);
  finish_distribution(dist, params);
  dist.s_of_state = state_shares(params);
  return dist;
}

ExactDistribution exact_gamma_power(const NvmParams& params, double tol,
                                    std::int64_t max_iters, int max_n) {
  check_oracle_size(params, max_n);
  int n = params.n();
  std::size_t states = std::size_t{1} << n;
  if (max_iters < 0) max_iters = 400ll * static_cast<std::int64_t>(n / params.p + 1);

  // cache rows once; 2^n * n doubles
  std::vector<double> rows(states * n);
  for (std::size_t st = 0; st < states; ++st) {
    auto row = oracle_q_row(params, st);
    std::copy(row.begin(), row.end(), rows.begin() + st * n);
  }

  std::vector<double> cur(states, 1.0 / states), next(states);
  double diff = 1.0;
  for (std::int64_t it = 0; it < max_iters && diff > tol; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t st = 0; st < states; ++st) {
      const double* row = &rows[st * n];
      double off = 0.0;
      double g = cur[st];
      for (int x = 0; x < n; ++x) {
        next[st ^ (std::size_t{1} << x)] += g * row[x];
        off += row[x];
      }
      next[st] += g * (1.0 - off);
    }
    diff = 0.0;
    for (std::size_t st = 0; st < states; ++st) diff += std::abs(next[st] - cur[st]);
    cur.swap(next);
  }
  if (diff > tol) throw std::runtime_error("power iteration did not converge");

  ExactDistribution dist;
  dist.kernel = params.kernel;
  dist.p = params.p;
  dist.gamma = std::move(cur);
  finish_distribution(dist, params);
  dist.s_of_state = state_shares(params);
  return dist;
}

double ExactDistribution::mean_s() const {
  double m = 0.0;
  for (std::size_t st = 0; st < gamma.size(); ++st) m += gamma[st] * s_of_state[st];
  return m;
}

double ExactDistribution::sigma_sq() const {
  double v = 0.0;
  for (std::size_t st = 0; st < gamma.size(); ++st) {
    double d = s_of_state[st] - 0.5;
    v += gamma[st] * d * d;
  }
  return v;
}

std::vector<std::pair<double, double>> ExactDistribution::s_pmf() const {
  std::vector<std::pair<double, double>> items(gamma.size());
  for (std::size_t st = 0; st < gamma.size(); ++st) items[st] = {s_of_state[st], gamma[st]};
  std::sort(items.begin(), items.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [s, g] : items) {
    if (!out.empty() && s - out.back().first < 1e-12)
      out.back().second += g;
    else
      out.emplace_back(s, g);
  }
  return out;
}

std::vector<std::vector<double>> ExactDistribution::pair_disagreement() const {
  int nn = n();
  std::vector<std::vector<double>> d(nn, std::vector<double>(nn, 0.0));
  for (std::size_t st = 0; st < gamma.size(); ++st) {
    double g = gamma[st];
    if (g == 0.0) continue;
    for (int x = 0; x < nn; ++x) {
      bool bx = (st >> x) & 1;
      for (int y = x + 1; y < nn; ++y)
        if (bx != (((st >> y) & 1) != 0)) {
          d[x][y] += g;
          d[y][x] += g;
        }
    }
  }
  return d;
}

double exact_h(const ExactDistribution& dist, int u, int v, int x, int y) {
  double eab = 0.0, ea = 0.0, eb = 0.0;
  for (std::size_t st = 0; st < dist.gamma.size(); ++st) {
    double g = dist.gamma[st];
    bool a = ((st >> x) & 1) != ((st >> u) & 1);
    bool b = ((st >> y) & 1) != ((st >> v) & 1);
    if (a) ea += g;
    if (b) eb += g;
    if (a && b) eab += g;
  }
  return eab - ea * eb;
}

double exact_psi_variance(const ExactDistribution& dist) {
  const auto& kernel = *dist.kernel;
  int n = kernel.n();
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t st = 0; st < dist.gamma.size(); ++st) {
    double g = dist.gamma[st];
    if (g == 0.0) continue;
    double psi = 0.0;
    for (int x = 0; x < n; ++x) {
      bool bx = (st >> x) & 1;
      kernel.for_each_entry(x, [&](int y, double w) {
        if (bx != (((st >> y) & 1) != 0)) psi += kernel.pi()[x] * kernel.pi()[x] * w;
      });
    }
    psi /= kernel.nu_sq();
    e1 += g * psi;
    e2 += g * psi * psi;
  }
  return e2 - e1 * e1;
}

double contraction_residual(const NvmParams& params, int max_n) {
  check_oracle_size(params, max_n);
  int n = params.n();
  std::size_t states = std::size_t{1} << n;
  const auto& pi = params.kernel->pi();
  auto s_vals = state_shares(params);
  double worst = 0.0;
  for (std::size_t st = 0; st < states; ++st) {
    auto row = oracle_q_row(params, st);
    double es = s_vals[st];
    for (int x = 0; x < n; ++x) {
      // flipping x changes S by +-pi(x)
      double delta = ((st >> x) & 1) ? -pi[x] : pi[x];
      es += row[x] * delta;
    }
    double want = (1.0 - params.p / n) * s_vals[st] + params.p / (2.0 * n);
    worst = std::max(worst, std::abs(es - want));
  }
  return worst;
}

}  // namespace nvm
