#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nvm/rng.hpp"

namespace nvm {

enum class GraphFamily { Cycle, Torus, Hypercube, Complete, Star, EdgeList, Custom };

// Parsed description of a graph instance. Families cover the built-in
// constructions; EdgeList loads a whitespace-separated edge file.
struct GraphSpec {
  GraphFamily family = GraphFamily::Cycle;
  int n = 0;                  // cycle/complete/star vertex count
  std::vector<int> dims;      // torus side lengths
  int dim = 0;                // hypercube dimension
  std::string path;           // edge-list file
  std::string name;           // canonical "family:params" form

  static GraphSpec cycle(int n);
  static GraphSpec torus(std::vector<int> dims);
  static GraphSpec hypercube(int dim);
  static GraphSpec complete(int n);
  static GraphSpec star(int n);
  static GraphSpec edge_list(const std::string& path);

  // mini-grammar: cycle:N | torus:AxB[xC...] | hypercube:D | complete:N |
  //               star:N | edges:PATH | cfg:PATH (key-value config file)
  static GraphSpec parse(const std::string& text);
  static GraphSpec from_config_file(const std::string& path);
};

struct KernelEntry {
  int to;
  double w;
};

// Row-stochastic transition kernel P together with its stationary law pi.
// Built-in families are simple random walks; from_rates() produces lazy
// uniformized kernels with self-loops. The complete graph keeps no explicit
// rows (they would be dense); sampling and row iteration special-case it.
class TransitionKernel {
 public:
  static TransitionKernel from_graph(const GraphSpec& spec);

  // generic construction from explicit rows; pi found by detailed-balance
  // propagation over the support graph (kernel must be reversible)
  static TransitionKernel from_rows(int n, std::vector<std::vector<KernelEntry>> rows,
                                    std::string name, bool degree_based = false);

  int n() const { return n_; }
  const std::string& name() const { return name_; }
  GraphFamily family() const { return family_; }
  bool degree_based() const { return degree_based_; }
  bool transitive() const { return transitive_; }

  const std::vector<double>& pi() const { return pi_; }
  double pi_star() const { return pi_star_; }
  double nu_sq() const { return nu_sq_; }   // sum_x pi(x)^2
  int degree(int x) const;

  double prob(int x, int y) const;
  int sample_next(int x, Rng& rng) const;

  // visit the nonzero entries of row x
  template <class F>
  void for_each_entry(int x, F&& f) const {
    if (family_ == GraphFamily::Complete) {
      double w = 1.0 / (n_ - 1);
      for (int y = 0; y < n_; ++y)
        if (y != x) f(y, w);
    } else {
      for (const auto& e : rows_[x]) f(e.to, e.w);
    }
  }

  // directed-edge weights mu(x,y) = pi(x)^2 P(x,y) / nu_sq; sums to 1
  double edge_measure(int x, int y) const {
    return pi_[x] * pi_[x] * prob(x, y) / nu_sq_;
  }

  // weighted sum S = sum_x pi(x) xi(x) helpers
  bool uniform_pi() const { return uniform_pi_; }

  // consistency checks (row sums, reversibility, connectivity); throws on failure
  void validate() const;

 private:
  int n_ = 0;
  GraphFamily family_ = GraphFamily::Custom;
  std::string name_;
  bool degree_based_ = false;
  bool transitive_ = false;
  bool uniform_pi_ = false;
  std::vector<std::vector<KernelEntry>> rows_;  // sorted by .to; empty for Complete
  std::vector<int> degree_;
  std::vector<double> pi_;
  double pi_star_ = 0.0;
  double nu_sq_ = 0.0;

  void finish(std::vector<double> pi);
};

// continuous-time rate matrix, dense (small n); uniformization input
struct RateMatrix {
  int n = 0;
  std::vector<std::vector<double>> r;  // r[x][y] >= 0 off-diagonal, rows sum to 0
};

}  // namespace nvm
