#include "nvm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nvm {

namespace {

std::string join_dims(const std::vector<int>& dims) {
  std::string s;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(dims[i]);
  }
  return s;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (...) {
    throw std::runtime_error("bad integer '" + s + "' in " + what);
  }
}

}  // namespace

GraphSpec GraphSpec::cycle(int n) {
  if (n < 3) throw std::runtime_error("cycle needs n >= 3");
  GraphSpec g;
  g.family = GraphFamily::Cycle;
  g.n = n;
  g.name = "cycle:" + std::to_string(n);
  return g;
}

GraphSpec GraphSpec::torus(std::vector<int> dims) {
  if (dims.empty()) throw std::runtime_error("torus needs at least one dimension");
  for (int d : dims)
    if (d < 3) throw std::runtime_error("torus sides must be >= 3");
  GraphSpec g;
  g.family = GraphFamily::Torus;
  g.dims = std::move(dims);
  g.name = "torus:" + join_dims(g.dims);
  return g;
}

GraphSpec GraphSpec::hypercube(int dim) {
  if (dim < 1 || dim > 20) throw std::runtime_error("hypercube dimension must be in [1,20]");
  GraphSpec g;
  g.family = GraphFamily::Hypercube;
  g.dim = dim;
  g.name = "hypercube:" + std::to_string(dim);
  return g;
}

GraphSpec GraphSpec::complete(int n) {
  if (n < 2) throw std::runtime_error("complete graph needs n >= 2");
  GraphSpec g;
  g.family = GraphFamily::Complete;
  g.n = n;
  g.name = "complete:" + std::to_string(n);
  return g;
}

GraphSpec GraphSpec::star(int n) {
  if (n < 2) throw std::runtime_error("star needs n >= 2 vertices");
  GraphSpec g;
  g.family = GraphFamily::Star;
  g.n = n;
  g.name = "star:" + std::to_string(n);
  return g;
}

GraphSpec GraphSpec::edge_list(const std::string& path) {
  GraphSpec g;
  g.family = GraphFamily::EdgeList;
  g.path = path;
  g.name = "edges:" + path;
  return g;
}

GraphSpec GraphSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("graph spec '" + text + "' is not family:params");
  std::string fam = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  if (fam == "cycle") return cycle(parse_int(rest, "cycle spec"));
  if (fam == "complete") return complete(parse_int(rest, "complete spec"));
  if (fam == "star") return star(parse_int(rest, "star spec"));
  if (fam == "hypercube") return hypercube(parse_int(rest, "hypercube spec"));
  if (fam == "torus") {
    std::vector<int> dims;
    std::stringstream ss(rest);
    std::string part;
    while (std::getline(ss, part, 'x')) dims.push_back(parse_int(part, "torus spec"));
    return torus(dims);
  }
  if (fam == "edges") return edge_list(rest);
  if (fam == "cfg") return from_config_file(rest);
  throw std::runtime_error("unknown graph family '" + fam + "'");
}

GraphSpec GraphSpec::from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph config " + path);
  std::string family, line;
  std::string nval, dimsval, pathval;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string key, val;
    std::stringstream ss(line);
    if (!(ss >> key)) continue;
    // accept "key value", "key=value", "key: value" with free spacing
    auto eq = key.find_first_of("=:");
    if (eq != std::string::npos) {
      val = key.substr(eq + 1);
      key = key.substr(0, eq);
    }
    if (val.empty()) ss >> val;
    if (val == "=" || val == ":") {
      val.clear();
      ss >> val;
    }
    if (!val.empty() && (val.front() == '=' || val.front() == ':')) val.erase(0, 1);
    if (key == "family") family = val;
    else if (key == "n") nval = val;
    else if (key == "dims") dimsval = val;
    else if (key == "dim") dimsval = val;
    else if (key == "path") pathval = val;
    else if (!key.empty()) throw std::runtime_error("unknown graph config key '" + key + "'");
  }
  if (family.empty()) throw std::runtime_error("graph config missing 'family'");
  if (family == "torus") return parse("torus:" + dimsval);
  if (family == "hypercube") return parse("hypercube:" + dimsval);
  if (family == "edges") return edge_list(pathval);
  return parse(family + ":" + nval);
}

int TransitionKernel::degree(int x) const {
  if (family_ == GraphFamily::Complete) return n_ - 1;
  return degree_.empty() ? static_cast<int>(rows_[x].size()) : degree_[x];
}

double TransitionKernel::prob(int x, int y) const {
  if (family_ == GraphFamily::Complete) return y == x ? 0.0 : 1.0 / (n_ - 1);
  const auto& row = rows_[x];
  auto it = std::lower_bound(row.begin(), row.end(), y,
                             [](const KernelEntry& e, int v) { return e.to < v; });
  return (it != row.end() && it->to == y) ? it->w : 0.0;
}

int TransitionKernel::sample_next(int x, Rng& rng) const {
  if (family_ == GraphFamily::Complete) {
    int y = static_cast<int>(rng.below(n_ - 1));
    return y >= x ? y + 1 : y;
  }
  const auto& row = rows_[x];
  if (degree_based_) return row[rng.below(row.size())].to;
  double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& e : row) {
    acc += e.w;
    if (u < acc) return e.to;
  }
  return row.back().to;
}

void TransitionKernel::finish(std::vector<double> pi) {
  pi_ = std::move(pi);
  pi_star_ = 0.0;
  nu_sq_ = 0.0;
  for (double v : pi_) {
    pi_star_ = std::max(pi_star_, v);
    nu_sq_ += v * v;
  }
  uniform_pi_ = true;
  for (double v : pi_)
    if (std::abs(v - pi_[0]) > 1e-14) {
      uniform_pi_ = false;
      break;
    }
}

TransitionKernel TransitionKernel::from_graph(const GraphSpec& spec) {
  TransitionKernel k;
  k.family_ = spec.family;
  k.name_ = spec.name;
  k.degree_based_ = true;

  std::vector<std::vector<int>> adj;
  switch (spec.family) {
    case GraphFamily::Cycle: {
      int n = spec.n;
      adj.resize(n);
      for (int i = 0; i < n; ++i) {
        adj[i].push_back((i + 1) % n);
        adj[i].push_back((i + n - 1) % n);
      }
      k.transitive_ = true;
      break;
    }
    case GraphFamily::Torus: {
      int n = 1;
      for (int d : spec.dims) n *= d;
      adj.resize(n);
      int stride = 1;
      for (int axis = 0; axis < static_cast<int>(spec.dims.size()); ++axis) {
        int side = spec.dims[axis];
        for (int v = 0; v < n; ++v) {
          int coord = (v / stride) % side;
          int up = v + ((coord + 1) % side - coord) * stride;
          int dn = v + ((coord + side - 1) % side - coord) * stride;
          adj[v].push_back(up);
          adj[v].push_back(dn);
        }
        stride *= side;
      }
      k.transitive_ = true;
      break;
    }
    case GraphFamily::Hypercube: {
      int n = 1 << spec.dim;
      adj.resize(n);
      for (int v = 0; v < n; ++v)
        for (int b = 0; b < spec.dim; ++b) adj[v].push_back(v ^ (1 << b));
      k.transitive_ = true;
      break;
    }
    case GraphFamily::Complete: {
      k.n_ = spec.n;
      k.transitive_ = true;
      k.finish(std::vector<double>(spec.n, 1.0 / spec.n));
      return k;  // rows stay implicit
    }
    case GraphFamily::Star: {
      int n = spec.n;
      adj.resize(n);
      for (int leaf = 1; leaf < n; ++leaf) {
        adj[0].push_back(leaf);
        adj[leaf].push_back(0);
      }
      break;
    }
    case GraphFamily::EdgeList: {
      std::ifstream in(spec.path);
      if (!in) throw std::runtime_error("cannot open edge list " + spec.path);
      std::set<std::pair<int, int>> seen;
      int maxv = -1;
      std::vector<std::pair<int, int>> edges;
      std::string line;
      while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ls(line);
        int u, v;
        if (!(ls >> u)) continue;  // blank or comment-only line
        if (!(ls >> v)) throw std::runtime_error("edge list line needs two vertices: " + line);
        if (u < 0 || v < 0) throw std::runtime_error("edge list vertices must be >= 0");
        if (u == v) throw std::runtime_error("edge list contains a self-loop");
        auto key = std::minmax(u, v);
        if (seen.insert(key).second) edges.push_back(key);
        maxv = std::max({maxv, u, v});
      }
      if (maxv < 1) throw std::runtime_error("edge list needs at least two vertices");
      adj.resize(maxv + 1);
      for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      for (size_t i = 0; i < adj.size(); ++i)
        if (adj[i].empty())
          throw std::runtime_error("vertex " + std::to_string(i) + " is isolated");
      break;
    }
    case GraphFamily::Custom:
      throw std::runtime_error("custom kernels are built with from_rows");
  }

  int n = static_cast<int>(adj.size());
  if (n < 2) throw std::runtime_error("graph needs at least 2 vertices");
  k.n_ = n;
  k.rows_.resize(n);
  k.degree_.resize(n);
  double degsum = 0.0;
  for (int x = 0; x < n; ++x) {
    std::sort(adj[x].begin(), adj[x].end());
    int d = static_cast<int>(adj[x].size());
    k.degree_[x] = d;
    degsum += d;
    k.rows_[x].reserve(d);
    for (int y : adj[x]) k.rows_[x].push_back({y, 1.0 / d});
  }
  std::vector<double> pi(n);
  for (int x = 0; x < n; ++x) pi[x] = k.degree_[x] / degsum;
  k.finish(std::move(pi));
  k.validate();
  return k;
}

TransitionKernel TransitionKernel::from_rows(int n, std::vector<std::vector<KernelEntry>> rows,
                                             std::string name, bool degree_based) {
  if (n < 1) throw std::runtime_error("kernel needs n >= 1");
  TransitionKernel k;
  k.family_ = GraphFamily::Custom;
  k.name_ = std::move(name);
  k.n_ = n;
  k.degree_based_ = degree_based;
  for (auto& row : rows) std::sort(row.begin(), row.end(), [](auto& a, auto& b) { return a.to < b.to; });
  k.rows_ = std::move(rows);

  // pi from detailed balance: pi(y)/pi(x) = P(x,y)/P(y,x) along support edges
  std::vector<double> logpi(n, 0.0);
  std::vector<bool> seen(n, false);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = true;
  while (!bfs.empty()) {
    int x = bfs.front();
    bfs.pop();
    for (const auto& e : k.rows_[x]) {
      if (e.to == x || seen[e.to]) continue;
      double back = k.prob(e.to, x);
      if (back <= 0.0)
        throw std::runtime_error("kernel support is not symmetric; cannot derive pi");
      logpi[e.to] = logpi[x] + std::log(e.w / back);
      seen[e.to] = true;
      bfs.push(e.to);
    }
  }
  for (bool s : seen)
    if (!s) throw std::runtime_error("kernel is not irreducible");
  double mx = *std::max_element(logpi.begin(), logpi.end());
  std::vector<double> pi(n);
  double tot = 0.0;
  for (int x = 0; x < n; ++x) tot += (pi[x] = std::exp(logpi[x] - mx));
  for (double& v : pi) v /= tot;
  k.finish(std::move(pi));
  k.validate();
  return k;
}

void TransitionKernel::validate() const {
  if (family_ == GraphFamily::Complete) return;
  for (int x = 0; x < n_; ++x) {
    double sum = 0.0;
    for (const auto& e : rows_[x]) {
      if (e.w < 0.0) throw std::runtime_error("negative kernel entry");
      if (e.to < 0 || e.to >= n_) throw std::runtime_error("kernel entry out of range");
      sum += e.w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::runtime_error("kernel row " + std::to_string(x) + " does not sum to 1");
  }
  // reversibility: pi(x)P(x,y) == pi(y)P(y,x) on the support
  for (int x = 0; x < n_; ++x)
    for (const auto& e : rows_[x]) {
      double lhs = pi_[x] * e.w;
      double rhs = pi_[e.to] * prob(e.to, x);
      if (std::abs(lhs - rhs) > 1e-12)
        throw std::runtime_error("kernel is not reversible");
    }
  // connectivity (ignoring self-loops)
  std::vector<bool> seen(n_, false);
  std::queue<int> bfs;
  bfs.push(0);
  seen[0] = true;
  int count = 1;
  while (!bfs.empty()) {
    int x = bfs.front();
    bfs.pop();
    for (const auto& e : rows_[x])
      if (e.to != x && e.w > 0.0 && !seen[e.to]) {
        seen[e.to] = true;
        ++count;
        bfs.push(e.to);
      }
  }
  if (n_ > 1 && count != n_) throw std::runtime_error("kernel is not irreducible");
}

}  // namespace nvm
