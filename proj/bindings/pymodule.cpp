// python bindings for the noisy voter model toolkit
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "nvm/analytics.hpp"
#include "nvm/dual.hpp"
#include "nvm/forward.hpp"
#include "nvm/graph.hpp"
#include "nvm/oracle.hpp"
#include "nvm/rwlab.hpp"

namespace py = pybind11;

namespace {

// non-const holder so pybind11 can manage it; the kernel is immutable after
// construction and converts to shared_ptr<const TransitionKernel> at use sites
using KernelPtr = std::shared_ptr<nvm::TransitionKernel>;

KernelPtr make_kernel(const std::string& spec) {
  return std::make_shared<nvm::TransitionKernel>(
      nvm::TransitionKernel::from_graph(nvm::GraphSpec::parse(spec)));
}

nvm::NvmParams make_params(const KernelPtr& kernel, double p) {
  return nvm::NvmParams(kernel, p);
}

}  // namespace

PYBIND11_MODULE(_nvm, m) {
  m.doc() = "noisy voter model toolkit: forward chain, exact stationary sampling, "
            "random-walk measurements, and closed-form analytics";

  py::class_<nvm::TransitionKernel, KernelPtr>(m, "Kernel")
      .def(py::init([](const std::string& spec) { return make_kernel(spec); }),
           py::arg("spec"),
           "build from a graph spec string, e.g. 'cycle:8' or 'torus:4x4'")
      .def_property_readonly("n", &nvm::TransitionKernel::n)
      .def_property_readonly("name", &nvm::TransitionKernel::name)
      .def_property_readonly("pi_star", &nvm::TransitionKernel::pi_star)
      .def_property_readonly("nu_sq", &nvm::TransitionKernel::nu_sq)
      .def(
          "pi", [](const nvm::TransitionKernel& k, int x) { return k.pi().at(x); },
          py::arg("x"))
      .def("prob", &nvm::TransitionKernel::prob, py::arg("x"), py::arg("y"))
      .def("degree", &nvm::TransitionKernel::degree, py::arg("x"))
      .def("__repr__", [](const nvm::TransitionKernel& k) {
        return "<Kernel " + k.name() + " n=" + std::to_string(k.n()) + ">";
      });

  m.def("kernel", &make_kernel, py::arg("spec"), "shorthand for Kernel(spec)");

  m.def(
      "simulate_share",
      [](const KernelPtr& kernel, double p, std::int64_t steps, std::uint64_t seed) {
        nvm::Rng rng(seed, 0);
        auto cfg = nvm::OpinionConfig::random(kernel->n(), rng);
        cfg = nvm::run(make_params(kernel, p), steps, std::move(cfg), rng);
        return nvm::weighted_share(cfg, *kernel);
      },
      py::arg("kernel"), py::arg("p"), py::arg("steps"), py::arg("seed"),
      "run the forward chain from a uniform start and return the final weighted share");

  m.def(
      "sample_stationary_share",
      [](const KernelPtr& kernel, double p, std::int64_t reps, std::uint64_t seed) {
        auto params = make_params(kernel, p);
        nvm::StationarySampler sampler(params);
        nvm::OpinionConfig cfg(kernel->n());
        std::vector<double> out;
        out.reserve(reps);
        for (std::int64_t r = 0; r < reps; ++r) {
          nvm::Rng rng(seed, r);
          sampler.sample_into(cfg, rng);
          out.push_back(nvm::weighted_share(cfg, *kernel));
        }
        return out;
      },
      py::arg("kernel"), py::arg("p"), py::arg("reps"), py::arg("seed"),
      "exact stationary samples of the weighted share S");

  m.def(
      "sample_stationary_bits",
      [](const KernelPtr& kernel, double p, std::uint64_t seed) {
        auto params = make_params(kernel, p);
        nvm::Rng rng(seed, 0);
        auto cfg = nvm::sample_stationary(params, rng);
        std::vector<int> bits(kernel->n());
        for (int x = 0; x < kernel->n(); ++x) bits[x] = cfg.get(x) ? 1 : 0;
        return bits;
      },
      py::arg("kernel"), py::arg("p"), py::arg("seed"),
      "one exact stationary opinion vector");

  m.def(
      "meet_before_absorption",
      [](const KernelPtr& kernel, double p, int x, int y, std::int64_t reps,
         std::uint64_t seed) {
        nvm::Rng rng(seed, 0);
        auto est = nvm::meet_before_absorption(make_params(kernel, p), x, y, reps, rng);
        return py::make_tuple(est.estimate, est.se);
      },
      py::arg("kernel"), py::arg("p"), py::arg("x"), py::arg("y"), py::arg("reps"),
      py::arg("seed"), "P(two dual walkers meet before either is absorbed)");

  m.def(
      "sigma_sq_mc",
      [](const KernelPtr& kernel, double p, std::int64_t reps, std::uint64_t seed) {
        nvm::Rng rng(seed, 0);
        auto est = nvm::sigma_sq_via_dual(make_params(kernel, p), reps, rng);
        return py::make_tuple(est.estimate, est.se);
      },
      py::arg("kernel"), py::arg("p"), py::arg("reps"), py::arg("seed"),
      "Monte Carlo estimate of the stationary variance of S via the pair race");

  m.def(
      "exact_moments",
      [](const KernelPtr& kernel, double p, int max_n) {
        auto dist = nvm::exact_gamma(make_params(kernel, p), max_n);
        py::dict d;
        d["mean_s"] = dist.mean_s();
        d["sigma_sq"] = dist.sigma_sq();
        d["var_psi"] = nvm::exact_psi_variance(dist);
        return d;
      },
      py::arg("kernel"), py::arg("p"), py::arg("max_n") = nvm::kOracleDefaultMaxN,
      "exact stationary moments by direct linear solve (small n only)");

  m.def("cycle_sigma_sq", &nvm::cycle_sigma_sq, py::arg("n"), py::arg("p"),
        "closed-form stationary variance of S on the n-cycle");
  m.def("theta", &nvm::theta, py::arg("p"), "decay root of x + 1/x = 2/(1-p), in (0,1)");
  m.def("gambler_gf", &nvm::gambler_gf, py::arg("k"), py::arg("n"), py::arg("p"),
        "E[(1-p)^T] for the gambler's ruin started at k with boundaries 0 and n");

  m.def(
      "hitting_time",
      [](const KernelPtr& kernel) {
        auto h = nvm::hitting_time(*kernel);
        py::dict d;
        d["t_hit"] = h.t_hit;
        d["from"] = h.argmax_from;
        d["to"] = h.argmax_to;
        d["exact"] = h.exact;
        return d;
      },
      py::arg("kernel"), "worst-case expected hitting time of the kernel");

  m.def(
      "meeting_time",
      [](const KernelPtr& kernel, std::int64_t reps, std::uint64_t seed) {
        nvm::Rng rng(seed, 0);
        auto est = nvm::meeting_time(*kernel, reps, rng);
        return py::make_tuple(est.estimate, est.se);
      },
      py::arg("kernel"), py::arg("reps"), py::arg("seed"),
      "worst-pair expected meeting time of two independent continuous-time walkers");

  m.def(
      "stein_bracket",
      [](const KernelPtr& kernel, double p, double sigma_sq, double var_psi) {
        auto b = nvm::stein_bracket(*kernel, p, sigma_sq, var_psi);
        return py::make_tuple(b.term1, b.term2, b.term3);
      },
      py::arg("kernel"), py::arg("p"), py::arg("sigma_sq"), py::arg("var_psi"),
      "the three terms of the normal-approximation error bracket");

  m.def("ks_to_gaussian", &nvm::ks_to_gaussian, py::arg("samples"), py::arg("sigma"),
        "KS distance between standardized samples of S and the standard normal");
}
