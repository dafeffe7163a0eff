#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>

#include "nvm/forward.hpp"
#include "nvm/graph.hpp"
#include "nvm/oracle.hpp"

using namespace nvm;

namespace {

std::shared_ptr<const TransitionKernel> kernel(const std::string& spec) {
  return std::make_shared<const TransitionKernel>(
      TransitionKernel::from_graph(GraphSpec::parse(spec)));
}

}  // namespace

TEST_CASE("opinion config basics") {
  auto c = OpinionConfig::zeros(70);
  CHECK(c.n() == 70);
  CHECK(c.ones_count() == 0);
  c.set(0, true);
  c.set(69, true);
  CHECK(c.ones_count() == 2);
  CHECK(c.get(69));
  CHECK_FALSE(c.get(68));
  c.set(69, false);
  c.set(69, false);  // idempotent
  CHECK(c.ones_count() == 1);

  auto ones = OpinionConfig::ones(70);
  CHECK(ones.ones_count() == 70);
  CHECK(c.hamming(ones) == 69);
  CHECK(c.hamming(c) == 0);

  auto m = OpinionConfig::from_mask(6, 0b101101);
  CHECK(m.ones_count() == 4);
  CHECK(m.get(0));
  CHECK_FALSE(m.get(1));
  CHECK(m.get(5));
  CHECK(m.mask() == 0b101101);
  CHECK(m == OpinionConfig::from_mask(6, 0b101101));
  CHECK_FALSE(m == OpinionConfig::from_mask(6, 0b101111));
}

TEST_CASE("random config is balanced") {
  Rng rng(99, 0);
  auto c = OpinionConfig::random(4096, rng);
  // Binomial(4096, 1/2): sd = 32; allow 5 sd
  CHECK(std::abs(c.ones_count() - 2048) < 160);
  Rng rng2(99, 0);
  CHECK(c == OpinionConfig::random(4096, rng2));
}

TEST_CASE("weighted share") {
  auto cyc = kernel("cycle:8");
  auto cfg = OpinionConfig::from_mask(8, 0b00001111);
  CHECK(weighted_share(cfg, *cyc) == doctest::Approx(0.5));
  auto star = kernel("star:5");
  auto center = OpinionConfig::from_mask(5, 0b00001);
  CHECK(weighted_share(center, *star) == doctest::Approx(0.5));  // pi(center)=1/2
  auto leaf = OpinionConfig::from_mask(5, 0b00010);
  CHECK(weighted_share(leaf, *star) == doctest::Approx(0.125));
}

TEST_CASE("params validation") {
  auto k = kernel("cycle:4");
  CHECK_THROWS(NvmParams(k, 0.0));
  CHECK_THROWS(NvmParams(k, -0.1));
  CHECK_THROWS(NvmParams(k, 1.0001));
  CHECK(NvmParams(k, 1.0).q() == doctest::Approx(0.0));
  CHECK(NvmParams(k, 0.25).q() == doctest::Approx(0.75));
  auto demo = NvmParams::consensus_demo(k);
  CHECK(demo.p == 0.0);
  CHECK(demo.absorbing());
}

TEST_CASE("transition rows are stochastic and local") {
  for (const char* g : {"cycle:4", "star:4", "complete:4"}) {
    for (double p : {0.3, 1.0}) {
      auto k = kernel(g);
      NvmParams params(k, p);
      for (std::uint64_t m = 0; m < 16; ++m) {
        auto from = OpinionConfig::from_mask(4, m);
        double total = 0.0;
        for (std::uint64_t m2 = 0; m2 < 16; ++m2) {
          auto to = OpinionConfig::from_mask(4, m2);
          double pr = transition_prob(from, to, params);
          CHECK(pr >= 0.0);
          if (from.hamming(to) >= 2) CHECK(pr == 0.0);
          total += pr;
        }
        CHECK_MESSAGE(total == doctest::Approx(1.0).epsilon(1e-12), g << " m=" << m);
      }
    }
  }
}

TEST_CASE("pure-noise flips are uniform") {
  // at p=1 every single-bit flip has probability 1/(2n)
  auto k = kernel("star:4");
  NvmParams params(k, 1.0);
  auto from = OpinionConfig::from_mask(4, 0b0110);
  for (int x = 0; x < 4; ++x) {
    auto to = from;
    to.set(x, !to.get(x));
    CHECK(transition_prob(from, to, params) == doctest::Approx(1.0 / 8).epsilon(1e-14));
  }
  CHECK(transition_prob(from, from, params) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("one-step law matches transition_prob") {
  // empirical one-step distribution from a fixed state vs the exact row
  auto k = kernel("complete:4");
  NvmParams params(k, 0.3);
  auto from = OpinionConfig::from_mask(4, 0b0011);
  std::map<std::uint64_t, int> counts;
  const int reps = 200000;
  for (int r = 0; r < reps; ++r) {
    Rng rng(4242, r);
    auto cfg = from;
    step_inplace(cfg, params, rng);
    ++counts[cfg.mask()];
  }
  for (const auto& [m2, c] : counts) {
    double expect = transition_prob(from, OpinionConfig::from_mask(4, m2), params);
    REQUIRE(expect > 0.0);
    double se = std::sqrt(expect * (1 - expect) / reps);
    CHECK_MESSAGE(std::abs(c / double(reps) - expect) < 5 * se + 1e-9, "mask " << m2);
  }
}

TEST_CASE("run is deterministic per seed and stream") {
  auto k = kernel("torus:3x3");
  NvmParams params(k, 0.2);
  Rng a(7, 1), b(7, 1), c(7, 2);
  auto r1 = run(params, 3000, OpinionConfig::zeros(9), a);
  auto r2 = run(params, 3000, OpinionConfig::zeros(9), b);
  auto r3 = run(params, 3000, OpinionConfig::zeros(9), c);
  CHECK(r1 == r2);
  CHECK_FALSE(r1 == r3);  // different stream, almost surely different state
}

TEST_CASE("consensus demo absorbs") {
  auto k = kernel("complete:4");
  auto params = NvmParams::consensus_demo(k);
  // all-ones is absorbing
  auto ones = OpinionConfig::ones(4);
  CHECK(transition_prob(ones, ones, params) == doctest::Approx(1.0));
  Rng rng(5, 0);
  auto c = run(params, 2000, OpinionConfig::from_mask(4, 0b0101), rng);
  CHECK((c.ones_count() == 0 || c.ones_count() == 4));
}

TEST_CASE("uniformization from a rate matrix") {
  // cycle-of-4 rate matrix, all neighbor rates 1, diagonal -2
  RateMatrix rm;
  rm.n = 4;
  rm.r = {{-2, 1, 0, 1}, {1, -2, 1, 0}, {0, 1, -2, 1}, {1, 0, 1, -2}};
  auto params = from_rates(rm, 2.0);  // delta = r_max
  CHECK(params.p == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(params.kernel->prob(0, 1) == doctest::Approx(0.5));
  CHECK(params.kernel->prob(0, 2) == 0.0);
  CHECK(params.kernel->pi()[0] == doctest::Approx(0.25).epsilon(1e-12));

  // the embedded kernel equals the plain cycle walk, so for matching p the
  // stationary law must agree with the directly-built chain
  RateMatrix rm5;
  rm5.n = 5;
  rm5.r.assign(5, std::vector<double>(5, 0.0));
  for (int x = 0; x < 5; ++x) {
    rm5.r[x][(x + 1) % 5] = 1.0;
    rm5.r[x][(x + 4) % 5] = 1.0;
    rm5.r[x][x] = -2.0;
  }
  auto via_rates = from_rates(rm5, 0.5);  // p = 0.5/2.5 = 0.2
  CHECK(via_rates.p == doctest::Approx(0.2).epsilon(1e-14));
  auto direct = NvmParams(kernel("cycle:5"), 0.2);
  auto g1 = exact_gamma(via_rates);
  auto g2 = exact_gamma(direct);
  for (size_t i = 0; i < g1.gamma.size(); ++i)
    CHECK(g1.gamma[i] == doctest::Approx(g2.gamma[i]).epsilon(1e-9));

  // rows must sum to zero
  RateMatrix bad;
  bad.n = 2;
  bad.r = {{-1, 0.5}, {1, -1}};
  CHECK_THROWS(from_rates(bad, 1.0));
}

TEST_CASE("uneven rates produce lazy self-loops") {
  // path 0-1-2 with unit rates: ends leave at rate 1, middle at rate 2,
  // so uniformization gives the ends a 1/2 stay probability
  RateMatrix rm;
  rm.n = 3;
  rm.r = {{-1, 1, 0}, {1, -2, 1}, {0, 1, -1}};
  auto params = from_rates(rm, 2.0);  // p = 2/(2+2) = 1/2
  CHECK(params.p == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(params.kernel->prob(0, 0) == doctest::Approx(0.5));
  CHECK(params.kernel->prob(0, 1) == doctest::Approx(0.5));
  CHECK(params.kernel->prob(1, 1) == 0.0);
  CHECK(params.kernel->prob(1, 0) == doctest::Approx(0.5));
  for (int x = 0; x < 3; ++x) {
    double sum = 0.0;
    params.kernel->for_each_entry(x, [&](int, double w) { sum += w; });
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // the lazy kernel is reversible with uniform pi
    CHECK(params.kernel->pi()[x] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
}
