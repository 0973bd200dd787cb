#include <random>

#include "doctest.h"
#include "ldrank/power.hpp"
#include "ldrank/svd.hpp"
#include "ldrank/consensus.hpp"
#include "oracles.hpp"

using namespace ldrank;

TEST_CASE("identity operator returns the start after one check") {
  ProbVector start({0.2, 0.3, 0.5});
  auto identity = [](const std::vector<double>& x) { return x; };
  PowerIterationResult r = power_iteration(identity, start, 1e-10, 100);
  CHECK(r.x == start.values());
  CHECK(r.iterations == 1);
}

TEST_CASE("constant operator lands on its image") {
  std::vector<double> target = {0.7, 0.2, 0.1};
  auto constant = [&](const std::vector<double>&) { return target; };
  PowerIterationResult r = power_iteration(constant, ProbVector::uniform(3), 1e-10, 100);
  // after one application the iterate is the target; the returned fixed point
  // satisfies ‖op(x) − x‖₁ < tol
  double res = 0.0;
  for (std::size_t i = 0; i < 3; ++i) res += std::abs(target[i] - r.x[i]);
  CHECK(res < 1e-10);
}

TEST_CASE("doubly stochastic chain converges to uniform, matching the dense oracle") {
  // column- and row-stochastic 3x3
  oracle::Dense p = {{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}};
  auto op = [&](const std::vector<double>& x) { return oracle::matvec_t(p, x); };
  PowerIterationResult r = power_iteration(op, ProbVector({0.6, 0.3, 0.1}), 1e-12, 10000);
  for (double v : r.x) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("iteration budget exhaustion throws with the iteration count") {
  // period-2 oscillator never converges
  auto swap_op = [](const std::vector<double>& x) {
    return std::vector<double>{x[1], x[0]};
  };
  try {
    power_iteration(swap_op, ProbVector({0.9, 0.1}), 1e-12, 17);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 17);
  }
}

TEST_CASE("consensus divergence carries the last pool state") {
  ConsensusOptions opts;
  opts.max_iter = 0;
  try {
    consensus({ProbVector({1.0, 0.0}), ProbVector({0.0, 1.0})}, opts);
    FAIL("expected ConsensusDivergence");
  } catch (const ConsensusDivergence& e) {
    CHECK(e.last_pool().size() == 2);
    CHECK(e.iterations() == 0);
  }
}

TEST_CASE("svd divergence carries the best iterate") {
  std::mt19937 rng(55);
  std::vector<Coordinate> entries;
  std::uniform_real_distribution<double> val(0.5, 1.5);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if ((i + j) % 2 == 0) entries.push_back({i, j, val(rng)});
  SparseMatrixCcs r = SparseMatrixCcs::from_coordinates(8, 8, entries);
  try {
    truncated_svd(r, 1, 1e-10, 1);
    FAIL("expected SvdDivergence");
  } catch (const SvdDivergence& e) {
    CHECK(e.best().s.size() == 1);
    CHECK(e.best().s[0] > 0.0);
  }
}
