#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ldrank/errors.hpp"
#include "ldrank/prob.hpp"

namespace ldrank {

// Total variation distance, ½·Σ|p−q| ∈ [0,1].
inline double tv_distance(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw InputError("distributions have different lengths");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

inline double euclidean_distance(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw InputError("distributions have different lengths");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
  return std::sqrt(acc);
}

enum class PoolDistance { TotalVariation, Euclidean };

struct ConsensusOptions {
  double tol = 1e-9;
  int max_iter = 10000;
  PoolDistance distance = PoolDistance::TotalVariation;
};

class ConsensusDivergence : public ConvergenceError {
 public:
  ConsensusDivergence(const std::string& what, int iterations, std::vector<ProbVector> last_pool)
      : ConvergenceError(what, iterations), last_pool_(std::move(last_pool)) {}

  const std::vector<ProbVector>& last_pool() const noexcept { return last_pool_; }

 private:
  std::vector<ProbVector> last_pool_;
};

using OpinionPool = std::vector<ProbVector>;

struct ConsensusResult {
  ProbVector distribution;
  int rounds = 0;
};

// Iterative linear opinion pool. Each round every expert i synchronously
// revises to ½·p_i + ½·Σ_j w_ij·p_j with w_ij proportional to the distance
// d(p_i, p_j); an expert at distance zero from all others keeps its opinion.
// Stops when the largest pairwise distance drops below tol and returns the
// mean of the final opinions.
inline ConsensusResult consensus_pool(OpinionPool pool, const ConsensusOptions& options = {}) {
  if (pool.empty()) throw InputError("opinion pool must hold at least one expert");
  const std::size_t m = pool.size();
  const std::size_t n = pool[0].size();
  for (const ProbVector& p : pool)
    if (p.size() != n) throw InputError("all pool opinions must share the same entity labeling");
  if (options.tol <= 0.0) throw InputError("consensus tolerance must be positive");
  if (options.max_iter < 0) throw InputError("consensus round budget must be non-negative");

  auto dist = options.distance == PoolDistance::TotalVariation ? tv_distance : euclidean_distance;

  auto mean_of = [&](const OpinionPool& opinions) {
    std::vector<double> avg(n, 0.0);
    for (const ProbVector& p : opinions)
      for (std::size_t i = 0; i < n; ++i) avg[i] += p[i];
    double sum = 0.0;
    for (double& v : avg) {
      v /= static_cast<double>(m);
      sum += v;
    }
    for (double& v : avg) v /= sum;
    return ProbVector(std::move(avg));
  };

  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (int round = 0; round <= options.max_iter; ++round) {
    double max_d = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        d[i][j] = d[j][i] = dist(pool[i], pool[j]);
        max_d = std::max(max_d, d[i][j]);
      }
    if (max_d == 0.0) return {pool[0], round};  // exact agreement, idempotent
    if (max_d < options.tol) return {mean_of(pool), round};
    if (round == options.max_iter) break;

    OpinionPool next;
    next.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < m; ++j) total += d[i][j];
      if (total == 0.0) {
        next.push_back(pool[i]);
        continue;
      }
      std::vector<double> revised(n, 0.0);
      for (std::size_t i2 = 0; i2 < n; ++i2) revised[i2] = 0.5 * pool[i][i2];
      for (std::size_t j = 0; j < m; ++j) {
        if (d[i][j] == 0.0) continue;
        double w = 0.5 * d[i][j] / total;
        for (std::size_t i2 = 0; i2 < n; ++i2) revised[i2] += w * pool[j][i2];
      }
      double sum = 0.0;
      for (double v : revised) sum += v;
      for (double& v : revised) v /= sum;
      next.push_back(ProbVector(std::move(revised)));
    }
    pool = std::move(next);
  }

  throw ConsensusDivergence("opinion pool did not reach consensus within " +
                                std::to_string(options.max_iter) + " rounds",
                            options.max_iter, std::move(pool));
}

inline ProbVector consensus(OpinionPool pool, const ConsensusOptions& options = {}) {
  return consensus_pool(std::move(pool), options).distribution;
}

}  // namespace ldrank
