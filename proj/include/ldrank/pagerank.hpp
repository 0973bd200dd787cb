#pragma once

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ldrank/consensus.hpp"
#include "ldrank/entity_graph.hpp"
#include "ldrank/errors.hpp"
#include "ldrank/io.hpp"
#include "ldrank/power.hpp"
#include "ldrank/priors.hpp"
#include "ldrank/prob.hpp"
#include "ldrank/sparse.hpp"

namespace ldrank {

enum class Strategy { Equi, Hit, Svd, Ldrank };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Equi: return "equi";
    case Strategy::Hit: return "hit";
    case Strategy::Svd: return "svd";
    case Strategy::Ldrank: return "ldrank";
  }
  return "?";
}

// Distribution substituted for dangling (out-degree zero) rows.
enum class DanglingPolicy { Prior, Uniform };

struct LdrankConfig {
  double alpha = 0.7;
  double tol = 1e-10;
  int max_iter = 10000;
  double epsilon_smoothing = 1e-8;
  bool bidirectional = false;
  EdgeWeighting edge_weighting = EdgeWeighting::Unit;
  DanglingPolicy dangling = DanglingPolicy::Prior;

  void validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw InputError("alpha must lie strictly in (0,1)");
    if (!(tol > 0.0)) throw InputError("convergence tolerance must be positive");
    if (max_iter < 1) throw InputError("iteration budget must be positive");
    if (epsilon_smoothing < 0.0 || epsilon_smoothing > 1e-3)
      throw InputError("epsilon smoothing must lie in [0, 1e-3]");
  }
};

// Row-stochastic view of an adjacency matrix: nonzero rows are normalized to
// unit sum and dangling rows act as the given distribution. The dangling
// correction is applied inside the operator; no dense matrix is formed.
class StochasticOperator {
 public:
  StochasticOperator(const SparseMatrixCcs& m, ProbVector dangling_dist)
      : dangling_dist_(std::move(dangling_dist)) {
    if (m.nrows() != m.ncols()) throw InputError("stochastic operator needs a square matrix");
    if (static_cast<int>(dangling_dist_.size()) != m.nrows())
      throw InputError("dangling distribution length does not match the matrix");
    std::vector<double> sums = m.row_sums();
    dangling_.resize(sums.size());
    std::vector<double> inv(sums.size(), 0.0);
    for (std::size_t i = 0; i < sums.size(); ++i) {
      dangling_[i] = sums[i] == 0.0;
      if (!dangling_[i]) inv[i] = 1.0 / sums[i];
    }
    normalized_ = m.scale_rows(inv);
  }

  int size() const noexcept { return normalized_.nrows(); }
  std::int64_t nnz() const noexcept { return normalized_.nnz(); }

  // y = xᵀS for row-stochastic S.
  std::vector<double> apply_transposed(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != size())
      throw InputError("vector length does not match operator size");
    std::vector<double> y = spmv_t(normalized_, x);
    double dangling_mass = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (dangling_[i]) dangling_mass += x[i];
    if (dangling_mass != 0.0)
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += dangling_mass * dangling_dist_[i];
    return y;
  }

 private:
  SparseMatrixCcs normalized_;
  std::vector<char> dangling_;
  ProbVector dangling_dist_;
};

inline StochasticOperator stochastic_matrix(const SparseMatrixCcs& m, ProbVector dangling_dist,
                                            DanglingPolicy policy) {
  if (policy == DanglingPolicy::Uniform)
    dangling_dist = ProbVector::uniform(static_cast<std::size_t>(m.nrows()));
  return StochasticOperator(m, std::move(dangling_dist));
}

struct StationaryResult {
  ProbVector distribution;
  int iterations = 0;
};

// Stationary vector of H = α·S + (1−α)·T where every row of T is the
// ε-smoothed prior. Power iteration starts from the smoothed prior and uses
// the rank-1 structure of T; T is never materialized.
inline StationaryResult stationary(const StochasticOperator& op, const ProbVector& prior,
                                   const LdrankConfig& cfg) {
  cfg.validate();
  if (static_cast<int>(prior.size()) != op.size())
    throw InputError("prior length does not match the graph");
  ProbVector smoothed = prior.smoothed(cfg.epsilon_smoothing);
  const std::vector<double>& teleport = smoothed.values();
  const double alpha = cfg.alpha;

  auto step = [&](const std::vector<double>& x) {
    std::vector<double> y = op.apply_transposed(x);
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = alpha * y[i] + (1.0 - alpha) * teleport[i];
    return y;
  };
  PowerIterationResult res = power_iteration(step, smoothed, cfg.tol, cfg.max_iter);
  double sum = 0.0;
  for (double v : res.x) sum += v;
  for (double& v : res.x) v /= sum;
  return {ProbVector(std::move(res.x)), res.iterations};
}

// Entities ordered by descending stationary score; ties broken by ascending
// intern index. The scores form a probability distribution.
struct RankedEntry {
  EntityIndex entity = 0;
  double score = 0.0;

  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

using RankedList = std::vector<RankedEntry>;

inline RankedList to_ranked_list(const ProbVector& scores) {
  RankedList out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    out[i] = {static_cast<EntityIndex>(i), scores[i]};
  std::sort(out.begin(), out.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  });
  return out;
}

struct RankInputs {
  const Serp* serp = nullptr;
  const DocEntities* doc_entities = nullptr;
  const Query* query = nullptr;
  const EntityTermMatrix* term_matrix = nullptr;
};

struct RankConfig {
  LdrankConfig pagerank;
  SvdPriorOptions svd;
  ConsensusOptions consensus;
};

namespace detail {

inline const Serp& require_serp(const RankInputs& in, Strategy s) {
  if (!in.serp)
    throw InputError(std::string("strategy ") + strategy_name(s) + " requires a SERP input");
  return *in.serp;
}

inline const DocEntities& require_doc_entities(const RankInputs& in, Strategy s) {
  if (!in.doc_entities)
    throw InputError(std::string("strategy ") + strategy_name(s) +
                     " requires a doc-entities input");
  return *in.doc_entities;
}

inline const EntityTermMatrix& require_term_matrix(const RankInputs& in, Strategy s) {
  if (!in.term_matrix)
    throw InputError(std::string("strategy ") + strategy_name(s) +
                     " requires an entity-term matrix (texts input)");
  return *in.term_matrix;
}

}  // namespace detail

// The a-priori importance distribution used by a strategy. LDRANK pools
// equidistrib, hitdistrib and svddistrib consensually.
inline ProbVector strategy_prior(const EntityGraph& g, Strategy strategy, const RankInputs& inputs,
                                 const RankConfig& cfg) {
  const std::size_t n = static_cast<std::size_t>(g.entity_count());
  switch (strategy) {
    case Strategy::Equi: return uniform_prior(n);
    case Strategy::Hit: {
      const Serp& serp = detail::require_serp(inputs, strategy);
      const DocEntities& de = detail::require_doc_entities(inputs, strategy);
      return hit_prior(serp, de, g);
    }
    case Strategy::Svd: {
      const Serp& serp = detail::require_serp(inputs, strategy);
      const DocEntities& de = detail::require_doc_entities(inputs, strategy);
      const EntityTermMatrix& r = detail::require_term_matrix(inputs, strategy);
      const Query empty_query;
      const Query& q = inputs.query ? *inputs.query : empty_query;
      return svd_prior(r, info_need(q, serp, de, g), cfg.svd);
    }
    case Strategy::Ldrank: {
      const Serp& serp = detail::require_serp(inputs, strategy);
      const DocEntities& de = detail::require_doc_entities(inputs, strategy);
      const EntityTermMatrix& r = detail::require_term_matrix(inputs, strategy);
      ProbVector equi = uniform_prior(n);
      ProbVector hit = hit_prior(serp, de, g);
      const Query empty_query;
      const Query& q = inputs.query ? *inputs.query : empty_query;
      ProbVector svd = svd_prior(r, info_need(q, serp, de, g), cfg.svd);
      return consensus({std::move(equi), std::move(hit), std::move(svd)}, cfg.consensus);
    }
  }
  throw InputError("unknown strategy");
}

inline RankedList rank(const EntityGraph& g, Strategy strategy, const RankInputs& inputs,
                       const RankConfig& cfg = {}) {
  cfg.pagerank.validate();
  ProbVector prior = strategy_prior(g, strategy, inputs, cfg);
  SparseMatrixCcs m = adjacency_matrix(g, cfg.pagerank.bidirectional, cfg.pagerank.edge_weighting);
  ProbVector smoothed = prior.smoothed(cfg.pagerank.epsilon_smoothing);
  StochasticOperator op = stochastic_matrix(m, std::move(smoothed), cfg.pagerank.dangling);
  StationaryResult st = stationary(op, prior, cfg.pagerank);
  return to_ranked_list(st.distribution);
}

// Ranking file: entity-IRI TAB score with 17 significant digits, descending.
inline void write_ranking(std::ostream& out, const RankedList& ranking, const EntityGraph& g) {
  char buf[64];
  for (const RankedEntry& e : ranking) {
    std::snprintf(buf, sizeof buf, "%.17g", e.score);
    out << g.uri(e.entity) << '\t' << buf << '\n';
  }
}

}  // namespace ldrank
