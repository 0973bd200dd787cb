#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "ldrank/entity_graph.hpp"
#include "ldrank/errors.hpp"
#include "ldrank/io.hpp"
#include "ldrank/prob.hpp"
#include "ldrank/svd.hpp"
#include "ldrank/text.hpp"

namespace ldrank {

// Entities assumed close to the information need: the entities detected in
// the query plus the best hit-score entity.
struct InfoNeed {
  std::vector<EntityIndex> entities;  // sorted, unique, non-empty
};

inline ProbVector uniform_prior(std::size_t n) { return ProbVector::uniform(n); }

namespace detail {

// hitscore(e) = Σ over SERP docs containing e of (|A| + 1 - rank(doc)).
inline std::vector<double> hit_scores(const Serp& serp, const DocEntities& doc_entities,
                                      const EntityGraph& g) {
  if (serp.docs.empty()) throw InputError("hit prior needs a non-empty SERP");
  const int size_a = static_cast<int>(serp.docs.size());
  std::vector<double> scores(static_cast<std::size_t>(g.entity_count()), 0.0);
  for (const auto& [doc, uris] : doc_entities.docs) {
    int rank = serp.rank_of(doc);
    double contribution = static_cast<double>(size_a + 1 - rank);
    for (const std::string& uri : uris)
      scores[static_cast<std::size_t>(g.index_of(uri))] += contribution;
  }
  return scores;
}

}  // namespace detail

inline ProbVector hit_prior(const Serp& serp, const DocEntities& doc_entities,
                            const EntityGraph& g) {
  std::vector<double> scores = detail::hit_scores(serp, doc_entities, g);
  double total = 0.0;
  for (double s : scores) total += s;
  if (total <= 0.0) throw InputError("degenerate SERP: every hitscore is zero");
  for (double& s : scores) s /= total;
  return ProbVector(std::move(scores));
}

// Argmax of hitscore; ties broken by smallest intern index.
inline EntityIndex best_hitscore_entity(const Serp& serp, const DocEntities& doc_entities,
                                        const EntityGraph& g) {
  std::vector<double> scores = detail::hit_scores(serp, doc_entities, g);
  EntityIndex best = -1;
  double best_score = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > best_score) {
      best_score = scores[i];
      best = static_cast<EntityIndex>(i);
    }
  }
  if (best < 0) throw InputError("degenerate SERP: every hitscore is zero");
  return best;
}

inline InfoNeed info_need(const Query& query, const Serp& serp, const DocEntities& doc_entities,
                          const EntityGraph& g) {
  std::set<EntityIndex> entities(query.entities.begin(), query.entities.end());
  for (EntityIndex e : entities)
    if (e < 0 || e >= g.entity_count()) throw InputError("query entity outside the graph");
  entities.insert(best_hitscore_entity(serp, doc_entities, g));
  InfoNeed need;
  need.entities.assign(entities.begin(), entities.end());
  return need;
}

struct SvdPriorOptions {
  double stress = 1000.0;
  int nb_dim = 1;
  double svd_tol = 1e-10;
  int svd_max_iter = 10000;
};

namespace detail {

// Euclidean norm of each column of S·Uᵀ, i.e. per-entity distance from the
// origin of the reduced space.
inline std::vector<double> reduced_space_norms(const SvdResult& svd, std::size_t n_entities) {
  std::vector<double> norms(n_entities, 0.0);
  for (std::size_t e = 0; e < n_entities; ++e) {
    double acc = 0.0;
    for (std::size_t i = 0; i < svd.s.size(); ++i) {
      double coord = svd.s[i] * svd.u_cols[i][e];
      acc += coord * coord;
    }
    norms[e] = std::sqrt(acc);
  }
  return norms;
}

}  // namespace detail

// Iterated-SVD prior: measures how far each entity moves away from the origin
// of the rank-k reduced space when the rows of the information-need entities
// are amplified by the stress factor. Negative growth is clamped to zero; if
// every score clamps to zero the uniform distribution is returned.
inline ProbVector svd_prior(const EntityTermMatrix& r, const InfoNeed& need,
                            const SvdPriorOptions& options = {}) {
  const std::size_t n = static_cast<std::size_t>(r.matrix.nrows());
  if (need.entities.empty()) throw InputError("information need must not be empty");

  std::vector<double> stress_factors(n, 1.0);
  std::vector<double> nonzero_row(n, 0.0);
  for (int col = 0; col < r.matrix.ncols(); ++col)
    for (int k = r.matrix.col_ptr()[col]; k < r.matrix.col_ptr()[col + 1]; ++k)
      nonzero_row[static_cast<std::size_t>(r.matrix.row_idx()[k])] = 1.0;
  for (EntityIndex e : need.entities) {
    if (e < 0 || static_cast<std::size_t>(e) >= n)
      throw InputError("information-need entity outside the term matrix");
    if (nonzero_row[static_cast<std::size_t>(e)] == 0.0)
      throw InputError("information-need entity has no text (empty row in the term matrix)");
    stress_factors[static_cast<std::size_t>(e)] = options.stress;
  }

  SvdResult before = truncated_svd(r.matrix, options.nb_dim, options.svd_tol, options.svd_max_iter);
  std::vector<double> prev_norms = detail::reduced_space_norms(before, n);

  SparseMatrixCcs stressed = r.matrix.scale_rows(stress_factors);
  SvdResult after = truncated_svd(stressed, options.nb_dim, options.svd_tol, options.svd_max_iter);
  std::vector<double> norms = detail::reduced_space_norms(after, n);

  std::vector<double> score(n, 0.0);
  double total = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    score[e] = std::max(0.0, norms[e] - prev_norms[e]);
    total += score[e];
  }
  if (total <= 0.0) return uniform_prior(n);
  for (double& s : score) s /= total;
  return ProbVector(std::move(score));
}

}  // namespace ldrank
