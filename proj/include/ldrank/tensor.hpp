#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldrank/entity_graph.hpp"
#include "ldrank/errors.hpp"
#include "ldrank/io.hpp"

namespace ldrank {

// Order-3 binary tensor over (subject, object, predicate). Each predicate is
// one n×n adjacency layer; at most one entry per cell.
struct Tensor3 {
  int n = 0;                // subject and object dimension
  int predicates = 0;       // layer count
  struct Entry {
    int subject = 0;
    int object = 0;
    int predicate = 0;
    double value = 1.0;
  };
  std::vector<Entry> nonzeros;  // sorted by (predicate, subject, object)
  std::vector<std::string> predicate_labels;
};

inline Tensor3 build_tensor(const EntityGraph& g) {
  Tensor3 t;
  t.n = g.entity_count();
  t.predicates = g.predicate_count();
  t.predicate_labels = g.predicate_uris();
  std::set<std::tuple<int, int, int>> cells;
  for (const Triple& tr : g.triples()) cells.emplace(tr.predicate, tr.subject, tr.object);
  for (const auto& [p, s, o] : cells) t.nonzeros.push_back({s, o, p, 1.0});
  return t;
}

// g plus every client triple touching a focus entity. New entities and
// predicates are interned after the existing ones; triples identical to one
// already present are not added twice.
inline EntityGraph expand_1hop(const EntityGraph& g, const std::vector<EntityIndex>& focus,
                               const NeighborhoodClient& client) {
  std::vector<std::string> entities = g.entity_uris();
  std::vector<std::string> predicates = g.predicate_uris();
  std::unordered_map<std::string, EntityIndex> entity_index;
  std::unordered_map<std::string, PredicateIndex> predicate_index;
  for (std::size_t i = 0; i < entities.size(); ++i)
    entity_index.emplace(entities[i], static_cast<EntityIndex>(i));
  for (std::size_t i = 0; i < predicates.size(); ++i)
    predicate_index.emplace(predicates[i], static_cast<PredicateIndex>(i));

  auto intern_entity = [&](const std::string& uri) {
    if (!is_absolute_iri(uri)) throw InputError("malformed IRI from neighborhood client: " + uri);
    auto [it, inserted] = entity_index.emplace(uri, static_cast<EntityIndex>(entities.size()));
    if (inserted) entities.push_back(uri);
    return it->second;
  };
  auto intern_predicate = [&](const std::string& uri) {
    if (!is_absolute_iri(uri)) throw InputError("malformed IRI from neighborhood client: " + uri);
    auto [it, inserted] =
        predicate_index.emplace(uri, static_cast<PredicateIndex>(predicates.size()));
    if (inserted) predicates.push_back(uri);
    return it->second;
  };

  std::vector<Triple> triples = g.triples();
  std::set<std::tuple<EntityIndex, PredicateIndex, EntityIndex>> known;
  for (const Triple& t : triples) known.emplace(t.subject, t.predicate, t.object);

  std::vector<EntityIndex> ordered_focus = focus;
  std::sort(ordered_focus.begin(), ordered_focus.end());
  ordered_focus.erase(std::unique(ordered_focus.begin(), ordered_focus.end()),
                      ordered_focus.end());
  for (EntityIndex e : ordered_focus) {
    if (e < 0 || e >= g.entity_count()) throw InputError("focus entity outside the graph");
    const std::string focal = g.uri(e);
    for (const IriTriple& t : client.expand(focal)) {
      if (t.subject != focal && t.object != focal)
        throw InputError("neighborhood client returned a triple not incident to " + focal);
      Triple interned;
      interned.subject = intern_entity(t.subject);
      interned.predicate = intern_predicate(t.predicate);
      interned.object = intern_entity(t.object);
      if (known.emplace(interned.subject, interned.predicate, interned.object).second)
        triples.push_back(interned);
    }
  }

  std::vector<std::string> texts(entities.size());
  for (EntityIndex e = 0; e < g.entity_count(); ++e) texts[static_cast<std::size_t>(e)] = g.text(e);
  return EntityGraph(std::move(entities), std::move(predicates), std::move(triples),
                     std::move(texts));
}

// CP (PARAFAC) factors: unit-norm columns per mode, component weights lambda
// descending. fit = 1 − ‖T − T̂‖_F / ‖T‖_F after the last sweep.
struct CpFactors {
  int rank = 0;
  std::vector<std::vector<double>> subject_cols;    // A, rank columns of length n
  std::vector<std::vector<double>> object_cols;     // B, rank columns of length n
  std::vector<std::vector<double>> predicate_cols;  // C, rank columns of length P
  std::vector<double> lambda;
  double fit = 0.0;
  int iterations = 0;
  std::vector<double> fit_history;  // fit after each sweep
  bool ridge_applied = false;
};

namespace detail {

// Column-major dense factor matrix.
struct Factor {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Factor() = default;
  Factor(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& at(int r, int c) { return a[static_cast<std::size_t>(c) * rows + r]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(c) * rows + r]; }
};

inline std::vector<std::vector<double>> gram(const Factor& f) {
  std::vector<std::vector<double>> g(static_cast<std::size_t>(f.cols),
                                     std::vector<double>(static_cast<std::size_t>(f.cols), 0.0));
  for (int c1 = 0; c1 < f.cols; ++c1)
    for (int c2 = c1; c2 < f.cols; ++c2) {
      double acc = 0.0;
      for (int r = 0; r < f.rows; ++r) acc += f.at(r, c1) * f.at(r, c2);
      g[static_cast<std::size_t>(c1)][static_cast<std::size_t>(c2)] = acc;
      g[static_cast<std::size_t>(c2)][static_cast<std::size_t>(c1)] = acc;
    }
  return g;
}

// In-place Cholesky; returns false when the matrix is not positive definite.
inline bool cholesky(std::vector<std::vector<double>>& g) {
  const std::size_t r = g.size();
  for (std::size_t j = 0; j < r; ++j) {
    double d = g[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= g[j][k] * g[j][k];
    if (!(d > 0.0)) return false;
    g[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < r; ++i) {
      double v = g[i][j];
      for (std::size_t k = 0; k < j; ++k) v -= g[i][k] * g[j][k];
      g[i][j] = v / g[j][j];
    }
  }
  return true;
}

inline void cholesky_solve(const std::vector<std::vector<double>>& l, std::vector<double>& b) {
  const std::size_t r = l.size();
  for (std::size_t i = 0; i < r; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i][k] * b[k];
    b[i] = v / l[i][i];
  }
  for (std::size_t ii = r; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t k = ii + 1; k < r; ++k) v -= l[k][ii] * b[k];
    b[ii] = v / l[ii][ii];
  }
}

}  // namespace detail

// Alternating least squares CP decomposition from a seeded uniform-random
// start. Columns are normalized into lambda after every sweep; stops when the
// fit changes by less than tol between sweeps or the sweep budget runs out.
// Rank-deficient normal equations fall back to a 1e-12 ridge (recorded in
// ridge_applied).
inline CpFactors cp_als(const Tensor3& t, int rank = 10, int iters = 100, std::uint64_t seed = 0,
                        double tol = 1e-6) {
  if (rank < 1) throw InputError("cp rank must be at least 1");
  if (iters < 1) throw InputError("cp sweep budget must be at least 1");
  if (t.nonzeros.empty()) throw InputError("cp decomposition of an empty tensor is undefined");
  if (t.n < 1 || t.predicates < 1) throw InputError("tensor dimensions must be positive");

  using detail::Factor;
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  Factor a(t.n, rank), b(t.n, rank), c(t.predicates, rank);
  for (Factor* f : {&a, &b, &c})
    for (double& x : f->a) x = uniform01();

  double norm_t_sq = 0.0;
  for (const Tensor3::Entry& e : t.nonzeros) norm_t_sq += e.value * e.value;
  const double norm_t = std::sqrt(norm_t_sq);

  bool ridge_applied = false;

  // Solve X·G = M for X, rows of M given as rhs; G symmetric positive
  // (semi)definite r×r.
  auto solve_mode = [&](Factor& target, const std::vector<std::vector<double>>& g1,
                        const std::vector<std::vector<double>>& g2, const Factor& mttkrp) {
    std::vector<std::vector<double>> g(static_cast<std::size_t>(rank),
                                       std::vector<double>(static_cast<std::size_t>(rank), 0.0));
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            g1[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
            g2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    std::vector<std::vector<double>> l = g;
    double ridge = 1e-12;
    while (!detail::cholesky(l)) {
      ridge_applied = true;
      l = g;
      for (int i = 0; i < rank; ++i) l[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += ridge;
      ridge *= 10.0;
      if (ridge > 1.0) throw InputError("cp normal equations are numerically singular");
    }
    std::vector<double> rhs(static_cast<std::size_t>(rank));
    for (int r = 0; r < target.rows; ++r) {
      for (int k = 0; k < rank; ++k) rhs[static_cast<std::size_t>(k)] = mttkrp.at(r, k);
      detail::cholesky_solve(l, rhs);
      for (int k = 0; k < rank; ++k) target.at(r, k) = rhs[static_cast<std::size_t>(k)];
    }
  };

  std::vector<double> lambda(static_cast<std::size_t>(rank), 0.0);
  std::vector<double> fit_history;
  double prev_fit = -1.0;
  int sweeps = 0;

  for (int sweep = 0; sweep < iters; ++sweep) {
    // mode A
    {
      Factor m(t.n, rank);
      for (const Tensor3::Entry& e : t.nonzeros)
        for (int k = 0; k < rank; ++k)
          m.at(e.subject, k) += e.value * b.at(e.object, k) * c.at(e.predicate, k);
      solve_mode(a, detail::gram(b), detail::gram(c), m);
    }
    // mode B
    {
      Factor m(t.n, rank);
      for (const Tensor3::Entry& e : t.nonzeros)
        for (int k = 0; k < rank; ++k)
          m.at(e.object, k) += e.value * a.at(e.subject, k) * c.at(e.predicate, k);
      solve_mode(b, detail::gram(a), detail::gram(c), m);
    }
    // mode C
    {
      Factor m(t.predicates, rank);
      for (const Tensor3::Entry& e : t.nonzeros)
        for (int k = 0; k < rank; ++k)
          m.at(e.predicate, k) += e.value * a.at(e.subject, k) * b.at(e.object, k);
      solve_mode(c, detail::gram(a), detail::gram(b), m);
    }

    // normalize columns into lambda
    for (int k = 0; k < rank; ++k) {
      double prod = 1.0;
      for (Factor* f : {&a, &b, &c}) {
        double norm = 0.0;
        for (int r = 0; r < f->rows; ++r) norm += f->at(r, k) * f->at(r, k);
        norm = std::sqrt(norm);
        if (norm > 0.0)
          for (int r = 0; r < f->rows; ++r) f->at(r, k) /= norm;
        prod *= norm;
      }
      lambda[static_cast<std::size_t>(k)] = prod;
    }

    // fit = 1 − ‖T − T̂‖_F/‖T‖_F via the inner-product expansion
    double inner = 0.0;
    for (const Tensor3::Entry& e : t.nonzeros) {
      double acc = 0.0;
      for (int k = 0; k < rank; ++k)
        acc += lambda[static_cast<std::size_t>(k)] * a.at(e.subject, k) * b.at(e.object, k) *
               c.at(e.predicate, k);
      inner += e.value * acc;
    }
    auto ga = detail::gram(a);
    auto gb = detail::gram(b);
    auto gc = detail::gram(c);
    double norm_hat_sq = 0.0;
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j)
        norm_hat_sq += lambda[static_cast<std::size_t>(i)] * lambda[static_cast<std::size_t>(j)] *
                       ga[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                       gb[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                       gc[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    double err_sq = std::max(0.0, norm_t_sq - 2.0 * inner + norm_hat_sq);
    double fit = 1.0 - std::sqrt(err_sq) / norm_t;
    fit_history.push_back(fit);
    ++sweeps;
    if (prev_fit >= 0.0 && std::abs(fit - prev_fit) < tol) break;
    prev_fit = fit;
  }

  std::vector<int> order(static_cast<std::size_t>(rank));
  for (int k = 0; k < rank; ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return lambda[static_cast<std::size_t>(x)] > lambda[static_cast<std::size_t>(y)]; });

  CpFactors out;
  out.rank = rank;
  out.iterations = sweeps;
  out.fit = fit_history.back();
  out.fit_history = std::move(fit_history);
  out.ridge_applied = ridge_applied;
  for (int k : order) {
    out.lambda.push_back(lambda[static_cast<std::size_t>(k)]);
    std::vector<double> ca(static_cast<std::size_t>(t.n)), cb(static_cast<std::size_t>(t.n)),
        cc(static_cast<std::size_t>(t.predicates));
    for (int r = 0; r < t.n; ++r) ca[static_cast<std::size_t>(r)] = a.at(r, k);
    for (int r = 0; r < t.n; ++r) cb[static_cast<std::size_t>(r)] = b.at(r, k);
    for (int r = 0; r < t.predicates; ++r) cc[static_cast<std::size_t>(r)] = c.at(r, k);
    out.subject_cols.push_back(std::move(ca));
    out.object_cols.push_back(std::move(cb));
    out.predicate_cols.push_back(std::move(cc));
  }
  return out;
}

// Representative triples for one entity: take the m components the entity
// loads most (as subject or object), keep the q strongest predicates of each,
// and return the matching incident triples ordered by (component weight,
// predicate score, intern indices), deduplicated.
inline std::vector<Triple> select_triples(const CpFactors& f, const EntityGraph& g,
                                          EntityIndex entity, int m, int q) {
  if (entity < 0 || entity >= g.entity_count()) throw InputError("unknown entity");
  if (m < 1 || m > f.rank) throw InputError("component count m must lie in 1..rank");
  if (q < 1) throw InputError("predicate count q must be at least 1");

  std::vector<std::pair<double, int>> loading;  // (-load used implicitly via sort)
  for (int k = 0; k < f.rank; ++k) {
    double load = std::max(std::abs(f.subject_cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(entity)]),
                           std::abs(f.object_cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(entity)]));
    if (load > 0.0) loading.emplace_back(load, k);
  }
  std::stable_sort(loading.begin(), loading.end(), [](const auto& x, const auto& y) {
    return x.first > y.first;
  });
  if (static_cast<int>(loading.size()) > m) loading.resize(static_cast<std::size_t>(m));

  // components reported in lambda-descending order
  std::vector<int> components;
  for (const auto& [load, k] : loading) components.push_back(k);
  std::sort(components.begin(), components.end());

  // incident triples grouped by predicate, ordered by intern indices
  std::map<PredicateIndex, std::vector<Triple>> incident;
  for (const Triple& t : g.triples())
    if (t.subject == entity || t.object == entity) incident[t.predicate].push_back(t);
  for (auto& [p, ts] : incident) {
    std::sort(ts.begin(), ts.end(), [](const Triple& x, const Triple& y) {
      return std::tie(x.subject, x.object) < std::tie(y.subject, y.object);
    });
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }

  std::vector<Triple> out;
  std::set<std::tuple<EntityIndex, PredicateIndex, EntityIndex>> emitted;
  for (int k : components) {
    std::vector<std::pair<double, PredicateIndex>> preds;
    const auto& c = f.predicate_cols[static_cast<std::size_t>(k)];
    for (PredicateIndex p = 0; p < static_cast<PredicateIndex>(c.size()); ++p)
      if (std::abs(c[static_cast<std::size_t>(p)]) > 0.0)
        preds.emplace_back(std::abs(c[static_cast<std::size_t>(p)]), p);
    std::stable_sort(preds.begin(), preds.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    if (static_cast<int>(preds.size()) > q) preds.resize(static_cast<std::size_t>(q));
    for (const auto& [score, p] : preds) {
      auto it = incident.find(p);
      if (it == incident.end()) continue;
      for (const Triple& t : it->second)
        if (emitted.emplace(t.subject, t.predicate, t.object).second) out.push_back(t);
    }
  }
  return out;
}

// Selected triples in graph.tsv format under a `# entity <IRI>` group header.
inline void write_triple_group(std::ostream& out, const EntityGraph& g,
                               EntityIndex entity, const std::vector<Triple>& triples) {
  out << "# entity " << g.uri(entity) << '\n';
  for (const Triple& t : triples)
    out << g.uri(t.subject) << '\t' << g.predicate_uri(t.predicate) << '\t' << g.uri(t.object)
        << '\n';
}

}  // namespace ldrank
