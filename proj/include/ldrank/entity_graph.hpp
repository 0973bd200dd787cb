#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ldrank/errors.hpp"
#include "ldrank/sparse.hpp"

namespace ldrank {

// Dense intern index of an entity within one graph; indices are contiguous
// 0..n-1 and the uri<->index mapping is a bijection.
using EntityIndex = std::int32_t;
using PredicateIndex = std::int32_t;

// A triple before interning, as it appears in input files.
struct IriTriple {
  std::string subject;
  std::string predicate;
  std::string object;

  friend bool operator==(const IriTriple&, const IriTriple&) = default;
};

// Interned triple. Subject and object index the owning graph's entity list,
// the predicate indexes its predicate list.
struct Triple {
  EntityIndex subject = 0;
  PredicateIndex predicate = 0;
  EntityIndex object = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Accepts absolute IRIs only: a scheme followed by ':' and at least one more
// character, no whitespace or control bytes.
inline bool is_absolute_iri(std::string_view s) {
  if (s.size() < 3) return false;
  auto scheme_char = [](char c, bool first) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
    if (first) return false;
    return (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
  };
  std::size_t colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == s.size()) return false;
  for (std::size_t i = 0; i < colon; ++i)
    if (!scheme_char(s[i], i == 0)) return false;
  for (char c : s)
    if (static_cast<unsigned char>(c) <= 0x20 || c == 0x7f) return false;
  return true;
}

enum class EdgeWeighting { Unit, Multiplicity };

// Entities, directed labeled triples and per-entity descriptive text.
// Immutable after construction; safe to share read-only across threads.
class EntityGraph {
 public:
  EntityGraph(std::vector<std::string> entity_uris, std::vector<std::string> predicate_uris,
              std::vector<Triple> triples, std::vector<std::string> texts)
      : entity_uris_(std::move(entity_uris)),
        predicate_uris_(std::move(predicate_uris)),
        triples_(std::move(triples)),
        texts_(std::move(texts)) {
    if (entity_uris_.empty()) throw InputError("empty graph: at least one entity is required");
    texts_.resize(entity_uris_.size());
    for (std::size_t i = 0; i < entity_uris_.size(); ++i)
      entity_index_.emplace(entity_uris_[i], static_cast<EntityIndex>(i));
    for (std::size_t i = 0; i < predicate_uris_.size(); ++i)
      predicate_index_.emplace(predicate_uris_[i], static_cast<PredicateIndex>(i));
    if (entity_index_.size() != entity_uris_.size())
      throw InputError("duplicate entity uri in graph");
    if (predicate_index_.size() != predicate_uris_.size())
      throw InputError("duplicate predicate uri in graph");
    for (const Triple& t : triples_) {
      if (t.subject < 0 || t.subject >= entity_count() || t.object < 0 ||
          t.object >= entity_count() || t.predicate < 0 || t.predicate >= predicate_count())
        throw InputError("triple references an entity or predicate outside the graph");
    }
  }

  EntityIndex entity_count() const noexcept { return static_cast<EntityIndex>(entity_uris_.size()); }
  PredicateIndex predicate_count() const noexcept {
    return static_cast<PredicateIndex>(predicate_uris_.size());
  }

  const std::string& uri(EntityIndex e) const { return entity_uris_.at(static_cast<std::size_t>(e)); }
  const std::string& predicate_uri(PredicateIndex p) const {
    return predicate_uris_.at(static_cast<std::size_t>(p));
  }
  const std::vector<std::string>& entity_uris() const noexcept { return entity_uris_; }
  const std::vector<std::string>& predicate_uris() const noexcept { return predicate_uris_; }

  std::optional<EntityIndex> find(std::string_view uri) const {
    auto it = entity_index_.find(std::string(uri));
    if (it == entity_index_.end()) return std::nullopt;
    return it->second;
  }

  EntityIndex index_of(std::string_view uri) const {
    auto idx = find(uri);
    if (!idx) throw InputError("unknown entity: " + std::string(uri));
    return *idx;
  }

  const std::vector<Triple>& triples() const noexcept { return triples_; }
  const std::string& text(EntityIndex e) const { return texts_.at(static_cast<std::size_t>(e)); }

 private:
  std::vector<std::string> entity_uris_;
  std::vector<std::string> predicate_uris_;
  std::vector<Triple> triples_;
  std::vector<std::string> texts_;
  std::unordered_map<std::string, EntityIndex> entity_index_;
  std::unordered_map<std::string, PredicateIndex> predicate_index_;
};

// Keyword query plus the entities detected in it (possibly none).
struct Query {
  std::vector<std::string> keywords;
  std::vector<EntityIndex> entities;
};

// Interns entities in first-appearance order over the triple list (subject
// before object) and then over text keys. Duplicate triples keep their
// multiplicity.
inline EntityGraph build_graph(const std::vector<IriTriple>& triples,
                               const std::vector<std::pair<std::string, std::string>>& texts = {}) {
  std::vector<std::string> entities;
  std::unordered_map<std::string, EntityIndex> entity_index;
  std::vector<std::string> predicates;
  std::unordered_map<std::string, PredicateIndex> predicate_index;

  auto intern_entity = [&](const std::string& uri) {
    if (!is_absolute_iri(uri)) throw InputError("malformed IRI: '" + uri + "'");
    auto [it, inserted] = entity_index.emplace(uri, static_cast<EntityIndex>(entities.size()));
    if (inserted) entities.push_back(uri);
    return it->second;
  };
  auto intern_predicate = [&](const std::string& uri) {
    if (!is_absolute_iri(uri)) throw InputError("malformed IRI: '" + uri + "'");
    auto [it, inserted] = predicate_index.emplace(uri, static_cast<PredicateIndex>(predicates.size()));
    if (inserted) predicates.push_back(uri);
    return it->second;
  };

  std::vector<Triple> interned;
  interned.reserve(triples.size());
  for (const IriTriple& t : triples) {
    Triple out;
    out.subject = intern_entity(t.subject);
    out.predicate = intern_predicate(t.predicate);
    out.object = intern_entity(t.object);
    interned.push_back(out);
  }

  std::vector<std::string> text_store(entities.size());
  std::unordered_map<std::string, bool> text_seen;
  for (const auto& [uri, text] : texts) {
    if (!text_seen.emplace(uri, true).second)
      throw InputError("duplicate text for entity: " + uri);
    EntityIndex e = intern_entity(uri);
    text_store.resize(entities.size());
    text_store[static_cast<std::size_t>(e)] = text;
  }
  text_store.resize(entities.size());

  return EntityGraph(std::move(entities), std::move(predicates), std::move(interned),
                     std::move(text_store));
}

// n×n adjacency matrix: entry (i,j) > 0 iff a triple i→j exists (or j→i when
// bidirectional). Unit weighting caps entries at 1, multiplicity counts
// parallel edges. Self-loops are kept and never doubled by symmetrization.
inline SparseMatrixCcs adjacency_matrix(const EntityGraph& g, bool bidirectional = false,
                                        EdgeWeighting weighting = EdgeWeighting::Unit) {
  const int n = g.entity_count();
  std::unordered_map<std::int64_t, double> counts;
  auto key = [n](EntityIndex i, EntityIndex j) {
    return static_cast<std::int64_t>(i) * n + j;
  };
  for (const Triple& t : g.triples()) {
    counts[key(t.subject, t.object)] += 1.0;
    if (bidirectional && t.subject != t.object) counts[key(t.object, t.subject)] += 1.0;
  }
  std::vector<Coordinate> entries;
  entries.reserve(counts.size());
  for (const auto& [k, c] : counts) {
    Coordinate e;
    e.row = static_cast<int>(k / n);
    e.col = static_cast<int>(k % n);
    e.value = (weighting == EdgeWeighting::Unit) ? 1.0 : c;
    entries.push_back(e);
  }
  return SparseMatrixCcs::from_coordinates(n, n, std::move(entries));
}

}  // namespace ldrank
