#include "doctest.h"
#include "ldrank/entity_graph.hpp"

using namespace ldrank;

namespace {
IriTriple t(const char* s, const char* p, const char* o) { return {s, p, o}; }
}  // namespace

TEST_CASE("empty graph is forbidden") {
  CHECK_THROWS_AS(build_graph({}, {}), InputError);
}

TEST_CASE("direct construction interns in first-appearance order") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b")});
  CHECK(g.entity_count() == 2);
  CHECK(g.uri(0) == "urn:a");
  CHECK(g.uri(1) == "urn:b");
  CHECK(g.triples().size() == 1);
  CHECK(g.index_of("urn:b") == 1);
}

TEST_CASE("duplicate triples keep multiplicity") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b"), t("urn:a", "urn:p", "urn:b")});
  CHECK(g.triples().size() == 2);
}

TEST_CASE("interning round-trips for every entity") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b"), t("urn:b", "urn:q", "urn:c")},
                              {{"urn:d", "standalone text"}});
  for (EntityIndex e = 0; e < g.entity_count(); ++e) CHECK(g.index_of(g.uri(e)) == e);
  CHECK(g.entity_count() == 4);  // text key interned after triple entities
  CHECK(g.uri(3) == "urn:d");
  CHECK(g.text(3) == "standalone text");
}

TEST_CASE("malformed IRIs are rejected") {
  CHECK_THROWS_AS(build_graph({t("no colon", "urn:p", "urn:b")}), InputError);
  CHECK_THROWS_AS(build_graph({t("urn:a", "has space:x", "urn:b")}), InputError);
  CHECK_THROWS_AS(build_graph({t("urn:a", "urn:p", ":nocheme")}), InputError);
  CHECK(is_absolute_iri("http://db/e1"));
  CHECK_FALSE(is_absolute_iri("relative/path"));
  CHECK_FALSE(is_absolute_iri("urn:"));
}

TEST_CASE("duplicate text for one entity is an error") {
  CHECK_THROWS_AS(build_graph({t("urn:a", "urn:p", "urn:b")},
                              {{"urn:a", "one"}, {"urn:a", "two"}}),
                  InputError);
}

TEST_CASE("adjacency for a single directed edge") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b")});
  SparseMatrixCcs m = adjacency_matrix(g, false, EdgeWeighting::Unit);
  CHECK(m.nnz() == 1);
  CHECK(m.col_ptr() == std::vector<int>{0, 0, 1});  // entry (0,1)
  CHECK(m.row_idx() == std::vector<int>{0});
  CHECK(m.values() == std::vector<double>{1.0});
}

TEST_CASE("bidirectional adjacency symmetrizes the pattern") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b")});
  SparseMatrixCcs m = adjacency_matrix(g, true, EdgeWeighting::Unit);
  CHECK(m.nnz() == 2);
  // entries (0,1) and (1,0)
  CHECK(m.col_ptr() == std::vector<int>{0, 1, 2});
  CHECK(m.row_idx() == std::vector<int>{1, 0});
}

TEST_CASE("multiplicity weighting counts parallel edges") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b"), t("urn:a", "urn:q", "urn:b")});
  SparseMatrixCcs unit = adjacency_matrix(g, false, EdgeWeighting::Unit);
  SparseMatrixCcs mult = adjacency_matrix(g, false, EdgeWeighting::Multiplicity);
  CHECK(unit.values() == std::vector<double>{1.0});
  CHECK(mult.values() == std::vector<double>{2.0});
}

TEST_CASE("multiplicity nonzero count equals distinct subject/object pairs") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b"), t("urn:a", "urn:q", "urn:b"),
                               t("urn:b", "urn:p", "urn:a"), t("urn:a", "urn:p", "urn:a")});
  SparseMatrixCcs m = adjacency_matrix(g, false, EdgeWeighting::Multiplicity);
  CHECK(m.nnz() == 3);  // (a,b), (b,a), (a,a)
}

TEST_CASE("self-loops are kept and not doubled by symmetrization") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:a"), t("urn:a", "urn:p", "urn:b")});
  SparseMatrixCcs m = adjacency_matrix(g, true, EdgeWeighting::Multiplicity);
  // (a,a)=1, (a,b)=1, (b,a)=1
  CHECK(m.nnz() == 3);
  for (double v : m.values()) CHECK(v == 1.0);
}

TEST_CASE("bidirectional pattern is structurally symmetric") {
  EntityGraph g = build_graph({t("urn:a", "urn:p", "urn:b"), t("urn:b", "urn:q", "urn:c"),
                               t("urn:c", "urn:p", "urn:a"), t("urn:a", "urn:p", "urn:c")});
  SparseMatrixCcs m = adjacency_matrix(g, true, EdgeWeighting::Unit);
  for (int col = 0; col < m.ncols(); ++col)
    for (int k = m.col_ptr()[col]; k < m.col_ptr()[col + 1]; ++k) {
      int row = m.row_idx()[k];
      bool found = false;
      for (int k2 = m.col_ptr()[row]; k2 < m.col_ptr()[row + 1]; ++k2)
        if (m.row_idx()[k2] == col) found = true;
      CHECK(found);
    }
}
