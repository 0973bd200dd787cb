#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ldrank/errors.hpp"
#include "ldrank/pagerank.hpp"

namespace ldrank {

struct BenchRow {
  std::string strategy;
  int n_entities = 0;
  std::int64_t nnz = 0;
  double median_ms = 0.0;
};

// Wall-clock timing of full rank() invocations; the reported value is the
// median of the repetitions. Single-threaded to keep timings honest.
inline std::vector<BenchRow> bench(const EntityGraph& g, const RankInputs& inputs,
                                   const RankConfig& cfg, const std::vector<Strategy>& strategies,
                                   int repetitions) {
  if (repetitions < 1) throw InputError("bench needs at least one repetition");
  SparseMatrixCcs m = adjacency_matrix(g, cfg.pagerank.bidirectional, cfg.pagerank.edge_weighting);
  std::vector<BenchRow> rows;
  for (Strategy s : strategies) {
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
      auto start = std::chrono::steady_clock::now();
      rank(g, s, inputs, cfg);
      auto stop = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(samples.begin(), samples.end());
    std::size_t mid = samples.size() / 2;
    double median = samples.size() % 2 == 1 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
    rows.push_back({strategy_name(s), g.entity_count(), m.nnz(), median});
  }
  return rows;
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "strategy,n_entities,nnz,median_ms\n";
  char buf[64];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f", r.median_ms);
    out << r.strategy << ',' << r.n_entities << ',' << r.nnz << ',' << buf << '\n';
  }
}

}  // namespace ldrank
