#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldrank/errors.hpp"
#include "ldrank/io.hpp"

namespace ldrank {

// Symmetric distance over the 4-level ordinal grade scale, zero diagonal,
// values in [0,1].
class OrdinalDistance {
 public:
  explicit OrdinalDistance(const std::array<std::array<double, 4>, 4>& d) : d_(d) {
    for (int i = 0; i < 4; ++i) {
      if (d_[i][i] != 0.0) throw InputError("ordinal distance must have a zero diagonal");
      for (int j = 0; j < 4; ++j) {
        if (d_[i][j] != d_[j][i]) throw InputError("ordinal distance must be symmetric");
        if (d_[i][j] < 0.0 || d_[i][j] > 1.0) throw InputError("ordinal distance out of [0,1]");
      }
    }
  }

  double operator()(int a, int b) const {
    if (a < 0 || a > 3 || b < 0 || b > 3) throw InputError("grade outside the 0..3 scale");
    return d_[a][b];
  }

  // 1 off the diagonal: plain nominal disagreement.
  static OrdinalDistance binary() {
    std::array<std::array<double, 4>, 4> d{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) d[i][j] = i == j ? 0.0 : 1.0;
    return OrdinalDistance(d);
  }

 private:
  std::array<std::array<double, 4>, 4> d_;
};

// The graded distance used for inter-annotator agreement: adjacent high
// grades are close, the irrelevant/highly-relevant extremes are distance 1.
inline OrdinalDistance default_ordinal_distance() {
  return OrdinalDistance({{{0.00, 0.50, 0.75, 1.00},
                           {0.50, 0.00, 0.25, 0.50},
                           {0.75, 0.25, 0.00, 0.25},
                           {1.00, 0.50, 0.25, 0.00}}});
}

// DCG_r = rel_1 + Σ_{i=2..r} rel_i / log2(i). Positions 1 and 2 share the
// unit discount.
inline double dcg(std::span<const int> grades_in_rank_order, int r) {
  if (r < 1) throw InputError("dcg rank must be at least 1");
  if (r > static_cast<int>(grades_in_rank_order.size()))
    throw InputError("dcg rank " + std::to_string(r) + " exceeds list length " +
                     std::to_string(grades_in_rank_order.size()));
  double acc = static_cast<double>(grades_in_rank_order[0]);
  for (int i = 2; i <= r; ++i)
    acc += static_cast<double>(grades_in_rank_order[static_cast<std::size_t>(i - 1)]) /
           std::log2(static_cast<double>(i));
  return acc;
}

// NDCG at rank r of a ranked entity list against graded qrels. Entities
// missing from the qrels count as grade 0; the ideal ordering sorts the
// ranked list's own grades descending.
inline double ndcg(const std::vector<std::string>& ranked_uris, const Qrels& qrels, int r) {
  std::vector<int> grades;
  grades.reserve(ranked_uris.size());
  for (const std::string& uri : ranked_uris) grades.push_back(qrels.grade(uri));
  std::vector<int> ideal = grades;
  std::sort(ideal.begin(), ideal.end(), std::greater<int>());
  double ideal_dcg = dcg(ideal, r);
  if (ideal_dcg <= 0.0)
    throw InputError("ndcg undefined: no positively graded entity in the ranking");
  return dcg(grades, r) / ideal_dcg;
}

enum class TieBreak { Highest, Accuracy };

namespace detail {

inline std::map<int, std::vector<std::string>> unit_votes(const JudgmentSet& j,
                                                          const std::string& unit) {
  std::map<int, std::vector<std::string>> by_grade;
  for (const Judgment& rec : j.records)
    if (rec.unit == unit) by_grade[rec.value].push_back(rec.worker);
  return by_grade;
}

}  // namespace detail

// Modal grade of a unit. Ties resolve to the highest grade, or in accuracy
// mode to the grade whose voters have the greatest mean accuracy (residual
// ties again to the highest grade).
inline int majority_vote(const JudgmentSet& j, const std::string& unit,
                         TieBreak tiebreak = TieBreak::Highest,
                         const std::map<std::string, double>* accuracies = nullptr) {
  auto by_grade = detail::unit_votes(j, unit);
  if (by_grade.empty()) throw InputError("unknown unit: " + unit);
  std::size_t top = 0;
  for (const auto& [grade, workers] : by_grade) top = std::max(top, workers.size());
  std::vector<int> tied;
  for (const auto& [grade, workers] : by_grade)
    if (workers.size() == top) tied.push_back(grade);
  if (tied.size() == 1) return tied.front();
  if (tiebreak == TieBreak::Highest) return *std::max_element(tied.begin(), tied.end());

  if (!accuracies) throw InputError("accuracy tie-break requires worker accuracies");
  double best_acc = -1.0;
  int best_grade = -1;
  for (int grade : tied) {
    const auto& workers = by_grade[grade];
    double acc = 0.0;
    for (const std::string& w : workers) {
      auto it = accuracies->find(w);
      if (it == accuracies->end())
        throw InputError("missing accuracy for worker " + w + " voting on tied unit " + unit);
      acc += it->second;
    }
    acc /= static_cast<double>(workers.size());
    if (acc > best_acc || (acc == best_acc && grade > best_grade)) {
      best_acc = acc;
      best_grade = grade;
    }
  }
  return best_grade;
}

// Removes every worker whose disagreement rate with the per-unit majorities
// (highest tie-break, computed once on the full set) strictly exceeds the
// threshold. Single pass; majorities are not recomputed.
inline JudgmentSet filter_workers(const JudgmentSet& j, double threshold = 0.412) {
  if (threshold < 0.0) throw InputError("disagreement threshold must be non-negative");
  std::map<std::string, int> majority;
  std::set<std::string> units;
  for (const Judgment& rec : j.records) units.insert(rec.unit);
  for (const std::string& u : units) majority[u] = majority_vote(j, u, TieBreak::Highest);

  std::map<std::string, std::pair<int, int>> disagreement;  // worker -> (disagreed, total)
  for (const Judgment& rec : j.records) {
    auto& [bad, total] = disagreement[rec.worker];
    if (rec.value != majority[rec.unit]) ++bad;
    ++total;
  }

  JudgmentSet out;
  for (const Judgment& rec : j.records) {
    const auto& [bad, total] = disagreement[rec.worker];
    double rate = static_cast<double>(bad) / static_cast<double>(total);
    if (rate <= threshold) out.records.push_back(rec);
  }
  return out;
}

// Krippendorff's alpha = 1 − D_o/D_e with the pairable-values formulation:
// units with fewer than two judgments are excluded, observed disagreement
// averages ordered within-unit pairs weighted by 1/(m_u − 1), expected
// disagreement pools all pairable values.
inline double krippendorff_alpha(const JudgmentSet& j, const OrdinalDistance& d) {
  std::map<std::string, std::vector<int>> units;
  for (const Judgment& rec : j.records) units[rec.unit].push_back(rec.value);

  std::array<double, 4> pooled{};  // n_c over pairable values
  double n = 0.0;
  double observed = 0.0;
  int multi_units = 0;
  for (const auto& [unit, values] : units) {
    if (values.size() < 2) continue;
    ++multi_units;
    std::array<double, 4> count{};
    for (int v : values) count[static_cast<std::size_t>(v)] += 1.0;
    double pair_sum = 0.0;
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k)
        pair_sum += count[static_cast<std::size_t>(c)] * count[static_cast<std::size_t>(k)] * d(c, k);
    observed += pair_sum / (static_cast<double>(values.size()) - 1.0);
    for (int c = 0; c < 4; ++c) pooled[static_cast<std::size_t>(c)] += count[static_cast<std::size_t>(c)];
    n += static_cast<double>(values.size());
  }
  if (multi_units < 2)
    throw InputError("krippendorff alpha needs at least two units with two or more judgments");

  observed /= n;
  double expected = 0.0;
  for (int c = 0; c < 4; ++c)
    for (int k = 0; k < 4; ++k)
      expected += pooled[static_cast<std::size_t>(c)] * pooled[static_cast<std::size_t>(k)] * d(c, k);
  expected /= n * (n - 1.0);
  if (expected <= 0.0)
    throw InputError("agreement undefined: expected disagreement is zero (all values identical)");
  return 1.0 - observed / expected;
}

}  // namespace ldrank
