#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldrank/errors.hpp"

namespace ldrank {

// Probability distribution over the entities of one graph, indexed by intern
// index. Entries are non-negative and sum to 1 within 1e-12.
class ProbVector {
 public:
  static constexpr double kSimplexTolerance = 1e-12;

  explicit ProbVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InputError("probability vector must not be empty");
    double sum = 0.0;
    for (double v : values_) {
      if (!(v >= 0.0)) throw InputError("probability vector has a negative or NaN entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance)
      throw InputError("probability vector does not sum to 1 (sum = " + std::to_string(sum) + ")");
  }

  static ProbVector uniform(std::size_t n) {
    if (n == 0) throw InputError("uniform distribution over zero entities is undefined");
    return ProbVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  // Normalizes non-negative scores to the simplex. All-zero scores are an
  // error; callers wanting a uniform fallback must handle it themselves.
  static ProbVector from_scores(std::span<const double> scores) {
    if (scores.empty()) throw InputError("cannot normalize an empty score vector");
    double sum = 0.0;
    for (double s : scores) {
      if (!(s >= 0.0)) throw InputError("scores must be non-negative");
      sum += s;
    }
    if (sum <= 0.0) throw InputError("all scores are zero; normalization undefined");
    std::vector<double> v(scores.begin(), scores.end());
    for (double& x : v) x /= sum;
    return ProbVector(std::move(v));
  }

  // (1-eps)·p + eps·uniform. eps = 0 returns p unchanged.
  ProbVector smoothed(double eps) const {
    if (eps < 0.0 || eps > 1.0) throw InputError("smoothing weight out of [0,1]");
    if (eps == 0.0) return *this;
    std::vector<double> v(values_.size());
    double u = 1.0 / static_cast<double>(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) v[i] = (1.0 - eps) * values_[i] + eps * u;
    return ProbVector(std::move(v));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::vector<double>& values() const noexcept { return values_; }

  friend bool operator==(const ProbVector& a, const ProbVector& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
};

}  // namespace ldrank
