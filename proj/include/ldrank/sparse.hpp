#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ldrank/errors.hpp"

namespace ldrank {

// One (row, col, value) coordinate entry; duplicates are summed on assembly.
struct Coordinate {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed-column sparse matrix. Column pointers are non-decreasing, row
// indices strictly increase within a column, stored values are finite and
// nonzero.
class SparseMatrixCcs {
 public:
  SparseMatrixCcs() = default;

  SparseMatrixCcs(int nrows, int ncols, std::vector<int> col_ptr, std::vector<int> row_idx,
                  std::vector<double> values)
      : nrows_(nrows),
        ncols_(ncols),
        col_ptr_(std::move(col_ptr)),
        row_idx_(std::move(row_idx)),
        values_(std::move(values)) {
    check_invariants();
  }

  static SparseMatrixCcs from_coordinates(int nrows, int ncols, std::vector<Coordinate> entries) {
    if (nrows < 0 || ncols < 0) throw InputError("matrix dimensions must be non-negative");
    for (const Coordinate& e : entries) {
      if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols)
        throw InputError("coordinate entry (" + std::to_string(e.row) + "," +
                         std::to_string(e.col) + ") out of bounds");
      if (!std::isfinite(e.value)) throw InputError("non-finite matrix entry");
    }
    std::sort(entries.begin(), entries.end(), [](const Coordinate& a, const Coordinate& b) {
      return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });

    SparseMatrixCcs m;
    m.nrows_ = nrows;
    m.ncols_ = ncols;
    m.col_ptr_.assign(static_cast<std::size_t>(ncols) + 1, 0);
    m.row_idx_.reserve(entries.size());
    m.values_.reserve(entries.size());

    std::size_t i = 0;
    for (int col = 0; col < ncols; ++col) {
      m.col_ptr_[static_cast<std::size_t>(col)] = static_cast<int>(m.values_.size());
      while (i < entries.size() && entries[i].col == col) {
        int row = entries[i].row;
        double sum = 0.0;
        while (i < entries.size() && entries[i].col == col && entries[i].row == row) {
          sum += entries[i].value;
          ++i;
        }
        if (sum != 0.0) {
          m.row_idx_.push_back(row);
          m.values_.push_back(sum);
        }
      }
    }
    m.col_ptr_[static_cast<std::size_t>(ncols)] = static_cast<int>(m.values_.size());
    return m;
  }

  int nrows() const noexcept { return nrows_; }
  int ncols() const noexcept { return ncols_; }
  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(values_.size()); }

  const std::vector<int>& col_ptr() const noexcept { return col_ptr_; }
  const std::vector<int>& row_idx() const noexcept { return row_idx_; }
  const std::vector<double>& values() const noexcept { return values_; }

  // Row sums accumulated in storage order.
  std::vector<double> row_sums() const {
    std::vector<double> sums(static_cast<std::size_t>(nrows_), 0.0);
    for (int col = 0; col < ncols_; ++col)
      for (int k = col_ptr_[col]; k < col_ptr_[col + 1]; ++k)
        sums[static_cast<std::size_t>(row_idx_[k])] += values_[k];
    return sums;
  }

  // New matrix with row i multiplied by factors[i]. Entries scaled to exact
  // zero are dropped.
  SparseMatrixCcs scale_rows(std::span<const double> factors) const {
    if (static_cast<int>(factors.size()) != nrows_)
      throw InputError("scale_rows: factor count does not match row count");
    SparseMatrixCcs out;
    out.nrows_ = nrows_;
    out.ncols_ = ncols_;
    out.col_ptr_.assign(col_ptr_.size(), 0);
    out.row_idx_.reserve(row_idx_.size());
    out.values_.reserve(values_.size());
    for (int col = 0; col < ncols_; ++col) {
      out.col_ptr_[static_cast<std::size_t>(col)] = static_cast<int>(out.values_.size());
      for (int k = col_ptr_[col]; k < col_ptr_[col + 1]; ++k) {
        double v = values_[k] * factors[static_cast<std::size_t>(row_idx_[k])];
        if (!std::isfinite(v)) throw InputError("scale_rows: non-finite scaled entry");
        if (v != 0.0) {
          out.row_idx_.push_back(row_idx_[k]);
          out.values_.push_back(v);
        }
      }
    }
    out.col_ptr_.back() = static_cast<int>(out.values_.size());
    return out;
  }

 private:
  void check_invariants() const {
    if (static_cast<int>(col_ptr_.size()) != ncols_ + 1)
      throw InputError("CCS: column pointer array has wrong length");
    if (col_ptr_.front() != 0 || col_ptr_.back() != static_cast<int>(values_.size()))
      throw InputError("CCS: column pointers do not bracket the value array");
    if (row_idx_.size() != values_.size()) throw InputError("CCS: index/value length mismatch");
    for (int col = 0; col < ncols_; ++col) {
      if (col_ptr_[col] > col_ptr_[col + 1]) throw InputError("CCS: column pointers decrease");
      for (int k = col_ptr_[col]; k < col_ptr_[col + 1]; ++k) {
        if (row_idx_[k] < 0 || row_idx_[k] >= nrows_) throw InputError("CCS: row index out of range");
        if (k > col_ptr_[col] && row_idx_[k - 1] >= row_idx_[k])
          throw InputError("CCS: row indices not strictly increasing within a column");
        if (values_[k] == 0.0 || !std::isfinite(values_[k]))
          throw InputError("CCS: stored value must be finite and nonzero");
      }
    }
  }

  int nrows_ = 0;
  int ncols_ = 0;
  std::vector<int> col_ptr_{0};
  std::vector<int> row_idx_;
  std::vector<double> values_;
};

// y = M x. Summation follows storage order, so results are bitwise
// reproducible.
inline std::vector<double> spmv(const SparseMatrixCcs& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.ncols())
    throw InputError("spmv: vector length does not match column count");
  std::vector<double> y(static_cast<std::size_t>(m.nrows()), 0.0);
  const auto& cp = m.col_ptr();
  const auto& ri = m.row_idx();
  const auto& vv = m.values();
  for (int col = 0; col < m.ncols(); ++col) {
    double xj = x[static_cast<std::size_t>(col)];
    if (xj == 0.0) continue;
    for (int k = cp[col]; k < cp[col + 1]; ++k) y[static_cast<std::size_t>(ri[k])] += vv[k] * xj;
  }
  return y;
}

// y = Mᵀ x.
inline std::vector<double> spmv_t(const SparseMatrixCcs& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.nrows())
    throw InputError("spmv_t: vector length does not match row count");
  std::vector<double> y(static_cast<std::size_t>(m.ncols()), 0.0);
  const auto& cp = m.col_ptr();
  const auto& ri = m.row_idx();
  const auto& vv = m.values();
  for (int col = 0; col < m.ncols(); ++col) {
    double acc = 0.0;
    for (int k = cp[col]; k < cp[col + 1]; ++k) acc += vv[k] * x[static_cast<std::size_t>(ri[k])];
    y[static_cast<std::size_t>(col)] = acc;
  }
  return y;
}

}  // namespace ldrank
