#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldrank/errors.hpp"
#include "ldrank/sparse.hpp"

namespace ldrank {

// Rank-k factorization R ~ U diag(S) Vt. U columns and V columns are
// orthonormal to tolerance, singular values descending and non-negative.
// The entry of largest magnitude in each U column is made non-negative to fix
// the sign ambiguity.
struct SvdResult {
  std::vector<std::vector<double>> u_cols;  // k columns of length nrows
  std::vector<double> s;                    // k singular values, descending
  std::vector<std::vector<double>> v_cols;  // k columns of length ncols (rows of Vt)
};

class SvdDivergence : public ConvergenceError {
 public:
  SvdDivergence(const std::string& what, int iterations, SvdResult best)
      : ConvergenceError(what, iterations), best_(std::move(best)) {}

  const SvdResult& best() const noexcept { return best_; }

 private:
  SvdResult best_;
};

namespace detail {

inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Two-pass classical Gram-Schmidt against an orthonormal basis.
inline void reorthogonalize(std::vector<double>& w, const std::vector<std::vector<double>>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) axpy(-dot(w, q), q, w);
}

inline std::vector<double> seeded_unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    norm = norm2(v);
  }
  for (double& x : v) x /= norm;
  return v;
}

// Greedily extends an orthonormal set with canonical basis directions.
inline std::vector<double> orthonormal_extension(const std::vector<std::vector<double>>& basis,
                                                 std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> e(dim, 0.0);
    e[i] = 1.0;
    reorthogonalize(e, basis);
    double norm = norm2(e);
    if (norm > 0.5) {
      for (double& x : e) x /= norm;
      return e;
    }
  }
  throw InputError("orthonormal basis cannot be extended");
}

struct DenseSvd {
  std::vector<std::vector<double>> u_cols;
  std::vector<double> s;
  std::vector<std::vector<double>> v_cols;
};

// One-sided Jacobi SVD of a small dense matrix given as columns. Rotates
// column pairs until all are mutually orthogonal.
inline DenseSvd jacobi_svd(std::vector<std::vector<double>> a, int max_sweeps = 100) {
  const std::size_t n = a.size();
  const std::size_t m = n == 0 ? 0 : a[0].size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  const double tol = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = dot(a[p], a[p]);
        double aqq = dot(a[q], a[q]);
        double apq = dot(a[p], a[q]);
        if (std::abs(apq) <= tol * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        for (std::size_t i = 0; i < m; ++i) {
          double ap = a[p][i], aq = a[q][i];
          a[p][i] = cs * ap - sn * aq;
          a[q][i] = sn * ap + cs * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vp = v[p][i], vq = v[q][i];
          v[p][i] = cs * vp - sn * vq;
          v[q][i] = sn * vp + cs * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = norm2(a[j]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  DenseSvd out;
  for (std::size_t j : order) {
    double sigma = norms[j];
    out.s.push_back(sigma);
    std::vector<double> u = a[j];
    if (sigma > 0.0)
      for (double& x : u) x /= sigma;
    out.u_cols.push_back(std::move(u));
    out.v_cols.push_back(v[j]);
  }
  return out;
}

inline void fix_sign(std::vector<double>& u, std::vector<double>& v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
  if (u[imax] < 0.0) {
    for (double& x : u) x = -x;
    for (double& x : v) x = -x;
  }
}

inline SvdResult zero_matrix_svd(int nrows, int ncols, int k) {
  SvdResult r;
  r.s.assign(static_cast<std::size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) {
    std::vector<double> u(static_cast<std::size_t>(nrows), 0.0);
    std::vector<double> v(static_cast<std::size_t>(ncols), 0.0);
    u[static_cast<std::size_t>(j)] = 1.0;
    v[static_cast<std::size_t>(j)] = 1.0;
    r.u_cols.push_back(std::move(u));
    r.v_cols.push_back(std::move(v));
  }
  return r;
}

// Dominant singular triplet by power iteration on x -> Rᵀ(Rx).
inline SvdResult dominant_triplet(const SparseMatrixCcs& r, double tol, int max_iter) {
  const std::size_t n = static_cast<std::size_t>(r.ncols());
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double sigma_prev = -1.0;
  std::uint64_t restart = 0;

  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> w = spmv(r, v);
    double sigma = norm2(w);
    if (sigma == 0.0) {
      // start vector happens to lie in the null space
      v = seeded_unit_vector(n, 0x5eedULL + ++restart);
      sigma_prev = -1.0;
      continue;
    }
    std::vector<double> z = spmv_t(r, w);
    double zn = norm2(z);
    double dv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double vi = z[i] / zn;
      double d = vi - v[i];
      dv += d * d;
      v[i] = vi;
    }
    dv = std::sqrt(dv);
    bool sigma_stable = sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= tol * sigma;
    sigma_prev = sigma;
    if (sigma_stable && dv <= 100.0 * tol) {
      std::vector<double> u = spmv(r, v);
      double s = norm2(u);
      for (double& x : u) x /= s;
      fix_sign(u, v);
      SvdResult out;
      out.s = {s};
      out.u_cols = {std::move(u)};
      out.v_cols = {std::move(v)};
      return out;
    }
  }

  std::vector<double> u = spmv(r, v);
  double s = norm2(u);
  if (s > 0.0)
    for (double& x : u) x /= s;
  SvdResult best;
  best.s = {s};
  best.u_cols = {std::move(u)};
  best.v_cols = {std::move(v)};
  throw SvdDivergence("power iteration for the dominant singular value did not converge within " +
                          std::to_string(max_iter) + " iterations",
                      max_iter, std::move(best));
}

}  // namespace detail

// k dominant singular triplets of a sparse matrix. k = 1 runs power iteration
// on RᵀR; k > 1 runs Golub-Kahan-Lanczos bidiagonalization with full
// reorthogonalization and Rayleigh-Ritz extraction, restarting with seeded
// random directions when the Krylov branch dies out. Converges when the top-k
// singular value estimates change by less than tol relatively.
inline SvdResult truncated_svd(const SparseMatrixCcs& r, int k, double tol = 1e-10,
                               int max_iter = 10000) {
  const int m = r.nrows();
  const int n = r.ncols();
  if (k < 1 || k > std::min(m, n))
    throw InputError("svd rank k = " + std::to_string(k) + " out of range 1.." +
                     std::to_string(std::min(m, n)));
  if (tol <= 0.0 || max_iter < 1) throw InputError("svd tolerance and iteration budget must be positive");
  if (r.nnz() == 0) return detail::zero_matrix_svd(m, n, k);
  if (k == 1) return detail::dominant_triplet(r, tol, max_iter);

  double frob = 0.0;
  for (double v : r.values()) frob += v * v;
  frob = std::sqrt(frob);
  const double breakdown = frob * 1e-12;

  std::vector<std::vector<double>> v_cols;   // processed right vectors
  std::vector<std::vector<double>> rv_cols;  // R * v for each processed right vector
  std::vector<std::vector<double>> u_cols;
  std::vector<double> prev_top;
  std::uint64_t restart = 0;

  std::vector<double> v_next(static_cast<std::size_t>(n),
                             1.0 / std::sqrt(static_cast<double>(n)));
  bool have_next = true;
  bool converged = false;
  bool exhausted = false;

  auto ritz = [&]() {
    // B = Uᵀ (R V), exact including reorthogonalization corrections
    std::vector<std::vector<double>> b(v_cols.size(),
                                       std::vector<double>(u_cols.size(), 0.0));
    for (std::size_t j = 0; j < v_cols.size(); ++j)
      for (std::size_t i = 0; i < u_cols.size(); ++i)
        b[j][i] = detail::dot(u_cols[i], rv_cols[j]);
    return detail::jacobi_svd(std::move(b));
  };

  while (static_cast<int>(v_cols.size()) < n && static_cast<int>(v_cols.size()) < max_iter) {
    if (!have_next) {
      v_next = detail::seeded_unit_vector(static_cast<std::size_t>(n), 0x5eedULL + ++restart);
      detail::reorthogonalize(v_next, v_cols);
      double norm = detail::norm2(v_next);
      if (norm <= 0.5) {  // right space numerically exhausted: Ritz values exact
        exhausted = true;
        break;
      }
      for (double& x : v_next) x /= norm;
    }
    v_cols.push_back(v_next);
    rv_cols.push_back(spmv(r, v_cols.back()));
    have_next = false;

    std::vector<double> w = rv_cols.back();
    detail::reorthogonalize(w, u_cols);
    double a = detail::norm2(w);
    if (a > breakdown && static_cast<int>(u_cols.size()) < m) {
      for (double& x : w) x /= a;
      u_cols.push_back(std::move(w));
      std::vector<double> z = spmv_t(r, u_cols.back());
      detail::reorthogonalize(z, v_cols);
      double b = detail::norm2(z);
      if (b > breakdown) {
        for (double& x : z) x /= b;
        v_next = std::move(z);
        have_next = true;
      }
    }

    if (static_cast<int>(u_cols.size()) >= k) {
      detail::DenseSvd small = ritz();
      std::vector<double> top(small.s.begin(),
                              small.s.begin() + std::min<std::size_t>(small.s.size(),
                                                                      static_cast<std::size_t>(k)));
      if (static_cast<int>(top.size()) == k && !prev_top.empty() &&
          prev_top.size() == top.size()) {
        bool stable = true;
        for (std::size_t i = 0; i < top.size(); ++i)
          if (std::abs(top[i] - prev_top[i]) >
              tol * std::max(top[i], frob * std::numeric_limits<double>::epsilon()))
            stable = false;
        if (stable) {
          converged = true;
          break;
        }
      }
      prev_top = std::move(top);
    }
  }

  detail::DenseSvd small = ritz();
  SvdResult out;
  for (int j = 0; j < k; ++j) {
    if (j < static_cast<int>(small.s.size()) && small.s[static_cast<std::size_t>(j)] > breakdown) {
      const auto& p = small.u_cols[static_cast<std::size_t>(j)];  // length |U|, combines u_cols
      const auto& q = small.v_cols[static_cast<std::size_t>(j)];  // length |V|, combines v_cols
      std::vector<double> uj(static_cast<std::size_t>(m), 0.0);
      std::vector<double> vj(static_cast<std::size_t>(n), 0.0);
      for (std::size_t t = 0; t < u_cols.size(); ++t)
        detail::axpy(p[t], u_cols[t], uj);
      for (std::size_t t = 0; t < v_cols.size(); ++t)
        detail::axpy(q[t], v_cols[t], vj);
      detail::fix_sign(uj, vj);
      out.s.push_back(small.s[static_cast<std::size_t>(j)]);
      out.u_cols.push_back(std::move(uj));
      out.v_cols.push_back(std::move(vj));
    } else {
      out.s.push_back(0.0);
      out.u_cols.push_back(detail::orthonormal_extension(out.u_cols, static_cast<std::size_t>(m)));
      out.v_cols.push_back(detail::orthonormal_extension(out.v_cols, static_cast<std::size_t>(n)));
    }
  }
  // a full basis makes the Ritz values exact even without the stability stop
  if (!converged && !exhausted && static_cast<int>(v_cols.size()) < n)
    throw SvdDivergence("Lanczos bidiagonalization did not converge within " +
                            std::to_string(max_iter) + " iterations",
                        static_cast<int>(v_cols.size()), std::move(out));
  return out;
}

}  // namespace ldrank
