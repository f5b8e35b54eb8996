/**
 * Copyright 2026 The specstop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "specstop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "specstop/error.hpp"

namespace specstop {

WeightMatrix::WeightMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw Error(ErrorCode::kInvalidArgument, "matrix must be at least 1x1");
  if (entries_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kInvalidArgument, "entry count does not match rows*cols");
  }
  for (double v : entries_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "weight matrix has a NaN/Inf entry");
  }
}

WeightMatrix WeightMatrix::transposed() const {
  std::vector<double> t(entries_.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t[c * rows_ + r] = entries_[r * cols_ + c];
  }
  return WeightMatrix(cols_, rows_, std::move(t));
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::kEmptySpectrum, "spectrum has no values");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "spectrum value is NaN/Inf");
    if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "spectrum value is negative");
  }
  std::sort(values_.begin(), values_.end(), std::greater<>());
}

Spectrum Spectrum::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidArgument, "scale factor must be positive and finite");
  }
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Spectrum(std::move(v));
}

namespace {

// Householder reduction of the symmetric matrix held in `a` to tridiagonal
// form. On return d holds the diagonal, e the sub-diagonal in e[1..n-1],
// and, when vectors are requested, `a` holds the accumulated transform.
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e, bool want_vectors) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k < i; ++k) scale += std::abs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (std::size_t k = 0; k < i; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
          if (want_vectors) at(j, i) = at(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (std::size_t k = j + 1; k < i; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j < i; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) at(j, k) -= (f * e[k] + g * at(i, k));
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (want_vectors) {
      if (d[i] != 0.0) {
        for (std::size_t j = 0; j < i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
          for (std::size_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
        }
      }
      d[i] = at(i, i);
      at(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
    } else {
      d[i] = at(i, i);
    }
  }
}

// Implicit-shift QL on a tridiagonal matrix. `e` arrives in the layout
// produced by tridiagonalize (e[0] unused). `z` (row-major n x n) is rotated
// along when non-null.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, double* z, std::size_t n) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxIter = 60;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t l = 0; l < sn; ++l) {
    int iter = 0;
    std::ptrdiff_t m;
    do {
      for (m = l; m < sn - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxIter) {
          throw Error(ErrorCode::kDegenerate, "QL iteration failed to converge");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        std::ptrdiff_t i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
          if (z != nullptr) {
            for (std::size_t k = 0; k < n; ++k) {
              double* row = z + k * n;
              f = row[i + 1];
              row[i + 1] = s * row[i] + c * f;
              row[i] = c * row[i] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigenDecomposition sym_eigen(const SymmetricMatrix& a, bool want_vectors) {
  const std::size_t n = a.size;
  if (n == 0 || a.entries.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "sym_eigen needs a non-empty square matrix");
  }
  double max_abs = 0.0;
  for (double v : a.entries) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "matrix has a NaN/Inf entry");
    max_abs = std::max(max_abs, std::abs(v));
  }
  const double sym_tol = 1e-8 * max_abs;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) {
      if (std::abs(a(r, c) - a(c, r)) > sym_tol) {
        throw Error(ErrorCode::kNonSymmetric, "matrix is not symmetric within 1e-8 * max|A|");
      }
    }
  }

  EigenDecomposition out;
  if (n == 1) {
    out.values = {a.entries[0]};
    if (want_vectors) out.vectors = std::vector<double>{1.0};
    return out;
  }

  std::vector<double> work(a.entries);
  std::vector<double> d;
  std::vector<double> e;
  tridiagonalize(work, n, d, e, want_vectors);
  ql_implicit(d, e, want_vectors ? work.data() : nullptr, n);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = d[order[i]];
  if (want_vectors) {
    std::vector<double> v(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < n; ++i) v[r * n + i] = work[r * n + order[i]];
    }
    out.vectors = std::move(v);
  }
  return out;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "empty tridiagonal matrix");
  if (off.size() + 1 != n) throw Error(ErrorCode::kInvalidArgument, "off-diagonal length must be n - 1");
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = off[i - 1];
  for (double v : d) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "tridiagonal entry is NaN/Inf");
  }
  ql_implicit(d, e, nullptr, n);
  std::sort(d.begin(), d.end());
  return d;
}

namespace kernels {

namespace {

double dot(const double* x, const double* y, std::size_t len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += x[k] * y[k];
    s1 += x[k + 1] * y[k + 1];
    s2 += x[k + 2] * y[k + 2];
    s3 += x[k + 3] * y[k + 3];
  }
  for (; k < len; ++k) s0 += x[k] * y[k];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

SymmetricMatrix gram_parallel(std::span<const double> rows, std::size_t k, std::size_t len) {
  SymmetricMatrix g{k, std::vector<double>(k * k, 0.0)};
  const double* base = rows.data();
  const auto sk = static_cast<long long>(k);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long si = 0; si < sk; ++si) {
    const auto i = static_cast<std::size_t>(si);
    for (std::size_t j = i; j < k; ++j) {
      g(i, j) = dot(base + i * len, base + j * len, len);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

SymmetricMatrix gram_reference(std::span<const double> rows, std::size_t k, std::size_t len) {
  SymmetricMatrix g{k, std::vector<double>(k * k, 0.0)};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < len; ++t) s += rows[i * len + t] * rows[j * len + t];
      g(i, j) = s;
    }
  }
  return g;
}

}  // namespace kernels

Spectrum gram_spectrum(const WeightMatrix& w, std::optional<double> zero_tol) {
  if (zero_tol && !(*zero_tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero_tol must be >= 0");
  const bool flip = w.rows() > w.cols();
  const WeightMatrix oriented = flip ? w.transposed() : w;
  const std::size_t k = oriented.rows();
  const std::size_t len = oriented.cols();
  const double divisor = static_cast<double>(std::max(w.rows(), w.cols()));

  SymmetricMatrix g = kernels::gram_parallel(oriented.entries(), k, len);
  for (double& v : g.entries) v /= divisor;
  const std::vector<double> eig = sym_eigen(g).values;

  const double top = eig.back();
  const double tol = zero_tol ? *zero_tol : 1e-12 * std::max(top, 0.0);
  std::vector<double> kept;
  kept.reserve(eig.size());
  for (double v : eig) {
    if (v > tol) kept.push_back(v);
  }
  if (kept.empty()) throw Error(ErrorCode::kEmptySpectrum, "every eigenvalue is below the zero tolerance");
  return Spectrum(std::move(kept));
}

}  // namespace specstop
