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


#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace specstop {

/// Dense row-major real matrix of a layer's weights. Entries are checked
/// finite on construction.
class WeightMatrix {
 public:
  WeightMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  std::span<const double> entries() const { return entries_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * cols_, cols_);
  }

  WeightMatrix transposed() const;

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> entries_;
};

/// Nonnegative eigenvalues sorted in descending order. Never empty.
class Spectrum {
 public:
  /// Sorts the input; throws on negative, non-finite, or empty input.
  explicit Spectrum(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double max() const { return values_.front(); }
  double min() const { return values_.back(); }

  /// Copy with every value multiplied by `factor` (> 0).
  Spectrum scaled(double factor) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> values_;
};

/// Square symmetric matrix, row-major.
struct SymmetricMatrix {
  std::size_t size = 0;
  std::vector<double> entries;

  double& operator()(std::size_t r, std::size_t c) { return entries[r * size + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries[r * size + c]; }
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  /// Column i of this row-major k x k matrix is the eigenvector of values[i].
  std::optional<std::vector<double>> vectors;
};

/// Householder tridiagonalization followed by implicit-shift QL.
EigenDecomposition sym_eigen(const SymmetricMatrix& a, bool want_vectors = false);

/// Eigenvalues (ascending) of the symmetric tridiagonal matrix with the
/// given diagonal and off-diagonal (`off.size() == diag.size() - 1`).
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag,
                                            std::span<const double> off);

/// Spectrum of (1 / max(n, N)) W_s W_s^T, where W_s is W oriented so that
/// it has no more rows than columns. Values at or below `zero_tol` are
/// dropped; the default tolerance is 1e-12 times the largest eigenvalue.
Spectrum gram_spectrum(const WeightMatrix& w, std::optional<double> zero_tol = std::nullopt);

namespace kernels {

/// Upper triangle (and mirror) of G = X X^T for a row-major k x len block.
/// OpenMP over rows; every entry is produced by a single thread with a
/// fixed summation order, so the result does not depend on thread count.
SymmetricMatrix gram_parallel(std::span<const double> rows, std::size_t k, std::size_t len);

/// Textbook triple loop, kept as the reference for the parallel kernel.
SymmetricMatrix gram_reference(std::span<const double> rows, std::size_t k, std::size_t len);

}  // namespace kernels

}  // namespace specstop
