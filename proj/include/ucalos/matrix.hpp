// SPDX-License-Identifier: Apache-2.0
//
// ucalos: line-of-sight MIMO link simulator for uniform circular arrays
// Copyright (C) 2026 The ucalos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ucalos {

using cdouble = std::complex<double>;
using CVector = std::vector<cdouble>;

// Dense row-major complex matrix. Indices are 0-based.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, cdouble fill = {})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static CMatrix identity(std::size_t n) {
    CMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i)
      I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cdouble &operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cdouble &operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const cdouble> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const cdouble> data() const noexcept { return data_; }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto &v : data_)
      m = std::max(m, std::abs(v));
    return m;
  }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  friend bool operator==(const CMatrix &, const CMatrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> data_;
};

inline CMatrix operator*(const CMatrix &a, const CMatrix &b) {
  if (a.cols() != b.rows())
    throw ArgumentError("matrix product: inner dimensions " + std::to_string(a.cols()) + " and " +
                        std::to_string(b.rows()) + " differ");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cdouble aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j)
        out(i, j) += aik * b(k, j);
    }
  return out;
}

inline CVector operator*(const CMatrix &a, std::span<const cdouble> x) {
  if (a.cols() != x.size())
    throw ArgumentError("matrix-vector product: matrix has " + std::to_string(a.cols()) +
                        " columns but vector has " + std::to_string(x.size()) + " entries");
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cdouble acc{};
    for (std::size_t j = 0; j < a.cols(); ++j)
      acc += a(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

inline double norm2(std::span<const cdouble> v) noexcept {
  double s = 0.0;
  for (const auto &x : v)
    s += std::norm(x);
  return std::sqrt(s);
}

} // namespace ucalos
