// Copyright 2026 The csapir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "csapir/field.hpp"

namespace csapir {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix over GF(q).
class FieldMatrix {
 public:
  FieldMatrix(Field field, std::size_t rows, std::size_t cols);
  FieldMatrix(Field field, std::size_t rows, std::size_t cols, FieldVector entries);

  static FieldMatrix identity(Field field, std::size_t n);
  // Builds from nested residues; every row must have the same length.
  static FieldMatrix from_rows(Field field, const std::vector<std::vector<std::int64_t>>& rows);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  const FieldElement& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  FieldElement& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  const FieldVector& entries() const noexcept { return entries_; }
  FieldVector row(std::size_t r) const;
  FieldVector col(std::size_t c) const;

  // Rows picked by index, in the given order.
  FieldMatrix select_rows(std::span<const std::size_t> indices) const;

  FieldMatrix operator+(const FieldMatrix& o) const;
  FieldMatrix operator-(const FieldMatrix& o) const;
  FieldMatrix operator*(const FieldMatrix& o) const;
  FieldMatrix operator*(const FieldElement& s) const;
  FieldVector operator*(const FieldVector& v) const;

  bool operator==(const FieldMatrix& o) const;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  FieldVector entries_;
};

FieldMatrix zero_matrix(Field field, std::size_t rows, std::size_t cols);

// Gauss-Jordan inverse; throws SingularMatrixError.
FieldMatrix invert(const FieldMatrix& m);

// Solves m * x = rhs for square invertible m.
FieldVector solve(const FieldMatrix& m, const FieldVector& rhs);

FieldElement determinant(const FieldMatrix& m);

std::size_t rank(const FieldMatrix& m);

// The L "underlined" constants f_1..f_L and the server points alpha_1..alpha_N,
// all pairwise distinct.
class EvaluationPoints {
 public:
  EvaluationPoints(Field field, FieldVector f, FieldVector alpha);

  // f_l = l for l = 1..L and alpha_n = L + n (mod q) for n = 1..N. Needs
  // q >= L + N; when q == L + N the last alpha wraps to 0.
  static EvaluationPoints defaults(Field field, std::size_t layers, std::size_t servers);

  const Field& field() const noexcept { return field_; }
  std::size_t layers() const noexcept { return f_.size(); }
  std::size_t servers() const noexcept { return alpha_.size(); }

  // 0-based accessors.
  const FieldElement& f(std::size_t l) const { return f_.at(l); }
  const FieldElement& alpha(std::size_t n) const { return alpha_.at(n); }
  const FieldVector& f() const noexcept { return f_; }
  const FieldVector& alpha() const noexcept { return alpha_; }

  // f_l - alpha_n, never zero.
  FieldElement gap(std::size_t l, std::size_t n) const { return f_[l] - alpha_[n]; }

 private:
  Field field_;
  FieldVector f_;
  FieldVector alpha_;
};

// Row n is [1/(f_1 - a), ..., 1/(f_L - a), 1, a, ..., a^(width-L-1)] with
// a = alpha of the n-th listed server. Square when rows == width; with more
// rows it generates an MDS(rows, width) code.
class DecodingMatrix {
 public:
  const FieldMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<std::size_t>& row_servers() const noexcept { return row_servers_; }
  std::size_t cauchy_columns() const noexcept { return cauchy_columns_; }
  std::size_t width() const noexcept { return matrix_.cols(); }
  std::size_t rows() const noexcept { return matrix_.rows(); }

 private:
  friend DecodingMatrix build_decoding_matrix(const EvaluationPoints&, std::span<const std::size_t>,
                                              std::size_t, std::size_t);
  DecodingMatrix(FieldMatrix m, std::vector<std::size_t> servers, std::size_t cauchy)
      : matrix_(std::move(m)), row_servers_(std::move(servers)), cauchy_columns_(cauchy) {}

  FieldMatrix matrix_;
  std::vector<std::size_t> row_servers_;
  std::size_t cauchy_columns_;
};

// row_servers are 0-based indices into points.alpha(). Requires
// 1 <= cauchy_columns <= width <= row_servers.size(); cauchy_columns == width
// gives a pure Cauchy matrix.
DecodingMatrix build_decoding_matrix(const EvaluationPoints& points,
                                     std::span<const std::size_t> row_servers,
                                     std::size_t cauchy_columns, std::size_t width);

}  // namespace csapir
