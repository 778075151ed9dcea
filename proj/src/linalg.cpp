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

#include "csapir/linalg.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace csapir {

namespace {

void require_same_shape(const FieldMatrix& a, const FieldMatrix& b, const char* op) {
  if (a.field() != b.field()) throw FieldMismatchError(std::string(op) + ": field mismatch");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ConstraintError(std::string(op) + ": shape mismatch");
  }
}

// Row-reduces `m` in place to reduced echelon form, applying the same row
// operations to `aug` when it is non-null. Returns the pivot columns.
std::vector<std::size_t> reduce(FieldMatrix& m, FieldMatrix* aug) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
      if (aug) {
        for (std::size_t j = 0; j < aug->cols(); ++j) std::swap((*aug)(p, j), (*aug)(r, j));
      }
    }
    const FieldElement scale = m(r, c).inv();
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= scale;
    if (aug) {
      for (std::size_t j = 0; j < aug->cols(); ++j) (*aug)(r, j) *= scale;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const FieldElement factor = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
      if (aug) {
        for (std::size_t j = 0; j < aug->cols(); ++j) (*aug)(i, j) -= factor * (*aug)(r, j);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

FieldMatrix::FieldMatrix(Field field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, field.zero()) {}

FieldMatrix::FieldMatrix(Field field, std::size_t rows, std::size_t cols, FieldVector entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw ConstraintError("FieldMatrix: expected " + std::to_string(rows * cols) +
                          " entries, got " + std::to_string(entries_.size()));
  }
  for (const auto& e : entries_) {
    if (e.modulus() != field.modulus()) throw FieldMismatchError("FieldMatrix: entry from another field");
  }
}

FieldMatrix FieldMatrix::identity(Field field, std::size_t n) {
  FieldMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

FieldMatrix FieldMatrix::from_rows(Field field, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  FieldVector entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ConstraintError("FieldMatrix::from_rows: ragged rows");
    for (auto v : r) entries.push_back(field.element(v));
  }
  return FieldMatrix(field, rows.size(), cols, std::move(entries));
}

FieldVector FieldMatrix::row(std::size_t r) const {
  return FieldVector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                     entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

FieldVector FieldMatrix::col(std::size_t c) const {
  FieldVector out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back((*this)(r, c));
  return out;
}

FieldMatrix FieldMatrix::select_rows(std::span<const std::size_t> indices) const {
  FieldMatrix out(field_, indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) throw ConstraintError("select_rows: index out of range");
    for (std::size_t c = 0; c < cols_; ++c) out(i, c) = (*this)(indices[i], c);
  }
  return out;
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& o) const {
  require_same_shape(*this, o, "matrix add");
  FieldMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += o.entries_[i];
  return out;
}

FieldMatrix FieldMatrix::operator-(const FieldMatrix& o) const {
  require_same_shape(*this, o, "matrix sub");
  FieldMatrix out = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= o.entries_[i];
  return out;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& o) const {
  if (field_ != o.field_) throw FieldMismatchError("matrix multiply: field mismatch");
  if (cols_ != o.rows_) {
    throw ConstraintError("matrix multiply: " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                          " by " + std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
  }
  // q < 2^32, so cell + a*b stays below 2^64 when reduced per term.
  const std::uint64_t q = field_.modulus();
  std::vector<std::uint64_t> acc(rows_ * o.cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t a = (*this)(i, k).value();
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        auto& cell = acc[i * o.cols_ + j];
        cell = (cell + a * o(k, j).value()) % q;
      }
    }
  }
  FieldVector entries;
  entries.reserve(acc.size());
  for (auto v : acc) entries.push_back(field_.from_residue(v));
  return FieldMatrix(field_, rows_, o.cols_, std::move(entries));
}

FieldMatrix FieldMatrix::operator*(const FieldElement& s) const {
  FieldMatrix out = *this;
  for (auto& e : out.entries_) e *= s;
  return out;
}

FieldVector FieldMatrix::operator*(const FieldVector& v) const {
  if (v.size() != cols_) {
    throw ConstraintError("matrix-vector multiply: expected length " + std::to_string(cols_) +
                          ", got " + std::to_string(v.size()));
  }
  FieldVector out(rows_, field_.zero());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

bool FieldMatrix::operator==(const FieldMatrix& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
}

FieldMatrix zero_matrix(Field field, std::size_t rows, std::size_t cols) {
  return FieldMatrix(field, rows, cols);
}

FieldMatrix invert(const FieldMatrix& m) {
  if (!m.is_square()) throw ConstraintError("invert: matrix is not square");
  FieldMatrix work = m;
  FieldMatrix inv = FieldMatrix::identity(m.field(), m.rows());
  if (reduce(work, &inv).size() != m.rows()) throw SingularMatrixError("invert: matrix is singular");
  return inv;
}

FieldVector solve(const FieldMatrix& m, const FieldVector& rhs) {
  if (!m.is_square()) throw ConstraintError("solve: matrix is not square");
  if (rhs.size() != m.rows()) {
    throw ConstraintError("solve: rhs length " + std::to_string(rhs.size()) + " != " +
                          std::to_string(m.rows()));
  }
  FieldMatrix work = m;
  FieldMatrix aug(m.field(), rhs.size(), 1, rhs);
  if (reduce(work, &aug).size() != m.rows()) throw SingularMatrixError("solve: matrix is singular");
  return aug.col(0);
}

FieldElement determinant(const FieldMatrix& m) {
  if (!m.is_square()) throw ConstraintError("determinant: matrix is not square");
  FieldMatrix work = m;
  FieldElement det = m.field().one();
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && work(p, c).is_zero()) ++p;
    if (p == n) return m.field().zero();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(work(p, j), work(c, j));
      det = -det;
    }
    det *= work(c, c);
    const FieldElement pivot_inv = work(c, c).inv();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (work(i, c).is_zero()) continue;
      const FieldElement factor = work(i, c) * pivot_inv;
      for (std::size_t j = c; j < n; ++j) work(i, j) -= factor * work(c, j);
    }
  }
  return det;
}

std::size_t rank(const FieldMatrix& m) {
  FieldMatrix work = m;
  return reduce(work, nullptr).size();
}

EvaluationPoints::EvaluationPoints(Field field, FieldVector f, FieldVector alpha)
    : field_(field), f_(std::move(f)), alpha_(std::move(alpha)) {
  std::set<std::uint64_t> seen;
  for (const auto* group : {&f_, &alpha_}) {
    for (const auto& e : *group) {
      if (e.modulus() != field.modulus()) throw FieldMismatchError("EvaluationPoints: point from another field");
      if (!seen.insert(e.value()).second) {
        throw ConstraintError("EvaluationPoints: repeated point " + std::to_string(e.value()));
      }
    }
  }
}

EvaluationPoints EvaluationPoints::defaults(Field field, std::size_t layers, std::size_t servers) {
  if (field.modulus() < layers + servers) {
    throw ConstraintError("field size q=" + std::to_string(field.modulus()) + " is below L+N=" +
                          std::to_string(layers + servers));
  }
  FieldVector f, alpha;
  for (std::size_t l = 1; l <= layers; ++l) f.push_back(field.element(static_cast<std::int64_t>(l)));
  for (std::size_t n = 1; n <= servers; ++n) {
    alpha.push_back(field.element(static_cast<std::int64_t>(layers + n)));
  }
  return EvaluationPoints(field, std::move(f), std::move(alpha));
}

DecodingMatrix build_decoding_matrix(const EvaluationPoints& points,
                                     std::span<const std::size_t> row_servers,
                                     std::size_t cauchy_columns, std::size_t width) {
  if (cauchy_columns < 1 || cauchy_columns > width) {
    throw ConstraintError("decoding matrix: need 1 <= L <= width, got L=" + std::to_string(cauchy_columns) +
                          ", width=" + std::to_string(width));
  }
  if (row_servers.size() < width) {
    throw ConstraintError("decoding matrix: " + std::to_string(row_servers.size()) +
                          " rows cannot cover width " + std::to_string(width));
  }
  if (cauchy_columns > points.layers()) {
    throw ConstraintError("decoding matrix: L exceeds the number of layer points");
  }
  std::set<std::size_t> distinct(row_servers.begin(), row_servers.end());
  if (distinct.size() != row_servers.size()) throw ConstraintError("decoding matrix: repeated server row");

  const Field& field = points.field();
  FieldMatrix m(field, row_servers.size(), width);
  for (std::size_t r = 0; r < row_servers.size(); ++r) {
    const std::size_t n = row_servers[r];
    if (n >= points.servers()) throw ConstraintError("decoding matrix: server index out of range");
    for (std::size_t l = 0; l < cauchy_columns; ++l) m(r, l) = points.gap(l, n).inv();
    FieldElement power = field.one();
    for (std::size_t c = cauchy_columns; c < width; ++c) {
      m(r, c) = power;
      power *= points.alpha(n);
    }
  }
  return DecodingMatrix(std::move(m), std::vector<std::size_t>(row_servers.begin(), row_servers.end()),
                        cauchy_columns);
}

}  // namespace csapir
