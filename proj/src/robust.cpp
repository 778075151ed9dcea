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

#include "csapir/robust.hpp"

#include <string>

namespace csapir::robust {

namespace {

void check_instance(const RobustInstance& inst, std::size_t max_errors) {
  const std::size_t rows = inst.matrix.rows();
  const std::size_t width = inst.matrix.width();
  if (inst.observed.size() != rows) {
    throw ConstraintError("robust: " + std::to_string(inst.observed.size()) + " observations for " +
                          std::to_string(rows) + " rows");
  }
  if (rows < width + 2 * max_errors) {
    throw ConstraintError("robust: " + std::to_string(rows) + " rows cannot correct " +
                          std::to_string(max_errors) + " errors at width " + std::to_string(width));
  }
}

// Solves on `subset` and returns the candidate if it clears the threshold.
bool try_subset(const RobustInstance& inst, const std::vector<std::size_t>& subset, std::size_t max_errors,
                RobustSolution& out) {
  const FieldMatrix& m = inst.matrix.matrix();
  FieldVector rhs;
  rhs.reserve(subset.size());
  for (auto r : subset) rhs.push_back(inst.observed[r]);
  FieldVector x = solve(m.select_rows(subset), rhs);
  const FieldVector reencoded = m * x;
  std::vector<std::size_t> disagreeing;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (reencoded[r] != inst.observed[r]) {
      disagreeing.push_back(r);
      if (disagreeing.size() > max_errors) return false;
    }
  }
  out.coefficients = std::move(x);
  out.disagreeing = std::move(disagreeing);
  return true;
}

}  // namespace

RobustSolution robust_solve(const RobustInstance& inst, std::size_t max_errors) {
  check_instance(inst, max_errors);
  RobustSolution found;
  std::size_t tried = 0;
  const bool ok = for_each_subset(inst.matrix.rows(), inst.matrix.width(), [&](const auto& subset) {
    ++tried;
    return try_subset(inst, subset, max_errors, found);
  });
  if (!ok) {
    throw DecodingFailure("robust decoding failed: no candidate agrees with " +
                          std::to_string(inst.matrix.rows() - max_errors) + " of " +
                          std::to_string(inst.matrix.rows()) + " observations (more than " +
                          std::to_string(max_errors) + " corrupted)");
  }
  found.subsets_tried = tried;
  return found;
}

std::vector<RobustSolution> robust_candidates(const RobustInstance& inst, std::size_t max_errors) {
  check_instance(inst, max_errors);
  std::vector<RobustSolution> out;
  std::size_t tried = 0;
  for_each_subset(inst.matrix.rows(), inst.matrix.width(), [&](const auto& subset) {
    ++tried;
    RobustSolution candidate;
    if (try_subset(inst, subset, max_errors, candidate)) {
      bool duplicate = false;
      for (const auto& c : out) duplicate = duplicate || c.coefficients == candidate.coefficients;
      if (!duplicate) {
        candidate.subsets_tried = tried;
        out.push_back(std::move(candidate));
      }
    }
    return false;
  });
  return out;
}

FieldVector erase_and_solve(const DecodingMatrix& matrix, const FieldVector& observed) {
  const std::size_t width = matrix.width();
  if (observed.size() != matrix.rows()) throw ConstraintError("erase_and_solve: observation count mismatch");
  if (matrix.rows() < width) {
    throw ConstraintError("erase_and_solve: " + std::to_string(matrix.rows()) + " responsive rows, need " +
                          std::to_string(width));
  }
  std::vector<std::size_t> first(width);
  for (std::size_t i = 0; i < width; ++i) first[i] = i;
  return solve(matrix.matrix().select_rows(first), FieldVector(observed.begin(), observed.begin() +
                                                                                  static_cast<std::ptrdiff_t>(width)));
}

}  // namespace csapir::robust
