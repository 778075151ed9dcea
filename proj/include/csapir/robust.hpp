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
#include <stdexcept>
#include <vector>

#include "csapir/linalg.hpp"

namespace csapir::robust {

// The observations cannot be explained by any error pattern within the
// configured budget. Distinct from SingularMatrixError and logic errors,
// which indicate bugs.
class DecodingFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RobustInstance {
  DecodingMatrix matrix;
  FieldVector observed;  // one entry per matrix row
};

struct RobustSolution {
  FieldVector coefficients;               // width entries
  std::vector<std::size_t> disagreeing;   // row positions whose observation was corrected
  std::size_t subsets_tried = 0;
};

// Unique decoding up to max_errors corrupted rows: tries width-row subsets in
// lexicographic order, solves each, and accepts the first candidate that
// agrees with at least rows - max_errors observations. Requires
// rows >= width + 2*max_errors.
RobustSolution robust_solve(const RobustInstance& inst, std::size_t max_errors);

// Every subset-candidate reaching the agreement threshold, deduplicated by
// value. More than one entry would contradict the code's minimum distance.
std::vector<RobustSolution> robust_candidates(const RobustInstance& inst, std::size_t max_errors);

// Pure erasure decoding: solves using the first width rows.
FieldVector erase_and_solve(const DecodingMatrix& matrix, const FieldVector& observed);

// Lexicographic k-subsets of {0..n-1}. Calls fn(subset) until it returns true.
template <typename Fn>
bool for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (fn(static_cast<const std::vector<std::size_t>&>(idx))) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace csapir::robust
