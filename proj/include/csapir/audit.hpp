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

// Exact security and privacy audits. Each audit enumerates every assignment
// of the relevant noise symbols and compares the resulting joint
// distributions of what a colluding set observes under two scenarios.
// Equality for every pair of scenarios is equivalent to zero mutual
// information with the scenario variable.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "csapir/xstpir.hpp"

namespace csapir::audit {

enum class Target { kStorageSecurity, kQueryPrivacy };

std::string to_string(Target t);

class NotApplicableError : public ConstraintError {
 public:
  using ConstraintError::ConstraintError;
};

class BudgetExceededError : public ConstraintError {
 public:
  BudgetExceededError(const std::string& what, std::uint64_t estimate)
      : ConstraintError(what), estimate_(estimate) {}
  // q^(free symbols), saturated at UINT64_MAX.
  std::uint64_t estimate() const noexcept { return estimate_; }

 private:
  std::uint64_t estimate_;
};

struct AuditConfig {
  ProtocolParams params;
  std::vector<std::size_t> colluding;  // 1-based server ids
  Target target = Target::kQueryPrivacy;
  std::uint64_t budget = 1'000'000;    // max noise assignments per scenario
  // Permit colluding sets above the X (or T) threshold; used to demonstrate
  // that the threshold is tight.
  bool expect_fail = false;
};

struct Verdict {
  Target target = Target::kQueryPrivacy;
  std::vector<std::size_t> colluding;
  std::uint64_t states_enumerated = 0;  // per scenario
  std::size_t support_size = 0;         // distinct observations under the first scenario
  bool pass = false;
};

using Observation = std::vector<std::uint64_t>;
using Distribution = std::map<Observation, std::uint64_t>;

// q^symbols, saturating.
std::uint64_t state_count(std::uint64_t q, std::size_t symbols);

// Pushes every assignment of `symbols` free field elements through `observe`
// and tallies the outcomes. Throws BudgetExceededError when q^symbols > budget.
Distribution enumerate_distribution(const Field& field, std::size_t symbols, std::uint64_t budget,
                                    const std::function<Observation(const FieldVector&)>& observe);

// Storage noise with the L*X*K free symbols laid out as [l][x][m].
StorageNoise unpack_storage_noise(const FieldVector& flat, const ProtocolParams& p);
// Query noise with the Kc*L*T*K free symbols laid out as [round][l][t][m].
QueryNoise unpack_query_noise(const FieldVector& flat, const ProtocolParams& p);

// Distribution of the colluding servers' storage under messages w vs w2.
Verdict audit_storage_security(const AuditConfig& cfg, const EvaluationPoints& pts, const MessageSet& w,
                               const MessageSet& w2);

// Distribution of the colluding servers' queries under theta vs theta2.
// Storage is generated from an independent noise stream, so the query
// marginal is the whole joint dependence on theta.
Verdict audit_query_privacy(const AuditConfig& cfg, const EvaluationPoints& pts, std::size_t theta,
                            std::size_t theta2);

struct RateReport {
  std::size_t downloaded = 0;  // answer symbols consumed
  std::size_t retrieved = 0;   // desired symbols recovered
  Rational realized{0};
  Rational theorem{0};
  Rational prior{0};
  bool matches_theorem = false;
};

RateReport rate_report(const ProtocolParams& p, std::span<const AnswerBundle> answers, std::size_t retrieved);

}  // namespace csapir::audit
