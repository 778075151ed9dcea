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

// In-process simulation of a retrieval session: N logical servers, an
// adversary that silences some of them and corrupts others, and the user.
//
// Seeds: a session master seed s is split per role with derive_seed(s, role)
// so that messages, storage noise and query noise are independent streams.
// Corruption draws use derive_seed(adversary.seed, kCorruption).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csapir/audit.hpp"
#include "csapir/psdmm.hpp"
#include "csapir/xstpir.hpp"

namespace csapir::sim {

enum class CorruptionPolicy {
  kRandom,    // each symbol replaced by a uniform field element
  kConstant,  // every symbol replaced by one constant
  kReplay,    // the whole answer copied from some honest server
};

std::string to_string(CorruptionPolicy p);
CorruptionPolicy parse_policy(const std::string& name);
const std::vector<CorruptionPolicy>& all_policies();

struct AdversaryConfig {
  std::vector<std::size_t> unresponsive;  // 1-based ids, exactly U of them
  std::vector<std::size_t> byzantine;     // 1-based ids, at most B of them
  CorruptionPolicy policy = CorruptionPolicy::kRandom;
  std::uint64_t seed = 0;

  // Throws ConstraintError on range, overlap or size violations. With
  // enforce_budget = false the |byzantine| <= B check is skipped, which is how
  // over-budget behaviour is studied.
  void validate(const ProtocolParams& p, bool enforce_budget = true) const;
};

struct SessionOptions {
  std::optional<std::uint64_t> q;  // field override, validated
  bool enforce_budget = true;
};

struct SessionSeeds {
  std::uint64_t master = 0;
  std::uint64_t messages = 0;
  std::uint64_t storage_noise = 0;
  std::uint64_t query_noise = 0;
  std::uint64_t corruption = 0;
};

SessionSeeds split_seeds(std::uint64_t master, std::uint64_t adversary_seed);

enum class Outcome {
  kRecovered,        // decode succeeded and equals W_theta
  kDecodingFailure,  // decoder refused
  kWrongOutput,      // decode succeeded with the wrong message
};

std::string to_string(Outcome o);

struct SessionTranscript {
  ProtocolParams params;
  EvaluationPoints points;
  SessionSeeds seeds;
  std::size_t theta = 0;
  AdversaryConfig adversary;
  MessageSet messages;
  std::vector<ServerStorage> storages;
  std::vector<QueryBundle> queries;
  std::vector<std::optional<AnswerBundle>> answers;  // index n-1; empty for unresponsive servers
  Outcome outcome = Outcome::kDecodingFailure;
  std::string failure;                   // decoder diagnostic when it refused
  std::optional<DecodeResult> decoded;
  std::optional<audit::RateReport> rate;

  std::uint64_t q() const noexcept { return points.field().modulus(); }
  std::vector<AnswerBundle> received() const;
};

// Throws ConstraintError for invalid params, theta or adversary. Decoder
// refusals are reported in the transcript.
SessionTranscript run_session(const ProtocolParams& p, const AdversaryConfig& adversary, std::size_t theta,
                              std::uint64_t seed, const SessionOptions& options = {});

// Recomputes every answer from a server outside U and B out of its stored
// share and query, and compares with the transcript.
bool honest_answers_pure(const SessionTranscript& t);

struct GridPoint {
  std::size_t N = 0, Kc = 0, X = 0, T = 0, U = 0, B = 0, K = 0;
};

enum class SweepMode {
  kHonest,      // U silenced as the last U servers, no corruption
  kExhaustive,  // every disjoint placement of U and byzantine_count servers
};

struct SweepOptions {
  SweepMode mode = SweepMode::kHonest;
  std::size_t draws = 50;  // sessions per (placement, policy) cell
  std::vector<CorruptionPolicy> policies = all_policies();
  std::uint64_t seed = 1;
  std::optional<std::size_t> byzantine_count;  // defaults to B; above B skips the budget check
  std::optional<std::uint64_t> q;
};

struct SweepRow {
  GridPoint point;
  std::vector<std::size_t> unresponsive;
  std::vector<std::size_t> byzantine;
  CorruptionPolicy policy = CorruptionPolicy::kRandom;
  std::size_t sessions = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;  // sessions - passes
  std::size_t silent = 0;    // failures where a wrong message was returned
};

// Infeasible grid points are skipped.
std::vector<SweepRow> sweep(const std::vector<GridPoint>& grid, const SweepOptions& options);

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct PsdmmTranscript {
  psdmm::PsdmmParams params;
  EvaluationPoints points;
  SessionSeeds seeds;
  std::size_t theta = 0;
  psdmm::PsdmmInstance instance;
  std::vector<psdmm::Share> a_shares;
  std::vector<psdmm::Share> b_shares;
  std::vector<psdmm::ProductAnswer> answers;
  std::vector<FieldMatrix> decoded;
  std::vector<FieldMatrix> expected;  // A_i * B_theta computed directly
  bool correct = false;
  psdmm::CostReport costs;
  Rational measured_upload{0};
  Rational measured_download{0};
};

PsdmmTranscript run_psdmm(const psdmm::PsdmmParams& p, std::size_t theta, std::uint64_t seed,
                          std::optional<std::uint64_t> q = std::nullopt);

}  // namespace csapir::sim
