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

// X-secure, T-private retrieval from MDS-coded storage with successive
// decoding across K_c query rounds.
//
// Index conventions: message indices (theta), server ids and round numbers
// are 1-based in every public signature, matching how they appear in
// transcripts and on the command line. Positions inside the nested vectors
// (layer l, code column k, noise slot x/t) are 0-based.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "csapir/field.hpp"
#include "csapir/linalg.hpp"
#include "csapir/random.hpp"

namespace csapir {

using Rational = boost::rational<std::int64_t>;

class InfeasibleParamsError : public ConstraintError {
 public:
  using ConstraintError::ConstraintError;
};

struct ProtocolParams {
  std::size_t N = 0;   // servers
  std::size_t Kc = 0;  // MDS code dimension
  std::size_t X = 0;   // storage security level
  std::size_t T = 0;   // query privacy level
  std::size_t U = 0;   // unresponsive servers tolerated
  std::size_t B = 0;   // Byzantine servers tolerated
  std::size_t K = 0;   // messages
  std::size_t L = 0;   // layers, (N-U) - (Kc+X+T+2B-1)
  std::size_t ell = 0; // symbols per message, L*Kc

  // Number of Vandermonde columns 1, a, ..., a^(Kc+X+T-2) spanned by interference.
  std::size_t interference_dim() const noexcept { return Kc + X + T - 1; }
  // Unknowns per decoding round; equals N-U-2B.
  std::size_t code_width() const noexcept { return L + interference_dim(); }
  std::size_t min_field_size() const noexcept { return L + N; }

  bool operator==(const ProtocolParams&) const = default;
};

// Throws InfeasibleParamsError ("L < 1") when no layer fits.
ProtocolParams derive_params(std::size_t N, std::size_t Kc, std::size_t X, std::size_t T,
                             std::size_t U, std::size_t B, std::size_t K);

// 1 - (Kc+X+T+2B-1)/(N-U), i.e. L/(N-U).
Rational achievable_rate(const ProtocolParams& p);

// Earlier rate for the same setting: achievable_rate * Kc/(Kc+X).
Rational comparison_rate_prior(const ProtocolParams& p);

// Smallest prime >= L+N.
Field default_field(const ProtocolParams& p);

// Validates a caller-supplied modulus against primality and q >= L+N.
Field checked_field(const ProtocolParams& p, std::uint64_t q);

// K messages of ell symbols each. The layered view W_lk (a length-K row)
// holds symbol k*L + l of every message.
class MessageSet {
 public:
  MessageSet(Field field, std::size_t layers, std::vector<FieldVector> messages);

  const Field& field() const noexcept { return field_; }
  std::size_t count() const noexcept { return messages_.size(); }
  std::size_t length() const noexcept { return length_; }
  std::size_t layers() const noexcept { return layers_; }
  std::size_t code_dim() const noexcept { return layers_ == 0 ? 0 : length_ / layers_; }

  // theta is 1-based.
  const FieldVector& message(std::size_t theta) const;
  const std::vector<FieldVector>& messages() const noexcept { return messages_; }

  // W_lk, 0-based l and k.
  FieldVector layer_row(std::size_t l, std::size_t k) const;

 private:
  Field field_;
  std::size_t layers_;
  std::size_t length_;
  std::vector<FieldVector> messages_;
};

MessageSet random_messages(const Field& field, const ProtocolParams& p, Rng& rng);

// z[l][x] is the length-K noise row Z_lx.
struct StorageNoise {
  std::vector<std::vector<FieldVector>> z;

  void validate(const ProtocolParams& p) const;
};

// z[round][l][t] is the length-K noise column Z'_lt for that round (0-based).
struct QueryNoise {
  std::vector<std::vector<std::vector<FieldVector>>> z;

  void validate(const ProtocolParams& p) const;
};

StorageNoise random_storage_noise(const Field& field, const ProtocolParams& p, Rng& rng);
QueryNoise random_query_noise(const Field& field, const ProtocolParams& p, Rng& rng);

struct ServerStorage {
  std::size_t server = 0;           // 1-based
  std::vector<FieldVector> layers;  // S_n1..S_nL, each of length K

  std::size_t symbol_count() const;
  bool operator==(const ServerStorage&) const = default;
};

struct QueryBundle {
  std::size_t server = 0;                       // 1-based
  std::vector<std::vector<FieldVector>> rounds; // [round][l], each of length K

  bool operator==(const QueryBundle&) const = default;
};

struct AnswerBundle {
  std::size_t server = 0;  // 1-based
  FieldVector symbols;     // A_n1..A_nKc

  bool operator==(const AnswerBundle&) const = default;
};

// S_nl = sum_k W_lk / (f_l - a_n)^(Kc-k+1) + sum_x (f_l - a_n)^(x-1) Z_lx
// (1-based k and x), for every server n.
std::vector<ServerStorage> encode_storage(const MessageSet& msgs, const StorageNoise& noise,
                                          const EvaluationPoints& pts, const ProtocolParams& p);
ServerStorage encode_storage_for(std::size_t server, const MessageSet& msgs, const StorageNoise& noise,
                                 const EvaluationPoints& pts, const ProtocolParams& p);

// Recovers every message from the storage of any X+Kc (or more) distinct
// servers: (f_l - a_n)^Kc S_nl is a degree Kc+X-1 polynomial in (f_l - a_n)
// whose first Kc coefficients are W_l1..W_lKc. Uses the first X+Kc given.
MessageSet recover_from_storage(std::span<const ServerStorage> storages, const EvaluationPoints& pts,
                                const ProtocolParams& p);

// Q_nl^(theta,r) = (f_l - a_n)^(Kc-r) e_theta + sum_t (f_l - a_n)^(Kc+t-1) Z'^r_lt.
std::vector<QueryBundle> gen_queries(std::size_t theta, const QueryNoise& noise,
                                     const EvaluationPoints& pts, const ProtocolParams& p);
QueryBundle gen_query_for(std::size_t server, std::size_t theta, const QueryNoise& noise,
                          const EvaluationPoints& pts, const ProtocolParams& p);

// A_nr = sum_l <S_nl, Q_nl^r> for every round r.
AnswerBundle server_answer(const ServerStorage& s, const QueryBundle& qb);

// Contribution of already-decoded symbols to server n's round-`round` answer:
// sum_l sum_{k<round} (W_lk e_theta) / (f_l - a_n)^(round-k+1).
// decoded[k][l] holds W_lk e_theta for every earlier round k (0-based).
FieldElement interference_offset(const std::vector<FieldVector>& decoded, const EvaluationPoints& pts,
                                 const ProtocolParams& p, std::size_t round, std::size_t server);

// interference_offset without a ProtocolParams: the layer count is taken
// from the points. Shared with the matrix-multiplication decoder.
FieldElement cancellation_term(const std::vector<FieldVector>& decoded, const EvaluationPoints& pts,
                               std::size_t round, std::size_t server);

struct RoundTrace {
  std::size_t round = 0;               // 1-based
  std::vector<std::size_t> servers;    // responsive servers, 1-based, ascending
  FieldVector offsets;                 // cancellation term per responsive server
  FieldVector corrected;               // answer minus offset
  FieldVector desired;                 // W_l,round e_theta for l = 1..L
  std::vector<std::size_t> disagreeing;// servers whose corrected answer missed the codeword
};

struct DecodeResult {
  FieldVector message;
  std::vector<RoundTrace> rounds;
};

// Successive decoding over the answers that arrived. Needs at least N-U
// bundles; tolerates up to B corrupted bundles. Throws
// robust::DecodingFailure when the answers are inconsistent with any
// adversary inside the (U, B) budget.
DecodeResult decode(std::span<const AnswerBundle> answers, const EvaluationPoints& pts,
                    const ProtocolParams& p);

}  // namespace csapir
