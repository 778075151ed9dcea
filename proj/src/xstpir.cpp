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

#include "csapir/xstpir.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "csapir/robust.hpp"

namespace csapir {

namespace {

std::string dims(std::size_t a, std::size_t b) { return std::to_string(a) + "x" + std::to_string(b); }

void check_points(const EvaluationPoints& pts, const ProtocolParams& p) {
  if (pts.layers() != p.L || pts.servers() != p.N) {
    throw ConstraintError("evaluation points hold " + dims(pts.layers(), pts.servers()) +
                          " (L x N) but the parameters need " + dims(p.L, p.N));
  }
}

void check_server(std::size_t server, const ProtocolParams& p) {
  if (server < 1 || server > p.N) {
    throw ConstraintError("server id " + std::to_string(server) + " outside [1, " + std::to_string(p.N) + "]");
  }
}

void add_scaled(FieldVector& acc, const FieldElement& c, const FieldVector& v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
}

}  // namespace

ProtocolParams derive_params(std::size_t N, std::size_t Kc, std::size_t X, std::size_t T, std::size_t U,
                             std::size_t B, std::size_t K) {
  if (N < 1) throw ConstraintError("N must be at least 1");
  if (Kc < 1) throw ConstraintError("K_c must be at least 1");
  if (K < 1) throw ConstraintError("K must be at least 1");
  if (X > N) throw ConstraintError("X=" + std::to_string(X) + " exceeds N=" + std::to_string(N));
  if (T > N) throw ConstraintError("T=" + std::to_string(T) + " exceeds N=" + std::to_string(N));
  if (U + B > N) throw ConstraintError("U + B exceeds N");
  const auto responsive = static_cast<std::int64_t>(N - U);
  const auto overhead = static_cast<std::int64_t>(Kc + X + T + 2 * B - 1);
  const std::int64_t L = responsive - overhead;
  if (L < 1) {
    throw InfeasibleParamsError("infeasible parameters: L = (N-U) - (K_c+X+T+2B-1) = " + std::to_string(L) +
                                " (L < 1)");
  }
  ProtocolParams p;
  p.N = N;
  p.Kc = Kc;
  p.X = X;
  p.T = T;
  p.U = U;
  p.B = B;
  p.K = K;
  p.L = static_cast<std::size_t>(L);
  p.ell = p.L * Kc;
  return p;
}

Rational achievable_rate(const ProtocolParams& p) {
  return Rational(1) - Rational(static_cast<std::int64_t>(p.Kc + p.X + p.T + 2 * p.B - 1),
                                static_cast<std::int64_t>(p.N - p.U));
}

Rational comparison_rate_prior(const ProtocolParams& p) {
  return achievable_rate(p) *
         Rational(static_cast<std::int64_t>(p.Kc), static_cast<std::int64_t>(p.Kc + p.X));
}

Field default_field(const ProtocolParams& p) { return Field(next_prime(p.min_field_size())); }

Field checked_field(const ProtocolParams& p, std::uint64_t q) {
  Field field(q);
  if (q < p.min_field_size()) {
    throw ConstraintError("field size q=" + std::to_string(q) + " violates q >= L+N=" +
                          std::to_string(p.min_field_size()));
  }
  return field;
}

MessageSet::MessageSet(Field field, std::size_t layers, std::vector<FieldVector> messages)
    : field_(field), layers_(layers), length_(messages.empty() ? 0 : messages.front().size()),
      messages_(std::move(messages)) {
  if (layers_ == 0) throw ConstraintError("MessageSet: need at least one layer");
  if (length_ % layers_ != 0) {
    throw ConstraintError("MessageSet: message length " + std::to_string(length_) +
                          " is not a multiple of L=" + std::to_string(layers_));
  }
  for (const auto& m : messages_) {
    if (m.size() != length_) throw ConstraintError("MessageSet: messages differ in length");
    for (const auto& s : m) {
      if (s.modulus() != field_.modulus()) throw FieldMismatchError("MessageSet: symbol from another field");
    }
  }
}

const FieldVector& MessageSet::message(std::size_t theta) const {
  if (theta < 1 || theta > messages_.size()) {
    throw ConstraintError("message index " + std::to_string(theta) + " outside [1, " +
                          std::to_string(messages_.size()) + "]");
  }
  return messages_[theta - 1];
}

FieldVector MessageSet::layer_row(std::size_t l, std::size_t k) const {
  const std::size_t s = k * layers_ + l;
  if (l >= layers_ || s >= length_) throw ConstraintError("MessageSet::layer_row: index out of range");
  FieldVector row;
  row.reserve(messages_.size());
  for (const auto& m : messages_) row.push_back(m[s]);
  return row;
}

MessageSet random_messages(const Field& field, const ProtocolParams& p, Rng& rng) {
  std::vector<FieldVector> msgs;
  msgs.reserve(p.K);
  for (std::size_t m = 0; m < p.K; ++m) msgs.push_back(rng.uniform_vector(field, p.ell));
  return MessageSet(field, p.L, std::move(msgs));
}

void StorageNoise::validate(const ProtocolParams& p) const {
  bool ok = z.size() == p.L;
  for (const auto& layer : z) {
    ok = ok && layer.size() == p.X;
    for (const auto& v : layer) ok = ok && v.size() == p.K;
  }
  if (!ok) throw ConstraintError("storage noise must be L x X rows of length K");
}

void QueryNoise::validate(const ProtocolParams& p) const {
  bool ok = z.size() == p.Kc;
  for (const auto& round : z) {
    ok = ok && round.size() == p.L;
    for (const auto& layer : round) {
      ok = ok && layer.size() == p.T;
      for (const auto& v : layer) ok = ok && v.size() == p.K;
    }
  }
  if (!ok) throw ConstraintError("query noise must be K_c x L x T columns of length K");
}

StorageNoise random_storage_noise(const Field& field, const ProtocolParams& p, Rng& rng) {
  StorageNoise noise;
  noise.z.resize(p.L);
  for (auto& layer : noise.z) {
    for (std::size_t x = 0; x < p.X; ++x) layer.push_back(rng.uniform_vector(field, p.K));
  }
  return noise;
}

QueryNoise random_query_noise(const Field& field, const ProtocolParams& p, Rng& rng) {
  QueryNoise noise;
  noise.z.resize(p.Kc);
  for (auto& round : noise.z) {
    round.resize(p.L);
    for (auto& layer : round) {
      for (std::size_t t = 0; t < p.T; ++t) layer.push_back(rng.uniform_vector(field, p.K));
    }
  }
  return noise;
}

std::size_t ServerStorage::symbol_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.size();
  return n;
}

ServerStorage encode_storage_for(std::size_t server, const MessageSet& msgs, const StorageNoise& noise,
                                 const EvaluationPoints& pts, const ProtocolParams& p) {
  check_server(server, p);
  check_points(pts, p);
  noise.validate(p);
  if (msgs.count() != p.K || msgs.length() != p.ell || msgs.layers() != p.L) {
    throw ConstraintError("message set shape does not match K=" + std::to_string(p.K) +
                          ", ell=" + std::to_string(p.ell));
  }
  if (msgs.field() != pts.field()) throw FieldMismatchError("messages and points use different fields");
  const Field& field = pts.field();
  const std::size_t n = server - 1;
  ServerStorage s{server, {}};
  s.layers.reserve(p.L);
  for (std::size_t l = 0; l < p.L; ++l) {
    const FieldElement gap = pts.gap(l, n);
    FieldVector acc(p.K, field.zero());
    for (std::size_t k = 0; k < p.Kc; ++k) {
      add_scaled(acc, gap.pow(-static_cast<std::int64_t>(p.Kc - k)), msgs.layer_row(l, k));
    }
    for (std::size_t x = 0; x < p.X; ++x) add_scaled(acc, gap.pow(static_cast<std::uint64_t>(x)), noise.z[l][x]);
    s.layers.push_back(std::move(acc));
  }
  return s;
}

std::vector<ServerStorage> encode_storage(const MessageSet& msgs, const StorageNoise& noise,
                                          const EvaluationPoints& pts, const ProtocolParams& p) {
  std::vector<ServerStorage> out;
  out.reserve(p.N);
  for (std::size_t n = 1; n <= p.N; ++n) out.push_back(encode_storage_for(n, msgs, noise, pts, p));
  return out;
}

MessageSet recover_from_storage(std::span<const ServerStorage> storages, const EvaluationPoints& pts,
                                const ProtocolParams& p) {
  check_points(pts, p);
  const std::size_t need = p.Kc + p.X;
  if (storages.size() < need) {
    throw ConstraintError("recovery needs X+K_c=" + std::to_string(need) + " servers, got " +
                          std::to_string(storages.size()));
  }
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < need; ++i) {
    check_server(storages[i].server, p);
    if (!seen.insert(storages[i].server).second) throw ConstraintError("recovery needs distinct servers");
    if (storages[i].layers.size() != p.L) throw ConstraintError("storage has the wrong number of layers");
  }
  const Field& field = pts.field();
  std::vector<FieldVector> msgs(p.K, FieldVector(p.ell, field.zero()));
  for (std::size_t l = 0; l < p.L; ++l) {
    FieldMatrix v(field, need, need);
    std::vector<FieldElement> scale;
    for (std::size_t i = 0; i < need; ++i) {
      const FieldElement g = pts.gap(l, storages[i].server - 1);
      for (std::size_t j = 0; j < need; ++j) v(i, j) = g.pow(static_cast<std::uint64_t>(j));
      scale.push_back(g.pow(static_cast<std::uint64_t>(p.Kc)));
    }
    const FieldMatrix inverse = invert(v);
    for (std::size_t m = 0; m < p.K; ++m) {
      FieldVector rhs;
      for (std::size_t i = 0; i < need; ++i) rhs.push_back(scale[i] * storages[i].layers[l].at(m));
      const FieldVector coeffs = inverse * rhs;
      for (std::size_t k = 0; k < p.Kc; ++k) msgs[m][k * p.L + l] = coeffs[k];
    }
  }
  return MessageSet(field, p.L, std::move(msgs));
}

QueryBundle gen_query_for(std::size_t server, std::size_t theta, const QueryNoise& noise,
                          const EvaluationPoints& pts, const ProtocolParams& p) {
  check_server(server, p);
  check_points(pts, p);
  noise.validate(p);
  if (theta < 1 || theta > p.K) {
    throw ConstraintError("theta=" + std::to_string(theta) + " outside [1, " + std::to_string(p.K) + "]");
  }
  const Field& field = pts.field();
  const std::size_t n = server - 1;
  QueryBundle qb{server, {}};
  qb.rounds.resize(p.Kc);
  for (std::size_t r = 0; r < p.Kc; ++r) {
    for (std::size_t l = 0; l < p.L; ++l) {
      const FieldElement gap = pts.gap(l, n);
      FieldVector q(p.K, field.zero());
      q[theta - 1] = gap.pow(static_cast<std::uint64_t>(p.Kc - 1 - r));
      for (std::size_t t = 0; t < p.T; ++t) {
        add_scaled(q, gap.pow(static_cast<std::uint64_t>(p.Kc + t)), noise.z[r][l][t]);
      }
      qb.rounds[r].push_back(std::move(q));
    }
  }
  return qb;
}

std::vector<QueryBundle> gen_queries(std::size_t theta, const QueryNoise& noise, const EvaluationPoints& pts,
                                     const ProtocolParams& p) {
  std::vector<QueryBundle> out;
  out.reserve(p.N);
  for (std::size_t n = 1; n <= p.N; ++n) out.push_back(gen_query_for(n, theta, noise, pts, p));
  return out;
}

AnswerBundle server_answer(const ServerStorage& s, const QueryBundle& qb) {
  if (s.server != qb.server) {
    throw ConstraintError("storage of server " + std::to_string(s.server) + " paired with query for server " +
                          std::to_string(qb.server));
  }
  if (s.layers.empty() || s.layers.front().empty()) throw ConstraintError("server_answer: empty storage");
  const Field field = s.layers.front().front().field();
  AnswerBundle a{s.server, {}};
  a.symbols.reserve(qb.rounds.size());
  for (const auto& round : qb.rounds) {
    if (round.size() != s.layers.size()) {
      throw ConstraintError("server_answer: query has " + std::to_string(round.size()) +
                            " layers, storage has " + std::to_string(s.layers.size()));
    }
    FieldElement acc = field.zero();
    for (std::size_t l = 0; l < round.size(); ++l) acc += dot(field, s.layers[l], round[l]);
    a.symbols.push_back(acc);
  }
  return a;
}

FieldElement cancellation_term(const std::vector<FieldVector>& decoded, const EvaluationPoints& pts,
                               std::size_t round, std::size_t server) {
  if (round < 1) throw ConstraintError("rounds are numbered from 1");
  if (decoded.size() < round - 1) {
    throw ConstraintError("round " + std::to_string(round) + " needs " + std::to_string(round - 1) +
                          " decoded rounds, have " + std::to_string(decoded.size()));
  }
  const std::size_t n = server - 1;
  const std::size_t layers = pts.layers();
  FieldElement acc = pts.field().zero();
  for (std::size_t k = 0; k + 1 < round; ++k) {
    if (decoded[k].size() != layers) throw ConstraintError("decoded round " + std::to_string(k + 1) + " has wrong length");
    const auto e = static_cast<std::int64_t>(round - k);
    for (std::size_t l = 0; l < layers; ++l) acc += decoded[k][l] * pts.gap(l, n).pow(-e);
  }
  return acc;
}

FieldElement interference_offset(const std::vector<FieldVector>& decoded, const EvaluationPoints& pts,
                                 const ProtocolParams& p, std::size_t round, std::size_t server) {
  check_server(server, p);
  check_points(pts, p);
  if (round < 1 || round > p.Kc) throw ConstraintError("round " + std::to_string(round) + " out of range");
  return cancellation_term(decoded, pts, round, server);
}

DecodeResult decode(std::span<const AnswerBundle> answers, const EvaluationPoints& pts, const ProtocolParams& p) {
  check_points(pts, p);
  std::vector<const AnswerBundle*> sorted;
  std::set<std::size_t> seen;
  for (const auto& a : answers) {
    check_server(a.server, p);
    if (!seen.insert(a.server).second) {
      throw ConstraintError("duplicate answer from server " + std::to_string(a.server));
    }
    if (a.symbols.size() != p.Kc) {
      throw ConstraintError("answer from server " + std::to_string(a.server) + " has " +
                            std::to_string(a.symbols.size()) + " symbols, expected K_c=" + std::to_string(p.Kc));
    }
    sorted.push_back(&a);
  }
  if (sorted.size() < p.N - p.U) {
    throw ConstraintError("only " + std::to_string(sorted.size()) + " answers received, need N-U=" +
                          std::to_string(p.N - p.U));
  }
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->server < b->server; });

  std::vector<std::size_t> rows;
  std::vector<std::size_t> servers;
  for (auto* a : sorted) {
    rows.push_back(a->server - 1);
    servers.push_back(a->server);
  }
  const DecodingMatrix matrix = build_decoding_matrix(pts, rows, p.L, p.code_width());

  DecodeResult result;
  result.message.assign(p.ell, pts.field().zero());
  std::vector<FieldVector> decoded;
  std::set<std::size_t> flagged;
  for (std::size_t round = 1; round <= p.Kc; ++round) {
    RoundTrace trace;
    trace.round = round;
    trace.servers = servers;
    for (auto* a : sorted) {
      const FieldElement off = interference_offset(decoded, pts, p, round, a->server);
      trace.offsets.push_back(off);
      trace.corrected.push_back(a->symbols[round - 1] - off);
    }
    const robust::RobustSolution sol = robust::robust_solve({matrix, trace.corrected}, p.B);
    trace.desired.assign(sol.coefficients.begin(), sol.coefficients.begin() + static_cast<std::ptrdiff_t>(p.L));
    for (auto r : sol.disagreeing) {
      trace.disagreeing.push_back(servers[r]);
      flagged.insert(servers[r]);
    }
    // The Byzantine set is fixed across rounds, so every corrected server
    // must belong to one set of size <= B.
    if (flagged.size() > p.B) {
      throw robust::DecodingFailure("robust decoding failed: " + std::to_string(flagged.size()) +
                                    " distinct servers corrected across rounds, budget B=" + std::to_string(p.B));
    }
    for (std::size_t l = 0; l < p.L; ++l) result.message[(round - 1) * p.L + l] = trace.desired[l];
    decoded.push_back(trace.desired);
    result.rounds.push_back(std::move(trace));
  }
  return result;
}

}  // namespace csapir
