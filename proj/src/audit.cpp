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

#include "csapir/audit.hpp"

#include <limits>
#include <set>

namespace csapir::audit {

namespace {

void check_colluding(const AuditConfig& cfg, std::size_t threshold, const char* level) {
  std::set<std::size_t> distinct(cfg.colluding.begin(), cfg.colluding.end());
  if (distinct.size() != cfg.colluding.size()) throw ConstraintError("colluding set has repeated servers");
  for (auto n : cfg.colluding) {
    if (n < 1 || n > cfg.params.N) throw ConstraintError("colluding server " + std::to_string(n) + " out of range");
  }
  if (cfg.colluding.size() > threshold && !cfg.expect_fail) {
    throw ConstraintError("colluding set of size " + std::to_string(cfg.colluding.size()) + " exceeds " + level +
                          "=" + std::to_string(threshold) + " (use expected-fail mode to audit tightness)");
  }
}

void append(Observation& obs, const FieldVector& v) {
  for (const auto& e : v) obs.push_back(e.value());
}

}  // namespace

std::string to_string(Target t) {
  return t == Target::kStorageSecurity ? "storage-security" : "query-privacy";
}

std::uint64_t state_count(std::uint64_t q, std::size_t symbols) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < symbols; ++i) {
    if (n > std::numeric_limits<std::uint64_t>::max() / q) return std::numeric_limits<std::uint64_t>::max();
    n *= q;
  }
  return n;
}

Distribution enumerate_distribution(const Field& field, std::size_t symbols, std::uint64_t budget,
                                    const std::function<Observation(const FieldVector&)>& observe) {
  const std::uint64_t states = state_count(field.modulus(), symbols);
  if (states > budget) {
    throw BudgetExceededError("enumeration needs " + std::to_string(states) + " states (q=" +
                                  std::to_string(field.modulus()) + ", " + std::to_string(symbols) +
                                  " free symbols), budget is " + std::to_string(budget),
                              states);
  }
  Distribution dist;
  FieldVector noise(symbols, field.zero());
  const FieldElement one = field.one();
  for (std::uint64_t s = 0; s < states; ++s) {
    ++dist[observe(noise)];
    // Odometer increment.
    for (std::size_t i = 0; i < symbols; ++i) {
      noise[i] += one;
      if (!noise[i].is_zero()) break;
    }
  }
  return dist;
}

StorageNoise unpack_storage_noise(const FieldVector& flat, const ProtocolParams& p) {
  if (flat.size() != p.L * p.X * p.K) throw ConstraintError("unpack_storage_noise: wrong symbol count");
  StorageNoise noise;
  noise.z.resize(p.L);
  auto it = flat.begin();
  for (auto& layer : noise.z) {
    for (std::size_t x = 0; x < p.X; ++x) {
      layer.emplace_back(it, it + static_cast<std::ptrdiff_t>(p.K));
      it += static_cast<std::ptrdiff_t>(p.K);
    }
  }
  return noise;
}

QueryNoise unpack_query_noise(const FieldVector& flat, const ProtocolParams& p) {
  if (flat.size() != p.Kc * p.L * p.T * p.K) throw ConstraintError("unpack_query_noise: wrong symbol count");
  QueryNoise noise;
  noise.z.resize(p.Kc);
  auto it = flat.begin();
  for (auto& round : noise.z) {
    round.resize(p.L);
    for (auto& layer : round) {
      for (std::size_t t = 0; t < p.T; ++t) {
        layer.emplace_back(it, it + static_cast<std::ptrdiff_t>(p.K));
        it += static_cast<std::ptrdiff_t>(p.K);
      }
    }
  }
  return noise;
}

Verdict audit_storage_security(const AuditConfig& cfg, const EvaluationPoints& pts, const MessageSet& w,
                               const MessageSet& w2) {
  const ProtocolParams& p = cfg.params;
  if (p.X == 0) throw NotApplicableError("storage-security audit not applicable: X = 0 claims no security");
  check_colluding(cfg, p.X, "X");
  const std::size_t symbols = p.L * p.X * p.K;
  auto observe = [&](const MessageSet& msgs, const FieldVector& flat) {
    const StorageNoise noise = unpack_storage_noise(flat, p);
    Observation obs;
    for (auto n : cfg.colluding) {
      for (const auto& layer : encode_storage_for(n, msgs, noise, pts, p).layers) append(obs, layer);
    }
    return obs;
  };
  const Distribution d1 = enumerate_distribution(pts.field(), symbols, cfg.budget,
                                                 [&](const FieldVector& f) { return observe(w, f); });
  const Distribution d2 = enumerate_distribution(pts.field(), symbols, cfg.budget,
                                                 [&](const FieldVector& f) { return observe(w2, f); });
  return Verdict{Target::kStorageSecurity, cfg.colluding, state_count(pts.field().modulus(), symbols), d1.size(),
                 d1 == d2};
}

Verdict audit_query_privacy(const AuditConfig& cfg, const EvaluationPoints& pts, std::size_t theta,
                            std::size_t theta2) {
  const ProtocolParams& p = cfg.params;
  if (p.T == 0) throw NotApplicableError("query-privacy audit not applicable: T = 0 claims no privacy");
  check_colluding(cfg, p.T, "T");
  const std::size_t symbols = p.Kc * p.L * p.T * p.K;
  auto observe = [&](std::size_t index, const FieldVector& flat) {
    const QueryNoise noise = unpack_query_noise(flat, p);
    Observation obs;
    for (auto n : cfg.colluding) {
      for (const auto& round : gen_query_for(n, index, noise, pts, p).rounds) {
        for (const auto& v : round) append(obs, v);
      }
    }
    return obs;
  };
  const Distribution d1 = enumerate_distribution(pts.field(), symbols, cfg.budget,
                                                 [&](const FieldVector& f) { return observe(theta, f); });
  const Distribution d2 = enumerate_distribution(pts.field(), symbols, cfg.budget,
                                                 [&](const FieldVector& f) { return observe(theta2, f); });
  return Verdict{Target::kQueryPrivacy, cfg.colluding, state_count(pts.field().modulus(), symbols), d1.size(),
                 d1 == d2};
}

RateReport rate_report(const ProtocolParams& p, std::span<const AnswerBundle> answers, std::size_t retrieved) {
  RateReport r;
  for (const auto& a : answers) r.downloaded += a.symbols.size();
  r.retrieved = retrieved;
  if (r.downloaded == 0) throw ConstraintError("rate_report: nothing was downloaded");
  r.realized = Rational(static_cast<std::int64_t>(retrieved), static_cast<std::int64_t>(r.downloaded));
  r.theorem = achievable_rate(p);
  r.prior = comparison_rate_prior(p);
  r.matches_theorem = r.realized == r.theorem;
  return r;
}

}  // namespace csapir::audit
