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

#include "csapir/sim.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "csapir/robust.hpp"

namespace csapir::sim {

namespace {

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

void check_ids(const std::vector<std::size_t>& ids, std::size_t N, const char* what) {
  std::set<std::size_t> seen;
  for (auto n : ids) {
    if (n < 1 || n > N) throw ConstraintError(std::string(what) + " server " + std::to_string(n) + " out of range");
    if (!seen.insert(n).second) throw ConstraintError(std::string(what) + " set repeats server " + std::to_string(n));
  }
}

AnswerBundle corrupt(const AnswerBundle& honest, const std::vector<AnswerBundle>& donors, CorruptionPolicy policy,
                     const FieldElement& constant, Rng& rng) {
  AnswerBundle out = honest;
  const Field field = honest.symbols.front().field();
  switch (policy) {
    case CorruptionPolicy::kRandom:
      for (auto& s : out.symbols) s = rng.uniform(field);
      break;
    case CorruptionPolicy::kConstant:
      for (auto& s : out.symbols) s = constant;
      break;
    case CorruptionPolicy::kReplay:
      if (donors.empty()) throw ConstraintError("replay corruption needs at least one honest server");
      out.symbols = donors[rng.index(0, donors.size() - 1)].symbols;
      break;
  }
  return out;
}

std::vector<std::vector<std::size_t>> subsets(const std::vector<std::size_t>& pool, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  robust::for_each_subset(pool.size(), k, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> s;
    for (auto i : idx) s.push_back(pool[i]);
    out.push_back(std::move(s));
    return false;
  });
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

std::string to_string(CorruptionPolicy p) {
  switch (p) {
    case CorruptionPolicy::kRandom: return "random";
    case CorruptionPolicy::kConstant: return "constant";
    case CorruptionPolicy::kReplay: return "replay";
  }
  return "?";
}

CorruptionPolicy parse_policy(const std::string& name) {
  for (auto p : all_policies()) {
    if (to_string(p) == name) return p;
  }
  throw ConstraintError("unknown corruption policy '" + name + "' (random | constant | replay)");
}

const std::vector<CorruptionPolicy>& all_policies() {
  static const std::vector<CorruptionPolicy> all{CorruptionPolicy::kRandom, CorruptionPolicy::kConstant,
                                                 CorruptionPolicy::kReplay};
  return all;
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kRecovered: return "recovered";
    case Outcome::kDecodingFailure: return "decoding-failure";
    case Outcome::kWrongOutput: return "wrong-output";
  }
  return "?";
}

void AdversaryConfig::validate(const ProtocolParams& p, bool enforce_budget) const {
  check_ids(unresponsive, p.N, "unresponsive");
  check_ids(byzantine, p.N, "byzantine");
  if (unresponsive.size() != p.U) {
    throw ConstraintError("unresponsive set has " + std::to_string(unresponsive.size()) + " servers, U=" +
                          std::to_string(p.U));
  }
  if (enforce_budget && byzantine.size() > p.B) {
    throw ConstraintError("byzantine set has " + std::to_string(byzantine.size()) + " servers, budget B=" +
                          std::to_string(p.B));
  }
  for (auto n : byzantine) {
    if (contains(unresponsive, n)) {
      throw ConstraintError("server " + std::to_string(n) + " is both unresponsive and byzantine");
    }
  }
}

SessionSeeds split_seeds(std::uint64_t master, std::uint64_t adversary_seed) {
  return SessionSeeds{master, derive_seed(master, SeedRole::kMessages), derive_seed(master, SeedRole::kStorageNoise),
                      derive_seed(master, SeedRole::kQueryNoise), derive_seed(adversary_seed, SeedRole::kCorruption)};
}

std::vector<AnswerBundle> SessionTranscript::received() const {
  std::vector<AnswerBundle> out;
  for (const auto& a : answers) {
    if (a) out.push_back(*a);
  }
  return out;
}

SessionTranscript run_session(const ProtocolParams& p, const AdversaryConfig& adversary, std::size_t theta,
                              std::uint64_t seed, const SessionOptions& options) {
  adversary.validate(p, options.enforce_budget);
  if (theta < 1 || theta > p.K) {
    throw ConstraintError("theta=" + std::to_string(theta) + " outside [1, " + std::to_string(p.K) + "]");
  }
  const Field field = options.q ? checked_field(p, *options.q) : default_field(p);
  const SessionSeeds seeds = split_seeds(seed, adversary.seed);
  Rng msg_rng(seeds.messages);
  Rng storage_rng(seeds.storage_noise);
  Rng query_rng(seeds.query_noise);
  Rng corruption_rng(seeds.corruption);

  SessionTranscript t{p, EvaluationPoints::defaults(field, p.L, p.N), seeds, theta, adversary,
                      random_messages(field, p, msg_rng), {}, {}, {}, Outcome::kDecodingFailure, {}, {}, {}};
  const StorageNoise snoise = random_storage_noise(field, p, storage_rng);
  const QueryNoise qnoise = random_query_noise(field, p, query_rng);
  t.storages = encode_storage(t.messages, snoise, t.points, p);
  t.queries = gen_queries(theta, qnoise, t.points, p);

  std::vector<AnswerBundle> honest;
  std::vector<AnswerBundle> donors;
  for (std::size_t n = 1; n <= p.N; ++n) {
    honest.push_back(server_answer(t.storages[n - 1], t.queries[n - 1]));
    if (!contains(adversary.unresponsive, n) && !contains(adversary.byzantine, n)) donors.push_back(honest.back());
  }
  const FieldElement constant = corruption_rng.uniform(field);
  t.answers.resize(p.N);
  for (std::size_t n = 1; n <= p.N; ++n) {
    if (contains(adversary.unresponsive, n)) continue;
    t.answers[n - 1] = contains(adversary.byzantine, n)
                           ? corrupt(honest[n - 1], donors, adversary.policy, constant, corruption_rng)
                           : honest[n - 1];
  }

  const std::vector<AnswerBundle> got = t.received();
  try {
    t.decoded = decode(got, t.points, p);
    t.outcome = t.decoded->message == t.messages.message(theta) ? Outcome::kRecovered : Outcome::kWrongOutput;
    t.rate = audit::rate_report(p, got, t.decoded->message.size());
  } catch (const robust::DecodingFailure& e) {
    t.outcome = Outcome::kDecodingFailure;
    t.failure = e.what();
  }
  return t;
}

bool honest_answers_pure(const SessionTranscript& t) {
  for (std::size_t n = 1; n <= t.params.N; ++n) {
    if (contains(t.adversary.unresponsive, n) || contains(t.adversary.byzantine, n)) continue;
    const auto& a = t.answers[n - 1];
    if (!a || !(*a == server_answer(t.storages[n - 1], t.queries[n - 1]))) return false;
  }
  return true;
}

std::vector<SweepRow> sweep(const std::vector<GridPoint>& grid, const SweepOptions& options) {
  std::vector<SweepRow> rows;
  std::uint64_t counter = 0;
  for (const auto& g : grid) {
    ProtocolParams p;
    try {
      p = derive_params(g.N, g.Kc, g.X, g.T, g.U, g.B, g.K);
    } catch (const InfeasibleParamsError&) {
      continue;
    }
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> placements;
    std::vector<CorruptionPolicy> policies = options.policies;
    if (options.mode == SweepMode::kHonest) {
      std::vector<std::size_t> u;
      for (std::size_t n = g.N - g.U + 1; n <= g.N; ++n) u.push_back(n);
      placements.emplace_back(u, std::vector<std::size_t>{});
      policies = {CorruptionPolicy::kRandom};
    } else {
      const std::size_t nb = options.byzantine_count.value_or(g.B);
      std::vector<std::size_t> all;
      for (std::size_t n = 1; n <= g.N; ++n) all.push_back(n);
      for (const auto& u : subsets(all, g.U)) {
        std::vector<std::size_t> rest;
        for (auto n : all) {
          if (!contains(u, n)) rest.push_back(n);
        }
        for (const auto& b : subsets(rest, nb)) placements.emplace_back(u, b);
      }
    }
    SessionOptions so{options.q, options.byzantine_count.value_or(g.B) <= g.B};
    for (const auto& [u, b] : placements) {
      for (auto policy : policies) {
        SweepRow row{g, u, b, policy, 0, 0, 0, 0};
        for (std::size_t d = 0; d < options.draws; ++d) {
          const std::uint64_t s = options.seed + counter++;
          const AdversaryConfig adv{u, b, policy, s};
          const std::size_t theta = 1 + d % g.K;
          const SessionTranscript t = run_session(p, adv, theta, s, so);
          ++row.sessions;
          if (t.outcome == Outcome::kRecovered) {
            ++row.passes;
          } else {
            ++row.failures;
            if (t.outcome == Outcome::kWrongOutput) ++row.silent;
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "N,Kc,X,T,U,B,K,unresponsive,byzantine,policy,sessions,passes,failures,silent\n";
  for (const auto& r : rows) {
    const auto& g = r.point;
    os << g.N << ',' << g.Kc << ',' << g.X << ',' << g.T << ',' << g.U << ',' << g.B << ',' << g.K << ','
       << join(r.unresponsive) << ',' << join(r.byzantine) << ',' << to_string(r.policy) << ',' << r.sessions << ','
       << r.passes << ',' << r.failures << ',' << r.silent << '\n';
  }
  return os.str();
}

PsdmmTranscript run_psdmm(const psdmm::PsdmmParams& p, std::size_t theta, std::uint64_t seed,
                          std::optional<std::uint64_t> q) {
  if (theta < 1 || theta > p.M) {
    throw ConstraintError("theta=" + std::to_string(theta) + " outside [1, " + std::to_string(p.M) + "]");
  }
  Field field = psdmm::default_field(p);
  if (q) {
    field = Field(*q);
    if (*q < p.L + p.N) {
      throw ConstraintError("field size q=" + std::to_string(*q) + " violates q >= L+N=" + std::to_string(p.L + p.N));
    }
  }
  SessionSeeds seeds{seed, derive_seed(seed, SeedRole::kMessages), derive_seed(seed, SeedRole::kShareA),
                     derive_seed(seed, SeedRole::kQueryNoise), derive_seed(seed, SeedRole::kShareB)};
  Rng inst_rng(seeds.messages);
  Rng a_rng(seeds.storage_noise);
  Rng b_rng(seeds.corruption);
  Rng q_rng(seeds.query_noise);

  PsdmmTranscript t{p, EvaluationPoints::defaults(field, p.L, p.N), seeds, theta,
                    psdmm::random_instance(field, p, inst_rng), {}, {}, {}, {}, {}, false, {}, Rational(0), Rational(0)};
  const auto na = psdmm::random_noise_a(field, p, a_rng);
  const auto nb = psdmm::random_noise_b(field, p, b_rng);
  const auto nq = psdmm::random_query_noise(field, p, q_rng);
  t.a_shares = psdmm::share_a(t.instance, na, t.points, p);
  t.b_shares = psdmm::share_b(t.instance, nb, t.points, p);
  const auto queries = psdmm::psdmm_query(theta, nq, t.points, p);
  for (std::size_t n = 0; n < p.N; ++n) t.answers.push_back(psdmm::psdmm_answer(t.a_shares[n], t.b_shares[n], queries[n]));
  t.decoded = psdmm::psdmm_decode(t.answers, t.points, p);
  for (const auto& a : t.instance.a) t.expected.push_back(a * t.instance.library[theta - 1]);
  t.correct = t.decoded == t.expected;
  t.costs = psdmm::cost_report(p);
  t.measured_upload = psdmm::measured_upload(t.a_shares, p);
  t.measured_download = psdmm::measured_download(t.answers, p);
  return t;
}

}  // namespace csapir::sim
