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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Runtime limits are part of each check.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "csapir/audit.hpp"
#include "csapir/psdmm.hpp"
#include "csapir/robust.hpp"
#include "csapir/serialize.hpp"
#include "csapir/sim.hpp"
#include "csapir/xstpir.hpp"

using namespace csapir;

namespace {

struct Check {
  bool ok = true;
  std::string detail;
  std::size_t cases = 0;

  void expect(bool cond, const std::string& what) {
    ++cases;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

FieldVector vec(const Field& f, std::initializer_list<std::int64_t> xs) {
  FieldVector v;
  for (auto x : xs) v.push_back(f.element(x));
  return v;
}

std::string str(const Rational& r) { return format_rational(r); }

std::vector<std::size_t> iota_vec(std::size_t n, std::size_t from = 0) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), from);
  return v;
}

std::vector<std::size_t> pick(Rng& rng, std::vector<std::size_t>& pool, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = rng.index(0, pool.size() - 1);
    out.push_back(pool[j]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// 1. Four-server example.
Check four_server_example() {
  Check c;
  const auto p = derive_params(4, 2, 1, 1, 0, 0, 3);
  c.expect(default_field(p).modulus() == 5, "default field is not GF(5)");
  for (std::size_t theta = 1; theta <= 3; ++theta) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto t = sim::run_session(p, {}, theta, seed, {5});
      const std::string at = " theta=" + std::to_string(theta) + " seed=" + std::to_string(seed);
      c.expect(t.outcome == sim::Outcome::kRecovered, "retrieval failed" + at);
      c.expect(t.rate && t.rate->realized == Rational(1, 4), "rate != 1/4" + at);
      c.expect(t.rate && t.rate->downloaded == 8 && t.rate->retrieved == 2, "symbol counts" + at);
    }
  }
  return c;
}

// 2. Five-server example: rate, round order and interference offsets.
Check five_server_example() {
  Check c;
  const Field f(7);
  const auto p = derive_params(5, 2, 1, 1, 0, 0, 2);
  const auto pts = EvaluationPoints::defaults(f, 2, 5);
  const MessageSet w(f, 2, {vec(f, {1, 2, 3, 4}), vec(f, {5, 6, 0, 1})});
  const StorageNoise z{{{vec(f, {3, 1})}, {vec(f, {6, 2})}}};
  const QueryNoise zq{{{{vec(f, {2, 5})}, {vec(f, {1, 1})}}, {{vec(f, {0, 4})}, {vec(f, {3, 6})}}}};
  const auto storage = encode_storage(w, z, pts, p);
  const auto queries = gen_queries(1, zq, pts, p);
  std::vector<AnswerBundle> answers;
  for (std::size_t n = 0; n < 5; ++n) answers.push_back(server_answer(storage[n], queries[n]));
  const auto r = decode(answers, pts, p);
  c.expect(r.message == w.message(1), "decoded message differs");
  c.expect(r.rounds.size() == 2 && r.rounds[0].round == 1 && r.rounds[1].round == 2, "round order");
  c.expect(r.rounds[0].desired == vec(f, {1, 2}) && r.rounds[1].desired == vec(f, {3, 4}), "round symbols");
  // Round-2 offset at server n is sum_l W_l1 / (f_l - a_n)^2 with W_11 = 1, W_21 = 2.
  const auto& off = r.rounds[1].offsets;
  for (std::size_t n = 0; n < 5; ++n) {
    const auto g1 = pts.gap(0, n), g2 = pts.gap(1, n);
    const FieldElement want = f.element(1) / (g1 * g1) + f.element(2) / (g2 * g2);
    c.expect(off.size() == 5 && off[n] == want, "offset at server " + std::to_string(n + 1));
  }
  c.expect(off == vec(f, {4, 1, 5, 3, 5}), "offsets differ from reference [4,1,5,3,5]");
  for (const auto& v : r.rounds[0].offsets) c.expect(v == f.zero(), "round-1 offset nonzero");
  const auto rep = audit::rate_report(p, answers, r.message.size());
  c.expect(rep.realized == Rational(2, 5), "rate " + str(rep.realized));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto t = sim::run_session(p, {}, 1 + seed % 2, seed, {7});
    c.expect(t.outcome == sim::Outcome::kRecovered && t.rate->realized == Rational(2, 5),
             "random session seed " + std::to_string(seed));
  }
  return c;
}

// 3. Rate grid with unresponsive and Byzantine servers at the budget.
Check rate_grid() {
  Check c;
  std::size_t tuples = 0;
  const auto policies = sim::all_policies();
  for (std::size_t N = 1; N <= 10; ++N)
    for (std::size_t Kc = 1; Kc <= 3; ++Kc)
      for (std::size_t X = 0; X <= 2; ++X)
        for (std::size_t T = 0; T <= 2; ++T)
          for (std::size_t U = 0; U <= 2; ++U)
            for (std::size_t B = 0; B <= 1; ++B)
              for (std::size_t K = 1; K <= 4; ++K) {
                ProtocolParams p;
                try {
                  p = derive_params(N, Kc, X, T, U, B, K);
                } catch (const ConstraintError&) {
                  continue;
                }
                ++tuples;
                const Rational want = Rational(1) - Rational(static_cast<std::int64_t>(Kc + X + T + 2 * B - 1),
                                                             static_cast<std::int64_t>(N - U));
                for (std::size_t theta = 1; theta <= K; ++theta) {
                  for (std::uint64_t s = 0; s < 5; ++s) {
                    const std::uint64_t seed = tuples * 1000 + theta * 10 + s;
                    Rng rng(seed);
                    auto pool = iota_vec(N, 1);
                    sim::AdversaryConfig adv;
                    adv.unresponsive = pick(rng, pool, U);
                    adv.byzantine = pick(rng, pool, B);
                    adv.policy = policies[s % policies.size()];
                    adv.seed = seed;
                    const auto t = sim::run_session(p, adv, theta, seed);
                    std::ostringstream at;
                    at << "N=" << N << " Kc=" << Kc << " X=" << X << " T=" << T << " U=" << U << " B=" << B
                       << " K=" << K << " theta=" << theta << " seed=" << seed;
                    c.expect(t.outcome == sim::Outcome::kRecovered, "no recovery at " + at.str());
                    c.expect(t.rate && t.rate->realized == want && achievable_rate(p) == want,
                             "rate mismatch at " + at.str());
                  }
                }
              }
  c.detail = c.ok ? std::to_string(tuples) + " feasible tuples" : c.detail;
  return c;
}

// 4. Cauchy-Vandermonde invertibility.
Check matrix_invertibility() {
  Check c;
  Rng rng(4242);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t q = 11; q <= 101; ++q)
    if (is_prime(q)) primes.push_back(q);
  for (int trial = 0; trial < 500; ++trial) {
    const Field f(primes[rng.index(0, primes.size() - 1)]);
    const std::size_t width = rng.index(2, std::min<std::uint64_t>(12, f.modulus() / 2));
    const std::size_t L = rng.index(1, width);
    std::vector<std::uint64_t> pool(f.modulus());
    std::iota(pool.begin(), pool.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < L + width; ++i) std::swap(pool[i], pool[rng.index(i, pool.size() - 1)]);
    FieldVector fs, as;
    for (std::size_t i = 0; i < L; ++i) fs.push_back(f.from_residue(pool[i]));
    for (std::size_t i = 0; i < width; ++i) as.push_back(f.from_residue(pool[L + i]));
    const EvaluationPoints pts(f, fs, as);
    const auto rows = iota_vec(width);
    const auto dm = build_decoding_matrix(pts, rows, L, width);
    c.expect(rank(dm.matrix()) == width && determinant(dm.matrix()) != f.zero(),
             "singular at q=" + std::to_string(f.modulus()) + " width=" + std::to_string(width) +
                 " L=" + std::to_string(L));
  }
  // Robust matrices: any N-U responsive servers, of which any width rows.
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
  std::size_t subsets = 0;
  for (std::size_t N = 1; N <= 10; ++N)
    for (std::size_t Kc = 1; Kc <= 3; ++Kc)
      for (std::size_t X = 0; X <= 2; ++X)
        for (std::size_t T = 0; T <= 2; ++T)
          for (std::size_t U = 0; U <= 2; ++U)
            for (std::size_t B = 0; B <= 1; ++B) {
              ProtocolParams p;
              try {
                p = derive_params(N, Kc, X, T, U, B, 1);
              } catch (const ConstraintError&) {
                continue;
              }
              if (N - U > 8) continue;
              if (!seen.insert({N, p.L, p.code_width()}).second) continue;
              const auto pts = EvaluationPoints::defaults(default_field(p), p.L, N);
              robust::for_each_subset(N, p.code_width(), [&](const std::vector<std::size_t>& rows) {
                ++subsets;
                const auto dm = build_decoding_matrix(pts, rows, p.L, p.code_width());
                c.expect(rank(dm.matrix()) == p.code_width(), "singular robust subset at N=" + std::to_string(N));
                return false;
              });
            }
  if (c.ok) c.detail = "500 random + " + std::to_string(subsets) + " robust subsets";
  return c;
}

// 5. Exhaustive adversary placements at N=8.
Check adversary_exhaustion() {
  Check c;
  const std::vector<sim::GridPoint> grid{{8, 2, 1, 1, 1, 1, 3}};
  sim::SweepOptions within;
  within.mode = sim::SweepMode::kExhaustive;
  within.draws = 50;
  std::size_t sessions = 0, passes = 0;
  for (const auto& r : sim::sweep(grid, within)) {
    sessions += r.sessions;
    passes += r.passes;
  }
  c.expect(sessions == 8 * 7 * 3 * 50, "unexpected session count " + std::to_string(sessions));
  c.expect(passes == sessions, std::to_string(sessions - passes) + " within-budget failures");

  sim::SweepOptions over = within;
  over.policies = {sim::CorruptionPolicy::kRandom};
  over.byzantine_count = 2;
  std::size_t o_sessions = 0, silent = 0, refused = 0;
  for (const auto& r : sim::sweep(grid, over)) {
    o_sessions += r.sessions;
    silent += r.silent;
    refused += r.failures - r.silent;
  }
  const double non_silent = o_sessions ? 1.0 - static_cast<double>(silent) / o_sessions : 0.0;
  c.expect(o_sessions > 0 && non_silent >= 0.95, "non-silent share " + std::to_string(non_silent));
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu/%zu recovered; over budget %zu refused, %zu silent of %zu (%.1f%% non-silent)",
                passes, sessions, refused, silent, o_sessions, 100.0 * non_silent);
  if (c.ok) c.detail = buf;
  return c;
}

// 6. Exact security and privacy audits.
Check audits() {
  Check c;
  const Field f(5);
  struct Tiny {
    std::size_t N, Kc, X, T;
  };
  std::size_t verdicts = 0;
  for (const Tiny& cfg : {Tiny{4, 2, 1, 1}, Tiny{4, 1, 2, 1}, Tiny{4, 1, 1, 2}}) {
    const auto p = derive_params(cfg.N, cfg.Kc, cfg.X, cfg.T, 0, 0, 2);
    const auto pts = EvaluationPoints::defaults(f, p.L, p.N);
    Rng rng(17);
    const auto w1 = random_messages(f, p, rng);
    std::vector<FieldVector> zeros(2, FieldVector(p.ell, f.zero()));
    const MessageSet w2(f, p.L, zeros);
    const std::string tag = " N=" + std::to_string(cfg.N) + " Kc=" + std::to_string(cfg.Kc) +
                            " X=" + std::to_string(cfg.X) + " T=" + std::to_string(cfg.T);
    for (std::size_t size = 1; size <= cfg.X + 1; ++size) {
      robust::for_each_subset(cfg.N, size, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> set;
        for (auto i : idx) set.push_back(i + 1);
        const bool over = size > cfg.X;
        const auto v = audit::audit_storage_security({p, set, audit::Target::kStorageSecurity, 1'000'000, over}, pts,
                                                     w1, w2);
        ++verdicts;
        c.expect(v.pass == !over, "storage audit" + tag + " size " + std::to_string(size));
        return false;
      });
    }
    for (std::size_t size = 1; size <= cfg.T + 1; ++size) {
      robust::for_each_subset(cfg.N, size, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> set;
        for (auto i : idx) set.push_back(i + 1);
        const bool over = size > cfg.T;
        const auto v = audit::audit_query_privacy({p, set, audit::Target::kQueryPrivacy, 1'000'000, over}, pts, 1, 2);
        ++verdicts;
        c.expect(v.pass == !over, "query audit" + tag + " size " + std::to_string(size));
        return false;
      });
    }
  }
  if (c.ok) c.detail = std::to_string(verdicts) + " verdicts";
  return c;
}

// 7. Any X+Kc servers hold enough to recover every message.
Check storage_recoverability() {
  Check c;
  std::size_t subsets = 0;
  for (std::size_t N = 1; N <= 8; ++N)
    for (std::size_t Kc = 1; Kc <= 3; ++Kc)
      for (std::size_t X = 0; X <= 2; ++X) {
        ProtocolParams p;
        try {
          p = derive_params(N, Kc, X, 1, 0, 0, 3);
        } catch (const ConstraintError&) {
          continue;
        }
        const Field f = default_field(p);
        const auto pts = EvaluationPoints::defaults(f, p.L, N);
        Rng rng(N * 100 + Kc * 10 + X);
        const auto w = random_messages(f, p, rng);
        const auto storage = encode_storage(w, random_storage_noise(f, p, rng), pts, p);
        robust::for_each_subset(N, X + Kc, [&](const std::vector<std::size_t>& idx) {
          std::vector<ServerStorage> sub;
          for (auto i : idx) sub.push_back(storage[i]);
          ++subsets;
          const auto got = recover_from_storage(sub, pts, p);
          c.expect(got.messages() == w.messages(), "recovery failed at N=" + std::to_string(N));
          return false;
        });
      }
  if (c.ok) c.detail = std::to_string(subsets) + " subsets";
  return c;
}

// 8. PSDMM products and costs.
Check psdmm_grid() {
  Check c;
  std::size_t runs = 0;
  for (std::size_t N = 1; N <= 8; ++N)
    for (std::size_t XA = 1; XA <= 2; ++XA)
      for (std::size_t XB = 0; XB <= 1; ++XB)
        for (std::size_t T = 1; T <= 2; ++T)
          for (std::size_t Kc = 1; Kc <= N; ++Kc)
            for (std::size_t M = 1; M <= 3; ++M)
              for (std::size_t lambda = 1; lambda <= 3; ++lambda)
                for (std::size_t chi = 1; chi <= 3; ++chi)
                  for (std::size_t mu = 1; mu <= 3; ++mu) {
                    psdmm::PsdmmParams p;
                    try {
                      p = psdmm::derive_psdmm_params(N, T, XA, XB, M, lambda, chi, mu, Kc);
                    } catch (const ConstraintError&) {
                      continue;
                    }
                    const std::size_t theta = 1 + runs % M;
                    const auto t = sim::run_psdmm(p, theta, runs);
                    ++runs;
                    std::ostringstream at;
                    at << "N=" << N << " XA=" << XA << " XB=" << XB << " T=" << T << " Kc=" << Kc << " M=" << M
                       << " dims=" << lambda << "x" << chi << "x" << mu;
                    // Direct product A_k * B_theta, block by block.
                    const auto& B = t.instance.library[theta - 1];
                    bool same = t.decoded.size() == t.instance.a.size();
                    for (std::size_t i = 0; same && i < t.decoded.size(); ++i)
                      same = t.decoded[i] == t.instance.a[i] * B;
                    c.expect(same, "product mismatch at " + at.str());
                    const auto gap = XB > 0 ? 2 * Kc + XA + XB + T - 2 : Kc + XA + T - 1;
                    const Rational up(static_cast<std::int64_t>(N), static_cast<std::int64_t>(Kc));
                    const Rational down(static_cast<std::int64_t>(N), static_cast<std::int64_t>(N - gap));
                    c.expect(t.costs.upload == up && t.costs.download == down, "cost pair at " + at.str());
                    c.expect(t.measured_upload == up && t.measured_download == down, "measured cost at " + at.str());
                  }
  std::size_t compared = 0;
  for (std::size_t N = 1; N <= 12; ++N) {
    for (const auto& r : psdmm::cost_hull(N, 1, 0, 1)) {
      ++compared;
      const std::int64_t n = static_cast<std::int64_t>(N), k = static_cast<std::int64_t>(r.Kc);
      const bool unbounded = n <= k + 1;
      const bool below = unbounded || r.download < Rational(k + 1, k) * Rational(n, n - (k + 1));
      c.expect(below && r.improves_on_prior, "no strict improvement at N=" + std::to_string(N) +
                                                 " Kc=" + std::to_string(r.Kc));
    }
  }
  if (c.ok) c.detail = std::to_string(runs) + " products, " + std::to_string(compared) + " cost comparisons";
  return c;
}

// 9. Degenerate settings reduce to the known PIR rates.
Check special_cases() {
  Check c;
  for (std::size_t N = 2; N <= 12; ++N) {
    const auto p = derive_params(N, 1, 0, 1, 0, 0, 2);
    const Rational n(static_cast<std::int64_t>(N));
    c.expect(achievable_rate(p) == Rational(1) - Rational(1) / n, "T=1 rate at N=" + std::to_string(N));
    c.expect(Rational(static_cast<std::int64_t>(p.L)) / n == Rational(1) - Rational(1) / n, "L/N at N=" + std::to_string(N));
    const auto t = sim::run_session(p, {}, 2, N);
    c.expect(t.rate && t.rate->realized == Rational(1) - Rational(1) / n, "realized rate at N=" + std::to_string(N));
    for (std::size_t Kc = 1; Kc <= 4; ++Kc)
      for (std::size_t T = 0; T <= 3; ++T) {
        if (T + Kc - 1 >= N) continue;
        const auto q = derive_params(N, Kc, 0, T, 0, 0, 2);
        const Rational want = Rational(1) - Rational(static_cast<std::int64_t>(T + Kc - 1)) / n;
        c.expect(achievable_rate(q) == want, "X=0 rate at N=" + std::to_string(N));
        c.expect(Rational(static_cast<std::int64_t>(q.L)) / n == want, "X=0 L/N at N=" + std::to_string(N));
      }
  }
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no limit
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "four-server example, rate 1/4", 1, four_server_example},
      {2, "five-server example, rate 2/5 and offsets", 1, five_server_example},
      {3, "rate grid with U and B adversaries", 300, rate_grid},
      {4, "Cauchy-Vandermonde invertibility", 60, matrix_invertibility},
      {5, "exhaustive adversary placements", 300, adversary_exhaustion},
      {6, "exact security and privacy audits", 120, audits},
      {7, "storage recoverability from X+Kc servers", 0, storage_recoverability},
      {8, "PSDMM products and costs", 120, psdmm_grid},
      {9, "degenerate PIR and MDS-TPIR rates", 0, special_cases},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_s > 0 && secs >= cr.limit_s) {
      if (c.ok) c.detail = "over time limit";
      c.ok = false;
    }
    if (!c.ok) ++failed;
    std::printf("%s criterion %d: %s [%zu checks, %.2f s]%s%s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, c.cases,
                secs, c.detail.empty() ? "" : ": ", c.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
