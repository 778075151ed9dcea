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

// Private secure distributed matrix multiplication: the user obtains
// A_i * B_theta for every block A_i of an X_A-secure batch A, against a
// library B_1..B_M that is X_B-secure (or public when X_B = 0), while theta
// stays T-private.
//
// Each server holds L layered shares. The product of an A-share and a
// B-share has the same shape as retrieval storage with security level
// X_eff = K_c + X_A + X_B - 1 (X_A when X_B = 0), so queries and successive
// decoding are those of the retrieval scheme, applied entry by entry.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "csapir/linalg.hpp"
#include "csapir/random.hpp"
#include "csapir/xstpir.hpp"

namespace csapir::psdmm {

enum class Regime {
  kSecureLibrary,  // X_B > 0
  kPublicLibrary,  // X_B = 0
};

struct PsdmmParams {
  std::size_t N = 0;
  std::size_t T = 0;
  std::size_t XA = 0;
  std::size_t XB = 0;
  std::size_t M = 0;       // library size
  std::size_t lambda = 0;  // A blocks are lambda x chi
  std::size_t chi = 0;
  std::size_t mu = 0;      // library matrices are chi x mu
  std::size_t Kc = 0;
  std::size_t L = 0;
  std::size_t ell = 0;     // number of A blocks, Kc * L

  Regime regime() const noexcept { return XB > 0 ? Regime::kSecureLibrary : Regime::kPublicLibrary; }
  std::size_t effective_x() const noexcept { return XB > 0 ? Kc + XA + XB - 1 : XA; }
  std::size_t interference_dim() const noexcept { return Kc + effective_x() + T - 1; }
  // Unknowns per decoding round; equals N.
  std::size_t code_width() const noexcept { return L + interference_dim(); }
  // chi >= min(lambda, mu) is what makes symbol counts equal entropies for the
  // cost claim; correctness does not depend on it.
  bool cost_condition_holds() const noexcept { return chi >= std::min(lambda, mu); }
};

// X_B > 0: L = N - (X_A+X_B+T+2K_c-2). X_B = 0: L = N - (X_A+T+K_c-1).
// Throws InfeasibleParamsError when L < 1.
PsdmmParams derive_psdmm_params(std::size_t N, std::size_t T, std::size_t XA, std::size_t XB, std::size_t M,
                                std::size_t lambda, std::size_t chi, std::size_t mu, std::size_t Kc);

Field default_field(const PsdmmParams& p);

struct PsdmmInstance {
  std::vector<FieldMatrix> a;        // ell blocks, lambda x chi; A_lk = a[k*L + l]
  std::vector<FieldMatrix> library;  // M matrices, chi x mu

  // [B_1 ... B_M], chi x M*mu.
  FieldMatrix concatenated_library() const;
  const FieldMatrix& a_block(std::size_t l, std::size_t k, std::size_t layers) const { return a[k * layers + l]; }
};

PsdmmInstance random_instance(const Field& field, const PsdmmParams& p, Rng& rng);

// z[l][x] for A (lambda x chi) and B (chi x M*mu); z[round][l][t] for queries (M*mu x mu).
struct ShareNoiseA { std::vector<std::vector<FieldMatrix>> z; };
struct ShareNoiseB { std::vector<std::vector<FieldMatrix>> z; };
struct QueryNoise { std::vector<std::vector<std::vector<FieldMatrix>>> z; };

ShareNoiseA random_noise_a(const Field& field, const PsdmmParams& p, Rng& rng);
ShareNoiseB random_noise_b(const Field& field, const PsdmmParams& p, Rng& rng);
QueryNoise random_query_noise(const Field& field, const PsdmmParams& p, Rng& rng);

struct Share {
  std::size_t server = 0;           // 1-based
  std::vector<FieldMatrix> layers;  // one matrix per layer

  std::size_t symbol_count() const;
};

// A~_nl = sum_k A_lk / (f_l - a_n)^(Kc-k+1) + sum_x (f_l - a_n)^(x-1) Z_lx.
std::vector<Share> share_a(const PsdmmInstance& inst, const ShareNoiseA& noise, const EvaluationPoints& pts,
                           const PsdmmParams& p);
Share share_a_for(std::size_t server, const PsdmmInstance& inst, const ShareNoiseA& noise,
                  const EvaluationPoints& pts, const PsdmmParams& p);

// B~_nl = B + sum_x' (f_l - a_n)^(Kc+x'-1) Z'_lx'; exactly B when X_B = 0.
std::vector<Share> share_b(const PsdmmInstance& inst, const ShareNoiseB& noise, const EvaluationPoints& pts,
                           const PsdmmParams& p);
Share share_b_for(std::size_t server, const PsdmmInstance& inst, const ShareNoiseB& noise,
                  const EvaluationPoints& pts, const PsdmmParams& p);

// Q_theta: M*mu x mu, identity in block theta (1-based), zero elsewhere.
FieldMatrix selector(const Field& field, std::size_t M, std::size_t mu, std::size_t theta);

struct BlockQuery {
  std::size_t server = 0;
  std::vector<std::vector<FieldMatrix>> rounds;  // [round][l], M*mu x mu
};

// Q_nl^(theta,r) = (f_l - a_n)^(Kc-r) Q_theta + sum_t (f_l - a_n)^(Kc+t-1) Z''^r_lt.
std::vector<BlockQuery> psdmm_query(std::size_t theta, const QueryNoise& noise, const EvaluationPoints& pts,
                                    const PsdmmParams& p);
BlockQuery psdmm_query_for(std::size_t server, std::size_t theta, const QueryNoise& noise,
                           const EvaluationPoints& pts, const PsdmmParams& p);

struct ProductAnswer {
  std::size_t server = 0;
  std::vector<FieldMatrix> rounds;  // Y_n: Kc matrices, lambda x mu
};

// Y_nr = sum_l A~_nl B~_nl Q_nl^r.
ProductAnswer psdmm_answer(const Share& a_share, const Share& b_share, const BlockQuery& query);

// Recovers (A_i B_theta) for i = 1..ell in flat order from all N answers.
// One inversion of the N x N decoding matrix is shared by all lambda*mu entries.
std::vector<FieldMatrix> psdmm_decode(std::span<const ProductAnswer> answers, const EvaluationPoints& pts,
                                      const PsdmmParams& p);

struct CostReport {
  std::size_t Kc = 0;
  Regime regime = Regime::kPublicLibrary;
  Rational upload{0};    // N / Kc
  Rational download{0};  // N / L
  // Download of the earlier scheme at X_A = T = 1, X_B = 0 for M -> infinity:
  // ((Kc+1)/Kc) * N / (N - (Kc+1)). Unbounded (nullopt) when N <= Kc+1; absent
  // outside that setting.
  std::optional<Rational> prior_download;
  bool prior_applicable = false;
  bool improves_on_prior = false;  // strictly lower download than prior
};

CostReport cost_report(const PsdmmParams& p);

// Costs for every feasible Kc at the given (N, X_A, X_B, T), ascending Kc.
std::vector<CostReport> cost_hull(std::size_t N, std::size_t XA, std::size_t XB, std::size_t T);

// Upload and download measured from share and answer sizes.
Rational measured_upload(std::span<const Share> a_shares, const PsdmmParams& p);
Rational measured_download(std::span<const ProductAnswer> answers, const PsdmmParams& p);

}  // namespace csapir::psdmm
