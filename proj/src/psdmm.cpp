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

#include "csapir/psdmm.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace csapir::psdmm {

namespace {

std::string dims(std::size_t a, std::size_t b) { return std::to_string(a) + "x" + std::to_string(b); }

void check_shape(const FieldMatrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ConstraintError(std::string(what) + " is " + dims(m.rows(), m.cols()) + ", expected " + dims(rows, cols));
  }
}

void check_server(std::size_t server, const PsdmmParams& p) {
  if (server < 1 || server > p.N) {
    throw ConstraintError("server id " + std::to_string(server) + " outside [1, " + std::to_string(p.N) + "]");
  }
}

void check_points(const EvaluationPoints& pts, const PsdmmParams& p) {
  if (pts.layers() != p.L || pts.servers() != p.N) {
    throw ConstraintError("evaluation points hold " + dims(pts.layers(), pts.servers()) +
                          " (L x N) but the parameters need " + dims(p.L, p.N));
  }
}

void check_instance(const PsdmmInstance& inst, const PsdmmParams& p) {
  if (inst.a.size() != p.ell) {
    throw ConstraintError("instance holds " + std::to_string(inst.a.size()) + " A blocks, expected ell=" +
                          std::to_string(p.ell));
  }
  if (inst.library.size() != p.M) {
    throw ConstraintError("instance holds " + std::to_string(inst.library.size()) + " library matrices, expected M=" +
                          std::to_string(p.M));
  }
  for (const auto& a : inst.a) check_shape(a, p.lambda, p.chi, "A block");
  for (const auto& b : inst.library) check_shape(b, p.chi, p.mu, "library matrix");
}

FieldMatrix random_matrix(const Field& field, std::size_t rows, std::size_t cols, Rng& rng) {
  return FieldMatrix(field, rows, cols, rng.uniform_vector(field, rows * cols));
}

Rational ratio(std::size_t a, std::size_t b) {
  return Rational(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
}

}  // namespace

PsdmmParams derive_psdmm_params(std::size_t N, std::size_t T, std::size_t XA, std::size_t XB, std::size_t M,
                                std::size_t lambda, std::size_t chi, std::size_t mu, std::size_t Kc) {
  if (N < 1) throw ConstraintError("N must be at least 1");
  if (Kc < 1) throw ConstraintError("K_c must be at least 1");
  if (M < 1) throw ConstraintError("M must be at least 1");
  if (lambda < 1 || chi < 1 || mu < 1) throw ConstraintError("matrix dimensions must be positive");
  const auto n = static_cast<std::int64_t>(N);
  const std::int64_t overhead = XB > 0 ? static_cast<std::int64_t>(XA + XB + T + 2 * Kc) - 2
                                       : static_cast<std::int64_t>(XA + T + Kc) - 1;
  const std::int64_t L = n - overhead;
  if (L < 1) {
    const std::string formula = XB > 0 ? "N - (X_A+X_B+T+2K_c-2)" : "N - (X_A+T+K_c-1)";
    throw InfeasibleParamsError("infeasible parameters: L = " + formula + " = " + std::to_string(L) + " (L < 1)");
  }
  PsdmmParams p;
  p.N = N;
  p.T = T;
  p.XA = XA;
  p.XB = XB;
  p.M = M;
  p.lambda = lambda;
  p.chi = chi;
  p.mu = mu;
  p.Kc = Kc;
  p.L = static_cast<std::size_t>(L);
  p.ell = p.L * Kc;
  return p;
}

Field default_field(const PsdmmParams& p) { return Field(next_prime(p.L + p.N)); }

FieldMatrix PsdmmInstance::concatenated_library() const {
  if (library.empty()) throw ConstraintError("empty library");
  const Field& field = library.front().field();
  const std::size_t chi = library.front().rows();
  const std::size_t mu = library.front().cols();
  FieldMatrix out(field, chi, mu * library.size());
  for (std::size_t m = 0; m < library.size(); ++m) {
    check_shape(library[m], chi, mu, "library matrix");
    for (std::size_t r = 0; r < chi; ++r) {
      for (std::size_t c = 0; c < mu; ++c) out(r, m * mu + c) = library[m](r, c);
    }
  }
  return out;
}

PsdmmInstance random_instance(const Field& field, const PsdmmParams& p, Rng& rng) {
  PsdmmInstance inst;
  for (std::size_t i = 0; i < p.ell; ++i) inst.a.push_back(random_matrix(field, p.lambda, p.chi, rng));
  for (std::size_t m = 0; m < p.M; ++m) inst.library.push_back(random_matrix(field, p.chi, p.mu, rng));
  return inst;
}

ShareNoiseA random_noise_a(const Field& field, const PsdmmParams& p, Rng& rng) {
  ShareNoiseA noise;
  noise.z.resize(p.L);
  for (auto& layer : noise.z) {
    for (std::size_t x = 0; x < p.XA; ++x) layer.push_back(random_matrix(field, p.lambda, p.chi, rng));
  }
  return noise;
}

ShareNoiseB random_noise_b(const Field& field, const PsdmmParams& p, Rng& rng) {
  ShareNoiseB noise;
  noise.z.resize(p.L);
  for (auto& layer : noise.z) {
    for (std::size_t x = 0; x < p.XB; ++x) layer.push_back(random_matrix(field, p.chi, p.M * p.mu, rng));
  }
  return noise;
}

QueryNoise random_query_noise(const Field& field, const PsdmmParams& p, Rng& rng) {
  QueryNoise noise;
  noise.z.resize(p.Kc);
  for (auto& round : noise.z) {
    round.resize(p.L);
    for (auto& layer : round) {
      for (std::size_t t = 0; t < p.T; ++t) layer.push_back(random_matrix(field, p.M * p.mu, p.mu, rng));
    }
  }
  return noise;
}

std::size_t Share::symbol_count() const {
  std::size_t n = 0;
  for (const auto& m : layers) n += m.rows() * m.cols();
  return n;
}

Share share_a_for(std::size_t server, const PsdmmInstance& inst, const ShareNoiseA& noise,
                  const EvaluationPoints& pts, const PsdmmParams& p) {
  check_server(server, p);
  check_points(pts, p);
  check_instance(inst, p);
  if (noise.z.size() != p.L) throw ConstraintError("A noise must have L layers");
  const std::size_t n = server - 1;
  Share s{server, {}};
  for (std::size_t l = 0; l < p.L; ++l) {
    if (noise.z[l].size() != p.XA) throw ConstraintError("A noise must have X_A terms per layer");
    const FieldElement gap = pts.gap(l, n);
    FieldMatrix acc = zero_matrix(pts.field(), p.lambda, p.chi);
    for (std::size_t k = 0; k < p.Kc; ++k) {
      acc = acc + inst.a_block(l, k, p.L) * gap.pow(-static_cast<std::int64_t>(p.Kc - k));
    }
    for (std::size_t x = 0; x < p.XA; ++x) {
      check_shape(noise.z[l][x], p.lambda, p.chi, "A noise");
      acc = acc + noise.z[l][x] * gap.pow(static_cast<std::uint64_t>(x));
    }
    s.layers.push_back(std::move(acc));
  }
  return s;
}

std::vector<Share> share_a(const PsdmmInstance& inst, const ShareNoiseA& noise, const EvaluationPoints& pts,
                           const PsdmmParams& p) {
  std::vector<Share> out;
  for (std::size_t n = 1; n <= p.N; ++n) out.push_back(share_a_for(n, inst, noise, pts, p));
  return out;
}

Share share_b_for(std::size_t server, const PsdmmInstance& inst, const ShareNoiseB& noise,
                  const EvaluationPoints& pts, const PsdmmParams& p) {
  check_server(server, p);
  check_points(pts, p);
  check_instance(inst, p);
  if (noise.z.size() != p.L && p.XB > 0) throw ConstraintError("B noise must have L layers");
  const FieldMatrix b = inst.concatenated_library();
  const std::size_t n = server - 1;
  Share s{server, {}};
  for (std::size_t l = 0; l < p.L; ++l) {
    FieldMatrix acc = b;
    for (std::size_t x = 0; x < p.XB; ++x) {
      if (noise.z[l].size() != p.XB) throw ConstraintError("B noise must have X_B terms per layer");
      check_shape(noise.z[l][x], p.chi, p.M * p.mu, "B noise");
      acc = acc + noise.z[l][x] * pts.gap(l, n).pow(static_cast<std::uint64_t>(p.Kc + x));
    }
    s.layers.push_back(std::move(acc));
  }
  return s;
}

std::vector<Share> share_b(const PsdmmInstance& inst, const ShareNoiseB& noise, const EvaluationPoints& pts,
                           const PsdmmParams& p) {
  std::vector<Share> out;
  for (std::size_t n = 1; n <= p.N; ++n) out.push_back(share_b_for(n, inst, noise, pts, p));
  return out;
}

FieldMatrix selector(const Field& field, std::size_t M, std::size_t mu, std::size_t theta) {
  if (theta < 1 || theta > M) {
    throw ConstraintError("theta=" + std::to_string(theta) + " outside [1, " + std::to_string(M) + "]");
  }
  FieldMatrix q(field, M * mu, mu);
  for (std::size_t i = 0; i < mu; ++i) q((theta - 1) * mu + i, i) = field.one();
  return q;
}

BlockQuery psdmm_query_for(std::size_t server, std::size_t theta, const QueryNoise& noise,
                           const EvaluationPoints& pts, const PsdmmParams& p) {
  check_server(server, p);
  check_points(pts, p);
  const FieldMatrix q_theta = selector(pts.field(), p.M, p.mu, theta);
  if (noise.z.size() != p.Kc) throw ConstraintError("query noise must have K_c rounds");
  const std::size_t n = server - 1;
  BlockQuery bq{server, {}};
  bq.rounds.resize(p.Kc);
  for (std::size_t r = 0; r < p.Kc; ++r) {
    if (noise.z[r].size() != p.L) throw ConstraintError("query noise must have L layers per round");
    for (std::size_t l = 0; l < p.L; ++l) {
      if (noise.z[r][l].size() != p.T) throw ConstraintError("query noise must have T terms per layer");
      const FieldElement gap = pts.gap(l, n);
      FieldMatrix q = q_theta * gap.pow(static_cast<std::uint64_t>(p.Kc - 1 - r));
      for (std::size_t t = 0; t < p.T; ++t) {
        check_shape(noise.z[r][l][t], p.M * p.mu, p.mu, "query noise");
        q = q + noise.z[r][l][t] * gap.pow(static_cast<std::uint64_t>(p.Kc + t));
      }
      bq.rounds[r].push_back(std::move(q));
    }
  }
  return bq;
}

std::vector<BlockQuery> psdmm_query(std::size_t theta, const QueryNoise& noise, const EvaluationPoints& pts,
                                    const PsdmmParams& p) {
  std::vector<BlockQuery> out;
  for (std::size_t n = 1; n <= p.N; ++n) out.push_back(psdmm_query_for(n, theta, noise, pts, p));
  return out;
}

ProductAnswer psdmm_answer(const Share& a_share, const Share& b_share, const BlockQuery& query) {
  if (a_share.server != b_share.server || a_share.server != query.server) {
    throw ConstraintError("psdmm_answer: shares and query belong to different servers");
  }
  if (a_share.layers.empty() || a_share.layers.size() != b_share.layers.size()) {
    throw ConstraintError("psdmm_answer: A and B shares differ in layer count");
  }
  std::vector<FieldMatrix> products;
  products.reserve(a_share.layers.size());
  for (std::size_t l = 0; l < a_share.layers.size(); ++l) products.push_back(a_share.layers[l] * b_share.layers[l]);
  ProductAnswer y{a_share.server, {}};
  for (const auto& round : query.rounds) {
    if (round.size() != products.size()) throw ConstraintError("psdmm_answer: query layer count mismatch");
    FieldMatrix acc = products.front() * round.front();
    for (std::size_t l = 1; l < products.size(); ++l) acc = acc + products[l] * round[l];
    y.rounds.push_back(std::move(acc));
  }
  return y;
}

std::vector<FieldMatrix> psdmm_decode(std::span<const ProductAnswer> answers, const EvaluationPoints& pts,
                                      const PsdmmParams& p) {
  check_points(pts, p);
  if (answers.size() != p.N) {
    throw ConstraintError("psdmm_decode needs all N=" + std::to_string(p.N) + " answers, got " +
                          std::to_string(answers.size()));
  }
  std::vector<const ProductAnswer*> by_server(p.N, nullptr);
  for (const auto& a : answers) {
    check_server(a.server, p);
    if (by_server[a.server - 1] != nullptr) throw ConstraintError("duplicate answer from server " + std::to_string(a.server));
    if (a.rounds.size() != p.Kc) throw ConstraintError("answer must carry K_c matrices");
    for (const auto& m : a.rounds) check_shape(m, p.lambda, p.mu, "answer matrix");
    by_server[a.server - 1] = &a;
  }
  std::vector<std::size_t> rows(p.N);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const DecodingMatrix dm = build_decoding_matrix(pts, rows, p.L, p.code_width());
  const FieldMatrix inverse = invert(dm.matrix());
  const Field& field = pts.field();

  std::vector<FieldMatrix> out(p.ell, zero_matrix(field, p.lambda, p.mu));
  for (std::size_t i = 0; i < p.lambda; ++i) {
    for (std::size_t j = 0; j < p.mu; ++j) {
      std::vector<FieldVector> decoded;
      for (std::size_t round = 1; round <= p.Kc; ++round) {
        FieldVector corrected;
        corrected.reserve(p.N);
        for (std::size_t n = 1; n <= p.N; ++n) {
          corrected.push_back(by_server[n - 1]->rounds[round - 1](i, j) - cancellation_term(decoded, pts, round, n));
        }
        const FieldVector coeffs = inverse * corrected;
        FieldVector desired(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(p.L));
        for (std::size_t l = 0; l < p.L; ++l) out[(round - 1) * p.L + l](i, j) = desired[l];
        decoded.push_back(std::move(desired));
      }
    }
  }
  return out;
}

CostReport cost_report(const PsdmmParams& p) {
  CostReport c;
  c.Kc = p.Kc;
  c.regime = p.regime();
  c.upload = ratio(p.N, p.Kc);
  c.download = ratio(p.N, p.L);
  c.prior_applicable = p.XA == 1 && p.T == 1 && p.XB == 0;
  if (c.prior_applicable) {
    if (p.N > p.Kc + 1) c.prior_download = ratio(p.Kc + 1, p.Kc) * ratio(p.N, p.N - (p.Kc + 1));
    c.improves_on_prior = !c.prior_download || c.download < *c.prior_download;
  }
  return c;
}

std::vector<CostReport> cost_hull(std::size_t N, std::size_t XA, std::size_t XB, std::size_t T) {
  std::vector<CostReport> out;
  for (std::size_t kc = 1; kc <= N; ++kc) {
    try {
      out.push_back(cost_report(derive_psdmm_params(N, T, XA, XB, 1, 1, 1, 1, kc)));
    } catch (const InfeasibleParamsError&) {
      break;  // L only shrinks as K_c grows
    }
  }
  return out;
}

Rational measured_upload(std::span<const Share> a_shares, const PsdmmParams& p) {
  std::size_t total = 0;
  for (const auto& s : a_shares) total += s.symbol_count();
  return ratio(total, p.ell * p.lambda * p.chi);
}

Rational measured_download(std::span<const ProductAnswer> answers, const PsdmmParams& p) {
  std::size_t total = 0;
  for (const auto& a : answers) {
    for (const auto& m : a.rounds) total += m.rows() * m.cols();
  }
  return ratio(total, p.ell * p.lambda * p.mu);
}

}  // namespace csapir::psdmm
