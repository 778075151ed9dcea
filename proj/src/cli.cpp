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

#include "csapir/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "csapir/audit.hpp"
#include "csapir/psdmm.hpp"
#include "csapir/robust.hpp"
#include "csapir/serialize.hpp"
#include "csapir/sim.hpp"

namespace csapir::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("failed writing '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string scalar(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// Appends config-file values for every flag the command line left out.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const nlohmann::json cfg = read_json(path);
  if (!cfg.is_object()) throw IoError("config '" + path + "' must hold a JSON object");
  const std::vector<std::string> given = args;
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || has_flag(given, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      if (value.empty()) continue;
      args.push_back(flag);
      for (const auto& v : value) args.push_back(scalar(v));
    } else if (!value.is_null()) {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

struct ProtocolFlags {
  std::size_t N = 0, Kc = 1, X = 0, T = 0, U = 0, B = 0, K = 2;
  std::uint64_t q = 0;
  std::uint64_t seed = 1;

  void add(CLI::App* app, bool with_field = true) {
    app->add_option("--N", N, "servers")->required();
    app->add_option("--Kc", Kc, "MDS code dimension");
    app->add_option("--X", X, "storage security level");
    app->add_option("--T", T, "query privacy level");
    app->add_option("--U", U, "unresponsive servers tolerated");
    app->add_option("--B", B, "Byzantine servers tolerated");
    app->add_option("--K", K, "number of messages");
    app->add_option("--seed", seed, "session seed");
    if (with_field) app->add_option("--q", q, "field size override (prime, q >= L+N)");
  }

  ProtocolParams params() const { return derive_params(N, Kc, X, T, U, B, K); }
};

int cmd_retrieve(const ProtocolFlags& f, std::size_t theta, const std::vector<std::size_t>& unresponsive,
                 const std::vector<std::size_t>& byzantine, const std::string& policy, std::uint64_t adversary_seed,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ProtocolParams p = f.params();
  const sim::AdversaryConfig adv{unresponsive, byzantine, sim::parse_policy(policy), adversary_seed};
  sim::SessionOptions so;
  if (f.q != 0) so.q = f.q;
  const sim::SessionTranscript t = sim::run_session(p, adv, theta, f.seed, so);
  out << "params: N=" << p.N << " Kc=" << p.Kc << " X=" << p.X << " T=" << p.T << " U=" << p.U << " B=" << p.B
      << " K=" << p.K << " L=" << p.L << " q=" << t.q() << "\n";
  out << "outcome: " << sim::to_string(t.outcome) << "\n";
  if (t.rate) {
    out << "rate: " << format_rational(t.rate->realized) << " (theorem " << format_rational(t.rate->theorem)
        << ", prior scheme " << format_rational(t.rate->prior) << ")\n";
  }
  if (!out_path.empty()) write_file(out_path, to_json(t).dump(2) + "\n");
  if (t.outcome == sim::Outcome::kRecovered) return kOk;
  err << "error: " << (t.failure.empty() ? "decoded message differs from W_theta" : t.failure) << "\n";
  return kDecodeFailure;
}

struct SweepFlags {
  std::vector<std::size_t> N, Kc{1}, X{0}, T{0}, U{0}, B{0}, K{2};
  std::string mode = "honest";
  std::size_t draws = 50;
  std::vector<std::string> policies{"random", "constant", "replay"};
  std::size_t byzantine_count = 0;
  bool byzantine_count_set = false;
  std::uint64_t seed = 1;
  std::uint64_t q = 0;
};

int cmd_sweep(const SweepFlags& f, const std::string& out_path, std::ostream& out, std::ostream& err) {
  std::vector<sim::GridPoint> grid;
  for (auto n : f.N)
    for (auto kc : f.Kc)
      for (auto x : f.X)
        for (auto t : f.T)
          for (auto u : f.U)
            for (auto b : f.B)
              for (auto k : f.K) grid.push_back({n, kc, x, t, u, b, k});
  sim::SweepOptions so;
  if (f.mode == "honest") {
    so.mode = sim::SweepMode::kHonest;
  } else if (f.mode == "exhaustive") {
    so.mode = sim::SweepMode::kExhaustive;
  } else {
    throw ConstraintError("unknown sweep mode '" + f.mode + "' (honest | exhaustive)");
  }
  so.draws = f.draws;
  so.policies.clear();
  for (const auto& p : f.policies) so.policies.push_back(sim::parse_policy(p));
  so.seed = f.seed;
  if (f.byzantine_count_set) so.byzantine_count = f.byzantine_count;
  if (f.q != 0) so.q = f.q;
  const auto rows = sim::sweep(grid, so);
  std::size_t sessions = 0, passes = 0, silent = 0;
  for (const auto& r : rows) {
    sessions += r.sessions;
    passes += r.passes;
    silent += r.silent;
  }
  emit(out_path, sim::sweep_csv(rows), out);
  err << "sweep: " << rows.size() << " cells, " << sessions << " sessions, " << passes << " passed, "
      << sessions - passes << " failed (" << silent << " wrong outputs)\n";
  return passes == sessions ? kOk : kDecodeFailure;
}

int cmd_audit(const ProtocolFlags& f, const std::string& target, const std::vector<std::size_t>& colluding,
              bool expect_fail, std::uint64_t budget, std::size_t theta, std::size_t theta2,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  const ProtocolParams p = f.params();
  const Field field = f.q != 0 ? checked_field(p, f.q) : default_field(p);
  const EvaluationPoints pts = EvaluationPoints::defaults(field, p.L, p.N);
  audit::AuditConfig cfg{p, colluding, audit::Target::kQueryPrivacy, budget, expect_fail};
  audit::Verdict v;
  if (target == "storage-security" || target == "storage") {
    cfg.target = audit::Target::kStorageSecurity;
    Rng r1(derive_seed(f.seed, SeedRole::kMessages));
    Rng r2(derive_seed(f.seed + 1, SeedRole::kMessages));
    v = audit::audit_storage_security(cfg, pts, random_messages(field, p, r1), random_messages(field, p, r2));
  } else if (target == "query-privacy" || target == "query") {
    v = audit::audit_query_privacy(cfg, pts, theta, theta2);
  } else {
    throw ConstraintError("unknown audit target '" + target + "' (storage-security | query-privacy)");
  }
  const std::string json = to_json(v).dump(2) + "\n";
  emit(out_path, json, out);
  if (!out_path.empty()) out << "verdict: " << (v.pass ? "PASS" : "FAIL") << "\n";
  if (v.pass) {
    if (expect_fail) err << "note: expected-fail mode, but the distributions matched\n";
    return kOk;
  }
  if (expect_fail) {
    err << "FAIL as expected: colluding set of size " << colluding.size() << " exceeds the threshold\n";
    return kOk;
  }
  err << "error: distributions differ for a colluding set within the threshold\n";
  return kDecodeFailure;
}

struct PsdmmFlags {
  std::size_t N = 0, T = 1, XA = 1, XB = 0, M = 2, lambda = 2, chi = 2, mu = 2, Kc = 1, theta = 1;
  std::uint64_t seed = 1;
  std::uint64_t q = 0;
};

int cmd_psdmm(const PsdmmFlags& f, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto p = psdmm::derive_psdmm_params(f.N, f.T, f.XA, f.XB, f.M, f.lambda, f.chi, f.mu, f.Kc);
  std::optional<std::uint64_t> q;
  if (f.q != 0) q = f.q;
  const sim::PsdmmTranscript t = sim::run_psdmm(p, f.theta, f.seed, q);
  out << "params: N=" << p.N << " T=" << p.T << " X_A=" << p.XA << " X_B=" << p.XB << " M=" << p.M
      << " Kc=" << p.Kc << " L=" << p.L << " q=" << t.points.field().modulus() << "\n";
  out << "product: " << (t.correct ? "correct" : "MISMATCH") << "\n";
  out << "upload: " << format_rational(t.costs.upload) << " (measured " << format_rational(t.measured_upload) << ")\n";
  out << "download: " << format_rational(t.costs.download) << " (measured " << format_rational(t.measured_download)
      << ")\n";
  if (t.costs.prior_applicable) {
    out << "prior download: " << (t.costs.prior_download ? format_rational(*t.costs.prior_download) : "inf") << "\n";
  }
  if (!out_path.empty()) write_file(out_path, to_json(t).dump(2) + "\n");
  if (t.correct) return kOk;
  err << "error: decoded product differs from A*B_theta\n";
  return kDecodeFailure;
}

int cmd_rates(const std::string& scheme, std::size_t n_min, std::size_t n_max, const ProtocolFlags& f,
              std::size_t N, std::size_t XA, std::size_t XB, const std::string& out_path, std::ostream& out) {
  if (scheme == "xstpir") {
    std::ostringstream os;
    os << "N,L,rate,prior_rate\n";
    for (std::size_t n = n_min; n <= n_max; ++n) {
      try {
        const ProtocolParams p = derive_params(n, f.Kc, f.X, f.T, f.U, f.B, 1);
        os << n << ',' << p.L << ',' << format_rational(achievable_rate(p)) << ','
           << format_rational(comparison_rate_prior(p)) << '\n';
      } catch (const ConstraintError&) {
        continue;
      }
    }
    emit(out_path, os.str(), out);
  } else if (scheme == "psdmm") {
    if (N == 0) throw ConstraintError("psdmm rates need --N");
    const auto hull = psdmm::cost_hull(N, XA, XB, f.T);
    emit(out_path, cost_csv(hull), out);
  } else {
    throw ConstraintError("unknown scheme '" + scheme + "' (xstpir | psdmm)");
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }

  CLI::App app{"Secure, private retrieval from coded storage and private secure matrix multiplication"};
  app.name("csapir");
  app.require_subcommand(1);
  std::string config, out_path;

  auto* retrieve = app.add_subcommand("retrieve", "run one retrieval session");
  ProtocolFlags rf;
  std::size_t r_theta = 1;
  std::vector<std::size_t> r_unresponsive, r_byzantine;
  std::string r_policy = "random";
  std::uint64_t r_adv_seed = 0;
  rf.add(retrieve);
  retrieve->add_option("--theta", r_theta, "desired message (1-based)");
  retrieve->add_option("--unresponsive", r_unresponsive, "silent servers (1-based)");
  retrieve->add_option("--byzantine", r_byzantine, "corrupting servers (1-based)");
  retrieve->add_option("--policy", r_policy, "corruption policy: random | constant | replay");
  retrieve->add_option("--adversary-seed", r_adv_seed, "seed for corruption draws");
  retrieve->add_option("--out", out_path, "transcript JSON path");
  retrieve->add_option("--config", config, "JSON config");

  auto* sweep = app.add_subcommand("sweep", "run sessions over a parameter grid");
  SweepFlags sf;
  sweep->add_option("--N", sf.N, "server counts")->required();
  sweep->add_option("--Kc", sf.Kc);
  sweep->add_option("--X", sf.X);
  sweep->add_option("--T", sf.T);
  sweep->add_option("--U", sf.U);
  sweep->add_option("--B", sf.B);
  sweep->add_option("--K", sf.K);
  sweep->add_option("--mode", sf.mode, "honest | exhaustive");
  sweep->add_option("--draws", sf.draws, "sessions per cell");
  sweep->add_option("--policy", sf.policies, "corruption policies");
  auto* bc = sweep->add_option("--byzantine-count", sf.byzantine_count, "corrupting servers per placement (default B)");
  sweep->add_option("--seed", sf.seed);
  sweep->add_option("--q", sf.q, "field size override");
  sweep->add_option("--out", out_path, "CSV path");
  sweep->add_option("--config", config, "JSON config");

  auto* audit_cmd = app.add_subcommand("audit", "exact security or privacy audit");
  ProtocolFlags af;
  std::string a_target = "query-privacy";
  std::vector<std::size_t> a_colluding;
  bool a_expect_fail = false;
  std::uint64_t a_budget = 1'000'000;
  std::size_t a_theta = 1, a_theta2 = 2;
  af.add(audit_cmd);
  audit_cmd->add_option("--target", a_target, "storage-security | query-privacy");
  audit_cmd->add_option("--colluding", a_colluding, "colluding servers (1-based)")->required();
  audit_cmd->add_flag("--expect-fail", a_expect_fail, "allow over-threshold sets and treat FAIL as success");
  audit_cmd->add_option("--budget", a_budget, "maximum noise assignments per scenario");
  audit_cmd->add_option("--theta", a_theta);
  audit_cmd->add_option("--theta2", a_theta2);
  audit_cmd->add_option("--out", out_path, "verdict JSON path");
  audit_cmd->add_option("--config", config, "JSON config");

  auto* psdmm_cmd = app.add_subcommand("psdmm", "private secure matrix multiplication demo");
  PsdmmFlags pf;
  psdmm_cmd->add_option("--N", pf.N)->required();
  psdmm_cmd->add_option("--T", pf.T);
  psdmm_cmd->add_option("--XA", pf.XA);
  psdmm_cmd->add_option("--XB", pf.XB);
  psdmm_cmd->add_option("--M", pf.M);
  psdmm_cmd->add_option("--lambda", pf.lambda);
  psdmm_cmd->add_option("--chi", pf.chi);
  psdmm_cmd->add_option("--mu", pf.mu);
  psdmm_cmd->add_option("--Kc", pf.Kc);
  psdmm_cmd->add_option("--theta", pf.theta);
  psdmm_cmd->add_option("--seed", pf.seed);
  psdmm_cmd->add_option("--q", pf.q);
  psdmm_cmd->add_option("--out", out_path, "transcript JSON path");
  psdmm_cmd->add_option("--config", config, "JSON config");

  auto* rates = app.add_subcommand("rates", "rate or cost tables as CSV");
  std::string scheme = "xstpir";
  std::size_t n_min = 4, n_max = 12, rN = 0, rXA = 1, rXB = 0;
  ProtocolFlags rtf;
  rtf.X = 1;
  rtf.T = 1;
  rtf.Kc = 2;
  rates->add_option("--scheme", scheme, "xstpir | psdmm");
  rates->add_option("--N-min", n_min);
  rates->add_option("--N-max", n_max);
  rates->add_option("--N", rN, "server count for the psdmm hull");
  rates->add_option("--Kc", rtf.Kc);
  rates->add_option("--X", rtf.X);
  rates->add_option("--T", rtf.T);
  rates->add_option("--U", rtf.U);
  rates->add_option("--B", rtf.B);
  rates->add_option("--XA", rXA);
  rates->add_option("--XB", rXB);
  rates->add_option("--out", out_path, "CSV path");
  rates->add_option("--config", config, "JSON config");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraint;
  }

  try {
    if (retrieve->parsed()) {
      return cmd_retrieve(rf, r_theta, r_unresponsive, r_byzantine, r_policy, r_adv_seed, out_path, out, err);
    }
    if (sweep->parsed()) {
      sf.byzantine_count_set = bc->count() > 0;
      return cmd_sweep(sf, out_path, out, err);
    }
    if (audit_cmd->parsed()) {
      return cmd_audit(af, a_target, a_colluding, a_expect_fail, a_budget, a_theta, a_theta2, out_path, out, err);
    }
    if (psdmm_cmd->parsed()) return cmd_psdmm(pf, out_path, out, err);
    if (rates->parsed()) return cmd_rates(scheme, n_min, n_max, rtf, rN, rXA, rXB, out_path, out);
  } catch (const audit::BudgetExceededError& e) {
    err << "error: " << e.what() << " (estimate " << e.estimate() << " states)\n";
    return kConstraint;
  } catch (const ConstraintError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraint;
  } catch (const DivisionByZeroError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraint;
  } catch (const robust::DecodingFailure& e) {
    err << "error: " << e.what() << "\n";
    return kDecodeFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
  return kConstraint;
}

}  // namespace csapir::cli
