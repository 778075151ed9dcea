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

#include "csapir/serialize.hpp"

#include <sstream>

namespace csapir {

using nlohmann::json;

namespace {

json matrices(const std::vector<FieldMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

std::string regime_name(psdmm::Regime r) {
  return r == psdmm::Regime::kSecureLibrary ? "secure-library" : "public-library";
}

}  // namespace

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

json to_json(const FieldVector& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(e.value());
  return out;
}

json to_json(const FieldMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r)));
  return out;
}

json to_json(const ProtocolParams& p) {
  return {{"N", p.N}, {"Kc", p.Kc}, {"X", p.X}, {"T", p.T}, {"U", p.U},
          {"B", p.B}, {"K", p.K},   {"L", p.L}, {"ell", p.ell}};
}

json to_json(const audit::RateReport& r) {
  return {{"downloaded", r.downloaded},
          {"retrieved", r.retrieved},
          {"realized", format_rational(r.realized)},
          {"theorem", format_rational(r.theorem)},
          {"prior", format_rational(r.prior)},
          {"matches_theorem", r.matches_theorem}};
}

json to_json(const audit::Verdict& v) {
  return {{"target", audit::to_string(v.target)},
          {"colluding_set", v.colluding},
          {"states_enumerated", v.states_enumerated},
          {"support_size", v.support_size},
          {"pass", v.pass}};
}

json to_json(const sim::SessionTranscript& t) {
  json j;
  j["params"] = to_json(t.params);
  j["q"] = t.q();
  j["points"] = {{"f", to_json(t.points.f())}, {"alpha", to_json(t.points.alpha())}};
  j["seeds"] = {{"master", t.seeds.master},
                {"messages", t.seeds.messages},
                {"storage_noise", t.seeds.storage_noise},
                {"query_noise", t.seeds.query_noise},
                {"corruption", t.seeds.corruption}};
  j["theta"] = t.theta;
  j["adversary"] = {{"unresponsive", t.adversary.unresponsive},
                    {"byzantine", t.adversary.byzantine},
                    {"policy", sim::to_string(t.adversary.policy)},
                    {"seed", t.adversary.seed}};
  json msgs = json::array();
  for (const auto& m : t.messages.messages()) msgs.push_back(to_json(m));
  j["messages"] = msgs;
  json servers = json::array();
  for (std::size_t n = 0; n < t.params.N; ++n) {
    json s;
    s["server"] = n + 1;
    json layers = json::array();
    for (const auto& l : t.storages[n].layers) layers.push_back(to_json(l));
    s["storage"] = layers;
    json rounds = json::array();
    for (const auto& r : t.queries[n].rounds) {
      json ls = json::array();
      for (const auto& q : r) ls.push_back(to_json(q));
      rounds.push_back(ls);
    }
    s["query"] = rounds;
    s["answer"] = t.answers[n] ? to_json(t.answers[n]->symbols) : json(nullptr);
    servers.push_back(s);
  }
  j["servers"] = servers;
  j["outcome"] = sim::to_string(t.outcome);
  if (!t.failure.empty()) j["failure"] = t.failure;
  if (t.decoded) {
    j["decoded"] = to_json(t.decoded->message);
    json rounds = json::array();
    for (const auto& r : t.decoded->rounds) {
      rounds.push_back({{"round", r.round},
                        {"servers", r.servers},
                        {"offsets", to_json(r.offsets)},
                        {"desired", to_json(r.desired)},
                        {"disagreeing", r.disagreeing}});
    }
    j["rounds"] = rounds;
  }
  if (t.rate) j["rate"] = to_json(*t.rate);
  return j;
}

json to_json(const psdmm::PsdmmParams& p) {
  return {{"N", p.N},   {"T", p.T},         {"X_A", p.XA},     {"X_B", p.XB}, {"M", p.M},   {"lambda", p.lambda},
          {"chi", p.chi}, {"mu", p.mu},     {"Kc", p.Kc},      {"L", p.L},    {"ell", p.ell},
          {"regime", regime_name(p.regime())}, {"cost_condition", p.cost_condition_holds()}};
}

json to_json(const psdmm::CostReport& c) {
  json j = {{"Kc", c.Kc},
            {"regime", regime_name(c.regime)},
            {"upload", format_rational(c.upload)},
            {"download", format_rational(c.download)}};
  if (c.prior_applicable) {
    j["prior_download"] = c.prior_download ? format_rational(*c.prior_download) : "inf";
    j["improves_on_prior"] = c.improves_on_prior;
  }
  return j;
}

json to_json(const sim::PsdmmTranscript& t) {
  json j;
  j["params"] = to_json(t.params);
  j["q"] = t.points.field().modulus();
  j["points"] = {{"f", to_json(t.points.f())}, {"alpha", to_json(t.points.alpha())}};
  j["seed"] = t.seeds.master;
  j["theta"] = t.theta;
  j["A"] = matrices(t.instance.a);
  j["library"] = matrices(t.instance.library);
  json servers = json::array();
  for (std::size_t n = 0; n < t.answers.size(); ++n) {
    servers.push_back({{"server", n + 1},
                       {"A_share", matrices(t.a_shares[n].layers)},
                       {"B_share", matrices(t.b_shares[n].layers)},
                       {"answer", matrices(t.answers[n].rounds)}});
  }
  j["servers"] = servers;
  j["decoded"] = matrices(t.decoded);
  j["correct"] = t.correct;
  j["costs"] = to_json(t.costs);
  j["measured_upload"] = format_rational(t.measured_upload);
  j["measured_download"] = format_rational(t.measured_download);
  return j;
}

std::string cost_csv(std::span<const psdmm::CostReport> rows) {
  std::ostringstream os;
  os << "K_c,upload,download,prior_download\n";
  for (const auto& c : rows) {
    os << c.Kc << ',' << format_rational(c.upload) << ',' << format_rational(c.download) << ',';
    if (c.prior_applicable) os << (c.prior_download ? format_rational(*c.prior_download) : "inf");
    os << '\n';
  }
  return os.str();
}

}  // namespace csapir
