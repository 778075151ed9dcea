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

// JSON and CSV renderings. Field elements are written as decimal residues,
// matrices as arrays of rows, rationals as "n/d" strings ("n" when d = 1).

#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "csapir/audit.hpp"
#include "csapir/psdmm.hpp"
#include "csapir/sim.hpp"

namespace csapir {

std::string format_rational(const Rational& r);

nlohmann::json to_json(const FieldVector& v);
nlohmann::json to_json(const FieldMatrix& m);
nlohmann::json to_json(const ProtocolParams& p);
nlohmann::json to_json(const audit::RateReport& r);
nlohmann::json to_json(const audit::Verdict& v);
nlohmann::json to_json(const sim::SessionTranscript& t);
nlohmann::json to_json(const psdmm::PsdmmParams& p);
nlohmann::json to_json(const psdmm::CostReport& c);
nlohmann::json to_json(const sim::PsdmmTranscript& t);

// Header "K_c,upload,download,prior_download"; prior_download is "inf" when
// unbounded and empty when not applicable.
std::string cost_csv(std::span<const psdmm::CostReport> rows);

}  // namespace csapir
