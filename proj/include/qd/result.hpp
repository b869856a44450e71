// Copyright 2026 The qdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include <json.hpp>

#include "qd/protocols.hpp"

namespace qd {

/// Machine-readable run record. All floating-point values are rounded to 12
/// significant digits on insertion so repeated runs serialize byte-equal.
struct ResultDocument {
    nlohmann::ordered_json doc;

    ResultDocument();

    void set_experiment(const std::string& name);
    void set_script_echo(const std::string& text);
    void set_options(const nlohmann::ordered_json& options);
    void set_engine(const std::string& mode, uint64_t seed, double prune_epsilon);
    void add_log(const std::vector<ProtocolLogEntry>& entries);
    nlohmann::ordered_json& summary() { return doc["summary"]; }

    std::string to_json() const;
    std::string to_csv_summary() const;
};

/// Round-trips a double through the shared 12-significant-digit format.
double round12(double x);

nlohmann::ordered_json distribution_to_json(const FusionDistribution& dist);

}  // namespace qd
