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

#include "qd/result.hpp"

#include <cstdlib>

namespace qd {

double round12(double x) { return std::strtod(format_g12(x).c_str(), nullptr); }

ResultDocument::ResultDocument() {
    doc["experiment"] = "";
    doc["options"] = nlohmann::ordered_json::object();
    doc["log"] = nlohmann::ordered_json::array();
    doc["summary"] = nlohmann::ordered_json::object();
    doc["engine"] = nlohmann::ordered_json::object();
}

void ResultDocument::set_experiment(const std::string& name) { doc["experiment"] = name; }

void ResultDocument::set_script_echo(const std::string& text) { doc["script_echo"] = text; }

void ResultDocument::set_options(const nlohmann::ordered_json& options) { doc["options"] = options; }

void ResultDocument::set_engine(const std::string& mode, uint64_t seed, double prune_epsilon) {
    doc["engine"]["version"] = "0.1.0";
    doc["engine"]["mode"] = mode;
    doc["engine"]["seed"] = seed;
    doc["engine"]["prune_epsilon"] = round12(prune_epsilon);
}

void ResultDocument::add_log(const std::vector<ProtocolLogEntry>& entries) {
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["op"] = e.op;
        j["detail"] = e.detail;
        if (e.outcome >= 0) j["outcome"] = e.outcome;
        if (e.probability >= 0.0) j["probability"] = round12(e.probability);
        doc["log"].push_back(std::move(j));
    }
}

std::string ResultDocument::to_json() const { return doc.dump(2) + "\n"; }

namespace {
void flatten(const nlohmann::ordered_json& j, const std::string& prefix, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        int i = 0;
        for (const auto& v : j) flatten(v, prefix + "[" + std::to_string(i++) + "]", out);
    } else if (j.is_number_float()) {
        out += prefix + "," + format_g12(j.get<double>()) + "\n";
    } else if (j.is_number_integer()) {
        out += prefix + "," + std::to_string(j.get<long long>()) + "\n";
    } else if (j.is_string()) {
        out += prefix + "," + j.get<std::string>() + "\n";
    } else if (j.is_boolean()) {
        out += prefix + std::string(",") + (j.get<bool>() ? "true" : "false") + "\n";
    }
}
}  // namespace

std::string ResultDocument::to_csv_summary() const {
    std::string out = "name,value\n";
    flatten(doc.at("summary"), "", out);
    return out;
}

nlohmann::ordered_json distribution_to_json(const FusionDistribution& dist) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [label, p] : dist.channels) j[label] = round12(p);
    return j;
}

}  // namespace qd
