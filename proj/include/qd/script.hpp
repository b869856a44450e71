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
#include <vector>

#include "qd/result.hpp"

namespace qd {

/// A parsed protocol script: key-value header followed by an operation list
/// between `begin ops` and `end ops`. `#` starts a comment. The whole script
/// validates before anything executes.
struct ProtocolScript {
    std::string group = "s3";
    int rows = 2, cols = 2;
    Boundary boundary = Boundary::OpenSquare;
    MeasureMode mode = MeasureMode::Branch;
    uint64_t seed = 0;
    double prune_epsilon = 1e-12;

    struct Op {
        int line = 0;
        std::string name;
        std::vector<std::string> args;
    };
    std::vector<Op> ops;
    std::string source_text;

    static ProtocolScript parse(const std::string& text);
};

/// Validates and runs a script, producing the result document (script echo,
/// per-operation log, final stabilizer table).
ResultDocument run_script_text(const std::string& text);

}  // namespace qd
