// Copyright 2026 The nearone Authors
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

#ifndef NEARONE_TOOLS_CLI_HPP
#define NEARONE_TOOLS_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nearone/counting.hpp"
#include "nearone/exactnum.hpp"

namespace nearone::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kUndecidable = 3,
    kIo = 4,
};

/// Default working precision; NEARONE_PRECISION overrides it.
long default_precision();

/// Accepts "p/q", integers and plain decimals ("0.3", "-2.25").
Rat parse_rat(const std::string& text);

/// Seeded Erdos-Turan instance: rational points, interval [a, b], L.
struct EtInstance {
    std::vector<Rat> points;
    Rat a;
    Rat b;
    long L = 1;
};

std::vector<EtInstance> et_instances(std::uint64_t seed, long trials, long n_max = 1000, long l_max = 50);

/// Runs one command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nearone::cli

#endif
