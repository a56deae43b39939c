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

#ifndef NEARONE_ORACLE_HPP
#define NEARONE_ORACLE_HPP

// Exhaustive scan of eps_n = sum_{k=n}^{t(n)} 1/k - 1 for n <= n_max:
// record minima of n^2 eps_n and the check that small values come from
// convergents of e.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nearone/exactnum.hpp"
#include "nearone/harmonic.hpp"

namespace nearone {

struct ConnectionReport {
    BigInt n;
    BigInt m;
    BigInt reduced_p; // (2m+1)/d
    BigInt reduced_q; // (2n-1)/d
    BigInt d;         // gcd(2m+1, 2n-1)
    bool is_convergent = false;
    Ball y;
};

/// Reduces (2m+1)/(2n-1), tests it against convergents of e with index
/// <= k_cap, and encloses y = n (m - e n + (1+e)/2).
ConnectionReport convergent_connection(const BigInt& n, const BigInt& m, std::size_t k_cap = 9002,
                                       long prec = kDefaultPrecision);

/// tau = (3/e + e^-2 - 1)/24: n^2 eps = tau at y = 1/8 to second order, so
/// n^2 eps_n < tau forces |y| < 1/8 asymptotically.
Ball legendre_threshold(long prec = kDefaultPrecision);

struct RecordRow {
    EpsilonRecord rec;
    BigInt reduced_p;
    BigInt reduced_q;
    BigInt d;
    bool is_convergent = false;
};

struct RecordTable {
    long n_max = 0;
    std::vector<RecordRow> records; // strictly decreasing scaled
    std::vector<long> hits;         // eps_n = 0 exactly
    std::vector<long> violations;   // below the threshold but not a convergent
    long connection_checked = 0;    // n tested for the connection property
    long exact_fallbacks = 0;       // crossing decisions settled exactly
    long resumed_from = 0;          // 0 when not resumed
};

struct ScanOptions {
    unsigned threads = 1;
    std::optional<std::string> checkpoint_path;
    /// Stop (after writing the checkpoint) once the cursor passes this n.
    std::optional<long> stop_after;
    /// Multiplies the connection threshold; 1 is the derived tau.
    Rat threshold_scale{1};
};

/// Largest horizon the 128-bit screening accumulator supports.
inline constexpr long kMaxScanHorizon = 100'000'000;

/// Records of n^2 eps_n over 2 <= n <= n_max. Throws CheckpointError for an
/// unreadable or inconsistent checkpoint.
RecordTable scan_records(long n_max, const ScanOptions& options = {});

/// n^(2 + delta) eps_n for each record, delta >= 0.
std::vector<Ball> record_profile(const RecordTable& table, const Rat& delta, long prec = kDefaultPrecision);

void write_csv(std::ostream& out, const RecordTable& table);
/// CSV fields plus horizon, version and wall time.
void write_json(std::ostream& out, const RecordTable& table, double wall_seconds);

} // namespace nearone

#endif
