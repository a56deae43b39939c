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

#include "nearone/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "nearone/contfrac.hpp"
#include "parallel.hpp"

#ifndef NEARONE_VERSION
#define NEARONE_VERSION "0.0.0"
#endif

namespace nearone {

namespace {

using u128 = unsigned __int128;
using json = nlohmann::json;

// Sums of floor(2^F/k) and ceil(2^F/k): the true 2^F sum lies in [lo, hi].
struct Accumulator {
    u128 one;
    u128 lo = 0;
    u128 hi = 0;

    explicit Accumulator(int frac_bits) : one(u128(1) << frac_bits) {}

    void add(long k)
    {
        const u128 q = one / static_cast<u128>(k);
        lo += q;
        hi += q + (q * static_cast<u128>(k) != one ? 1 : 0);
    }
    void remove(long k)
    {
        const u128 q = one / static_cast<u128>(k);
        lo -= q;
        hi -= q + (q * static_cast<u128>(k) != one ? 1 : 0);
    }
    double eps_lo(int frac_bits) const { return lo > one ? std::ldexp(static_cast<double>(lo - one), -frac_bits) : 0.0; }
};

struct Candidate {
    long n;
    long t;
    u128 lo;
};

struct BlockResult {
    std::vector<Candidate> candidates; // block-local prefix minima (superset)
    std::vector<long> violations;
    long checked = 0;
    long fallbacks = 0;
};

BigInt to_big(u128 v)
{
    BigInt hi(static_cast<unsigned long>(v >> 64));
    hi <<= 64;
    return hi + BigInt(static_cast<unsigned long>(v));
}

Rat exact_eps(long n, long t)
{
    return hdiff_exact(n, t) - Rat(1);
}

Rat scaled_of(long n, const Rat& eps)
{
    return Rat(BigInt(n) * n) * eps;
}

int frac_bits_for(long n_max)
{
    return 2 * static_cast<int>(bit_length(BigInt(n_max))) + 64;
}

struct Threshold {
    Ball tau;
    double tau_hi;
};

BlockResult process_block(long n0, long n1, int frac_bits, const Threshold& thr)
{
    BlockResult out;
    Accumulator acc(frac_bits);
    long t = crossing_index(n0).get_si();
    for (long k = n0; k <= t; ++k) {
        acc.add(k);
    }
    double best_hi = HUGE_VAL;
    for (long n = n0; n <= n1; ++n) {
        if (n > n0) {
            acc.remove(n - 1);
            for (;;) {
                bool reached;
                if (acc.lo >= acc.one) {
                    reached = true;
                } else if (acc.hi < acc.one) {
                    reached = false;
                } else {
                    ++out.fallbacks;
                    reached = hdiff_exact(n, t) >= Rat(1);
                }
                if (reached) {
                    break;
                }
                acc.add(++t);
            }
        }
        const double nn = static_cast<double>(n) * static_cast<double>(n);
        const double s_lo = nn * acc.eps_lo(frac_bits);
        const double s_hi = nn * std::ldexp(static_cast<double>(acc.hi - std::min(acc.hi, acc.one)), -frac_bits);
        // 1e-9 relative slack covers double rounding of both bounds
        if (s_lo <= best_hi * (1 + 1e-9)) {
            out.candidates.push_back({n, t, acc.lo});
            best_hi = std::min(best_hi, s_hi * (1 + 1e-9));
        }
        const double limit = thr.tau_hi * (1.0 - 10.0 / static_cast<double>(n));
        if (limit > 0 && s_lo < limit * (1 + 1e-9)) {
            ++out.checked;
            const BigInt p = 2 * BigInt(t) + 1;
            const BigInt q = 2 * BigInt(n) - 1;
            const BigInt g = gcd(p, q);
            if (!is_convergent(BigInt(p / g), BigInt(q / g))) {
                // Confirm exactly; an undecided comparison counts as below.
                const Rat scaled = scaled_of(n, exact_eps(n, t));
                const Ball bound = mul(thr.tau, Ball(Rat::reduce(n - 10, n), 128), 128);
                if (scaled < bound.hi().to_rat()) {
                    out.violations.push_back(n);
                }
            }
        }
    }
    return out;
}

RecordRow make_row(long n, long t, const Rat& eps)
{
    RecordRow row;
    row.rec.n = n;
    row.rec.t = t;
    row.rec.eps = eps;
    row.rec.scaled = scaled_of(n, eps);
    const BigInt p = 2 * BigInt(t) + 1;
    const BigInt q = 2 * BigInt(n) - 1;
    row.d = gcd(p, q);
    row.reduced_p = p / row.d;
    row.reduced_q = q / row.d;
    row.is_convergent = is_convergent(row.reduced_p, row.reduced_q);
    return row;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

struct ScanState {
    long cursor = 2; // next n to process
    std::vector<RecordRow> records;
    std::vector<long> hits;
    std::vector<long> violations;
    long checked = 0;
    long fallbacks = 0;
};

constexpr const char* kCheckpointFormat = "nearone-scan-checkpoint";

void write_checkpoint(const std::string& path, long n_max, const Rat& scale, const ScanState& st)
{
    json payload;
    payload["format"] = kCheckpointFormat;
    payload["format_version"] = 1;
    payload["n_max"] = n_max;
    payload["threshold_scale"] = scale.to_string();
    payload["cursor_n"] = st.cursor;
    payload["cursor_t"] = crossing_index(st.cursor).get_si();
    json recs = json::array();
    for (const auto& r : st.records) {
        recs.push_back({r.rec.n.get_si(), r.rec.t.get_si()});
    }
    payload["records"] = recs;
    payload["hits"] = st.hits;
    payload["violations"] = st.violations;
    payload["connection_checked"] = st.checked;
    payload["exact_fallbacks"] = st.fallbacks;
    json doc;
    doc["payload"] = payload;
    doc["checksum"] = hex64(fnv1a(payload.dump()));

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw CheckpointError("cannot write checkpoint " + tmp);
        }
        f << doc.dump(1) << '\n';
        if (!f) {
            throw CheckpointError("failed writing checkpoint " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw CheckpointError("cannot move checkpoint into place: " + ec.message());
    }
}

ScanState read_checkpoint(const std::string& path, long n_max, const Rat& scale)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw CheckpointError("cannot read checkpoint " + path);
    }
    ScanState st;
    try {
        const json doc = json::parse(f);
        const json& payload = doc.at("payload");
        if (doc.at("checksum").get<std::string>() != hex64(fnv1a(payload.dump()))) {
            throw CheckpointError("checkpoint checksum mismatch");
        }
        if (payload.at("format").get<std::string>() != kCheckpointFormat || payload.at("format_version").get<int>() != 1) {
            throw CheckpointError("unknown checkpoint format");
        }
        if (payload.at("threshold_scale").get<std::string>() != scale.to_string()) {
            throw CheckpointError("checkpoint was written with a different threshold scale");
        }
        st.cursor = payload.at("cursor_n").get<long>();
        const long cursor_t = payload.at("cursor_t").get<long>();
        if (st.cursor < 2 || st.cursor > n_max + 1) {
            throw CheckpointError("checkpoint cursor " + std::to_string(st.cursor) + " outside [2, " +
                                  std::to_string(n_max + 1) + "]");
        }
        if (crossing_index(st.cursor) != cursor_t) {
            throw CheckpointError("checkpoint cursor (n, t) is not a crossing pair");
        }
        std::optional<Rat> prev;
        for (const json& r : payload.at("records")) {
            const long n = r.at(0).get<long>();
            const long t = r.at(1).get<long>();
            if (n < 2 || n >= st.cursor || t < n) {
                throw CheckpointError("checkpoint record out of range");
            }
            const Rat eps = exact_eps(n, t);
            if (eps.sign() < 0 || eps - Rat::reduce(1, t) >= Rat(0)) {
                throw CheckpointError("checkpoint record (" + std::to_string(n) + ", " + std::to_string(t) +
                                      ") is not a crossing pair");
            }
            RecordRow row = make_row(n, t, eps);
            if (prev && !(row.rec.scaled < *prev)) {
                throw CheckpointError("checkpoint records are not strictly decreasing");
            }
            prev = row.rec.scaled;
            st.records.push_back(std::move(row));
        }
        st.hits = payload.at("hits").get<std::vector<long>>();
        st.violations = payload.at("violations").get<std::vector<long>>();
        st.checked = payload.at("connection_checked").get<long>();
        st.fallbacks = payload.at("exact_fallbacks").get<long>();
    } catch (const CheckpointError&) {
        throw;
    } catch (const std::exception& e) {
        throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
    }
    return st;
}

} // namespace

ConnectionReport convergent_connection(const BigInt& n, const BigInt& m, std::size_t k_cap, long prec)
{
    if (n < 2 || m < n) {
        throw DomainError("convergent_connection needs m >= n >= 2");
    }
    ConnectionReport rep;
    rep.n = n;
    rep.m = m;
    const BigInt p = 2 * m + 1;
    const BigInt q = 2 * n - 1;
    rep.d = gcd(p, q);
    rep.reduced_p = p / rep.d;
    rep.reduced_q = q / rep.d;
    rep.is_convergent = is_convergent(rep.reduced_p, rep.reduced_q, k_cap);
    rep.y = y_of_pair(n, m, prec);
    return rep;
}

Ball legendre_threshold(long prec)
{
    const long w = prec + 16;
    const Ball e = const_e(w);
    const Ball inv_e = div(Ball(1), e, w);
    const Ball num = sub(add(mul(Ball(3), inv_e, w), square(inv_e, w), w), Ball(1), w);
    return div(num, Ball(24), w).with_prec(prec);
}

RecordTable scan_records(long n_max, const ScanOptions& options)
{
    if (n_max < 2) {
        throw DomainError("scan needs n_max >= 2");
    }
    if (n_max > kMaxScanHorizon) {
        throw DomainError("scan horizon above " + std::to_string(kMaxScanHorizon) + " is not supported");
    }
    ScanState st;
    RecordTable table;
    table.n_max = n_max;
    if (options.checkpoint_path && std::filesystem::exists(*options.checkpoint_path)) {
        st = read_checkpoint(*options.checkpoint_path, n_max, options.threshold_scale);
        table.resumed_from = st.cursor;
    }

    const int frac_bits = frac_bits_for(n_max);
    if (options.threshold_scale.sign() <= 0) {
        throw DomainError("threshold scale must be positive");
    }
    const Ball tau = mul(legendre_threshold(), Ball(options.threshold_scale, 128), 128);
    const Threshold thr{tau, tau.hi().to_double() * (1 + 1e-12)};
    const long block = std::max<long>(4096, (n_max + 15) / 16);
    const unsigned threads = detail::resolve_threads(options.threads);

    const u128 one = u128(1) << frac_bits;
    std::optional<Rat> best;
    if (!st.records.empty()) {
        best = st.records.back().rec.scaled;
    }
    while (st.cursor <= n_max) {
        std::vector<std::pair<long, long>> ranges;
        for (unsigned i = 0; i < threads && st.cursor <= n_max; ++i) {
            const long hi = std::min(n_max, st.cursor + block - 1);
            ranges.emplace_back(st.cursor, hi);
            st.cursor = hi + 1;
        }
        std::vector<BlockResult> results(ranges.size());
        detail::parallel_for(ranges.size(), threads, [&](std::size_t i) {
            results[i] = process_block(ranges[i].first, ranges[i].second, frac_bits, thr);
        });
        for (const BlockResult& r : results) {
            for (const Candidate& c : r.candidates) {
                if (best && c.lo > one) {
                    // exact lower bound n^2 (lo - 2^F)/2^F rules most candidates out
                    const Rat lo = Rat(BigInt(c.n) * c.n) * Dyadic(to_big(c.lo - one), -frac_bits).to_rat();
                    if (lo >= *best) {
                        continue;
                    }
                }
                const Rat eps = exact_eps(c.n, c.t);
                if (eps.sign() == 0) {
                    st.hits.push_back(c.n);
                    continue;
                }
                const Rat scaled = scaled_of(c.n, eps);
                if (!best || scaled < *best) {
                    best = scaled;
                    st.records.push_back(make_row(c.n, c.t, eps));
                }
            }
            st.violations.insert(st.violations.end(), r.violations.begin(), r.violations.end());
            st.checked += r.checked;
            st.fallbacks += r.fallbacks;
        }
        if (options.checkpoint_path) {
            write_checkpoint(*options.checkpoint_path, n_max, options.threshold_scale, st);
        }
        if (options.stop_after && st.cursor > *options.stop_after) {
            break;
        }
    }
    table.records = std::move(st.records);
    table.hits = std::move(st.hits);
    table.violations = std::move(st.violations);
    table.connection_checked = st.checked;
    table.exact_fallbacks = st.fallbacks;
    return table;
}

std::vector<Ball> record_profile(const RecordTable& table, const Rat& delta, long prec)
{
    if (delta.sign() < 0) {
        throw DomainError("profile exponent delta must be >= 0");
    }
    std::vector<Ball> out;
    for (const RecordRow& r : table.records) {
        out.push_back(mul(Ball(r.rec.scaled, prec), pow_ball(Ball(r.rec.n, prec), delta, prec), prec));
    }
    return out;
}

void write_csv(std::ostream& out, const RecordTable& table)
{
    out << "n,t,eps_num,eps_den,scaled_num,scaled_den,reduced_p,reduced_q,d,is_convergent\n";
    for (const RecordRow& r : table.records) {
        out << r.rec.n << ',' << r.rec.t << ',' << r.rec.eps.num() << ',' << r.rec.eps.den() << ','
            << r.rec.scaled.num() << ',' << r.rec.scaled.den() << ',' << r.reduced_p << ',' << r.reduced_q << ','
            << r.d << ',' << (r.is_convergent ? "true" : "false") << '\n';
    }
}

void write_json(std::ostream& out, const RecordTable& table, double wall_seconds)
{
    nlohmann::ordered_json doc;
    doc["horizon"] = table.n_max;
    doc["version"] = NEARONE_VERSION;
    doc["wall_time_seconds"] = wall_seconds;
    auto recs = nlohmann::ordered_json::array();
    for (const RecordRow& r : table.records) {
        nlohmann::ordered_json row;
        row["n"] = r.rec.n.get_str();
        row["t"] = r.rec.t.get_str();
        row["eps_num"] = r.rec.eps.num().get_str();
        row["eps_den"] = r.rec.eps.den().get_str();
        row["scaled_num"] = r.rec.scaled.num().get_str();
        row["scaled_den"] = r.rec.scaled.den().get_str();
        row["reduced_p"] = r.reduced_p.get_str();
        row["reduced_q"] = r.reduced_q.get_str();
        row["d"] = r.d.get_str();
        row["is_convergent"] = r.is_convergent;
        recs.push_back(row);
    }
    doc["records"] = recs;
    doc["hits"] = table.hits;
    doc["violations"] = table.violations;
    doc["connection_checked"] = table.connection_checked;
    doc["exact_fallbacks"] = table.exact_fallbacks;
    out << doc.dump(2) << '\n';
}

} // namespace nearone
