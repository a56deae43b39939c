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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "nearone/construct.hpp"
#include "nearone/contfrac.hpp"
#include "nearone/errors.hpp"
#include "nearone/harmonic.hpp"
#include "nearone/oracle.hpp"

namespace nearone::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kDigits = 20;

struct RunConfig {
    long precision = kDefaultPrecision;
    unsigned threads = 1;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json ball_json(const Ball& b)
{
    return json{{"lo", b.lo().to_decimal(kDigits, Rounding::down)},
                {"hi", b.hi().to_decimal(kDigits, Rounding::up)},
                {"prec", b.prec()}};
}

std::string ball_text(const Ball& b)
{
    return b.to_string(kDigits);
}

json opt_bool(const std::optional<bool>& v)
{
    return v ? json(*v) : json(nullptr);
}

std::string bool_text(bool v)
{
    return v ? "true" : "false";
}

std::string opt_bool_text(const std::optional<bool>& v)
{
    return v ? bool_text(*v) : "undecided";
}

Congruence parse_congruence(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw UsageError("expected a,b but got '" + text + "'");
    }
    try {
        std::size_t used_a = 0;
        std::size_t used_b = 0;
        const std::string sa = text.substr(0, comma);
        const std::string sb = text.substr(comma + 1);
        const long a = std::stol(sa, &used_a);
        const long b = std::stol(sb, &used_b);
        if (used_a != sa.size() || used_b != sb.size() || b < 1) {
            throw UsageError("bad congruence '" + text + "'");
        }
        return Congruence{((a % b) + b) % b, b};
    } catch (const std::logic_error&) {
        throw UsageError("bad congruence '" + text + "'");
    }
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed)
{
    for (const char* f : allowed) {
        if (cfg.format == f) {
            return;
        }
    }
    throw UsageError("unsupported --format '" + cfg.format + "' for this command");
}

// ---------------------------------------------------------------------------
// convergents

void cmd_convergents(const RunConfig& cfg, std::optional<long> count, bool subseq, std::optional<long> k_max,
                     std::ostream& out)
{
    require_format(cfg, {"table", "json", "csv"});
    if (subseq == count.has_value()) {
        throw UsageError("give exactly one of --count or --subseq");
    }
    if (count) {
        if (*count < 1) {
            throw UsageError("--count must be >= 1");
        }
        const auto cs = e_convergents(static_cast<std::size_t>(*count));
        json rows = json::array();
        if (cfg.format == "csv") {
            out << "i,a,p,q\n";
        }
        for (std::size_t i = 0; i < static_cast<std::size_t>(*count); ++i) {
            const Convergent& c = (*cs)[i];
            if (cfg.format == "table") {
                out << c.index << ' ' << c.a.get_str() << ' ' << c.p.get_str() << '/' << c.q.get_str() << '\n';
            } else if (cfg.format == "csv") {
                out << c.index << ',' << c.a.get_str() << ',' << c.p.get_str() << ',' << c.q.get_str() << '\n';
            } else {
                rows.push_back({{"i", c.index}, {"a", c.a.get_str()}, {"p", c.p.get_str()}, {"q", c.q.get_str()}});
            }
        }
        if (cfg.format == "json") {
            out << json{{"convergents", rows}}.dump(2) << '\n';
        }
        return;
    }
    if (!k_max || *k_max < 0 || *k_max > static_cast<long>(kMaxSubseqIndex)) {
        throw UsageError("--subseq needs --k-max in [0, " + std::to_string(kMaxSubseqIndex) + "]");
    }
    json rows = json::array();
    if (cfg.format == "csv") {
        out << "k,p,q,r_lo,r_hi,sign,p_odd,q_odd,r_in_bounds\n";
    }
    const PrecisionPolicy policy{cfg.precision, PrecisionPolicy{}.max_bits};
    for (long k = 0; k <= *k_max; ++k) {
        const SubseqEntry s = subseq_entry(static_cast<std::size_t>(k), cfg.precision, policy);
        const bool p_odd = mpz_odd_p(s.p.get_mpz_t()) != 0;
        const bool q_odd = mpz_odd_p(s.q.get_mpz_t()) != 0;
        const auto lo_ok = greater(s.r, Rat::reduce(1, 2 * k + 4));
        const auto hi_ok = less(s.r, Rat::reduce(1, 2 * k + 2));
        std::optional<bool> in_bounds;
        if (lo_ok.has_value() && hi_ok.has_value()) {
            in_bounds = lo_ok.value() && hi_ok.value();
        }
        const std::string lo = s.r.lo().to_decimal(kDigits, Rounding::down);
        const std::string hi = s.r.hi().to_decimal(kDigits, Rounding::up);
        if (cfg.format == "table") {
            out << k << ' ' << s.p.get_str() << '/' << s.q.get_str() << " r=" << ball_text(s.r)
                << " sign=" << s.sign << " p_odd=" << bool_text(p_odd) << " q_odd=" << bool_text(q_odd)
                << " r_in_bounds=" << opt_bool_text(in_bounds) << '\n';
        } else if (cfg.format == "csv") {
            out << k << ',' << s.p.get_str() << ',' << s.q.get_str() << ',' << lo << ',' << hi << ',' << s.sign
                << ',' << bool_text(p_odd) << ',' << bool_text(q_odd) << ',' << opt_bool_text(in_bounds) << '\n';
        } else {
            rows.push_back({{"k", k},
                            {"p", s.p.get_str()},
                            {"q", s.q.get_str()},
                            {"r", ball_json(s.r)},
                            {"sign", s.sign},
                            {"p_odd", p_odd},
                            {"q_odd", q_odd},
                            {"r_in_bounds", opt_bool(in_bounds)}});
        }
    }
    if (cfg.format == "json") {
        out << json{{"subsequence", rows}}.dump(2) << '\n';
    }
}

// ---------------------------------------------------------------------------
// construct

json pair_json(const CandidatePair& c)
{
    return json{{"k", c.k},
                {"d", c.d.get_str()},
                {"m", c.m.get_str()},
                {"n", c.n.get_str()},
                {"y", ball_json(c.y)},
                {"eps", ball_json(c.eps)},
                {"eps_exact", c.eps_exact ? json(c.eps_exact->to_string()) : json(nullptr)},
                {"eps_positive", c.eps_positive},
                {"quality", ball_json(c.quality)},
                {"scaled_quality", ball_json(c.scaled_quality)},
                {"bound_ok", opt_bool(c.bound_ok)}};
}

void pair_text(std::ostream& out, const CandidatePair& c)
{
    out << "k=" << c.k << " d=" << c.d.get_str() << " m=" << c.m.get_str() << " n=" << c.n.get_str() << '\n'
        << "  eps=" << ball_text(c.eps) << (c.eps_exact ? " exact=" + c.eps_exact->to_string() : "") << '\n'
        << "  quality=" << ball_text(c.quality) << '\n'
        << "  scaled_quality=" << ball_text(c.scaled_quality) << '\n'
        << "  y=" << ball_text(c.y) << '\n'
        << "  eps_positive=" << bool_text(c.eps_positive) << " bound_ok=" << opt_bool_text(c.bound_ok) << '\n';
}

void cmd_construct(const RunConfig& cfg, long k, std::optional<std::string> d_text, std::optional<long> window,
                   const std::string& center, std::ostream& out)
{
    require_format(cfg, {"json", "table"});
    if (k < 0 || k % 2 != 0) {
        throw UsageError("--k must be even and >= 0");
    }
    const PrecisionPolicy policy{cfg.precision, PrecisionPolicy{}.max_bits};
    if (window) {
        if (d_text) {
            throw UsageError("--d and --window are exclusive");
        }
        if (*window < 0 || k < 2) {
            throw UsageError("--window needs W >= 0 and --k >= 2");
        }
        WindowCenter wc = WindowCenter::d_star;
        if (center == "d-star-plus-2") {
            wc = WindowCenter::d_star_plus_2;
        } else if (center != "d-star") {
            throw UsageError("--center must be d-star or d-star-plus-2");
        }
        const JointSearchResult r = joint_search(k, *window, cfg.precision, wc, cfg.threads);
        if (cfg.format == "json") {
            json rows = json::array();
            for (const auto& c : r.pairs) {
                rows.push_back(pair_json(c));
            }
            out << json{{"k_max", k}, {"window", *window}, {"center", center}, {"skipped", r.skipped},
                        {"pairs", rows}}
                       .dump(2)
                << '\n';
        } else {
            for (const auto& c : r.pairs) {
                pair_text(out, c);
            }
            out << "skipped=" << r.skipped << '\n';
        }
        return;
    }
    BigInt d;
    if (d_text) {
        if (d.set_str(*d_text, 10) != 0 || d < 1 || mpz_even_p(d.get_mpz_t())) {
            throw UsageError("--d must be an odd positive integer");
        }
    } else {
        d = choose_d(k, policy);
    }
    const CandidatePair c = certify(k, d, cfg.precision, policy);
    const Ball ds = d_star(k, cfg.precision, policy);
    if (cfg.format == "json") {
        json j = pair_json(c);
        j["d_star"] = ball_json(ds);
        j["d_chosen"] = !d_text.has_value();
        out << j.dump(2) << '\n';
    } else {
        pair_text(out, c);
        out << "  d_star=" << ball_text(ds) << '\n';
    }
}

// ---------------------------------------------------------------------------
// scan

void cmd_scan(const RunConfig& cfg, long n_max, std::optional<std::string> checkpoint, std::optional<long> stop_after,
              std::optional<std::string> profile_delta, const std::string& scale, std::ostream& out)
{
    require_format(cfg, {"csv", "json"});
    if (n_max < 2 || n_max > kMaxScanHorizon) {
        throw UsageError("--n-max must lie in [2, " + std::to_string(kMaxScanHorizon) + "]");
    }
    ScanOptions opt;
    opt.threads = cfg.threads;
    opt.checkpoint_path = checkpoint;
    opt.stop_after = stop_after;
    opt.threshold_scale = parse_rat(scale);
    if (opt.threshold_scale.sign() <= 0) {
        throw UsageError("--threshold-scale must be positive");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const RecordTable table = scan_records(n_max, opt);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (profile_delta) {
        const Rat delta = parse_rat(*profile_delta);
        if (delta.sign() < 0) {
            throw UsageError("--profile-delta must be >= 0");
        }
        const auto prof = record_profile(table, delta, cfg.precision);
        if (cfg.format == "csv") {
            out << "n,lo,hi\n";
            for (std::size_t i = 0; i < prof.size(); ++i) {
                out << table.records[i].rec.n.get_str() << ',' << prof[i].lo().to_decimal(kDigits, Rounding::down)
                    << ',' << prof[i].hi().to_decimal(kDigits, Rounding::up) << '\n';
            }
        } else {
            json rows = json::array();
            for (std::size_t i = 0; i < prof.size(); ++i) {
                rows.push_back({{"n", table.records[i].rec.n.get_str()}, {"value", ball_json(prof[i])}});
            }
            out << json{{"delta", delta.to_string()}, {"profile", rows}}.dump(2) << '\n';
        }
        return;
    }
    if (cfg.format == "csv") {
        write_csv(out, table);
    } else {
        write_json(out, table, wall);
    }
}

// ---------------------------------------------------------------------------
// count

void cmd_count(const RunConfig& cfg, const std::string& p_text, const std::string& q_text, const std::string& r_text,
               const std::string& delta_text, long n_max, long a, long b, const std::string& method,
               const std::string& mult_text, const std::string& eta_text, std::ostream& out)
{
    require_format(cfg, {"json", "table"});
    BigInt p;
    BigInt q;
    if (p.set_str(p_text, 10) != 0 || q.set_str(q_text, 10) != 0 || q < 1) {
        throw UsageError("--p and --q must be integers with q >= 1");
    }
    const Rat r = parse_rat(r_text);
    const Rat delta = parse_rat(delta_text);
    const Rat mult = parse_rat(mult_text);
    const Rat eta = parse_rat(eta_text);
    if (!(delta > Rat(0) && delta < Rat::reduce(1, 2))) {
        throw UsageError("--delta must lie in (0, 1/2)");
    }
    if (n_max < 1 || b < 1) {
        throw UsageError("--n-max and --b must be >= 1");
    }
    std::vector<CountMethod> methods;
    if (method == "table" || method == "both") {
        methods.push_back(CountMethod::table);
    }
    if (method == "direct" || method == "both") {
        methods.push_back(CountMethod::direct);
    }
    if (methods.empty()) {
        throw UsageError("--method must be table, direct or both");
    }
    std::vector<CountReport> reps;
    for (auto m : methods) {
        reps.push_back(count_quadratic(p, q, r, delta, n_max, a, b, m, eta));
    }
    const CountReport& rep = reps.front();
    std::optional<bool> agree;
    if (reps.size() == 2) {
        agree = reps[0].count == reps[1].count && reps[0].ties == reps[1].ties;
    }
    const bool within = rep.within(mult);
    if (cfg.format == "json") {
        json j{{"p", rep.p.get_str()},
               {"q", rep.q.get_str()},
               {"r", rep.r.to_string()},
               {"delta", rep.delta.to_string()},
               {"n_max", rep.N},
               {"a", rep.a},
               {"b", rep.b},
               {"method", method},
               {"count", rep.count},
               {"ties", rep.ties},
               {"main_term", rep.main_term.to_string()},
               {"eta", rep.eta.to_string()},
               {"error_term", ball_json(rep.error_term)},
               {"multiplier", mult.to_string()},
               {"within", within}};
        if (agree) {
            j["methods_agree"] = *agree;
        }
        out << j.dump(2) << '\n';
    } else {
        out << "count=" << rep.count << " ties=" << rep.ties << " main_term=" << rep.main_term.to_string()
            << " error_term=" << ball_text(rep.error_term) << " within=" << bool_text(within);
        if (agree) {
            out << " methods_agree=" << bool_text(*agree);
        }
        out << '\n';
    }
    if (agree && !*agree) {
        throw std::logic_error("table and direct counts differ");
    }
}

// ---------------------------------------------------------------------------
// approx

AlphaSource alpha_source(const std::string& text)
{
    if (text == "3-over-sinh1") {
        return [](long prec) { return Constants::at(prec).alpha; };
    }
    if (text == "e") {
        return [](long prec) { return const_e(prec); };
    }
    const Rat v = parse_rat(text);
    return [v](long prec) { return Ball(v, prec); };
}

void cmd_approx(const RunConfig& cfg, const std::string& alpha_text, const std::string& exponent_text, long n_max,
                std::optional<std::string> n_mod, std::optional<std::string> m_mod, std::ostream& out)
{
    require_format(cfg, {"json", "csv", "table"});
    const AlphaSource alpha = alpha_source(alpha_text);
    const Rat exponent = parse_rat(exponent_text);
    if (n_max < 1) {
        throw UsageError("--n-max must be >= 1");
    }
    const Congruence nc = n_mod ? parse_congruence(*n_mod) : Congruence{};
    const Congruence mc = m_mod ? parse_congruence(*m_mod) : Congruence{};
    const PrecisionPolicy policy{cfg.precision, PrecisionPolicy{}.max_bits};
    const MOverNSqResult r = search_m_over_nsq(alpha, exponent, n_max, nc, mc, policy);
    std::vector<bool> verified;
    for (const auto& [m, n] : r.pairs) {
        const auto ok = m_over_nsq_accepts(alpha(2 * cfg.precision), exponent, m, n, 2 * cfg.precision);
        verified.push_back(ok.value_or(false));
    }
    if (cfg.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            rows.push_back({{"m", r.pairs[i].first.get_str()},
                            {"n", r.pairs[i].second.get_str()},
                            {"reverified", static_cast<bool>(verified[i])}});
        }
        out << json{{"alpha", alpha_text},
                    {"exponent", exponent.to_string()},
                    {"n_max", n_max},
                    {"n_mod", {nc.a, nc.b}},
                    {"m_mod", {mc.a, mc.b}},
                    {"skipped", r.skipped},
                    {"pairs", rows}}
                       .dump(2)
            << '\n';
    } else {
        out << (cfg.format == "csv" ? "m,n,reverified\n" : "");
        const char sep = cfg.format == "csv" ? ',' : ' ';
        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
            out << r.pairs[i].first.get_str() << sep << r.pairs[i].second.get_str() << sep
                << bool_text(verified[i]) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// et

int cmd_et(const RunConfig& cfg, long trials, long n_max, long l_max, std::ostream& out)
{
    require_format(cfg, {"table", "json"});
    if (trials < 1 || n_max < 1 || l_max < 1) {
        throw UsageError("--trials, --n-max and --l-max must be >= 1");
    }
    const PrecisionPolicy policy{cfg.precision, PrecisionPolicy{}.max_bits};
    const auto inst = et_instances(cfg.seed, trials, n_max, l_max);
    long held = 0;
    json rows = json::array();
    for (const auto& in : inst) {
        const ETReport r = et_check(PointSet(in.points), in.a, in.b, in.L, cfg.precision, policy);
        held += r.holds ? 1 : 0;
        if (cfg.format == "json") {
            rows.push_back({{"points", in.points.size()},
                            {"a", in.a.to_string()},
                            {"b", in.b.to_string()},
                            {"L", in.L},
                            {"count", r.count},
                            {"lhs", r.lhs.to_string()},
                            {"rhs", ball_json(r.rhs)},
                            {"holds", r.holds}});
        }
    }
    if (cfg.format == "json") {
        out << json{{"seed", cfg.seed}, {"trials", trials}, {"held", held}, {"instances", rows}}.dump(2) << '\n';
    } else {
        out << held << '/' << trials << " hold\n";
    }
    return held == trials ? kOk : 1;
}

} // namespace

long default_precision()
{
    if (const char* env = std::getenv("NEARONE_PRECISION")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= kMinPrecision) {
            return v;
        }
    }
    return kDefaultPrecision;
}

Rat parse_rat(const std::string& text)
{
    auto fail = [&]() -> Rat { throw UsageError("not a rational number: '" + text + "'"); };
    if (text.empty()) {
        return fail();
    }
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt p;
        BigInt q;
        if (p.set_str(text.substr(0, slash), 10) != 0 || q.set_str(text.substr(slash + 1), 10) != 0 || q == 0) {
            return fail();
        }
        return Rat::reduce(p, q);
    }
    std::string s = text;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    const auto dot = s.find('.');
    std::string digits = s;
    std::size_t frac_len = 0;
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        frac_len = s.size() - dot - 1;
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        return fail();
    }
    BigInt num(digits, 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_len));
    return Rat::reduce(neg ? BigInt(-num) : num, den);
}

std::vector<EtInstance> et_instances(std::uint64_t seed, long trials, long n_max, long l_max)
{
    std::mt19937_64 rng(seed);
    std::vector<EtInstance> res;
    res.reserve(static_cast<std::size_t>(trials));
    for (long t = 0; t < trials; ++t) {
        EtInstance in;
        const long n = std::uniform_int_distribution<long>(1, n_max)(rng);
        in.L = std::uniform_int_distribution<long>(1, l_max)(rng);
        const long den = std::uniform_int_distribution<long>(2, 5000)(rng);
        std::uniform_int_distribution<long> num(0, den - 1);
        for (long i = 0; i < n; ++i) {
            in.points.push_back(Rat::reduce(num(rng), den));
        }
        const long ia = std::uniform_int_distribution<long>(0, 999)(rng);
        const long ib = std::uniform_int_distribution<long>(ia + 1, ia + 999)(rng);
        in.a = Rat::reduce(ia, 1000);
        in.b = Rat::reduce(ib, 1000);
        res.push_back(std::move(in));
    }
    return res;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    cfg.precision = default_precision();
    cfg.threads = std::max(1U, std::thread::hardware_concurrency());

    CLI::App app{"Near-one harmonic sums: convergents, constructions, scans and checks", "nearone"};
    app.set_version_flag("--version", std::string(NEARONE_VERSION));
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    app.add_option("--precision", cfg.precision, "working precision in bits (env NEARONE_PRECISION)")
        ->check(CLI::Range(kMinPrecision, 1L << 20));
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1U, 1024U));
    app.add_option("--format", cfg.format, "json, csv or table (default depends on the command)");
    app.add_option("-o,--output", cfg.output, "write to this file instead of stdout");

    std::optional<long> conv_count;
    bool conv_subseq = false;
    std::optional<long> conv_kmax;
    auto* conv = app.add_subcommand("convergents", "convergents of e, or the p_{3k+2}/q_{3k+2} subsequence");
    conv->add_option("--count", conv_count, "number of convergents");
    conv->add_flag("--subseq", conv_subseq, "list the subsequence with r intervals");
    conv->add_option("--k-max", conv_kmax, "last subsequence index");

    long cons_k = 0;
    std::optional<std::string> cons_d;
    std::optional<long> cons_window;
    std::string cons_center = "d-star";
    auto* cons = app.add_subcommand("construct", "certify the (m, n) pair for an even k");
    cons->add_option("--k", cons_k, "even index")->required();
    cons->add_option("--d", cons_d, "odd multiplier (default: chosen from d*)");
    cons->add_option("--window", cons_window, "joint search over even k' <= k, odd d within W of the center");
    cons->add_option("--center", cons_center, "d-star or d-star-plus-2");

    long scan_n = 0;
    std::optional<std::string> scan_ckpt;
    std::optional<long> scan_stop;
    std::optional<std::string> scan_delta;
    std::string scan_scale = "1";
    auto* scan = app.add_subcommand("scan", "record minima of n^2 eps_n");
    scan->add_option("--n-max", scan_n, "horizon")->required();
    scan->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1U, 1024U));
    scan->add_option("--checkpoint", scan_ckpt, "checkpoint file (resumed when present)");
    scan->add_option("--stop-after", scan_stop, "stop once the scan passes this n");
    scan->add_option("--profile-delta", scan_delta, "emit n^(2+delta) eps_n over the records instead");
    scan->add_option("--threshold-scale", scan_scale, "multiple of tau used by the connection check");

    std::string cnt_p;
    std::string cnt_q;
    std::string cnt_r = "0";
    std::string cnt_delta;
    long cnt_n = 0;
    long cnt_a = 0;
    long cnt_b = 1;
    std::string cnt_method = "table";
    std::string cnt_mult = "10";
    std::string cnt_eta = "1/10";
    auto* cnt = app.add_subcommand("count", "count n <= N, n = a (mod b), with ||p n^2/q - r|| < delta");
    cnt->add_option("--p", cnt_p)->required();
    cnt->add_option("--q", cnt_q)->required();
    cnt->add_option("--r", cnt_r);
    cnt->add_option("--delta", cnt_delta)->required();
    cnt->add_option("--n-max", cnt_n)->required();
    cnt->add_option("--a", cnt_a);
    cnt->add_option("--b", cnt_b);
    cnt->add_option("--method", cnt_method, "table, direct or both");
    cnt->add_option("--multiplier", cnt_mult, "tolerance multiple of the error term");
    cnt->add_option("--eta", cnt_eta);

    std::string ap_alpha = "3-over-sinh1";
    std::string ap_exp;
    long ap_n = 0;
    std::optional<std::string> ap_nmod;
    std::optional<std::string> ap_mmod;
    auto* ap = app.add_subcommand("approx", "pairs with |alpha - m/n^2| < n^-exponent");
    ap->add_option("--alpha", ap_alpha, "3-over-sinh1, e, or a rational");
    ap->add_option("--exponent", ap_exp)->required();
    ap->add_option("--n-max", ap_n)->required();
    ap->add_option("--n-mod", ap_nmod, "a,b: keep n = a (mod b)");
    ap->add_option("--m-mod", ap_mmod, "a,b: keep m = a (mod b)");

    long et_trials = 100;
    long et_n = 1000;
    long et_l = 50;
    auto* et = app.add_subcommand("et", "Erdos-Turan inequality on seeded random point sets");
    et->add_option("--seed", cfg.seed);
    et->add_option("--trials", et_trials);
    et->add_option("--n-max", et_n, "largest point count");
    et->add_option("--l-max", et_l, "largest truncation L");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    std::ostringstream buf;
    if (!cfg.output.empty()) {
        sink = &buf;
    }
    auto fmt = [&](const char* dflt) {
        if (cfg.format.empty()) {
            cfg.format = dflt;
        }
    };
    int code = kOk;
    try {
        if (*conv) {
            fmt("table");
            cmd_convergents(cfg, conv_count, conv_subseq, conv_kmax, *sink);
        } else if (*cons) {
            fmt("json");
            cmd_construct(cfg, cons_k, cons_d, cons_window, cons_center, *sink);
        } else if (*scan) {
            fmt("csv");
            cmd_scan(cfg, scan_n, scan_ckpt, scan_stop, scan_delta, scan_scale, *sink);
        } else if (*cnt) {
            fmt("json");
            cmd_count(cfg, cnt_p, cnt_q, cnt_r, cnt_delta, cnt_n, cnt_a, cnt_b, cnt_method, cnt_mult, cnt_eta,
                      *sink);
        } else if (*ap) {
            fmt("json");
            cmd_approx(cfg, ap_alpha, ap_exp, ap_n, ap_nmod, ap_mmod, *sink);
        } else if (*et) {
            fmt("table");
            code = cmd_et(cfg, et_trials, et_n, et_l, *sink);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IndexError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UndecidableError& e) {
        err << "undecidable: " << e.what() << '\n';
        return kUndecidable;
    } catch (const CapacityError& e) {
        err << "undecidable: " << e.what() << '\n';
        return kUndecidable;
    } catch (const CheckpointError& e) {
        err << "checkpoint: " << e.what() << '\n';
        return kIo;
    } catch (const IoError& e) {
        err << "io: " << e.what() << '\n';
        return kIo;
    }

    if (!cfg.output.empty()) {
        file.open(cfg.output, std::ios::binary | std::ios::trunc);
        if (!file || !(file << buf.str()) || !file.flush()) {
            err << "io: cannot write " << cfg.output << '\n';
            return kIo;
        }
    }
    return code;
}

} // namespace nearone::cli
