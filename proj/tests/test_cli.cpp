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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nearone::Rat;
using nearone::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json parsed(const Result& r)
{
    return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("parse_rat")
{
    CHECK(nearone::cli::parse_rat("0.3") == Rat::reduce(3, 10));
    CHECK(nearone::cli::parse_rat("2.25") == Rat::reduce(9, 4));
    CHECK(nearone::cli::parse_rat("-6/4") == Rat::reduce(-3, 2));
    CHECK(nearone::cli::parse_rat("7") == Rat(7));
    CHECK_THROWS(nearone::cli::parse_rat("1e-3"));
    CHECK_THROWS(nearone::cli::parse_rat("1/0"));
    CHECK_THROWS(nearone::cli::parse_rat(""));
}

TEST_CASE("convergents command")
{
    const Result r = call({"convergents", "--count", "8"});
    CHECK(r.code == 0);
    std::string fracs;
    std::istringstream lines(r.out);
    std::string idx;
    std::string a;
    std::string f;
    while (lines >> idx >> a >> f) {
        fracs += f + " ";
    }
    CHECK(fracs == "2/1 3/1 8/3 11/4 19/7 87/32 106/39 193/71 ");

    const Result s = call({"convergents", "--subseq", "--k-max", "3", "--format", "json"});
    CHECK(s.code == 0);
    const auto j = parsed(s);
    REQUIRE(j["subsequence"].size() == 4);
    const char* want[][2] = {{"3", "1"}, {"19", "7"}, {"193", "71"}, {"2721", "1001"}};
    for (int k = 0; k < 4; ++k) {
        CHECK(j["subsequence"][k]["p"] == want[k][0]);
        CHECK(j["subsequence"][k]["q"] == want[k][1]);
        CHECK(j["subsequence"][k]["r_in_bounds"] == true);
        CHECK(j["subsequence"][k]["r"]["lo"].is_string());
    }

    CHECK(call({"convergents", "--count", "0"}).code == 2);
    CHECK(call({"convergents"}).code == 2);
    CHECK(call({"convergents", "--count", "3", "--subseq", "--k-max", "1"}).code == 2);
    CHECK(call({"convergents", "--subseq", "--k-max", "-1"}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("construct command")
{
    const Result r = call({"construct", "--k", "2"});
    REQUIRE(r.code == 0);
    const auto j = parsed(r);
    CHECK(j["d"] == "3");
    CHECK(j["m"] == "289");
    CHECK(j["n"] == "107");
    CHECK(j["eps_positive"] == true);
    CHECK(j["bound_ok"] == true);
    const double qlo = std::stod(j["quality"]["lo"].get<std::string>());
    const double qhi = std::stod(j["quality"]["hi"].get<std::string>());
    CHECK(qlo > 0.0816);
    CHECK(qhi < 0.0818);

    const Result low = call({"construct", "--k", "2", "--d", "1"});
    REQUIRE(low.code == 0);
    const auto jl = parsed(low);
    CHECK(jl["eps_positive"] == false);
    CHECK(jl["bound_ok"] == false);
    CHECK(std::stod(jl["eps"]["hi"].get<std::string>()) < 0);

    CHECK(call({"construct", "--k", "3"}).code == 2);
    CHECK(call({"construct", "--k", "2", "--d", "2"}).code == 2);
    CHECK(call({"construct", "--k", "2", "--d", "3", "--window", "2"}).code == 2);

    const Result w = call({"construct", "--k", "4", "--window", "2"});
    REQUIRE(w.code == 0);
    const auto jw = parsed(w);
    CHECK(jw["pairs"].size() >= 2);
    CHECK(jw["skipped"] == 0);
}

TEST_CASE("scan command")
{
    const Result r = call({"scan", "--n-max", "1000"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("n,t,eps_num,eps_den,scaled_num,scaled_den,reduced_p,reduced_q,d,is_convergent\n"
                      "2,4,1,12,1,3,3,1,3,true\n",
                      0) == 0);

    CHECK(call({"scan", "--n-max", "10", "--threads", "8"}).out == call({"scan", "--n-max", "10", "--threads", "1"}).out);
    CHECK(call({"scan", "--n-max", "1"}).code == 2);

    const Result js = call({"scan", "--n-max", "200", "--format", "json"});
    CHECK(js.code == 0);
    const auto j = parsed(js);
    CHECK(j["horizon"] == 200);
    CHECK(j.contains("version"));
    CHECK(j.contains("wall_time_seconds"));

    const auto dir = std::filesystem::temp_directory_path();
    const std::string bad = (dir / "nearone_cli_bad.json").string();
    {
        std::ofstream f(bad);
        f << "garbage";
    }
    CHECK(call({"scan", "--n-max", "100", "--checkpoint", bad}).code == 4);
    std::filesystem::remove(bad);
    CHECK(call({"scan", "--n-max", "100", "--checkpoint", (dir / "no_such_dir" / "c.json").string()}).code == 4);

    const Result prof = call({"scan", "--n-max", "200", "--profile-delta", "1/10"});
    CHECK(prof.code == 0);
    CHECK(prof.out.rfind("n,lo,hi\n2,", 0) == 0);
}

TEST_CASE("count, approx and et commands")
{
    const Result c = call({"count", "--p", "1", "--q", "2", "--delta", "0.3", "--n-max", "10"});
    REQUIRE(c.code == 0);
    CHECK(parsed(c)["count"] == 5);
    CHECK(call({"count", "--p", "1", "--q", "2", "--delta", "0.5", "--n-max", "10"}).code == 2);
    CHECK(call({"count", "--p", "1", "--q", "2", "--delta", "x", "--n-max", "10"}).code == 2);

    const Result both = call({"count", "--p", "3", "--q", "10007", "--delta", "1/20", "--n-max", "2000", "--method",
                              "both"});
    REQUIRE(both.code == 0);
    CHECK(parsed(both)["methods_agree"] == true);
    CHECK(parsed(both)["within"] == true);

    const Result a = call({"approx", "--alpha", "3-over-sinh1", "--exponent", "2.25", "--n-max", "100", "--n-mod",
                           "1,2", "--m-mod", "3,4"});
    REQUIRE(a.code == 0);
    bool found = false;
    const auto ja = parsed(a);
    for (const auto& p : ja["pairs"]) {
        found = found || (p["m"] == "23" && p["n"] == "3");
        CHECK(p["reverified"] == true);
    }
    CHECK(found);
    CHECK(call({"approx", "--exponent", "2", "--n-max", "10", "--n-mod", "1"}).code == 2);

    const Result e = call({"et", "--seed", "7", "--trials", "100"});
    CHECK(e.code == 0);
    CHECK(e.out == "100/100 hold\n");
    CHECK(call({"et", "--seed", "7", "--trials", "5", "--format", "json"}).out ==
          call({"et", "--seed", "7", "--trials", "5", "--format", "json"}).out);
}

TEST_CASE("precision and output plumbing")
{
    CHECK(call({"--precision", "16", "convergents", "--count", "2"}).code == 2);
    const auto j = parsed(call({"construct", "--k", "2", "--precision", "256"}));
    CHECK(j["d_star"]["prec"] == 256);

    setenv("NEARONE_PRECISION", "192", 1);
    CHECK(nearone::cli::default_precision() == 192);
    setenv("NEARONE_PRECISION", "7", 1);
    CHECK(nearone::cli::default_precision() == nearone::kDefaultPrecision);
    unsetenv("NEARONE_PRECISION");

    const std::string path = (std::filesystem::temp_directory_path() / "nearone_cli_out.txt").string();
    const Result r = call({"convergents", "--count", "3", "-o", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == "1 2 2/1\n2 1 3/1\n3 2 8/3\n");
    std::filesystem::remove(path);
}
