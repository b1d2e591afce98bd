// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"

using moore::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    args.insert(args.begin(), "moore_cavity");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("missing required flag prints usage and exits 2", "[cli]")
{
    const Result r = call({"profile"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("--t"));
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("Usage"));
    CHECK(call({}).code == 2);
    CHECK(call({"phase", "--no-such-flag"}).code == 2);
    CHECK(call({"phase", "--method", "fast"}).code == 2);
}

TEST_CASE("superluminal mirror is rejected by name", "[cli]")
{
    const Result r = call({"phase", "--q", "4", "--epsilon", "0.1"});
    CHECK(r.code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("epsilon*q*pi < 1"));
}

TEST_CASE("default verify passes", "[cli]")
{
    const Result r = call({"verify"});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("# failed=0"));
    CHECK_THAT(r.out, !Catch::Matchers::ContainsSubstring(",fail"));
}

TEST_CASE("static phase column equals t", "[cli]")
{
    const Result r = call({"phase", "--epsilon", "0", "--samples", "11", "--t-end", "10"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 1 + 1 + 11 + 1);
    CHECK(ls[0].rfind("# moore_cavity ", 0) == 0);
    CHECK(ls[1] == "t,R,dR,d2R,d3R,method,in_validity,near_ray");
    for (std::size_t i = 2; i < 13; ++i) {
        const auto cells = split(ls[i]);
        CHECK(std::stod(cells[0]) == std::stod(cells[1]));
    }
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("comment line records params, method and tolerances", "[cli]")
{
    const Result r = call({"phase", "--method", "rg", "--samples", "3", "--tol", "1e-11", "--jmax", "50"});
    const std::string head = lines(r.out)[0];
    for (const char* key : {"0.1.0", "q=4", "epsilon=0.01", "method=rg", "tol=1e-11", "jmax=50", "exclusion_delta=0.001"}) {
        CHECK_THAT(head, Catch::Matchers::ContainsSubstring(key));
    }
}

TEST_CASE("phase reports its distance from exact", "[cli]")
{
    const Result r = call({"phase", "--method", "pert", "--t-start", "80", "--t-end", "100", "--samples", "201"});
    REQUIRE(r.code == 0);
    const std::string last = lines(r.out).back();
    REQUIRE(last.rfind("# max_abs_diff_vs_exact=", 0) == 0);
    CHECK(std::stod(last.substr(last.find('=') + 1)) > 0.1);
}

TEST_CASE("profile has flagged gaps and a peak footer", "[cli]")
{
    const Result r = call({"profile", "--t", "20.4", "--method", "rg"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls[1] == "x,T00,excluded");
    std::size_t excluded = 0;
    for (const auto& l : ls) {
        if (l.size() > 4 && l.substr(l.size() - 2) == ",1") {
            ++excluded;
            CHECK(split(l)[1] == "nan");
        }
    }
    CHECK(excluded > 0);
    std::string footer;
    for (const auto& l : ls) {
        if (l.rfind("# peaks=", 0) == 0) {
            footer = l.substr(8);
        }
    }
    REQUIRE_FALSE(footer.empty());
    CHECK(nlohmann::json::parse(footer)["count"] == 4);
}

TEST_CASE("json output is one object with three keys", "[cli]")
{
    const Result r = call({"timeseries", "--x", "0.5", "--samples", "21", "--t-end", "20", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.size() == 3);
    CHECK(doc["params"]["command"] == "timeseries");
    CHECK(doc["results"]["t"].size() == 21);
    CHECK(doc["results"]["T00"][0].get<double>() == Catch::Approx(-M_PI / 24.0));
    CHECK(doc.contains("diagnostics"));
}

TEST_CASE("identical configs give byte-identical files", "[cli]")
{
    const std::string a = "cli_determinism_a.csv";
    const std::string b = "cli_determinism_b.csv";
    REQUIRE(call({"profile", "--t", "20.4", "--out", a}).code == 0);
    REQUIRE(call({"profile", "--t", "20.4", "--out", b}).code == 0);
    const std::string sa = slurp(a);
    CHECK_FALSE(sa.empty());
    CHECK(sa == slurp(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("config file fills unset flags only", "[cli]")
{
    const std::string path = "cli_test.cfg";
    {
        std::ofstream f(path);
        f << "# comment\nq = 2\nepsilon=0.02\nmethod=rg\n\nsamples=3\n";
    }
    const Result r = call({"phase", "--config", path, "--q", "3"});
    REQUIRE(r.code == 0);
    const std::string head = lines(r.out)[0];
    CHECK_THAT(head, Catch::Matchers::ContainsSubstring("q=3"));
    CHECK_THAT(head, Catch::Matchers::ContainsSubstring("epsilon=0.02"));
    CHECK_THAT(head, Catch::Matchers::ContainsSubstring("method=rg"));
    CHECK(lines(r.out).size() == 6);
    {
        std::ofstream f(path);
        f << "colour=blue\n";
    }
    CHECK(call({"phase", "--config", path}).code == 2);
    std::remove(path.c_str());
    CHECK(call({"phase", "--config", "no_such_file.cfg"}).code == 2);
}

TEST_CASE("numerical failures exit 3", "[cli]")
{
    const Result r = call({"rayleigh", "--a", "100"});
    CHECK(r.code == 3);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("numerical failure"));
}

TEST_CASE("rayleigh writes the three trajectories", "[cli]")
{
    const Result r = call({"rayleigh", "--t-end", "1"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    CHECK(ls[1] == "t,y_pert,y_rg,y_oracle");
    CHECK(split(ls[2])[3] == "0");
    CHECK(split(ls.back())[0].rfind("# ", 0) == 0);
}

TEST_CASE("energy and peaks carry growth fits", "[cli]")
{
    Result r = call({"energy", "--method", "rg", "--samples", "8"});
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("# growth_fit={\"rate\":"));
    r = call({"peaks", "--method", "rg", "--samples", "8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["diagnostics"]["height_fit"]["rate"].get<double>() ==
          Catch::Approx(doc["diagnostics"]["expected_height_rate"].get<double>()).epsilon(0.1));
}
