#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using nlohmann::json;

namespace {

const std::string fixtures = NCCW_FIXTURE_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = nccw::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name)
{
    return fixtures + "/" + name;
}

}  // namespace

TEST_CASE("cli examples", "[cli]")
{
    SECTION("sixterm on the identity fixture")
    {
        const auto r = run({"sixterm", fixture("id_m1.ncw"), "--seq", "S"});
        CHECK(r.code == 0);
        CHECK(r.out.find("status: pass") != std::string::npos);
    }
    SECTION("kgroups of the doubling cone")
    {
        const auto r = run({"kgroups", fixture("mult2.ncw"), "--seq", "S", "--flavor", "cone", "--json"});
        REQUIRE(r.code == 0);
        const json j = json::parse(r.out);
        CHECK(j["k0"] == json::parse(R"({"rank":0,"torsion":[]})"));
        CHECK(j["k1"] == json::parse(R"({"rank":0,"torsion":[2]})"));
        CHECK(j["status"] == "pass");
    }
    SECTION("check reports infeasible sizes")
    {
        const auto r = run({"check", fixture("bad_feasibility.ncw")});
        CHECK(r.code == 2);
        CHECK(r.err.find("bad_feasibility.ncw:4:23: size_infeasible") != std::string::npos);
    }
}

TEST_CASE("exit codes follow the 0/1/2 contract", "[cli]")
{
    const std::string id = fixture("id_m1.ncw");
    const std::string mult2 = fixture("mult2.ncw");
    struct Case {
        std::vector<std::string> args;
        int code;
    };
    const std::vector<Case> matrix{
        {{"check", id}, 0},
        {{"dim", mult2, "--seq", "S"}, 0},
        {{"kgroups", mult2, "--seq", "S", "--flavor", "cyl"}, 0},
        {{"decompose", mult2, "--seq", "S", "--flavor", "cone"}, 0},
        {{"cells", mult2, "--seq", "S", "--flavor", "cone"}, 0},
        {{"sixterm", mult2, "--seq", "S"}, 0},
        {{"retract", mult2, "--seq", "S", "--grid", "20", "--seed", "3"}, 0},
        {{"--quiet", "sixterm", id, "--seq", "S"}, 0},
        {{"--help"}, 0},
        // Random elements on a coarse grid have a positive residual.
        {{"retract", mult2, "--seq", "S", "--grid", "4", "--t", "0.5", "--max-residual", "0"}, 1},
        {{"check", fixture("bad_feasibility.ncw")}, 2},
        {{"check", fixture("does_not_exist.ncw")}, 2},
        {{"kgroups", mult2, "--seq", "Missing", "--flavor", "cyl"}, 2},
        {{"kgroups", mult2, "--seq", "S"}, 2},
        {{"kgroups", mult2, "--seq", "S", "--flavor", "round"}, 2},
        {{"retract", mult2, "--seq", "S", "--t", "1.5"}, 2},
        {{"retract", mult2, "--seq", "S", "--grid", "1"}, 2},
        {{"frobnicate", id}, 2},
        {{"check", id, "--bogus"}, 2},
        {{}, 2},
    };
    for (const auto& c : matrix) {
        std::string joined;
        for (const auto& a : c.args)
            joined += a + " ";
        INFO(joined);
        CHECK(run(c.args).code == c.code);
    }
}

TEST_CASE("quiet suppresses the report", "[cli]")
{
    const auto r = run({"--quiet", "sixterm", fixture("id_m1.ncw"), "--seq", "S"});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("usage text on unknown subcommands", "[cli]")
{
    const auto r = run({"frobnicate"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
}

TEST_CASE("diagnostics as JSON", "[cli]")
{
    const auto r = run({"--json", "check", fixture("bad_feasibility.ncw")});
    CHECK(r.code == 2);
    const json j = json::parse(r.out);
    CHECK(j["status"] == "error");
    REQUIRE(j["diagnostics"].size() == 1);
    CHECK(j["diagnostics"][0]["line"] == 4);
}

TEST_CASE("json reports are valid and byte-stable", "[cli][property]")
{
    const std::string mult2 = fixture("mult2.ncw");
    const std::vector<std::vector<std::string>> commands{
        {"--json", "check", mult2},
        {"--json", "dim", mult2, "--seq", "S", "--flavor", "cone"},
        {"--json", "kgroups", mult2, "--seq", "S", "--flavor", "cyl"},
        {"--json", "decompose", mult2, "--seq", "S", "--flavor", "cyl"},
        {"--json", "cells", mult2, "--seq", "S", "--flavor", "cyl"},
        {"--json", "sixterm", mult2, "--seq", "S"},
        {"--json", "retract", mult2, "--seq", "S", "--grid", "30", "--seed", "11", "--t", "0,0.3,1"},
    };
    for (const auto& args : commands) {
        INFO(args[1]);
        const auto first = run(args);
        const auto second = run(args);
        CHECK(first.code == 0);
        CHECK(first.out == second.out);
        CHECK_NOTHROW(json::parse(first.out));
        CHECK(json::parse(first.out)["command"]["name"] == args[1]);
    }
    const auto a = run({"--json", "retract", mult2, "--seq", "S", "--grid", "30", "--seed", "11"});
    const auto b = run({"--json", "retract", mult2, "--seq", "S", "--grid", "30", "--seed", "12"});
    CHECK(a.out != b.out);
}
