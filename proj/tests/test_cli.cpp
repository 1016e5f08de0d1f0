#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "cmfiber/fiberengine.hpp"

using namespace cmfiber;
using json = nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string temp_path()
{
    std::string name = "/tmp/cmfiber_test_XXXXXX";
    int fd = mkstemp(name.data());
    if (fd >= 0)
        close(fd);
    return name;
}

RunResult run_cli(const std::string& args)
{
    std::string outfile = temp_path();
    std::string cmd = std::string(CMFIBER_CLI_PATH) + " " + args + " > " + outfile + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(outfile);
    std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::remove(outfile.c_str());
    return {WEXITSTATUS(rc), out};
}

} // namespace

TEST_CASE("fiber subcommand emits the documented JSON schema")
{
    auto r = run_cli("fiber --delta -63 --level 1,9");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["delta"] == -63);
    CHECK(j["delta_k"] == -7);
    CHECK(j["conductor"] == 3);
    CHECK(j["level"] == json::array({1, 9}));
    CHECK(j["curve"] == "x0");
    REQUIRE(j["fiber"].size() == 3);
    CHECK(j["fiber"][0]["kind"] == "rational");
    CHECK(j["fiber"][0]["conductor"] == 3);
    CHECK(j["fiber"][0]["multiplicity"] == 1);
    CHECK(j["fiber"][0]["degree_over_q"] == 4);
    CHECK(j["degree_sum"] == 12);
    CHECK(j["degree_expected"] == 12);

    auto t = run_cli("fiber --delta -63 --level 1,1");
    REQUIRE(t.exit_code == 0);
    json jt = json::parse(t.out);
    REQUIRE(jt["fiber"].size() == 1);
    CHECK(jt["fiber"][0]["kind"] == "rational");
    CHECK(jt["fiber"][0]["conductor"] == 3);
}

TEST_CASE("output is byte-deterministic")
{
    auto a = run_cli("fiber --delta -99 --level 2,12");
    auto b = run_cli("fiber --delta -99 --level 2,12");
    CHECK(a.out == b.out);
    auto va = run_cli("volcano --dk -15 --ell 2 --f0 1 --depth 2 --format json");
    auto vb = run_cli("volcano --dk -15 --ell 2 --f0 1 --depth 2 --format json");
    CHECK(va.out == vb.out);
}

TEST_CASE("exit codes distinguish usage, domain and resource errors")
{
    CHECK(run_cli("fiber --delta -63").exit_code == 1);          // missing level
    CHECK(run_cli("fiber --delta -63 --level 3,4").exit_code == 2); // M does not divide N
    CHECK(run_cli("fiber --delta -12 --level 1,2").exit_code == 2); // Delta_K = -3
    CHECK(run_cli("fiber --delta -6 --level 1,2").exit_code == 2);  // not a discriminant
    CHECK(run_cli("volcano --dk -7 --ell 2 --depth 60").exit_code == 4);
    CHECK(run_cli("nonsense").exit_code == 1);
}

TEST_CASE("x1 fiber through the CLI")
{
    auto r = run_cli("fiber --delta -63 --level 1,9 --curve x1");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    REQUIRE(j["degrees"].size() == 3);
    CHECK(j["degrees"][0]["degree"] == 12);
    CHECK(j["degrees"][1]["degree"] == 24);
    CHECK(j["degrees"][2]["degree"] == 108);
    CHECK(j["degree_sum"] == j["degree_expected"]);
}

TEST_CASE("volcano DOT output")
{
    auto r = run_cli("volcano --dk -15 --ell 2 --f0 1 --depth 1 --format dot");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("graph volcano") != std::string::npos);
    CHECK(r.out.find("L1_1") != std::string::npos);
    CHECK(r.out.find("rank=same") != std::string::npos);
}

TEST_CASE("primitive, oddcm and kwon subcommands")
{
    json j = json::parse(run_cli("primitive --delta -99 --level 1,27").out);
    CHECK(j["dreaded"] == true);
    CHECK(j["degrees"] == json::array({6, 4}));
    CHECK(j["x1_degrees"] == json::array({54, 36}));

    j = json::parse(run_cli("oddcm --level 1,11").out);
    CHECK(j["d_odd_cm"] == 1);
    CHECK(j["corresponding_discriminants"] == json::array({-11}));

    j = json::parse(run_cli("oddcm --level 1,49 --delta -343").out);
    CHECK(j["exists"] == true);
    CHECK(j["primitive_odd_degree"] == 7);

    j = json::parse(run_cli("kwon --delta -63 --ell 3").out);
    CHECK(j["m_ell"] == 2);
    CHECK(j["k_rational_max"] == 2);
    j = json::parse(run_cli("kwon --delta -7 --ell 2").out);
    CHECK(j["k_rational_max"] == "unbounded");
}

TEST_CASE("batch mode emits outputs in input order")
{
    std::string batch = temp_path();
    {
        std::ofstream f(batch);
        f << "fiber --delta -63 --level 1,1\n";
        f << "# comment line\n";
        f << "fiber --delta -7 --level 1,2\n";
    }
    auto r = run_cli("--batch " + batch);
    std::remove(batch.c_str());
    REQUIRE(r.exit_code == 0);
    auto first = r.out.find("\"delta\": -63");
    auto second = r.out.find("\"delta\": -7");
    REQUIRE(first != std::string::npos);
    REQUIRE(second != std::string::npos);
    CHECK(first < second);
}

TEST_CASE("check subcommand reports the disputed appendix entries")
{
    auto r = run_cli("check --suite appendix");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("PASS suite appendix") != std::string::npos);
    CHECK(r.out.find("[disputed] Case 44") != std::string::npos);
}
