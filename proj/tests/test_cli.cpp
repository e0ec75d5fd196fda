// Exercises the installed binary end to end: exit codes, determinism of
// emitted certificates, and the document surface. Paths come from the
// environment (set by CTest).

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cremona/documents.hpp"

using namespace cremona;

namespace {

std::string cli_path() {
    const char* p = std::getenv("CREMONA_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string fixtures_dir() {
    const char* p = std::getenv("CREMONA_FIXTURES");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_file = std::string("cli_out_") + std::to_string(rand()) + ".tmp";
    std::string cmd = cli_path() + " " + args + " > " + out_file + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(out_file.c_str());
    int code = -1;
#ifdef WEXITSTATUS
    if (rc != -1) code = WEXITSTATUS(rc);
#else
    code = rc;
#endif
    return {code, ss.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("equivalence on the flagship fixture") {
    auto res = run("equivalence --input " + fixtures_dir() + "/twisted_cubic.json --seed 42 -o cert_flagship.json");
    REQUIRE(res.exit_code == 0);
    auto report = json::parse(res.out);
    CHECK(report["status"] == "ok");
    CHECK(report["steps"] == 3);

    auto verify = run("verify cert_flagship.json --seed 99");
    CHECK(verify.exit_code == 0);
    CHECK(json::parse(verify.out)["status"] == "ok");
}

TEST_CASE("certificates are byte identical for a fixed seed") {
    auto r1 = run("equivalence --input " + fixtures_dir() + "/twisted_cubic.json --seed 42 -o cert_rerun.json");
    REQUIRE(r1.exit_code == 0);
    auto first = slurp("cert_rerun.json");
    auto r2 = run("equivalence --input " + fixtures_dir() + "/twisted_cubic.json --seed 42 -o cert_rerun.json");
    REQUIRE(r2.exit_code == 0);
    CHECK(first == slurp("cert_rerun.json"));
    // stdout reports match too
    CHECK(r1.out == r2.out);
    std::remove("cert_rerun.json");
}

TEST_CASE("hypothesis violations exit 3") {
    auto res = run("equivalence --input " + fixtures_dir() + "/bad_hypothesis.json");
    CHECK(res.exit_code == 3);
}

TEST_CASE("parse problems exit 2") {
    CHECK(run("equivalence --input no_such_file.json").exit_code == 2);
    {
        std::ofstream bad("bad_input.json");
        bad << "{ not json";
    }
    CHECK(run("equivalence --input bad_input.json").exit_code == 2);
    std::remove("bad_input.json");
    CHECK(run("equivalence").exit_code == 2);  // missing required option
}

TEST_CASE("verification failures exit 4") {
    auto res = run("equivalence --input " + fixtures_dir() + "/twisted_cubic.json --seed 42 -o cert_tamper.json");
    REQUIRE(res.exit_code == 0);
    auto j = json::parse(slurp("cert_tamper.json"));
    int k = j["steps"][0]["k"];
    auto poly = MultiPoly<Fp>::parse(j["steps"][0]["forward"][1].get<std::string>(), 4, 'x', k);
    Expo bump(4, 0);
    bump[0] = std::uint32_t(k);
    j["steps"][0]["forward"][1] = (poly + MultiPoly<Fp>::monomial(4, bump, Fp::one())).to_string('x');
    {
        std::ofstream out("cert_tamper.json");
        out << j.dump(1) << "\n";
    }
    auto verify = run("verify cert_tamper.json");
    CHECK(verify.exit_code == 4);
    auto report = json::parse(verify.out);
    CHECK(report["status"] == "failed");
    CHECK_FALSE(report["failures"].empty());
    std::remove("cert_tamper.json");
}

TEST_CASE("an exhausted degree budget exits 5") {
    // the last step of the flagship chain needs k = 3
    auto res = run("equivalence --input " + fixtures_dir() + "/twisted_cubic.json --kmax 2 -o cert_never.json");
    CHECK(res.exit_code == 5);
    std::remove("cert_never.json");
}

TEST_CASE("rational coefficients end to end") {
    auto res = run("equivalence --input " + fixtures_dir() +
                   "/twisted_cubic.json --rationals --trials 20 --seed 3 -o cert_rat.json");
    REQUIRE(res.exit_code == 0);
    CHECK(json::parse(res.out)["field"] == "rationals");
    auto verify = run("verify cert_rat.json --trials 20");
    CHECK(verify.exit_code == 0);
    std::remove("cert_rat.json");
}

TEST_CASE("linearize fills in the linear target") {
    auto res = run("linearize --input " + fixtures_dir() + "/twisted_cubic.json --seed 5 -o cert_lin.json");
    REQUIRE(res.exit_code == 0);
    auto cert = json::parse(slurp("cert_lin.json"));
    CHECK(cert["input"]["G"][0] == "s0");
    CHECK(cert["input"]["G"][2] == "0");
    std::remove("cert_lin.json");
}

TEST_CASE("obstruct subcommand") {
    auto res = run("obstruct --n 2 --d 6 --mults 2,2,2 --ordinary");
    REQUIRE(res.exit_code == 0);
    auto report = json::parse(res.out);
    CHECK(report["verdict"] == "obstructed");
    CHECK(report["discrepancies"][0] == "0");

    auto weak = run("obstruct --n 2 --d 5 --mults 2 --ordinary");
    CHECK(json::parse(weak.out)["verdict"] == "inconclusive");

    auto flagless = run("obstruct --n 2 --d 6 --mults 2,2");
    CHECK(json::parse(flagless.out)["verdict"] == "inconclusive");  // not certified ordinary

    CHECK(run("obstruct --n 2 --d 1 --mults 2").exit_code == 2);
}

TEST_CASE("examples generate consumable documents") {
    auto res = run("examples nodal-curve --a 5 --seed 7 -o nodal.json");
    REQUIRE(res.exit_code == 0);
    auto doc = parse_input_document(slurp("nodal.json"));
    CHECK(doc.r == 1);
    CHECK(doc.n == 2);
    CHECK(doc.L_text.size() == 3);

    // feeding the plane curve to the chain is refused: n < r + 2
    auto eq = run("equivalence --input nodal.json");
    CHECK(eq.exit_code == 3);
    std::remove("nodal.json");

    auto tc = run("examples twisted-cubic");
    CHECK(tc.exit_code == 0);
    CHECK(json::parse(tc.out)["n"] == 3);

    auto vs = run("examples veronese-surface");
    CHECK(vs.exit_code == 0);
    CHECK(json::parse(vs.out)["r"] == 2);
}

TEST_CASE("environment prime override applies when the document is silent") {
    // strip the field entry from the fixture
    auto doc = json::parse(slurp(fixtures_dir() + "/twisted_cubic.json"));
    doc.erase("field");
    {
        std::ofstream out("nofield.json");
        out << doc.dump(1) << "\n";
    }
    std::string cmd = "CREMONA_PRIME=1000000007 " + cli_path() +
                      " equivalence --input nofield.json --seed 3 -o cert_env.json > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(WEXITSTATUS(rc) == 0);
    auto cert = json::parse(slurp("cert_env.json"));
    CHECK(cert["field"]["prime"] == 1000000007ULL);
    std::remove("nofield.json");
    std::remove("cert_env.json");
}
