// End-to-end tests of the command-line binary. The binary path comes from
// EMERGENCE_CLI_BIN (set by ctest); stdout and the exit code are captured
// through popen.

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "emergence/fixtures.hpp"
#include "emergence/io.hpp"
#include "emergence/measures.hpp"

using namespace emergence;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_bin() {
    if (const char* env = std::getenv("EMERGENCE_CLI_BIN")) return env;
    return "./tools/emergence";  // running from the build directory by hand
}

CliResult run_cli(const std::string& args) {
    const std::string cmd = cli_bin() + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("emergence_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write_fixture(const std::string& name) {
    const fs::path path = temp_dir() / (name + ".json");
    const json j = fixture_is_network(name) ? to_json(fixture_network(name))
                                            : to_json(fixture_tpm(name));
    write_text_file(path.string(), j.dump(2) + "\n");
    return path.string();
}

}  // namespace

TEST_CASE("analyze reports the reference ei values") {
    const CliResult m1 = run_cli("analyze " + write_fixture("m1"));
    REQUIRE(m1.exit_code == 0);
    CHECK(json::parse(m1.out)["ei"].get<double>() == Approx(2.0).margin(1e-9));

    const CliResult flat = run_cli("analyze " + write_fixture("uniform8"));
    CHECK(json::parse(flat.out)["ei"].get<double>() == Approx(0.0).margin(1e-12));

    const CliResult absorbing = run_cli("analyze " + write_fixture("absorbing8"));
    CHECK(json::parse(absorbing.out)["ei"].get<double>() ==
          Approx(0.5435644432).margin(1e-9));
}

TEST_CASE("analyze accepts csv input") {
    const fs::path path = temp_dir() / "m1.csv";
    write_text_file(path.string(), "00,01,10,11\n0,0,1,0\n1,0,0,0\n0,0,0,1\n0,1,0,0\n");
    const CliResult r = run_cli("analyze " + path.string());
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["ei"].get<double>() == Approx(2.0).margin(1e-9));
}

TEST_CASE("identical invocations produce byte-identical output") {
    const std::string path = write_fixture("coding4");
    const CliResult a = run_cli("report " + path + " --ladder 2");
    const CliResult b = run_cli("report " + path + " --ladder 2");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("analyze and level-0 search agree exactly on micro ei") {
    const std::string path = write_fixture("hetero8");
    const CliResult analyzed = run_cli("analyze " + path);
    const CliResult searched = run_cli("search " + path + " --level 0");
    REQUIRE(analyzed.exit_code == 0);
    REQUIRE(searched.exit_code == 0);
    CHECK(json::parse(analyzed.out)["ei"].get<double>() ==
          json::parse(searched.out)["best_ei"].get<double>());
}

TEST_CASE("search finds the absorbing grouping from the command line") {
    const CliResult r = run_cli("search " + write_fixture("absorbing8") + " --level 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["best_ei"].get<double>() == Approx(1.0).margin(1e-9));
    CHECK(j["best_choice"]["partition"] == json::parse("[0,0,0,0,0,0,0,1]"));
    CHECK(j["evaluated"] == 4140);
}

TEST_CASE("search on the symmetric system never leaves the microscale") {
    const CliResult r = run_cli("search " + write_fixture("permutation4") + " --level 2");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["best_ei"].get<double>() == Approx(2.0).margin(1e-9));
}

TEST_CASE("exit codes distinguish failure classes") {
    CHECK(run_cli("analyze /nonexistent.json").exit_code == 2);

    const fs::path bad = temp_dir() / "bad.json";
    write_text_file(bad.string(), "{\"rows\": [[0.5, 0.6],[0.5,0.5]]}\n");
    CHECK(run_cli("analyze " + bad.string()).exit_code == 2);

    // a 14-state flat chain exceeds the default budget at level 1
    const fs::path big = temp_dir() / "uniform14.csv";
    std::string csv;
    for (int i = 0; i < 14; ++i) {
        for (int j = 0; j < 14; ++j) {
            csv += (j ? "," : "") + std::string("0.07142857142857142");
        }
        csv += "\n";
    }
    write_text_file(big.string(), csv);
    CHECK(run_cli("search " + big.string() + " --level 1").exit_code == 3);
    const CliResult annealed =
        run_cli("search " + big.string() + " --level 1 --anneal --steps 300 --chains 1");
    CHECK(annealed.exit_code == 0);
    CHECK(json::parse(annealed.out)["method"] == "annealing");
}

TEST_CASE("fixtures command writes files the other commands accept") {
    const fs::path out = temp_dir() / "written_m2.json";
    const CliResult wrote = run_cli("fixtures m2 --out " + out.string());
    REQUIRE(wrote.exit_code == 0);
    const CliResult analyzed = run_cli("analyze " + out.string());
    CHECK(json::parse(analyzed.out)["ei"].get<double>() == Approx(1.0).margin(1e-9));

    CHECK(run_cli("fixtures no_such_fixture").exit_code == 2);
}

TEST_CASE("report emits the emergence gap and the ladder") {
    const CliResult r = run_cli("report " + write_fixture("coding4") + " --ladder 2");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["micro_ei"].get<double>() == Approx(0.8112781245).margin(1e-6));
    CHECK(j["cc"].get<double>() == Approx(1.0).margin(1e-9));
    CHECK(j["capacity"].get<double>() == Approx(1.0).margin(1e-6));
    CHECK(j["ladder"].size() == 3);

    const CliResult csv =
        run_cli("report " + write_fixture("coding4") + " --ladder 2 --format csv");
    CHECK(csv.out.rfind("level,ei_max,capacity,emd,choices_evaluated\n", 0) == 0);
}

TEST_CASE("capacity command reports both solvers") {
    const CliResult r =
        run_cli("capacity " + write_fixture("coding4") + " --samples 2000 --seed 5");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["blahut_arimoto"]["capacity"].get<double>() == Approx(1.0).margin(1e-6));
    CHECK(j["blahut_arimoto"]["converged"] == true);
    CHECK(j["random_search"]["capacity"].get<double>() <=
          j["blahut_arimoto"]["capacity"].get<double>() + 1e-6);
}

TEST_CASE("code-sim runs micro and macro codes") {
    const std::string tpm_path = write_fixture("coding4");
    const CliResult micro =
        run_cli("code-sim " + tpm_path + " --message 001011010011 --seed 9");
    REQUIRE(micro.exit_code == 0);
    CHECK(json::parse(micro.out)["rate"] == 2.0);
    CHECK(json::parse(micro.out)["transitions_used"] == 6);

    const fs::path choice = temp_dir() / "coding4_choice.json";
    write_text_file(choice.string(), to_json(fixture_choice("coding4")).dump() + "\n");
    const CliResult macro = run_cli("code-sim " + tpm_path +
                                    " --message 001011010011 --choice " + choice.string());
    REQUIRE(macro.exit_code == 0);
    CHECK(json::parse(macro.out)["rate"] == 1.0);
    CHECK(json::parse(macro.out)["transitions_used"] == 12);
    CHECK(json::parse(macro.out)["symbol_error_rate"] == 0.0);
}

TEST_CASE("compile-net emits the same tpm the library computes") {
    const CliResult r = run_cli("compile-net " + write_fixture("and2"));
    REQUIRE(r.exit_code == 0);
    const Tpm compiled = tpm_from_json(json::parse(r.out));
    CHECK(compiled.flat() == compile_tpm(fixture_network("and2")).flat());

    const CliResult searched = run_cli("search " + write_fixture("and2") + " --level 3");
    REQUIRE(searched.exit_code == 0);
    CHECK(json::parse(searched.out)["best_ei"].get<double>() == Approx(1.0).margin(1e-9));
}

TEST_CASE("thread count does not change the bytes") {
    const std::string path = write_fixture("exogenous8");
    const CliResult one = run_cli("search " + path + " --level 2 --threads 1");
    const CliResult two = run_cli("search " + path + " --level 2 --threads 2");
    REQUIRE(one.exit_code == 0);
    CHECK(one.out == two.out);
}
