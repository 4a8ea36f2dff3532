#include <doctest.h>

#include <string>

#include "test_util.hpp"

using testutil::CliResult;
using testutil::TempDir;
using testutil::read_file;
using testutil::write_file;

namespace {

const std::string kCli = PINION_CLI_PATH;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help lists every subcommand") {
    TempDir dir("pinion-cli-help");
    CliResult r = testutil::run_cli(kCli, "--help", dir, "help");
    CHECK(r.exit_code == 0);
    for (const char* name : {"simulate", "sweep", "cut", "boundary", "estimate"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("a missing subcommand is a usage error") {
    TempDir dir("pinion-cli-none");
    CliResult r = testutil::run_cli(kCli, "", dir, "none");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("subcommand is required") != std::string::npos);
}

TEST_CASE("simulate writes the requested formats") {
    TempDir dir("pinion-cli-sim");
    write_file(dir.file("run.json"), R"({
        "point": {"phi1": 1.2, "phi2": 0.4, "nu": 0.9},
        "u0": 0.3,
        "horizon": 6.283185307179586,
        "classify": false
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "simulate --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --format csv,json",
        dir, "sim");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("simulate: 257 samples") != std::string::npos);
    std::string csv = read_file(dir.file("out/trajectory.csv"));
    CHECK(csv.rfind("s,u\n", 0) == 0);
    std::string json = read_file(dir.file("out/simulate.json"));
    CHECK(json.find("\"command\": \"simulate\"") != std::string::npos);
    CHECK(json.find("\"mode\": \"reduced\"") != std::string::npos);
    // svg was not requested
    CHECK_FALSE(std::filesystem::exists(dir.file("out/trajectory.svg")));
}

TEST_CASE("simulate reports the closed-form deviation in symmetric mode") {
    TempDir dir("pinion-cli-symm");
    write_file(dir.file("run.json"), R"({
        "symmetric": {"grip": 10.0},
        "u0": 1.5707963267948966,
        "horizon": 12.566370614359172
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "simulate --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --format json",
        dir, "symm");
    CHECK(r.exit_code == 0);
    std::string json = read_file(dir.file("out/simulate.json"));
    CHECK(json.find("analytic_max_deviation") != std::string::npos);
    auto pos = json.find("analytic_max_deviation");
    double dev = std::strtod(json.c_str() + json.find(':', pos) + 1, nullptr);
    CHECK(dev > 0.0);
    CHECK(dev < 1e-4);
}

TEST_CASE("unknown config keys are rejected by name") {
    TempDir dir("pinion-cli-strict");
    write_file(dir.file("run.json"), R"({
        "symmetric": {"grip": 2.0},
        "horizon": 6.0,
        "wavelenght": 500
    })");
    CliResult r = testutil::run_cli(
        kCli, "simulate --config " + dir.file("run.json").string(), dir, "strict");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("wavelenght") != std::string::npos);
}

TEST_CASE("step collapse maps to exit code 3") {
    TempDir dir("pinion-cli-collapse");
    write_file(dir.file("run.json"), R"({
        "point": {"phi1": 2.0, "phi2": 1.0, "nu": 1.3},
        "horizon": 6.283185307179586,
        "integrator": {"rel_tol": 1e-200, "abs_tol": 1e-210}
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "simulate --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string(),
        dir, "collapse");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("integration failed") != std::string::npos);
}

TEST_CASE("estimate runs from a built-in preset") {
    TempDir dir("pinion-cli-est");
    CliResult r = testutil::run_cli(
        kCli, "estimate --preset paper --out " + dir.file("out").string() +
                  " --format json",
        dir, "est");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("tau") != std::string::npos);
    CHECK(r.out.find("61.1154981") != std::string::npos);
    std::string json = read_file(dir.file("out/estimate.json"));
    CHECK(json.find("\"tau\": 2.34e-07") != std::string::npos);

    CliResult bad = testutil::run_cli(kCli, "estimate --preset nope", dir, "estbad");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("nope") != std::string::npos);
    CHECK(bad.err.find("paper") != std::string::npos);  // names the known presets
}

TEST_CASE("estimate accepts a full device config with a rack speed") {
    TempDir dir("pinion-cli-estdev");
    write_file(dir.file("run.json"), R"({
        "device": {
            "R": "1 um", "L": "10 um", "r": "500 nm", "h": "100 nm",
            "lambda": "500 nm", "eta": "1 mPa.s", "rho": "1.17 g/cm3",
            "F1": "12 pN", "F2": "0.3 pN",
            "V1": "30.557749073643904 um/s", "V2": "30.557749073643904 um/s"
        },
        "V_R": "30.557749073643904 um/s"
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "estimate --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string(),
        dir, "estdev");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("61.1154981") != std::string::npos);
}

TEST_CASE("sweep classifies the degenerate symmetric cell") {
    TempDir dir("pinion-cli-sweep1");
    write_file(dir.file("run.json"), R"({
        "phi1": {"min": 1.5, "max": 1.5, "count": 1},
        "nu": {"min": 1.0, "max": 1.0, "count": 1}
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "sweep --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --workers 1 --format csv",
        dir, "sweep1");
    CHECK(r.exit_code == 0);
    std::string csv = read_file(dir.file("out/phase_map.csv"));
    CHECK(csv == "phi1,nu,label,mean_velocity,converged\n1.5,1,II0,0,1\n");
}

TEST_CASE("sweep output is identical for 1 and 8 workers") {
    TempDir dir("pinion-cli-det");
    write_file(dir.file("run.json"), R"({
        "phi1": {"min": 0.6, "max": 1.8, "count": 4},
        "nu": {"min": 0.7, "max": 1.4, "count": 3},
        "u0": 0.2,
        "tolerances": {"horizon": 1256.6370614359172}
    })");
    CliResult a = testutil::run_cli(
        kCli,
        "sweep --config " + dir.file("run.json").string() + " --out " +
            dir.file("a").string() + " --workers 1 --format csv,json,svg",
        dir, "w1");
    CliResult b = testutil::run_cli(
        kCli,
        "sweep --config " + dir.file("run.json").string() + " --out " +
            dir.file("b").string() + " --workers 8 --format csv,json,svg",
        dir, "w8");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(read_file(dir.file("a/phase_map.csv")) == read_file(dir.file("b/phase_map.csv")));
    CHECK(read_file(dir.file("a/phase_map.json")) == read_file(dir.file("b/phase_map.json")));
    CHECK(read_file(dir.file("a/phase_map.svg")) == read_file(dir.file("b/phase_map.svg")));
}

TEST_CASE("the PINION_WORKERS variable is honored and validated") {
    TempDir dir("pinion-cli-env");
    write_file(dir.file("run.json"), R"({
        "phi1": {"min": 1.5, "max": 1.5, "count": 1},
        "nu": {"min": 1.0, "max": 1.0, "count": 1}
    })");
    CliResult ok = testutil::run_cli(
        "PINION_WORKERS=2 " + kCli,
        "sweep --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --format csv",
        dir, "envok");
    CHECK(ok.exit_code == 0);
    CliResult bad = testutil::run_cli(
        "PINION_WORKERS=banana " + kCli,
        "sweep --config " + dir.file("run.json").string() + " --out " +
            dir.file("out2").string() + " --format csv",
        dir, "envbad");
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("PINION_WORKERS") != std::string::npos);
}

TEST_CASE("cut refines the zero crossing into an extra row") {
    TempDir dir("pinion-cli-cut");
    write_file(dir.file("run.json"), R"({
        "phi1": 1.5, "phi2": 1.5,
        "nu": {"min": 0.7, "max": 1.4, "count": 3}
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "cut --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --format csv,json",
        dir, "cut");
    CHECK(r.exit_code == 0);
    std::string csv = read_file(dir.file("out/cut.csv"));
    CHECK(csv.rfind("nu,mean_velocity,label,converged,refined\n", 0) == 0);
    // 3 grid rows plus one refined insertion
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 5);
    CHECK(csv.find(",1\n") != std::string::npos);  // the refined row
}

TEST_CASE("boundary rows that fail to bracket are skipped with a warning") {
    TempDir dir("pinion-cli-bnd");
    write_file(dir.file("run.json"), R"({
        "grip_offset": 0.0,
        "rows": [{"phi1": 1.5, "bracket": [0.5, 1.5]},
                 {"phi1": 1.5, "bracket": [0.55, 0.7]}]
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "boundary --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --format csv",
        dir, "bnd");
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("phi1 = 1.5") != std::string::npos);
    std::string csv = read_file(dir.file("out/boundary.csv"));
    CHECK(csv ==
          "phi1,nu_star,residual\n"
          "1.5,1,0\n");
    CHECK(r.out.find("1 points, 1 skipped") != std::string::npos);
}

TEST_CASE("svg-only output writes nothing else") {
    TempDir dir("pinion-cli-svg");
    write_file(dir.file("run.json"), R"({
        "phi1": {"min": 1.5, "max": 1.5, "count": 1},
        "nu": {"min": 1.0, "max": 1.0, "count": 1}
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "sweep --config " + dir.file("run.json").string() + " --out " +
            dir.file("out").string() + " --format svg",
        dir, "svg");
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(dir.file("out/phase_map.svg")));
    CHECK_FALSE(std::filesystem::exists(dir.file("out/phase_map.csv")));
    CHECK_FALSE(std::filesystem::exists(dir.file("out/phase_map.json")));
    std::string svg = read_file(dir.file("out/phase_map.svg"));
    CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("a bad format token is a usage error") {
    TempDir dir("pinion-cli-fmt");
    write_file(dir.file("run.json"), R"({
        "phi1": {"min": 1.5, "max": 1.5, "count": 1},
        "nu": {"min": 1.0, "max": 1.0, "count": 1}
    })");
    CliResult r = testutil::run_cli(
        kCli,
        "sweep --config " + dir.file("run.json").string() + " --format yaml", dir,
        "fmt");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("yaml") != std::string::npos);
}

TEST_CASE("a missing config file is a usage error") {
    TempDir dir("pinion-cli-missing");
    CliResult r = testutil::run_cli(
        kCli, "simulate --config " + dir.file("nope.json").string(), dir, "missing");
    CHECK(r.exit_code != 0);
}

}  // TEST_SUITE
