#include <doctest.h>

#include <cstdlib>
#include <string>

#include "pinion/atlas.hpp"
#include "pinion/config.hpp"
#include "pinion/device.hpp"
#include "pinion/serialize.hpp"
#include "pinion/svg.hpp"
#include "test_util.hpp"

using namespace pinion;

namespace {

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.phi1 = {1.5, 1.5, 1};
    spec.nu = {1.0, 1.0, 1};
    return spec;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("floats are written with nine significant digits") {
    CHECK(format_sig9(0.0) == "0");
    CHECK(format_sig9(-0.0) == "0");
    CHECK(format_sig9(1.0) == "1");
    CHECK(format_sig9(-2.5) == "-2.5");
    CHECK(format_sig9(1.0 / 3.0) == "0.333333333");
    CHECK(format_sig9(61.115498147287809) == "61.1154981");
    CHECK(format_sig9(3.0557749073643904e-5) == "3.05577491e-05");

    // rounding through the formatter is idempotent
    for (double x : {0.1237894561234, -7.25e-19, 4543.1651905372896, 1e9 + 0.5}) {
        const double r = round_sig9(x);
        CHECK(round_sig9(r) == r);
        CHECK(std::strtod(format_sig9(x).c_str(), nullptr) == r);
    }
}

TEST_CASE("JSON numbers mirror the CSV rounding") {
    const double x = 0.56411010564593264;
    nlohmann::json j = json_number(x);
    CHECK(j.get<double>() == round_sig9(x));
}

TEST_CASE("trajectory CSV has the documented shape") {
    Trajectory traj = integrate(DrivePoint(0.0, 0.0, 1.0), 0.5, 0.1);
    std::string csv = trajectory_csv(traj);
    CHECK(csv.rfind("s,u\n", 0) == 0);
    CHECK(count_lines(csv) == traj.size() + 1);
    CHECK(csv.find("0,0.5\n") != std::string::npos);
}

TEST_CASE("dimensional trajectory CSV rescales to SI") {
    auto presets = load_presets(builtin_presets_json());
    const DeviceSpec& d = presets.at("paper");
    Trajectory traj = integrate(to_drive_point(d), 0.0, 0.1);
    std::string csv = trajectory_csv_dimensional(traj, d);
    CHECK(csv.rfind("t[s],x[m]\n", 0) == 0);
    CHECK(count_lines(csv) == traj.size() + 1);
}

TEST_CASE("phase map CSV rows are one cell each, nu fastest") {
    PhaseMap map = sweep(tiny_spec());
    std::string csv = phase_map_csv(map);
    CHECK(csv == "phi1,nu,label,mean_velocity,converged\n1.5,1,II0,0,1\n");
}

TEST_CASE("cut CSV carries the refinement flag") {
    std::vector<CutRow> rows = {
        {0.9, -0.31, PhaseKind::II2, true, false},
        {0.9734, 1.2e-05, PhaseKind::II0, true, true},
    };
    std::string csv = cut_csv(rows);
    CHECK(csv ==
          "nu,mean_velocity,label,converged,refined\n"
          "0.9,-0.31,II2,1,0\n"
          "0.9734,1.2e-05,II0,1,1\n");
}

TEST_CASE("boundary CSV lists the traced points") {
    std::vector<BoundaryPoint> points = {{1.5, 1.0, 0.0}, {1.8, 0.9987, -4.2e-05}};
    CHECK(boundary_csv(points) ==
          "phi1,nu_star,residual\n"
          "1.5,1,0\n"
          "1.8,0.9987,-4.2e-05\n");
}

TEST_CASE("the JSON map mirrors the CSV values exactly") {
    SweepSpec spec;
    spec.phi1 = {0.8, 1.6, 2};
    spec.nu = {0.9, 1.1, 2};
    spec.tolerances.horizon = 400.0 * pi;
    PhaseMap map = sweep(spec, 2);
    nlohmann::json j = to_json(map.spec);
    CHECK(j["phi1"]["count"] == 2);

    std::string csv = phase_map_csv(map);
    // each cell velocity in the CSV parses back to the round_sig9 value
    std::size_t row = 0;
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size() && row < map.cells.size()) {
        std::size_t end = csv.find('\n', pos);
        std::string line = csv.substr(pos, end - pos);
        std::size_t c3 = line.rfind(',');
        std::string rest = line.substr(0, c3);
        std::size_t c2 = rest.rfind(',');
        double v = std::strtod(rest.substr(c2 + 1).c_str(), nullptr);
        CHECK(v == round_sig9(map.cells[row].mean_velocity));
        pos = end + 1;
        ++row;
    }
    CHECK(row == map.cells.size());
}

TEST_CASE("estimate text names every derived scale") {
    auto presets = load_presets(builtin_presets_json());
    EstimateReport rep = estimate(presets.at("paper"));
    std::string text = estimate_text(rep);
    for (const char* needle :
         {"zeta", "inertia", "tau", "V_S1", "V_S2", "phi1", "phi2", "nu", "Hz"})
        CHECK_MESSAGE(text.find(needle) != std::string::npos, needle);
    nlohmann::json j = to_json(rep);
    CHECK(j["tau"].get<double>() == round_sig9(rep.tau));
    CHECK(j["reduced"]["phi1"].get<double>() == round_sig9(rep.reduced.phi1));
}

TEST_CASE("line charts render self-contained SVG") {
    LineChart chart("waveforms", "s", "u");
    SvgSeries series;
    for (int k = 0; k <= 100; ++k) {
        series.x.push_back(0.1 * k);
        series.y.push_back(std::sin(0.1 * k));
    }
    series.name = "g = 10";
    chart.add_series(series);
    chart.add_hline(0.0);
    std::string svg = chart.render();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("waveforms") != std::string::npos);
    CHECK(svg.find("g = 10") != std::string::npos);
}

TEST_CASE("phase map SVG paints cells and the legend") {
    SweepSpec spec;
    spec.phi1 = {1.2, 1.8, 2};
    spec.nu = {0.5, 1.5, 3};
    spec.tolerances.horizon = 400.0 * pi;
    PhaseMap map = sweep(spec, 2);
    std::string svg = phase_map_svg(map, "phase map");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    for (const char* label : {"I1", "II1", "II0", "II2", "I2"})
        CHECK(svg.find(label) != std::string::npos);
    // one painted rect per cell
    std::size_t rects = 0;
    for (std::size_t pos = svg.find("<rect"); pos != std::string::npos;
         pos = svg.find("<rect", pos + 1))
        ++rects;
    CHECK(rects >= map.cells.size());
    CHECK(std::string(phase_color(PhaseKind::II0)) == "#f7f7f7");
}

TEST_CASE("file writing creates parents and reports failures") {
    testutil::TempDir dir("pinion-io");
    auto nested = dir.file("a/b/c.txt");
    write_text_file(nested, "payload");
    CHECK(testutil::read_file(nested) == "payload");
    // a file in the middle of the path is not a directory
    CHECK_THROWS_AS(write_text_file(dir.file("a/b/c.txt/d.txt"), "x"), IoError);
}

TEST_CASE("config files must exist and hold valid JSON") {
    testutil::TempDir dir("pinion-cfg");
    CHECK_THROWS_AS(load_config_file(dir.file("missing.json")), ConfigError);
    testutil::write_file(dir.file("broken.json"), "{nope");
    CHECK_THROWS_AS(load_config_file(dir.file("broken.json")), ConfigError);
    testutil::write_file(dir.file("ok.json"), R"({"x": 1})");
    CHECK(load_config_file(dir.file("ok.json"))["x"] == 1);
}

TEST_CASE("simulate configs are strict and complete") {
    auto presets = load_presets(builtin_presets_json());
    auto parse = [&](const char* text) {
        return parse_simulate(nlohmann::json::parse(text), presets);
    };

    SimulateRun run = parse(
        R"({"point": {"phi1": 1.5, "phi2": 1.55, "nu": 1.0}, "u0": 0.2, "horizon": 20.0})");
    CHECK(run.mode == SimulateRun::Mode::reduced);
    CHECK(run.point.phi1 == 1.5);
    CHECK(run.u0 == 0.2);
    CHECK(run.horizon == 20.0);

    run = parse(R"({"symmetric": {"grip": 10.0}, "u0": 1.57, "horizon": 12.6})");
    CHECK(run.mode == SimulateRun::Mode::symmetric);
    CHECK(run.point.phi1 == 5.0);
    CHECK(run.symmetric->grip == 10.0);

    run = parse(R"({"preset": "paper", "x0": "125 nm", "horizon": 10.0})");
    CHECK(run.mode == SimulateRun::Mode::dimensional);
    CHECK(run.u0 == doctest::Approx(two_pi * 0.25).epsilon(1e-12));

    // unknown keys are named
    try {
        parse(R"({"symmetric": {"grip": 1.0}, "horizon": 5.0, "wavelenght": 1})");
        FAIL("expected a throw");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("wavelenght") != std::string::npos);
    }

    CHECK_THROWS_AS(parse(R"({"horizon": 5.0})"), ConfigError);
    CHECK_THROWS_AS(
        parse(R"({"point": {"phi1": 1, "phi2": 1, "nu": 1},
                  "symmetric": {"grip": 1}, "horizon": 5.0})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse(R"({"symmetric": {"grip": 1}, "u0": 0.1, "x0": 0.1, "horizon": 5.0})"),
        ConfigError);
    CHECK_THROWS_AS(
        parse(R"({"point": {"phi1": 1, "phi2": 1, "nu": 1}, "x0": 0.1, "horizon": 5.0})"),
        ConfigError);
    CHECK_THROWS_AS(parse(R"({"symmetric": {"grip": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"symmetric": {"grip": 1}, "horizon": -2.0})"), ConfigError);
    CHECK_THROWS_AS(parse(R"({"preset": "nope", "horizon": 5.0})"), ConfigError);
    CHECK_THROWS_AS(
        parse(R"({"symmetric": {"grip": 1}, "horizon": 5.0,
                  "integrator": {"rel_tol": -1}})"),
        ConfigError);
}

TEST_CASE("sweep configs reject contradictions") {
    auto parse = [](const char* text) { return parse_sweep(nlohmann::json::parse(text)); };
    SweepSpec spec = parse(R"({
        "phi1": {"min": 0.5, "max": 3.0, "count": 10},
        "nu": {"min": 0.5, "max": 1.5, "count": 8},
        "grip_offset": 0.05, "trace_boundary": true})");
    CHECK(spec.phi1.count == 10);
    CHECK(spec.grip_offset == 0.05);
    CHECK(spec.trace_boundary);

    CHECK_THROWS_AS(parse(R"({
        "phi1": {"min": 0.5, "max": 3.0, "count": 10},
        "nu": {"min": 0.5, "max": 1.5, "count": 8},
        "grip_offset": 0.05, "phi2": 1.55})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"phi1": {"min": 0.5, "max": 3.0, "count": 0},
                              "nu": {"min": 0.5, "max": 1.5, "count": 8}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse(R"({"nu": {"min": 0.5, "max": 1.5, "count": 8}})"), ConfigError);
}

TEST_CASE("cut and boundary configs are validated") {
    CutRun cut = parse_cut(nlohmann::json::parse(R"({
        "phi1": 1.5, "phi2": 1.55,
        "nu": {"min": 0.5, "max": 1.5, "count": 201}})"));
    CHECK(cut.nu.count == 201);
    CHECK(cut.refine_zero);

    CHECK_THROWS_AS(parse_cut(nlohmann::json::parse(
                        R"({"phi1": 1.5, "phi2": 1.55,
                            "nu": {"min": 0.5, "max": 1.5, "count": 1}})")),
                    ConfigError);

    BoundaryRun b = parse_boundary(nlohmann::json::parse(R"({
        "grip_offset": 0.05,
        "rows": [{"phi1": 1.5, "bracket": [0.8, 1.2]},
                 {"phi1": 2.0, "bracket": [0.7, 1.3]}]})"));
    CHECK(b.rows.size() == 2);
    CHECK(b.rows[1].nu_hi == 1.3);

    CHECK_THROWS_AS(parse_boundary(nlohmann::json::parse(
                        R"({"grip_offset": 0.0, "rows": []})")),
                    ConfigError);
    CHECK_THROWS_AS(parse_boundary(nlohmann::json::parse(
                        R"({"grip_offset": 0.0,
                            "rows": [{"phi1": 1.5, "bracket": [1.2, 0.8]}]})")),
                    ConfigError);
}

TEST_CASE("estimate configs accept devices or presets, never both") {
    auto presets = load_presets(builtin_presets_json());
    EstimateRun run =
        parse_estimate(nlohmann::json::parse(R"({"preset": "paper", "V_R": "1 um/s"})"),
                       presets);
    CHECK(run.rack_speed == doctest::Approx(1e-6).epsilon(1e-15));
    CHECK(run.device.F1 == doctest::Approx(1.2e-11).epsilon(1e-15));

    CHECK_THROWS_AS(parse_estimate(nlohmann::json::parse(R"({})"), presets), ConfigError);
    CHECK_THROWS_AS(
        parse_estimate(nlohmann::json::parse(R"({"preset": "paper", "V_R": -1})"), presets),
        ConfigError);
}

TEST_CASE("every shipped example config parses with its subcommand's schema") {
    const std::string dir = std::string(PINION_SHARE_DIR) + "/configs/";
    auto presets = load_presets(builtin_presets_json());

    SimulateRun sq = parse_simulate(load_config_file(dir + "square_wave.json"), presets);
    REQUIRE(sq.symmetric.has_value());
    CHECK(sq.symmetric->grip == 10.0);

    SimulateRun sp = parse_simulate(load_config_file(dir + "spike_train.json"), presets);
    REQUIRE(sp.symmetric.has_value());
    CHECK(sp.u0 == doctest::Approx(6.2831853071795864e-4).epsilon(1e-12));

    SweepSpec map = parse_sweep(load_config_file(dir + "phase_map.json"));
    CHECK(map.phi1.count == 60);
    CHECK(map.trace_boundary);

    CutRun cut = parse_cut(load_config_file(dir + "frustrated_cut.json"));
    CHECK(cut.phi2 == 1.55);
    CHECK(cut.nu.max == 2.0);

    BoundaryRun bnd = parse_boundary(load_config_file(dir + "boundary_lines.json"));
    CHECK(bnd.rows.size() == 3);

    EstimateRun est =
        parse_estimate(load_config_file(dir + "estimate_paper.json"), presets);
    CHECK(est.rack_speed.has_value());
}

}  // TEST_SUITE
