#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pinion/analysis.hpp"
#include "pinion/atlas.hpp"
#include "pinion/config.hpp"
#include "pinion/device.hpp"
#include "pinion/integrate.hpp"
#include "pinion/model.hpp"
#include "pinion/serialize.hpp"
#include "pinion/svg.hpp"

namespace fs = std::filesystem;
using namespace pinion;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv,json";
    std::string presets_path;
    std::string preset_name;
    unsigned workers = 0;
};

struct Formats {
    bool csv = false;
    bool json = false;
    bool svg = false;
};

Formats parse_formats(const std::string& text) {
    Formats f{};
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token.erase(0, token.find_first_not_of(" \t"));
        token.erase(token.find_last_not_of(" \t") + 1);
        if (token == "csv")
            f.csv = true;
        else if (token == "json")
            f.json = true;
        else if (token == "svg")
            f.svg = true;
        else
            throw ConfigError("--format: unknown format '" + token +
                              "' (expected csv, json, svg)");
    }
    if (!f.csv && !f.json && !f.svg)
        throw ConfigError("--format: no output format selected");
    return f;
}

unsigned resolve_workers(unsigned flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("PINION_WORKERS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value <= 0)
            throw ConfigError("PINION_WORKERS must be a positive integer, got '" +
                              std::string(env) + "'");
        return static_cast<unsigned>(value);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

std::map<std::string, DeviceSpec> resolve_presets(const std::string& path) {
    if (path.empty()) return load_presets(builtin_presets_json());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open preset table " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_presets(buf.str());
}

// Progress reporting for long sweeps: one stderr line per 10% step.
ProgressFn make_progress(std::size_t total) {
    if (total < 400) return nullptr;
    auto last_decile = std::make_shared<std::size_t>(0);
    return [last_decile, total](std::size_t done, std::size_t n) {
        const std::size_t decile = 10 * done / n;
        if (decile > *last_decile) {
            *last_decile = decile;
            std::cerr << "sweep: " << done << "/" << n << " cells\n";
        }
    };
}

int cmd_simulate(const Options& opt, const Formats& fmt) {
    const auto presets = resolve_presets(opt.presets_path);
    const SimulateRun run = parse_simulate(load_config_file(opt.config_path), presets);
    const Trajectory traj = integrate(run.point, run.u0, run.horizon, run.integrator);

    nlohmann::json summary{{"command", "simulate"},
                           {"point", to_json(run.point)},
                           {"u0", json_number(run.u0)},
                           {"horizon", json_number(run.horizon)},
                           {"samples", traj.size()},
                           {"integrator", to_json(run.integrator)}};

    if (run.mode == SimulateRun::Mode::symmetric) {
        summary["mode"] = "symmetric";
        double max_dev = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i)
            max_dev = std::max(
                max_dev, std::fabs(traj.u[i] - analytic_symmetric(*run.symmetric,
                                                                  traj.s[i])));
        summary["symmetric"] = {{"grip", json_number(run.symmetric->grip)},
                                {"analytic_max_deviation", json_number(max_dev)}};
    } else if (run.mode == SimulateRun::Mode::dimensional) {
        summary["mode"] = "dimensional";
        const DeviceSpec& d = *run.device;
        summary["device"] = to_json(d);
        summary["scales"] = {
            {"zeta", json_number(friction_coefficient(d))},
            {"tau", json_number(inertia_time(d))},
            {"time_scale", json_number(d.lambda / (two_pi * d.V1))},
            {"length_scale", json_number(d.lambda / two_pi)}};
    } else {
        summary["mode"] = "reduced";
    }

    if (run.classify)
        summary["classification"] = to_json(classify(traj, run.tolerances));
    if (run.clock) summary["clock"] = to_json(clock_metrics(traj, run.u0));

    const fs::path out(opt.out_dir);
    if (fmt.csv) {
        const std::string csv = run.mode == SimulateRun::Mode::dimensional
                                    ? trajectory_csv_dimensional(traj, *run.device)
                                    : trajectory_csv(traj);
        write_text_file(out / "trajectory.csv", csv);
    }
    if (fmt.json) write_text_file(out / "simulate.json", summary.dump(2) + "\n");
    if (fmt.svg) {
        SvgSeries series;
        std::string title = "pinion trajectory", xl = "s", yl = "u";
        if (run.mode == SimulateRun::Mode::dimensional) {
            const DeviceSpec& d = *run.device;
            const double ts = d.lambda / (two_pi * d.V1), ls = d.lambda / two_pi;
            for (std::size_t i = 0; i < traj.size(); ++i) {
                series.x.push_back(traj.s[i] * ts);
                series.y.push_back(traj.u[i] * ls);
            }
            xl = "t [s]";
            yl = "x [m]";
        } else {
            series.x = traj.s;
            series.y = traj.u;
        }
        LineChart chart(title, xl, yl);
        chart.add_hline(0.0);
        chart.add_series(std::move(series));
        write_text_file(out / "trajectory.svg", chart.render());
    }
    std::cout << "simulate: " << traj.size() << " samples -> " << out.string() << "\n";
    return 0;
}

int cmd_sweep(const Options& opt, const Formats& fmt, unsigned workers) {
    const SweepSpec spec = parse_sweep(load_config_file(opt.config_path));
    const PhaseMap map = sweep(spec, workers, make_progress(spec.phi1.count * spec.nu.count));

    const fs::path out(opt.out_dir);
    if (fmt.csv) write_text_file(out / "phase_map.csv", phase_map_csv(map));
    if (fmt.json) {
        nlohmann::json meta{{"command", "sweep"},
                            {"spec", to_json(spec)},
                            {"tolerances", to_json(spec.tolerances)},
                            {"integrator", to_json(spec.integrator)},
                            {"cells", map.cells.size()},
                            {"unconverged", nlohmann::json::array()},
                            {"boundary", nlohmann::json::array()}};
        for (std::size_t i = 0; i < spec.phi1.count; ++i)
            for (std::size_t j = 0; j < spec.nu.count; ++j)
                if (!map.at(i, j).converged)
                    meta["unconverged"].push_back(
                        {{"phi1", json_number(spec.phi1_at(i))},
                         {"nu", json_number(spec.nu_at(j))}});
        for (const BoundaryPoint& p : map.boundary)
            meta["boundary"].push_back({{"phi1", json_number(p.phi1)},
                                        {"nu_star", json_number(p.nu_star)},
                                        {"residual", json_number(p.residual)}});
        write_text_file(out / "phase_map.json", meta.dump(2) + "\n");
    }
    if (fmt.svg)
        write_text_file(out / "phase_map.svg", phase_map_svg(map, "pinion phase map"));
    std::cout << "sweep: " << map.cells.size() << " cells, "
              << map.unconverged_count() << " unconverged -> " << out.string() << "\n";
    return 0;
}

int cmd_cut(const Options& opt, const Formats& fmt, unsigned workers) {
    const CutRun run = parse_cut(load_config_file(opt.config_path));

    SweepSpec spec;
    spec.phi1 = AxisRange{run.phi1, run.phi1, 1};
    spec.nu = run.nu;
    spec.phi2_fixed = run.phi2;
    spec.u0 = run.u0;
    spec.tolerances = run.tolerances;
    spec.integrator = run.integrator;
    const PhaseMap map = sweep(spec, workers, make_progress(run.nu.count));

    std::vector<CutRow> rows;
    rows.reserve(run.nu.count + 1);
    for (std::size_t j = 0; j < run.nu.count; ++j) {
        const PhaseCell& cell = map.at(0, j);
        rows.push_back(CutRow{spec.nu_at(j), cell.mean_velocity, cell.kind,
                              cell.converged, false});
    }

    nlohmann::json refined = nullptr;
    if (run.refine_zero) {
        for (std::size_t j = 0; j + 1 < run.nu.count; ++j) {
            const double va = rows[j].mean_velocity;
            const double vb = rows[j + 1].mean_velocity;
            if (va != 0.0 && (va < 0.0) == (vb < 0.0)) continue;
            try {
                const BoundaryResult res = find_ii0_boundary(
                    run.phi1, run.phi2 - run.phi1, rows[j].nu, rows[j + 1].nu,
                    run.tolerances, run.integrator, run.u0);
                rows.insert(rows.begin() + static_cast<long>(j) + 1,
                            CutRow{res.nu_star, res.residual, PhaseKind::II0, true,
                                   true});
                refined = {{"nu_star", json_number(res.nu_star)},
                           {"residual", json_number(res.residual)}};
            } catch (const BracketError& e) {
                std::cerr << "cut: zero-crossing refinement skipped: " << e.what()
                          << "\n";
            }
            break;
        }
    }

    const fs::path out(opt.out_dir);
    if (fmt.csv) write_text_file(out / "cut.csv", cut_csv(rows));
    if (fmt.json) {
        std::size_t unconverged = 0;
        for (const CutRow& row : rows)
            if (!row.converged) ++unconverged;
        const nlohmann::json meta{{"command", "cut"},
                                  {"phi1", json_number(run.phi1)},
                                  {"phi2", json_number(run.phi2)},
                                  {"u0", json_number(run.u0)},
                                  {"rows", rows.size()},
                                  {"refined_zero", refined},
                                  {"unconverged", unconverged},
                                  {"tolerances", to_json(run.tolerances)},
                                  {"integrator", to_json(run.integrator)}};
        write_text_file(out / "cut.json", meta.dump(2) + "\n");
    }
    if (fmt.svg) {
        SvgSeries series;
        for (const CutRow& row : rows) {
            series.x.push_back(row.nu);
            series.y.push_back(row.mean_velocity);
        }
        series.name = "V_P / V1";
        LineChart chart("pinion drift velocity", "nu = V2/V1", "V_P / V1");
        chart.add_hline(0.0);
        chart.add_series(std::move(series));
        write_text_file(out / "cut.svg", chart.render());
    }
    std::cout << "cut: " << rows.size() << " rows -> " << out.string() << "\n";
    return 0;
}

int cmd_boundary(const Options& opt, const Formats& fmt) {
    const BoundaryRun run = parse_boundary(load_config_file(opt.config_path));

    std::vector<BoundaryPoint> points;
    nlohmann::json skipped = nlohmann::json::array();
    for (const BoundaryRow& row : run.rows) {
        try {
            const BoundaryResult res =
                find_ii0_boundary(row.phi1, run.grip_offset, row.nu_lo, row.nu_hi,
                                  run.tolerances, run.integrator, run.u0,
                                  run.bracket_width);
            points.push_back(BoundaryPoint{row.phi1, res.nu_star, res.residual});
        } catch (const BracketError& e) {
            std::cerr << "boundary: row phi1 = " << format_sig9(row.phi1)
                      << " skipped: " << e.what() << "\n";
            skipped.push_back(
                {{"phi1", json_number(row.phi1)}, {"reason", e.what()}});
        }
    }

    const fs::path out(opt.out_dir);
    if (fmt.csv) write_text_file(out / "boundary.csv", boundary_csv(points));
    if (fmt.json) {
        const nlohmann::json meta{{"command", "boundary"},
                                  {"grip_offset", json_number(run.grip_offset)},
                                  {"u0", json_number(run.u0)},
                                  {"bracket_width", json_number(run.bracket_width)},
                                  {"points", points.size()},
                                  {"warnings", skipped.size()},
                                  {"skipped", skipped},
                                  {"tolerances", to_json(run.tolerances)},
                                  {"integrator", to_json(run.integrator)}};
        write_text_file(out / "boundary.json", meta.dump(2) + "\n");
    }
    if (fmt.svg) {
        SvgSeries series;
        for (const BoundaryPoint& p : points) {
            series.x.push_back(p.phi1);
            series.y.push_back(p.nu_star);
        }
        series.dashed = true;
        series.color = "#000000";
        series.name = "II0 line";
        LineChart chart("II0 boundary", "phi1 [zeta*V1/R^2]", "nu*");
        chart.add_series(std::move(series));
        write_text_file(out / "boundary.svg", chart.render());
    }
    std::cout << "boundary: " << points.size() << " points, " << skipped.size()
              << " skipped -> " << out.string() << "\n";
    return 0;
}

int cmd_estimate(const Options& opt, const Formats& fmt) {
    const auto presets = resolve_presets(opt.presets_path);
    EstimateRun run;
    if (!opt.preset_name.empty()) {
        if (!opt.config_path.empty())
            throw ConfigError("estimate: give either --preset or --config, not both");
        run.device = find_preset(presets, opt.preset_name, "estimate");
    } else if (!opt.config_path.empty()) {
        run = parse_estimate(load_config_file(opt.config_path), presets);
    } else {
        throw ConfigError("estimate: provide --preset NAME or --config PATH");
    }

    const EstimateReport report = estimate(run.device);
    std::string text = estimate_text(report);
    if (run.rack_speed)
        text += "f at V_R = " + format_sig9(*run.rack_speed) + " m/s: " +
                format_sig9(clock_frequency(*run.rack_speed, run.device.lambda)) +
                " Hz\n";
    std::cout << text;

    const fs::path out(opt.out_dir);
    if (fmt.json) {
        nlohmann::json meta{{"command", "estimate"}, {"device", to_json(run.device)}};
        meta.update(to_json(report));
        if (run.rack_speed)
            meta["at_V_R"] = {
                {"V_R", json_number(*run.rack_speed)},
                {"f", json_number(clock_frequency(*run.rack_speed, run.device.lambda))}};
        write_text_file(out / "estimate.json", meta.dump(2) + "\n");
    }
    if (fmt.csv) {
        std::string csv = "quantity,value,unit\n";
        const auto row = [&](const char* name, double value, const char* unit) {
            csv += std::string(name) + "," + format_sig9(value) + "," + unit + "\n";
        };
        row("zeta", report.zeta, "kg m^2/s");
        row("inertia", report.inertia, "kg m^2");
        row("tau", report.tau, "s");
        row("v_s1", report.v_s1, "m/s");
        row("v_s2", report.v_s2, "m/s");
        row("f_at_v1", report.f_at_v1, "Hz");
        row("f_clock1", report.f_clock1, "Hz");
        row("f_clock2", report.f_clock2, "Hz");
        row("phi1", report.reduced.phi1, "1");
        row("phi2", report.reduced.phi2, "1");
        row("nu", report.reduced.nu, "1");
        write_text_file(out / "estimate.csv", csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pinion: simulator and analysis toolkit for a frustrated "
                 "rack-pinion-rack nanodevice"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* cmd, bool config_required) {
        auto* config =
            cmd->add_option("--config", opt.config_path, "JSON run config file")
                ->check(CLI::ExistingFile);
        if (config_required) config->required();
        cmd->add_option("--out", opt.out_dir, "output directory (default: .)");
        cmd->add_option("--format", opt.format,
                        "comma-separated outputs: csv,json,svg (default: csv,json)");
        cmd->add_option("--workers", opt.workers,
                        "worker threads (default: PINION_WORKERS or all cores)");
        cmd->add_option("--presets", opt.presets_path,
                        "preset table file (default: built-in table)");
    };

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory");
    add_common(sim, true);
    auto* swp = app.add_subcommand("sweep", "classify a (phi1, nu) grid");
    add_common(swp, true);
    auto* cut = app.add_subcommand("cut", "drift velocity along a nu line");
    add_common(cut, true);
    auto* bnd = app.add_subcommand("boundary", "bisect the II0 line");
    add_common(bnd, true);
    auto* est = app.add_subcommand("estimate", "derived quantities for a device");
    add_common(est, false);
    est->add_option("--preset", opt.preset_name, "built-in device preset name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Formats fmt = parse_formats(opt.format);
        const unsigned workers = resolve_workers(opt.workers);
        if (sim->parsed()) return cmd_simulate(opt, fmt);
        if (swp->parsed()) return cmd_sweep(opt, fmt, workers);
        if (cut->parsed()) return cmd_cut(opt, fmt, workers);
        if (bnd->parsed()) return cmd_boundary(opt, fmt);
        if (est->parsed()) return cmd_estimate(opt, fmt);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrationError& e) {
        std::cerr << "integration failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 3;
    }
}
