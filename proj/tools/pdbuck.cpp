// pdbuck: locate and prevent period doubling in buck DC-DC converters.
//
// Subcommands: analyze, design, curves, sweep, simulate, reproduce.
// Exit codes: 0 success; 1 domain-level failure (design not prevented,
// reproduction check failed); 2 invalid configuration or usage; 3 runtime
// failure (unwritable output, divergence).

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdbuck/bifurcation.hpp"
#include "pdbuck/configio.hpp"
#include "pdbuck/csv.hpp"
#include "pdbuck/errors.hpp"
#include "pdbuck/feedforward.hpp"
#include "pdbuck/harmonic.hpp"
#include "pdbuck/simulator.hpp"
#include "pdbuck/svg.hpp"

namespace {

using namespace pdbuck;

std::string short_num(double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), x,
                           std::chars_format::general, 6);
    return std::string(buf, r.ptr);
}

SeriesConfig make_series(const ConfigFile& file,
                         const std::optional<int>& flag) {
    SeriesConfig s;
    if (flag)
        s.n_terms = *flag;
    else if (file.series_n_terms)
        s.n_terms = *file.series_n_terms;
    s.validate();
    return s;
}

bool write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

const char* class_name(PeriodClass c) {
    switch (c) {
        case PeriodClass::P1: return "P1";
        case PeriodClass::P2: return "P2";
        case PeriodClass::P4: return "P4";
        default: return "higher";
    }
}

void print_warnings(const ApproxResult& r, const char* label) {
    for (const auto& w : r.warnings)
        std::cerr << "warning: " << label << ": " << w << '\n';
}

// ---- analyze --------------------------------------------------------------

int cmd_analyze(const std::string& config_path, std::optional<int> series_n) {
    ConfigFile file = load_config(config_path);
    const ConverterConfig& cfg = file.converter;
    SeriesConfig series = make_series(file, series_n);

    HarmonicEngine eng(cfg, series);
    auto points = find_period_doubling(eng);

    std::ostringstream csv;
    csv << "quantity,value\n";
    if (points.empty()) csv << "bifurcation,none\n";
    for (size_t i = 0; i < points.size(); ++i) {
        std::string sfx = i == 0 ? "" : "_" + std::to_string(i + 1);
        csv << "vs_star_V" << sfx << ',' << format_sig17(points[i].vs_star)
            << '\n';
        csv << "d_star_s" << sfx << ',' << format_sig17(points[i].d_star)
            << '\n';
        csv << "duty_star" << sfx << ',' << format_sig17(points[i].duty_star)
            << '\n';
    }
    auto eq12 = estimate_vs_critical(cfg);
    csv << "estimate_eq12_V," << (eq12 ? format_sig17(*eq12) : "none")
        << '\n';
    if (cfg.mode == Mode::VoltageMode) {
        double g1 = eval(cfg.G2, 0.0).real();
        ApproxResult r = approx_vs_critical_voltage_mode(cfg, g1);
        print_warnings(r, "estimate_eq13_V");
        csv << "estimate_eq13_V," << format_sig17(r.value) << '\n';
    } else {
        ApproxResult r = approx_vs_critical_current_mode(cfg);
        print_warnings(r, "estimate_eq15_V");
        csv << "estimate_eq15_V," << format_sig17(r.value) << '\n';
    }
    std::cout << csv.str();
    return 0;
}

// ---- design ---------------------------------------------------------------

int cmd_design(const std::string& config_path, std::optional<int> series_n,
               std::optional<double> target_flag) {
    ConfigFile file = load_config(config_path);
    const ConverterConfig& cfg = file.converter;
    SeriesConfig series = make_series(file, series_n);

    std::optional<double> target =
        target_flag ? target_flag : file.target_vo;
    if (!target) {
        std::cerr << "error: design requires --target-vo or a target_vo_V "
                     "config key\n";
        return 2;
    }

    HarmonicEngine eng(cfg, series);
    HExtrema ext = h_extrema(eng);
    DesignResult res = design_line_regulation(cfg, *target, ext);

    std::ostringstream csv;
    csv << "quantity,value\n";
    csv << "kl," << format_sig17(res.gains.kl) << '\n';
    csv << "kh," << format_sig17(res.gains.kh) << '\n';
    csv << "H_max," << format_sig17(ext.h_max) << '\n';
    csv << "H_min," << format_sig17(ext.h_min) << '\n';
    csv << "verdict," << (res.prevented ? "prevented" : "not_prevented")
        << '\n';
    std::cout << csv.str();
    return res.prevented ? 0 : 1;
}

// ---- curves ---------------------------------------------------------------

int cmd_curves(const std::string& config_path, std::optional<int> series_n,
               int rows, const std::string& out_path,
               const std::string& svg_path) {
    ConfigFile file = load_config(config_path);
    const ConverterConfig& cfg = file.converter;
    SeriesConfig series = make_series(file, series_n);

    HarmonicEngine eng(cfg, series);
    CurveTable table = tabulate_curves(eng, rows);

    std::ostringstream csv;
    csv << "d_s,vs_eq9_V,vs_eq11_V\n";
    for (const auto& row : table.rows) {
        csv << format_sig17(row.d) << ',';
        if (row.vs_eq9) csv << format_sig17(*row.vs_eq9);
        csv << ',';
        if (row.vs_eq11) csv << format_sig17(*row.vs_eq11);
        csv << '\n';
    }
    if (!write_text(out_path, csv.str())) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 3;
    }

    if (!svg_path.empty()) {
        std::vector<double> xs, y9, y11;
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        for (const auto& row : table.rows) {
            xs.push_back(row.d);
            y9.push_back(row.vs_eq9 ? *row.vs_eq9 : nan);
            y11.push_back(row.vs_eq11 ? *row.vs_eq11 : nan);
        }
        SvgPlot plot("Operating vs critical source voltage", "d (s)",
                     "Vs (V)");
        plot.add_line(xs, y9, "steelblue", true, "period-one balance");
        plot.add_line(xs, y11, "firebrick", false, "critical curve");
        for (const auto& p : find_period_doubling(eng))
            plot.add_marker(p.d_star, p.vs_star, "black",
                            "Vs* = " + short_num(p.vs_star) + " V");
        if (!plot.write(svg_path)) {
            std::cerr << "error: cannot write '" << svg_path << "'\n";
            return 3;
        }
    }
    return 0;
}

// ---- sweep ----------------------------------------------------------------

int cmd_sweep(const std::string& config_path, double vs_min, double vs_max,
              int points, int cycles, int discard, int steps,
              const std::string& out_path, const std::string& svg_path) {
    ConfigFile file = load_config(config_path);
    const ConverterConfig& cfg = file.converter;

    auto diagram = bifurcation_diagram(cfg, vs_min, vs_max, points, cycles,
                                       discard, steps);
    auto onset = onset_voltage(cfg, diagram, cycles, discard, steps);

    std::ostringstream csv;
    csv << "vs_V,cycle_index,vo_V,class\n";
    for (const auto& row : diagram) {
        for (size_t k = 0; k < row.vo_samples.size(); ++k) {
            csv << format_sig17(row.Vs) << ','
                << discard + static_cast<int>(k) << ','
                << format_sig17(row.vo_samples[k]) << ",\n";
        }
        csv << format_sig17(row.Vs) << ",," << format_sig17(row.mean_vo)
            << ',' << class_name(row.cls) << '\n';
    }
    csv << "onset_V,," << (onset ? format_sig17(*onset) : "none") << ",\n";
    if (!write_text(out_path, csv.str())) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 3;
    }

    if (!svg_path.empty()) {
        std::vector<double> xs, ys;
        for (const auto& row : diagram) {
            for (double vo : row.vo_samples) {
                xs.push_back(row.Vs);
                ys.push_back(vo);
            }
        }
        SvgPlot plot("Stroboscopic output vs source voltage", "Vs (V)",
                     "vo (V)");
        plot.add_points(xs, ys, "black", 1.2, "cycle-end vo");
        if (onset) {
            double y_mark = diagram.front().mean_vo;
            for (const auto& row : diagram) {
                if (row.cls != PeriodClass::P1) {
                    y_mark = row.mean_vo;
                    break;
                }
            }
            plot.add_marker(*onset, y_mark, "firebrick",
                            "onset = " + short_num(*onset) + " V");
        }
        if (!plot.write(svg_path)) {
            std::cerr << "error: cannot write '" << svg_path << "'\n";
            return 3;
        }
    }
    return 0;
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(const std::string& config_path, double vs, int cycles,
                 int steps, const std::string& out_path,
                 const std::string& svg_path, bool show_comparator) {
    ConfigFile file = load_config(config_path);
    const ConverterConfig& cfg = file.converter;

    SimTrace trace = simulate(cfg, vs, cycles, SimState{}, steps);

    std::ostringstream csv;
    csv << "t_s,iL_A,vC_V,vo_V,y_V,h_V,vd_V\n";
    for (const auto& s : trace.samples) {
        csv << format_sig17(s.t) << ',' << format_sig17(s.iL) << ','
            << format_sig17(s.vC) << ',' << format_sig17(s.vo) << ','
            << format_sig17(s.y) << ',' << format_sig17(s.h) << ','
            << format_sig17(s.vd) << '\n';
    }
    if (!write_text(out_path, csv.str())) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 3;
    }

    if (!svg_path.empty()) {
        std::vector<double> ts, vo, y, h;
        ts.reserve(trace.samples.size());
        for (const auto& s : trace.samples) {
            ts.push_back(s.t);
            vo.push_back(s.vo);
            y.push_back(s.y);
            h.push_back(s.h);
        }
        SvgPlot plot("Simulated output response", "t (s)", "V");
        plot.add_line(ts, vo, "steelblue", false, "vo(t)");
        if (show_comparator) {
            plot.add_line(ts, h, "seagreen", false, "h(t)");
            plot.add_line(ts, y, "firebrick", true, "y(t)");
        }
        if (!plot.write(svg_path)) {
            std::cerr << "error: cannot write '" << svg_path << "'\n";
            return 3;
        }
    }
    return 0;
}

// ---- reproduce --------------------------------------------------------------

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

void check_close(std::vector<Check>& checks, const std::string& name,
                 double got, double want, double abs_tol) {
    bool ok = std::abs(got - want) <= abs_tol;
    checks.push_back({name, ok,
                      short_num(got) + " vs " + short_num(want) + " +/- " +
                          short_num(abs_tol)});
}

ConverterConfig headline_config() {
    ConverterConfig c;
    c.L = 20e-3;
    c.C = 47e-6;
    c.R = 22.0;
    c.Rc = 0.0;
    c.T = 400e-6;
    c.Vr = 11.3;
    c.g = -8.4;
    c.G2 = RationalFunction({8.4}, {1.0});
    c.mode = Mode::VoltageMode;
    c.ramp = RampSpec::fixed(3.8, 8.2);
    return c;
}

int cmd_reproduce(const std::string& out_dir, std::optional<int> series_n) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create '" << out_dir << "'\n";
        return 3;
    }

    SeriesConfig series;
    if (series_n) series.n_terms = *series_n;
    series.validate();

    ConverterConfig base = headline_config();
    ConverterConfig esr = base;
    esr.Rc = 1.0;
    ConverterConfig fast = base;
    fast.T = 250e-6;

    struct Case {
        const char* name;
        ConverterConfig cfg;
        double exact = 0.0, eq12 = 0.0, eq13 = 0.0;
    };
    std::vector<Case> cases = {
        {"base", base, 0, 0, 0},
        {"esr_1ohm", esr, 0, 0, 0},
        {"t_250us", fast, 0, 0, 0},
    };

    for (auto& c : cases) {
        HarmonicEngine eng(c.cfg, series);
        auto points = find_period_doubling(eng);
        if (points.empty())
            throw Error(std::string("no bifurcation found for case ") +
                        c.name);
        c.exact = points.front().vs_star;
        auto e12 = estimate_vs_critical(c.cfg);
        if (!e12)
            throw Error(std::string("first-harmonic estimate unsolvable for "
                                    "case ") +
                        c.name);
        c.eq12 = *e12;
        c.eq13 = approx_vs_critical_voltage_mode(c.cfg, 8.4).value;
    }

    std::ostringstream table1;
    table1 << "case,exact_V,eq12_V,eq13_V\n";
    for (const auto& c : cases) {
        table1 << c.name << ',' << format_sig17(c.exact) << ','
               << format_sig17(c.eq12) << ',' << format_sig17(c.eq13) << '\n';
    }
    if (!write_text(out_dir + "/table1.csv", table1.str())) {
        std::cerr << "error: cannot write '" << out_dir << "/table1.csv'\n";
        return 3;
    }

    HarmonicEngine base_eng(base, series);
    HExtrema ext = h_extrema(base_eng);
    DesignResult des = design_line_regulation(base, 10.0, ext);
    std::ostringstream design;
    design << "quantity,value\n";
    design << "H_max," << format_sig17(ext.h_max) << '\n';
    design << "H_min," << format_sig17(ext.h_min) << '\n';
    design << "kl," << format_sig17(des.gains.kl) << '\n';
    design << "kh," << format_sig17(des.gains.kh) << '\n';
    design << "verdict," << (des.prevented ? "prevented" : "not_prevented")
           << '\n';
    if (!write_text(out_dir + "/design.csv", design.str())) {
        std::cerr << "error: cannot write '" << out_dir << "/design.csv'\n";
        return 3;
    }

    auto diagram = bifurcation_diagram(base, 16.0, 30.0, 64, 500, 400, 2000);
    auto onset_sim = onset_voltage(base, diagram, 500, 400, 2000);
    double onset_hb = cases[0].exact;
    std::ostringstream onset;
    onset << "quantity,value\n";
    onset << "onset_sim_V,"
          << (onset_sim ? format_sig17(*onset_sim) : std::string("none"))
          << '\n';
    onset << "onset_hb_V," << format_sig17(onset_hb) << '\n';
    if (!write_text(out_dir + "/onset.csv", onset.str())) {
        std::cerr << "error: cannot write '" << out_dir << "/onset.csv'\n";
        return 3;
    }

    std::vector<Check> checks;
    const double want_exact[3] = {24.5, 24.9, 49.5};
    const double want_eq12[3] = {20.2, 22.4, 51.8};
    const double want_eq13[3] = {20.2, 21.2, 51.8};
    for (size_t i = 0; i < cases.size(); ++i) {
        check_close(checks, std::string("exact_") + cases[i].name,
                    cases[i].exact, want_exact[i], 0.01 * want_exact[i]);
    }
    for (size_t i = 0; i < cases.size(); ++i) {
        check_close(checks, std::string("eq12_") + cases[i].name,
                    cases[i].eq12, want_eq12[i], 0.01 * want_eq12[i]);
    }
    for (size_t i = 0; i < cases.size(); ++i) {
        check_close(checks, std::string("eq13_") + cases[i].name,
                    cases[i].eq13, want_eq13[i], 0.01 * want_eq13[i]);
    }
    check_close(checks, "design_kl", des.gains.kl, -1.092, 0.001);
    check_close(checks, "design_hmax", ext.h_max, 0.358, 0.002);
    check_close(checks, "design_hmin", ext.h_min, 0.1792, 0.0005);
    checks.push_back({"design_prevented", des.prevented,
                      des.prevented ? "prevented" : "not_prevented"});
    if (onset_sim) {
        check_close(checks, "onset_sim", *onset_sim, 24.5, 0.5);
        check_close(checks, "onset_agreement", *onset_sim, onset_hb, 0.5);
    } else {
        checks.push_back({"onset_sim", false, "no onset found in [16, 30]"});
        checks.push_back({"onset_agreement", false, "no simulator onset"});
    }

    int passed = 0;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " ("
                  << c.detail << ")\n";
        if (c.pass) ++passed;
    }
    std::cout << passed << "/" << checks.size() << " checks passed\n";
    return passed == static_cast<int>(checks.size()) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdbuck: period-doubling analysis and prevention for buck "
                 "DC-DC converters"};
    app.require_subcommand(1);

    std::string config_path, out_path, svg_path, repro_dir;
    std::optional<int> series_n;
    std::optional<double> target_vo;
    int rows = 512;
    double vs_min = 16.0, vs_max = 30.0, vs = 0.0;
    int points = 64, cycles = 500, discard = 400, steps = 2000;
    int sim_cycles = 20;
    bool show_comparator = false;
    int rc = 0;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "converter config file")
            ->required();
    };
    auto add_series = [&](CLI::App* cmd) {
        cmd->add_option("--series-n", series_n,
                        "harmonic series truncation override (>= 8)");
    };

    CLI::App* analyze =
        app.add_subcommand("analyze", "locate period-doubling bifurcation "
                                      "points and closed-form estimates");
    add_config(analyze);
    add_series(analyze);
    analyze->callback([&] { rc = cmd_analyze(config_path, series_n); });

    CLI::App* design = app.add_subcommand(
        "design", "feedforward ramp gains for line regulation with "
                  "period-doubling prevention");
    add_config(design);
    add_series(design);
    design->add_option("--target-vo", target_vo,
                       "regulated average output voltage (V)");
    design->callback(
        [&] { rc = cmd_design(config_path, series_n, target_vo); });

    CLI::App* curves = app.add_subcommand(
        "curves", "tabulate the period-one and critical curves");
    add_config(curves);
    add_series(curves);
    curves->add_option("--rows", rows, "number of table rows (>= 2)")
        ->capture_default_str();
    curves->add_option("--out", out_path, "output CSV path")->required();
    curves->add_option("--svg", svg_path, "optional SVG overlay plot path");
    curves->callback([&] {
        rc = cmd_curves(config_path, series_n, rows, out_path, svg_path);
    });

    CLI::App* sweep = app.add_subcommand(
        "sweep", "stroboscopic bifurcation diagram over a source-voltage "
                 "range");
    add_config(sweep);
    sweep->add_option("--vs-min", vs_min, "sweep start (V)")->required();
    sweep->add_option("--vs-max", vs_max, "sweep end (V)")->required();
    sweep->add_option("--points", points, "sweep points (>= 1)")
        ->capture_default_str();
    sweep->add_option("--cycles", cycles, "simulated cycles per point")
        ->capture_default_str();
    sweep->add_option("--discard", discard, "transient cycles to discard")
        ->capture_default_str();
    sweep->add_option("--steps-per-cycle", steps, "integration steps per cycle")
        ->capture_default_str();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--svg", svg_path, "optional SVG scatter plot path");
    sweep->callback([&] {
        rc = cmd_sweep(config_path, vs_min, vs_max, points, cycles, discard,
                       steps, out_path, svg_path);
    });

    CLI::App* simulate = app.add_subcommand(
        "simulate", "switched time-domain trace at one source voltage");
    add_config(simulate);
    simulate->add_option("--vs", vs, "source voltage (V)")->required();
    simulate->add_option("--cycles", sim_cycles, "cycles to simulate")
        ->capture_default_str();
    simulate
        ->add_option("--steps-per-cycle", steps, "integration steps per cycle")
        ->capture_default_str();
    simulate->add_option("--out", out_path, "output CSV path")->required();
    simulate->add_option("--svg", svg_path, "optional SVG trace plot path");
    simulate->add_flag("--show-comparator", show_comparator,
                       "overlay h(t) and y(t) in the SVG");
    simulate->callback([&] {
        rc = cmd_simulate(config_path, vs, sim_cycles, steps, out_path,
                          svg_path, show_comparator);
    });

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "recompute the headline results and check tolerances");
    reproduce->add_option("--out", repro_dir, "output directory")->required();
    add_series(reproduce);
    reproduce->callback([&] { rc = cmd_reproduce(repro_dir, series_n); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ModeMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SingularParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return rc;
}
