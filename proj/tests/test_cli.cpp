#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const char* bin = std::getenv("PDBUCK_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = env.empty() ? "" : "env " + env + " ";
    cmd += std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    return r;
}

std::string config_path(const std::string& name) {
    const char* dir = std::getenv("PDBUCK_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    return std::string(dir) + "/" + name;
}

const fs::path& temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("pdbuck_cli_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream iss(text);
    std::string line;
    while (std::getline(iss, line)) out.push_back(line);
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Value of a `key,value` row in a quantity/value CSV.
double csv_value(const std::string& csv, const std::string& key) {
    for (const auto& line : lines_of(csv))
        if (line.rfind(key + ",", 0) == 0)
            return std::stod(line.substr(key.size() + 1));
    FAIL("row not found: " << key);
    return 0.0;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    for (;;) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

} // namespace

TEST_CASE("analyze reports the bifurcation point deterministically") {
    std::string args =
        "analyze --config " + config_path("voltage_mode_fixed.conf");
    RunResult r = run_cli(args);
    CHECK(r.code == 0);
    CHECK(csv_value(r.out, "vs_star_V") ==
          doctest::Approx(24.51657282856319).epsilon(1e-9));
    CHECK(csv_value(r.out, "d_star_s") ==
          doctest::Approx(2.038038691434715e-4).epsilon(1e-9));
    CHECK(csv_value(r.out, "duty_star") ==
          doctest::Approx(0.49049032714132124).epsilon(1e-9));
    CHECK(csv_value(r.out, "estimate_eq12_V") ==
          doctest::Approx(20.20271264426077).epsilon(1e-9));
    CHECK(csv_value(r.out, "estimate_eq13_V") ==
          doctest::Approx(20.24835506096506).epsilon(1e-9));

    RunResult again = run_cli(args);
    CHECK(again.code == 0);
    CHECK(again.out == r.out);
}

TEST_CASE("analyze covers the parameter variants") {
    RunResult esr = run_cli("analyze --config " +
                            config_path("voltage_mode_fixed_esr.conf"));
    CHECK(esr.code == 0);
    CHECK(csv_value(esr.out, "vs_star_V") ==
          doctest::Approx(25.904775331017575).epsilon(1e-9));

    RunResult fast = run_cli("analyze --config " +
                             config_path("voltage_mode_fixed_fast.conf"));
    CHECK(fast.code == 0);
    CHECK(csv_value(fast.out, "vs_star_V") ==
          doctest::Approx(49.4623844047923).epsilon(1e-9));

    // A truncation override still resolves the same point.
    RunResult shorter =
        run_cli("analyze --series-n 64 --config " +
                config_path("voltage_mode_fixed.conf"));
    CHECK(shorter.code == 0);
    CHECK(csv_value(shorter.out, "vs_star_V") ==
          doctest::Approx(24.51657282856319).epsilon(1e-6));
}

TEST_CASE("analyze rejects unusable inputs") {
    CHECK(run_cli("analyze --config /nonexistent/x.conf").code == 2);

    fs::path bad = temp_dir() / "bad.conf";
    std::ofstream(bad) << "mode = lunar\n";
    CHECK(run_cli("analyze --config " + bad.string()).code == 2);

    // The balance relations need a fixed ramp.
    CHECK(run_cli("analyze --config " +
                  config_path("voltage_mode_feedforward.conf"))
              .code == 2);

    CHECK(run_cli("analyze --series-n 5 --config " +
                  config_path("voltage_mode_fixed.conf"))
              .code == 2);
}

TEST_CASE("design verdicts and exit codes") {
    std::string base = config_path("voltage_mode_fixed.conf");

    RunResult ok = run_cli("design --target-vo 10 --config " + base);
    CHECK(ok.code == 0);
    CHECK(csv_value(ok.out, "kl") == doctest::Approx(-1.092).epsilon(1e-9));
    CHECK(csv_value(ok.out, "kh") == 0.0);
    CHECK(csv_value(ok.out, "H_max") ==
          doctest::Approx(0.35798238048681535).epsilon(1e-9));
    CHECK(csv_value(ok.out, "H_min") ==
          doctest::Approx(0.17899816482020606).epsilon(1e-9));
    CHECK(ok.out.find("verdict,prevented\n") != std::string::npos);

    RunResult inside =
        run_cli("design --target-vo 10.973410404624277 --config " + base);
    CHECK(inside.code == 1);
    CHECK(inside.out.find("verdict,not_prevented\n") != std::string::npos);

    // No flag and no config key: usage error.
    CHECK(run_cli("design --config " + base).code == 2);

    // The target may come from the config file instead of the flag.
    RunResult from_file = run_cli(
        "design --config " + config_path("voltage_mode_feedforward.conf"));
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("verdict,prevented\n") != std::string::npos);
}

TEST_CASE("curves writes the table and the overlay plot") {
    fs::path csv = temp_dir() / "curves.csv";
    fs::path svg = temp_dir() / "curves.svg";
    RunResult r = run_cli("curves --rows 16 --config " +
                          config_path("voltage_mode_fixed.conf") + " --out " +
                          csv.string() + " --svg " + svg.string());
    CHECK(r.code == 0);

    auto rows = lines_of(read_file(csv));
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == "d_s,vs_eq9_V,vs_eq11_V");
    for (size_t i = 1; i < rows.size(); ++i) {
        auto fields = split_fields(rows[i]);
        REQUIRE(fields.size() == 3);
        CHECK(std::stod(fields[0]) > 0.0);
    }

    std::string svg_text = read_file(svg);
    CHECK(svg_text.find("<svg") != std::string::npos);
    CHECK(svg_text.find("Vs* = 24.5166 V") != std::string::npos);

    CHECK(run_cli("curves --config " +
                  config_path("voltage_mode_fixed.conf") +
                  " --out /nonexistent_dir_zz/c.csv")
              .code == 3);
}

TEST_CASE("simulate trace output") {
    fs::path rest = temp_dir() / "rest.csv";
    RunResult r0 = run_cli("simulate --vs 0 --cycles 2 --steps-per-cycle 250 "
                           "--config " +
                           config_path("voltage_mode_fixed.conf") +
                           " --out " + rest.string());
    CHECK(r0.code == 0);
    auto rows = lines_of(read_file(rest));
    REQUIRE(rows.size() == 2u * 250u + 2u);
    CHECK(rows[0] == "t_s,iL_A,vC_V,vo_V,y_V,h_V,vd_V");
    for (size_t i = 1; i < rows.size(); ++i) {
        auto fields = split_fields(rows[i]);
        REQUIRE(fields.size() == 7);
        CHECK(std::stod(fields[3]) == 0.0); // vo stays at rest
    }

    // Under the feedforward ramp the sawtooth is scaled into [kl Vs, kh Vs).
    fs::path ff = temp_dir() / "ff.csv";
    RunResult r1 = run_cli("simulate --vs 28 --cycles 3 --steps-per-cycle 250 "
                           "--config " +
                           config_path("voltage_mode_feedforward.conf") +
                           " --out " + ff.string());
    CHECK(r1.code == 0);
    auto ff_rows = lines_of(read_file(ff));
    REQUIRE(ff_rows.size() == 3u * 250u + 2u);
    for (size_t i = 1; i < ff_rows.size(); ++i) {
        double h = std::stod(split_fields(ff_rows[i])[5]);
        CHECK(h <= 0.0);
        CHECK(h >= -1.092 * 28.0);
    }
}

TEST_CASE("sweep produces the diagram table and onset row") {
    std::string base = config_path("voltage_mode_fixed.conf");
    fs::path csv = temp_dir() / "sweep.csv";
    std::string args = "sweep --vs-min 20 --vs-max 21 --points 2 --cycles 120 "
                       "--discard 100 --steps-per-cycle 400 --config " +
                       base + " --out " + csv.string();
    RunResult r = run_cli(args);
    CHECK(r.code == 0);

    auto rows = lines_of(read_file(csv));
    // header + 2 * (20 samples + 1 summary) + onset row
    REQUIRE(rows.size() == 1 + 2 * 21 + 1);
    CHECK(rows[0] == "vs_V,cycle_index,vo_V,class");
    auto first = split_fields(rows[1]);
    REQUIRE(first.size() == 4);
    CHECK(first[0] == "20");
    CHECK(first[1] == "100");
    CHECK(first[3].empty());
    auto summary = split_fields(rows[21]);
    REQUIRE(summary.size() == 4);
    CHECK(summary[0] == "20");
    CHECK(summary[1].empty());
    CHECK(std::stod(summary[2]) == doctest::Approx(11.96).epsilon(0.02));
    CHECK(summary[3] == "P1");
    CHECK(rows.back() == "onset_V,,none,");

    // Byte-identical under capped parallelism.
    fs::path csv2 = temp_dir() / "sweep2.csv";
    std::string args2 =
        "sweep --vs-min 20 --vs-max 21 --points 2 --cycles 120 "
        "--discard 100 --steps-per-cycle 400 --config " +
        base + " --out " + csv2.string();
    RunResult r2 = run_cli(args2, "PDBUCK_THREADS=2");
    CHECK(r2.code == 0);
    CHECK(read_file(csv2) == read_file(csv));

    // A single sweep point is allowed.
    fs::path one = temp_dir() / "one.csv";
    RunResult r3 = run_cli("sweep --vs-min 20 --vs-max 20 --points 1 "
                           "--cycles 120 --discard 100 --steps-per-cycle 400 "
                           "--config " +
                           base + " --out " + one.string());
    CHECK(r3.code == 0);
    CHECK(lines_of(read_file(one)).size() == 1 + 21 + 1);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("analyze --config " +
                  config_path("voltage_mode_fixed.conf") + " --bogus 1")
              .code == 2);
    CHECK(run_cli("sweep --config " + config_path("voltage_mode_fixed.conf"))
              .code == 2); // missing required flags
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("reproduce recomputes the headline table and reports checks") {
    fs::path dir = temp_dir() / "repro";
    RunResult r = run_cli("reproduce --out " + dir.string());
    // One reference value is not reproducible from the stated parameters, so
    // the command reports the failing check and exits 1.
    CHECK(r.code == 1);
    CHECK(r.out.find("PASS exact_base") != std::string::npos);
    CHECK(r.out.find("PASS exact_t_250us") != std::string::npos);
    CHECK(r.out.find("FAIL exact_esr_1ohm") != std::string::npos);
    CHECK(r.out.find("PASS design_kl") != std::string::npos);
    CHECK(r.out.find("PASS onset_sim") != std::string::npos);
    CHECK(r.out.find("14/15 checks passed") != std::string::npos);

    CHECK(fs::exists(dir / "table1.csv"));
    CHECK(fs::exists(dir / "design.csv"));
    CHECK(fs::exists(dir / "onset.csv"));

    std::string table = read_file(dir / "table1.csv");
    CHECK(lines_of(table).size() == 4);
    CHECK(lines_of(table)[0] == "case,exact_V,eq12_V,eq13_V");
    std::string onset = read_file(dir / "onset.csv");
    double sim = csv_value(onset, "onset_sim_V");
    double hb = csv_value(onset, "onset_hb_V");
    CHECK(hb == doctest::Approx(24.51657282856319).epsilon(1e-9));
    CHECK(std::abs(sim - hb) < 0.5);
}
