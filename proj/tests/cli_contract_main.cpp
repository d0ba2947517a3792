// End-to-end checks of the CLI surface: exit-status contract, printed
// values, file schemas, flag precedence and the output-directory
// environment variable.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok)
        ++g_failures;
}

struct CmdResult {
    int exit_code = -1;
    std::string output;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe)
        return res;
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe))
        res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double value_after(const std::string& text, const std::string& label) {
    const auto pos = text.find(label);
    if (pos == std::string::npos)
        return NAN;
    return std::strtod(text.c_str() + pos + label.size(), nullptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

} // namespace

int main(int argc, char** argv) {
    std::string bin;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--igeo-bin")
            bin = argv[i + 1];
    if (bin.empty()) {
        std::fprintf(stderr, "usage: cli_contract --igeo-bin PATH\n");
        return 2;
    }

    // curvature values and the baseline path
    {
        const CmdResult r = run_cmd(bin + " curvature --l 2 --r 0.5,0.5 --output-dir cli_out");
        check(r.exit_code == 0, "curvature exits 0");
        check(contains(r.output, "scalar curvature: -2.285714285714285"),
              "curvature prints -2/ (2 - r^2) summed over blocks");
        const std::string csv = slurp("cli_out/curvature.csv");
        check(contains(csv, "block,r,sigma,R_11,R_12,R_22"), "curvature csv header");

        const CmdResult b = run_cmd(bin + " curvature --baseline --output-dir cli_out");
        check(b.exit_code == 0 && contains(b.output, "scalar curvature: -1"),
              "baseline prints the uncorrelated value -1");

        const CmdResult n =
            run_cmd(bin + " curvature --r 0.5 --check-numeric --output-dir cli_out");
        const double dev = value_after(n.output, "max deviation: ");
        check(n.exit_code == 0 && dev >= 0.0 && dev < 1e-6,
              "check-numeric reports deviation < 1e-6");
    }

    // validation failures exit 1 with a field-naming diagnostic
    {
        write_file("cli_bad.json", R"({"l":1, "r":[1.5], "lambda":[0.5], "xi":[1.0]})");
        const CmdResult r = run_cmd(bin + " curvature --config cli_bad.json");
        check(r.exit_code == 1 && contains(r.output, "r[0]"),
              "invalid config exits 1 naming the field");

        const CmdResult missing = run_cmd(bin + " curvature --config cli_does_not_exist.json");
        check(missing.exit_code == 1, "missing config exits 1");

        const CmdResult dup = run_cmd(bin + " sweep");
        check(dup.exit_code == 1, "sweep without --spec exits 1");

        write_file("cli_dup.json", R"({"l":1, "l":2})");
        const CmdResult d2 = run_cmd(bin + " curvature --config cli_dup.json");
        check(d2.exit_code == 1 && contains(d2.output, "duplicate"),
              "duplicate config key exits 1");

        const CmdResult unk = run_cmd(bin + " curvature --not-a-flag");
        check(unk.exit_code == 1, "unknown flag exits 1");
    }

    // flags win over the config file
    {
        write_file("cli_r03.json", R"({"l":1, "r":[0.3], "lambda":[0.5], "xi":[1.0]})");
        const CmdResult r =
            run_cmd(bin + " curvature --config cli_r03.json --r 0.5 --output-dir cli_out");
        const double scal = value_after(r.output, "scalar curvature: ");
        check(r.exit_code == 0 && std::fabs(scal + 2.0 / 1.75) < 1e-12,
              "flag --r overrides the config value");
    }

    // geodesic runs: trajectory schema, conservation, singularity exit
    {
        const CmdResult full =
            run_cmd(bin + " geodesic --mode full --tau-end 5 --output-dir cli_out");
        check(full.exit_code == 0, "full geodesic exits 0");
        const double drift = value_after(full.output, "conservation drift: ");
        check(drift >= 0.0 && drift < 1e-7, "full-system conservation drift < 1e-7");
        const std::string traj = slurp("cli_out/trajectory.csv");
        check(contains(traj, "tau,block,chart,mu,sigma,dmu,dsigma"), "trajectory csv header");
        check(contains(slurp("cli_out/geodesic_summary.json"), "\"hypothesis\""),
              "geodesic summary json carries the hypothesis check");

        const CmdResult canon =
            run_cmd(bin + " geodesic --mode canonical --tau-end 10 --output-dir cli_out");
        const double gap = value_after(canon.output, "sup gap: ");
        check(canon.exit_code == 0 && gap >= 0.0 && gap < 1e-6,
              "canonical numeric vs analytic sup gap < 1e-6");

        const CmdResult analytic =
            run_cmd(bin + " geodesic --mode analytic --output-dir cli_out");
        check(analytic.exit_code == 0 && contains(analytic.output, "hypothesis ratio"),
              "analytic sampling exits 0 with the hypothesis ratio");

        const CmdResult sing = run_cmd(
            bin + " geodesic --mode canonical --lambda 1 --xi 2.8284271247461903 --tau-end 60 "
                  "--output-dir cli_out");
        check(sing.exit_code == 2 && contains(sing.output, "last good tau"),
              "sigma-floor singularity exits 2 with the last good tau");
    }

    // ige report: equivalence gap, fit, baseline, csv schema
    {
        const CmdResult r = run_cmd(bin + " ige --modes both --tau-points 31 --output-dir cli_out");
        check(r.exit_code == 0, "ige exits 0");
        const double gap = value_after(r.output, "relative gap: ");
        check(gap >= 0.0 && gap < 1e-9, "closed vs quadrature gap < 1e-9");
        const double expo = value_after(r.output, "fit exponent: ");
        check(std::fabs(expo + 1.0) < 0.01, "fit exponent -1 +- 0.01");
        const double base = value_after(r.output, "baseline S(tau_end) = ");
        check(std::fabs(base - 500000.0) < 1e-6, "baseline prints sum(lambda) * tau_end");
        check(contains(slurp("cli_out/ige_report.csv"),
                       "tau,v_closed,v_quadrature,s_closed,saturation_gap"),
              "ige csv header");

        // determinant-mode quadrature diverges past the overflow horizon
        const CmdResult det = run_cmd(bin + " ige --modes quadrature --density-mode determinant "
                                            "--output-dir cli_out");
        check(det.exit_code == 3, "divergent determinant-mode quadrature exits 3");
    }

    // sweep determinism and the grid cap
    {
        write_file("cli_sweep.json",
                   R"({"r": {"min": 0.1, "max": 0.9, "count": 9}, "lambda": [0.1],)"
                   R"( "ige_at_tau": [100.0]})");
        const CmdResult s1 =
            run_cmd(bin + " sweep --spec cli_sweep.json --output-dir cli_sweep_1");
        const CmdResult s2 =
            run_cmd(bin + " sweep --spec cli_sweep.json --output-dir cli_sweep_2");
        check(s1.exit_code == 0 && s2.exit_code == 0, "sweep exits 0");
        const std::string c1 = slurp("cli_sweep_1/sweep.csv");
        check(!c1.empty() && c1 == slurp("cli_sweep_2/sweep.csv"),
              "repeated sweeps are byte-identical");
        check(contains(slurp("cli_sweep_1/sweep_manifest.json"), "config_hash"),
              "sweep manifest carries the config hash");
    }

    // plot-ready two-column data when the config asks for it
    {
        write_file("cli_fmt.json",
                   R"({"l":1, "r":[0.5], "lambda":[0.5], "xi":[1.0],)"
                   R"( "output": {"formats": ["csv", "json", "gnuplot-data"]}})");
        const CmdResult r = run_cmd(bin + " ige --modes closed --config cli_fmt.json "
                                          "--output-dir cli_fmt_out");
        check(r.exit_code == 0, "ige with gnuplot-data exits 0");
        const std::string dat = slurp("cli_fmt_out/ige_v_closed.dat");
        check(!dat.empty() && dat.find(',') == std::string::npos &&
                  contains(dat.substr(0, 5), "1000 "),
              "two-column whitespace plot data written");

        const CmdResult g = run_cmd(bin + " geodesic --mode analytic --config cli_fmt.json "
                                          "--output-dir cli_fmt_out");
        check(g.exit_code == 0 && !slurp("cli_fmt_out/trajectory_sigma_0.dat").empty(),
              "geodesic plot series written");
    }

    // validate subcommand
    {
        const CmdResult v = run_cmd(bin + " validate");
        check(v.exit_code == 0 && contains(v.output, "all suites passed"), "validate passes");
        for (const char* suite : {"eigen-reconstruction", "christoffel-oracle", "ode-analytic",
                                  "igc-equivalence", "saturation"})
            check(contains(v.output, suite), std::string("validate lists ") + suite);
    }

    // output directory environment variable
    {
        const CmdResult r = run_cmd("IGEO_OUTPUT_DIR=cli_env_out " + bin + " curvature --r 0.4");
        check(r.exit_code == 0 && !slurp("cli_env_out/curvature.json").empty(),
              "IGEO_OUTPUT_DIR routes outputs");
    }

    if (g_failures == 0) {
        std::printf("cli contract: all checks passed\n");
        return 0;
    }
    std::printf("cli contract: %d check(s) FAILED\n", g_failures);
    return 1;
}
