#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igeo/commands.hpp"
#include "igeo/config.hpp"
#include "igeo/validate.hpp"

namespace {

struct CommonFlags {
    std::optional<std::string> config_path;
    std::optional<std::string> output_dir;
    std::optional<std::size_t> l;
    std::optional<std::vector<double>> r;
    std::optional<std::vector<double>> lambda;
    std::optional<std::vector<double>> xi;
    std::optional<double> tau_start;
    std::optional<double> tau_end;
    std::optional<std::size_t> tau_points;
    std::optional<bool> tau_log;
    std::optional<std::string> density_mode;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--output-dir", f.output_dir, "output directory (overrides config)");
    cmd->add_option("--l", f.l, "number of blocks");
    cmd->add_option("--r", f.r, "correlation strengths")->delimiter(',');
    cmd->add_option("--lambda", f.lambda, "geodesic decay rates")->delimiter(',');
    cmd->add_option("--xi", f.xi, "geodesic amplitude constants")->delimiter(',');
    cmd->add_option("--tau-start", f.tau_start, "tau grid start");
    cmd->add_option("--tau-end", f.tau_end, "tau grid end");
    cmd->add_option("--tau-points", f.tau_points, "tau grid points");
    cmd->add_option("--tau-log", f.tau_log, "log-spaced tau grid (true/false)");
    cmd->add_option("--density-mode", f.density_mode, "paper or determinant");
}

igeo::RunConfig build_config(const CommonFlags& f) {
    igeo::RunConfig cfg;
    if (f.config_path)
        cfg = igeo::load_config(*f.config_path);
    igeo::apply_model_overrides(cfg, f.l, f.r, f.lambda, f.xi);
    igeo::apply_tau_overrides(cfg, f.tau_start, f.tau_end, f.tau_points, f.tau_log);
    if (f.density_mode) {
        if (*f.density_mode == "paper")
            cfg.density_mode = igeo::DensityMode::Paper;
        else if (*f.density_mode == "determinant")
            cfg.density_mode = igeo::DensityMode::Determinant;
        else
            throw igeo::ConfigError("--density-mode must be paper or determinant");
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"information geometry of correlated Gaussian models"};
    app.require_subcommand(1);

    CommonFlags curvature_flags, geodesic_flags, ige_flags, sweep_flags;

    // curvature
    auto* curvature = app.add_subcommand("curvature", "Ricci curvature at a reference state");
    add_common_flags(curvature, curvature_flags);
    bool baseline = false, check_numeric = false;
    double sigma_ref = 1.0;
    curvature->add_flag("--baseline", baseline, "uncorrelated r -> 0 closed forms");
    curvature->add_flag("--check-numeric", check_numeric,
                        "compare against the finite-difference connection");
    curvature->add_option("--sigma", sigma_ref, "reference sigma (default 1)");

    // geodesic
    auto* geodesic = app.add_subcommand("geodesic", "integrate or sample geodesics");
    add_common_flags(geodesic, geodesic_flags);
    std::string geo_mode = "analytic";
    std::optional<std::vector<double>> initial, velocity;
    geodesic->add_option("--mode", geo_mode, "full | diag | canonical | analytic");
    geodesic->add_option("--initial", initial, "initial coordinates, comma separated")
        ->delimiter(',');
    geodesic->add_option("--velocity", velocity, "initial velocity, comma separated")
        ->delimiter(',');

    // ige
    auto* ige = app.add_subcommand("ige", "information geometric entropy / complexity report");
    add_common_flags(ige, ige_flags);
    std::string ige_modes = "both";
    ige->add_option("--modes", ige_modes, "closed | quadrature | both");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common_flags(sweep, sweep_flags);
    std::string spec_path;
    bool allow_large = false;
    sweep->add_option("--spec", spec_path, "JSON sweep spec")->required();
    sweep->add_flag("--allow-large", allow_large, "override the sweep grid cap");

    // validate
    auto* validate = app.add_subcommand("validate", "run the invariant suite at a pinned seed");
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::string> validate_config;
    validate->add_option("--seed", seed_flag, "RNG seed (default pinned)");
    validate->add_option("--config", validate_config, "JSON config file (for the seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? igeo::kExitOk : igeo::kExitValidation;
    }

    try {
        if (curvature->parsed()) {
            const igeo::RunConfig cfg = build_config(curvature_flags);
            igeo::CurvatureOptions opt;
            opt.baseline = baseline;
            opt.check_numeric = check_numeric;
            opt.sigma_ref = sigma_ref;
            const std::string dir = igeo::resolve_output_dir(cfg, curvature_flags.output_dir);
            igeo::run_curvature(cfg, opt, dir, std::cout);
        } else if (geodesic->parsed()) {
            const igeo::RunConfig cfg = build_config(geodesic_flags);
            igeo::GeodesicOptions opt;
            opt.mode = igeo::geodesic_mode_from_string(geo_mode);
            opt.initial = initial;
            opt.velocity = velocity;
            const std::string dir = igeo::resolve_output_dir(cfg, geodesic_flags.output_dir);
            igeo::run_geodesic(cfg, opt, dir, std::cout);
        } else if (ige->parsed()) {
            const igeo::RunConfig cfg = build_config(ige_flags);
            const std::string dir = igeo::resolve_output_dir(cfg, ige_flags.output_dir);
            igeo::run_ige(cfg, igeo::ige_mode_from_string(ige_modes), dir, std::cout);
        } else if (sweep->parsed()) {
            const igeo::RunConfig cfg = build_config(sweep_flags);
            igeo::SweepSpec spec = igeo::load_sweep_spec(spec_path);
            if (allow_large)
                spec.allow_large = true;
            const std::string dir = igeo::resolve_output_dir(cfg, sweep_flags.output_dir);
            igeo::run_sweep(spec, cfg, dir, std::cout);
        } else if (validate->parsed()) {
            igeo::RunConfig cfg;
            if (validate_config)
                cfg = igeo::load_config(*validate_config);
            const std::uint64_t seed = seed_flag.value_or(cfg.seed);
            const auto results = igeo::run_validation_suites(seed);
            if (!igeo::report_validation(results, std::cout))
                return igeo::kExitValidation;
        }
    } catch (...) {
        return igeo::exit_code_for_current_exception(std::cerr);
    }
    return igeo::kExitOk;
}
