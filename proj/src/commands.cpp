#include "igeo/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "igeo/complexity.hpp"
#include "igeo/csvfmt.hpp"
#include "igeo/diagonal.hpp"
#include "igeo/errors.hpp"
#include "igeo/manifold.hpp"

namespace igeo {

using nlohmann::json;

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const AccuracyError& e) {
        err << "error: " << e.what() << " (achieved " << e.achieved() << ", requested "
            << e.requested() << ")\n";
        return kExitAccuracy;
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << " (last good tau = " << e.tau_reached() << ")\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

std::string resolve_output_dir(const RunConfig& cfg,
                               const std::optional<std::string>& flag_value) {
    std::string dir = ".";
    if (flag_value)
        dir = *flag_value;
    else if (cfg.output.directory)
        dir = *cfg.output.directory;
    else if (const char* env = std::getenv("IGEO_OUTPUT_DIR"))
        dir = env;
    std::filesystem::create_directories(dir);
    return dir;
}

namespace {

std::ofstream open_out(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty())
        std::filesystem::create_directories(parent);
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    return f;
}

void write_json(const std::string& path, const json& j) {
    auto f = open_out(path);
    f << j.dump(2) << "\n";
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_series(const std::string& path, const std::vector<double>& x,
                  const std::vector<double>& y) {
    auto f = open_out(path);
    for (std::size_t i = 0; i < x.size(); ++i)
        f << format_double(x[i]) << " " << format_double(y[i]) << "\n";
}

} // namespace

CurvatureRun run_curvature(const RunConfig& cfg, const CurvatureOptions& opt,
                           const std::string& out_dir, std::ostream& out) {
    if (!(opt.sigma_ref > 0.0))
        throw ConfigError("curvature: reference sigma must be positive");

    CurvatureRun run;
    if (opt.baseline) {
        run.scalar = -static_cast<double>(cfg.l);
        run.blocks.assign(cfg.l, ricci_uncorrelated(opt.sigma_ref));
    } else {
        const ModelParams params = cfg.model();
        std::vector<double> coords(params.dim());
        for (std::size_t k = 0; k < params.l(); ++k)
            coords[2 * k + 1] = opt.sigma_ref;
        const Macrostate theta = Macrostate::original(coords);
        const CurvatureReport report = ricci_tensor(theta, params);
        run.scalar = report.scalar;
        run.blocks = report.blocks;
        if (opt.check_numeric) {
            const ChristoffelField ana = christoffel_analytic(theta, params);
            const ChristoffelField num =
                christoffel_numeric(theta, params, cfg.tolerances.fd_step);
            run.numeric_deviation = ChristoffelField::max_abs_diff(ana, num);
        }
    }

    out << "scalar curvature: " << format_double(run.scalar) << "\n";
    for (std::size_t k = 0; k < run.blocks.size(); ++k) {
        const RicciBlock& b = run.blocks[k];
        out << "block " << k << ": R_11 = " << format_double(b.r11)
            << ", R_12 = " << format_double(b.r12) << ", R_22 = " << format_double(b.r22)
            << " (sigma = " << format_double(opt.sigma_ref) << ")\n";
    }
    if (run.numeric_deviation >= 0.0)
        out << "christoffel analytic vs numeric max deviation: "
            << format_double(run.numeric_deviation) << "\n";

    if (cfg.output.json) {
        json j;
        j["scalar_curvature"] = run.scalar;
        j["baseline"] = opt.baseline;
        j["sigma_ref"] = opt.sigma_ref;
        json blocks = json::array();
        for (std::size_t k = 0; k < run.blocks.size(); ++k)
            blocks.push_back({{"block", k},
                              {"R_11", run.blocks[k].r11},
                              {"R_12", run.blocks[k].r12},
                              {"R_22", run.blocks[k].r22}});
        j["ricci_blocks"] = blocks;
        if (run.numeric_deviation >= 0.0)
            j["christoffel_numeric_deviation"] = run.numeric_deviation;
        write_json(out_dir + "/curvature.json", j);
    }
    if (cfg.output.csv) {
        auto f = open_out(out_dir + "/curvature.csv");
        f << "block,r,sigma,R_11,R_12,R_22\n";
        for (std::size_t k = 0; k < run.blocks.size(); ++k) {
            const double r = opt.baseline ? 0.0 : cfg.r[k];
            f << k << "," << format_double(r) << "," << format_double(opt.sigma_ref) << ","
              << format_double(run.blocks[k].r11) << "," << format_double(run.blocks[k].r12)
              << "," << format_double(run.blocks[k].r22) << "\n";
        }
    }
    return run;
}

GeodesicMode geodesic_mode_from_string(const std::string& s) {
    if (s == "full")
        return GeodesicMode::Full;
    if (s == "diag")
        return GeodesicMode::Diagonal;
    if (s == "canonical")
        return GeodesicMode::Canonical;
    if (s == "analytic")
        return GeodesicMode::Analytic;
    throw ConfigError("geodesic mode must be full, diag, canonical or analytic (got \"" + s +
                      "\")");
}

namespace {

void write_trajectory_csv(const std::string& path, const GeodesicTrajectory& traj) {
    auto f = open_out(path);
    f << "tau,block,chart,mu,sigma,dmu,dsigma\n";
    const char* chart = chart_name(chart_for_system(traj.system));
    for (const GeodesicState& s : traj.samples)
        for (std::size_t k = 0; k < s.position.blocks(); ++k)
            f << format_double(s.tau) << "," << k << "," << chart << ","
              << format_double(s.position.mu(k)) << "," << format_double(s.position.sigma(k))
              << "," << format_double(s.velocity[2 * k]) << ","
              << format_double(s.velocity[2 * k + 1]) << "\n";
}

GeodesicTrajectory sample_analytic(const ModelParams& params, const std::vector<double>& grid,
                                   Chart chart, GeodesicSystem system) {
    GeodesicTrajectory traj;
    traj.system = system;
    traj.samples.reserve(grid.size());
    for (double tau : grid)
        traj.samples.push_back(analytic_state(tau, params, chart));
    return traj;
}

} // namespace

GeodesicRun run_geodesic(const RunConfig& cfg, const GeodesicOptions& opt,
                         const std::string& out_dir, std::ostream& out) {
    const ModelParams params = cfg.model();
    const std::vector<double> grid = cfg.tau.materialize(0.0, 10.0, 201, false);
    const double tau0 = grid.front();
    const double tau1 = grid.back();

    GeodesicRun run;
    GeodesicTrajectory traj;

    if (opt.mode == GeodesicMode::Analytic) {
        traj = sample_analytic(params, grid, Chart::Original, GeodesicSystem::FullCorrelated);
        const GeodesicTrajectory diag =
            sample_analytic(params, grid, Chart::Diagonal, GeodesicSystem::DiagonalAsymptotic);
        run.hypothesis = hypothesis_check(diag, params);
        run.samples = traj.samples.size();
    } else {
        GeodesicSystem system = GeodesicSystem::FullCorrelated;
        Chart chart = Chart::Original;
        switch (opt.mode) {
        case GeodesicMode::Full: break;
        case GeodesicMode::Diagonal:
            system = GeodesicSystem::DiagonalAsymptotic;
            chart = Chart::Diagonal;
            break;
        case GeodesicMode::Canonical:
            system = GeodesicSystem::Canonical;
            chart = Chart::Canonical;
            break;
        default: break;
        }

        GeodesicState initial = analytic_state(tau0, params, chart);
        if (opt.initial) {
            if (opt.initial->size() != params.dim())
                throw ConfigError("geodesic: --initial needs " + std::to_string(params.dim()) +
                                  " comma-separated values");
            initial = GeodesicState(tau0, Macrostate(chart, *opt.initial),
                                    opt.velocity ? *opt.velocity : initial.velocity);
        }
        if (opt.velocity) {
            if (opt.velocity->size() != params.dim())
                throw ConfigError("geodesic: --velocity needs " + std::to_string(params.dim()) +
                                  " comma-separated values");
            initial = GeodesicState(tau0, initial.position, *opt.velocity);
        }

        traj = integrate(system, initial, params, tau1, cfg.tolerances.ode_rel,
                         cfg.tolerances.ode_abs);
        run.samples = traj.samples.size();
        run.steps_accepted = traj.stats.steps_accepted;
        run.steps_rejected = traj.stats.steps_rejected;

        if (opt.mode == GeodesicMode::Full) {
            const double s2_0 =
                line_element(traj.samples.front().position, traj.samples.front().velocity, params);
            for (const GeodesicState& s : traj.samples) {
                const double s2 = line_element(s.position, s.velocity, params);
                run.conservation_drift = std::max(
                    run.conservation_drift, std::fabs(s2 - s2_0) / std::max(std::fabs(s2_0), 1e-300));
            }
            run.hypothesis = hypothesis_check(map_to_diagonal(traj, params), params);
            out << "conservation drift: " << format_double(run.conservation_drift) << "\n";
        } else if (opt.mode == GeodesicMode::Canonical && !opt.initial && !opt.velocity) {
            double gap = 0.0;
            for (const GeodesicState& s : traj.samples) {
                const GeodesicState ref = analytic_state(s.tau, params, Chart::Canonical);
                for (std::size_t i = 0; i < params.dim(); ++i)
                    gap = std::max(gap,
                                   std::fabs(s.position.coords()[i] - ref.position.coords()[i]));
            }
            run.analytic_sup_gap = gap;
            out << "canonical numeric vs analytic sup gap: " << format_double(gap) << "\n";
        }
        if (opt.mode == GeodesicMode::Diagonal)
            run.hypothesis = hypothesis_check(traj, params);
        if (opt.mode == GeodesicMode::Canonical) {
            GeodesicTrajectory diag;
            diag.system = GeodesicSystem::DiagonalAsymptotic;
            diag.stats = traj.stats;
            for (const GeodesicState& s : traj.samples)
                diag.samples.emplace_back(s.tau, diagonal_from_canonical(s.position, params),
                                          diagonal_from_canonical_tangent(s.velocity, params));
            run.hypothesis = hypothesis_check(diag, params);
        }
    }

    out << "samples: " << run.samples << " (accepted " << run.steps_accepted << ", rejected "
        << run.steps_rejected << ")\n";
    out << "hypothesis ratio: " << format_double(run.hypothesis.max_ratio) << " ("
        << (run.hypothesis.threshold_ok ? "ok" : "not satisfied") << ")\n";

    if (cfg.output.csv)
        write_trajectory_csv(out_dir + "/trajectory.csv", traj);
    if (cfg.output.json) {
        json j;
        j["mode"] = static_cast<int>(opt.mode);
        j["samples"] = run.samples;
        j["steps_accepted"] = run.steps_accepted;
        j["steps_rejected"] = run.steps_rejected;
        j["max_error_estimate"] = traj.stats.max_error_estimate;
        j["conservation_drift"] = run.conservation_drift;
        if (run.analytic_sup_gap >= 0.0)
            j["analytic_sup_gap"] = run.analytic_sup_gap;
        j["hypothesis"] = {{"max_ratio", run.hypothesis.max_ratio},
                           {"threshold_ok", run.hypothesis.threshold_ok},
                           {"margin", run.hypothesis.margin}};
        write_json(out_dir + "/geodesic_summary.json", j);
    }
    if (cfg.output.gnuplot) {
        for (std::size_t k = 0; k < params.l(); ++k) {
            std::vector<double> ts, mus, sgs;
            for (const GeodesicState& s : traj.samples) {
                ts.push_back(s.tau);
                mus.push_back(s.position.mu(k));
                sgs.push_back(s.position.sigma(k));
            }
            write_series(out_dir + "/trajectory_mu_" + std::to_string(k) + ".dat", ts, mus);
            write_series(out_dir + "/trajectory_sigma_" + std::to_string(k) + ".dat", ts, sgs);
        }
    }
    return run;
}

IgeMode ige_mode_from_string(const std::string& s) {
    if (s == "closed")
        return IgeMode::Closed;
    if (s == "quadrature")
        return IgeMode::Quadrature;
    if (s == "both")
        return IgeMode::Both;
    throw ConfigError("ige mode must be closed, quadrature or both (got \"" + s + "\")");
}

IgeRun run_ige(const RunConfig& cfg, IgeMode mode, const std::string& out_dir,
               std::ostream& out) {
    const ModelParams params = cfg.model();
    IgeRun run;
    run.tau_grid = cfg.tau.materialize(1e3, 1e6, 61, true);

    const bool want_quad = mode != IgeMode::Closed;

    QuadratureOptions qopt;
    qopt.abs_tol = cfg.tolerances.quadrature_abs;
    qopt.rel_tol = 1e-12;

    run.saturation_v = 1.0;
    for (std::size_t k = 0; k < params.l(); ++k)
        run.saturation_v *= lambda1(params.r(k));
    run.saturation_s = ige_saturation(params);

    for (double tau : run.tau_grid) {
        run.v_closed.push_back(igc_closed_model(tau, params, ClosedFormMode::Exact));
        if (want_quad)
            run.v_quadrature.push_back(
                igc_quadrature_model(tau, params, cfg.density_mode, qopt));
        run.s_closed.push_back(ige(tau, params));
    }

    if (want_quad && cfg.density_mode == DensityMode::Paper) {
        double gap = 0.0;
        for (std::size_t i = 0; i < run.tau_grid.size(); ++i)
            gap = std::max(gap, std::fabs(run.v_closed[i] - run.v_quadrature[i]) /
                                    std::fabs(run.v_closed[i]));
        run.max_closed_quadrature_gap = gap;
        out << "max closed vs quadrature relative gap: " << format_double(gap) << "\n";
    }

    const std::vector<double>& fit_values =
        !run.v_closed.empty() ? run.v_closed : run.v_quadrature;
    bool have_fit = false;
    try {
        const PowerLawFit fit = power_law_fit(run.tau_grid, fit_values, run.saturation_v);
        run.fit_exponent = fit.exponent;
        run.fit_residual = fit.residual;
        have_fit = true;
    } catch (const std::invalid_argument& e) {
        out << "power-law fit skipped: " << e.what() << "\n";
        run.fit_exponent = std::numeric_limits<double>::quiet_NaN();
        run.fit_residual = std::numeric_limits<double>::quiet_NaN();
    }

    run.baseline_at_end = uncorrelated_baseline(run.tau_grid.back(), params.lambda());

    out << "saturation: V -> " << format_double(run.saturation_v) << ", S -> "
        << format_double(run.saturation_s) << "\n";
    if (have_fit)
        out << "power-law fit exponent: " << format_double(run.fit_exponent) << " (residual "
            << format_double(run.fit_residual) << ")\n";
    out << "uncorrelated baseline S(tau_end) = " << format_double(run.baseline_at_end)
        << " at tau_end = " << format_double(run.tau_grid.back()) << "\n";

    if (cfg.output.csv) {
        auto f = open_out(out_dir + "/ige_report.csv");
        f << "tau,v_closed,v_quadrature,s_closed,saturation_gap\n";
        const std::string nan = "nan";
        for (std::size_t i = 0; i < run.tau_grid.size(); ++i) {
            const std::string vc =
                i < run.v_closed.size() ? format_double(run.v_closed[i]) : nan;
            const std::string vq =
                i < run.v_quadrature.size() ? format_double(run.v_quadrature[i]) : nan;
            const std::string gap = i < run.v_closed.size()
                                        ? format_double(run.v_closed[i] - run.saturation_v)
                                        : nan;
            f << format_double(run.tau_grid[i]) << "," << vc << "," << vq << ","
              << format_double(run.s_closed[i]) << "," << gap << "\n";
        }
    }
    if (cfg.output.json) {
        json blocks = json::array();
        for (std::size_t k = 0; k < params.l(); ++k)
            blocks.push_back({{"block", k},
                              {"r", params.r(k)},
                              {"lambda", params.lambda(k)},
                              {"xi", params.xi(k)},
                              {"lambda1", lambda1(params.r(k))},
                              {"lambda2", lambda2(params.r(k), params.lambda(k), params.xi(k))},
                              {"sigma", sigma_fn(params.r(k), params.lambda(k), params.xi(k))}});
        json j;
        j["blocks"] = blocks;
        j["saturation_v"] = run.saturation_v;
        j["saturation_s"] = run.saturation_s;
        if (have_fit) {
            j["fit_exponent"] = run.fit_exponent;
            j["fit_residual"] = run.fit_residual;
        }
        if (run.max_closed_quadrature_gap >= 0.0)
            j["max_closed_quadrature_gap"] = run.max_closed_quadrature_gap;
        j["baseline_at_end"] = run.baseline_at_end;
        write_json(out_dir + "/ige_summary.json", j);
    }
    if (cfg.output.gnuplot) {
        if (!run.v_closed.empty())
            write_series(out_dir + "/ige_v_closed.dat", run.tau_grid, run.v_closed);
        if (!run.v_quadrature.empty())
            write_series(out_dir + "/ige_v_quadrature.dat", run.tau_grid, run.v_quadrature);
        write_series(out_dir + "/ige_s_closed.dat", run.tau_grid, run.s_closed);
    }
    return run;
}

SweepRun run_sweep(const SweepSpec& spec, const RunConfig& cfg, const std::string& out_dir,
                   std::ostream& out) {
    const std::size_t total = spec.grid_size();
    if (total > spec.grid_cap && !spec.allow_large)
        throw ConfigError("sweep grid has " + std::to_string(total) + " points, over the cap of " +
                          std::to_string(spec.grid_cap) +
                          "; pass --allow-large (or \"allow_large\": true) to override");

    SweepRun run;
    run.csv_path = out_dir + "/sweep.csv";
    run.manifest_path = out_dir + "/sweep_manifest.json";

    std::vector<std::string> columns = {"r",       "lambda",  "xi",     "l",
                                        "scalar_curvature", "lambda1", "lambda2", "sigma"};
    for (double t : spec.ige_at_tau)
        columns.push_back("ige_at_tau_" + format_double(t));

    auto f = open_out(run.csv_path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        f << columns[i] << (i + 1 < columns.size() ? "," : "\n");

    for (double r : spec.r.values)
        for (double lam : spec.lambda.values)
            for (double xi : spec.xi.values)
                for (std::size_t l : spec.l) {
                    const double scal = static_cast<double>(l) * scalar_curvature_term(r);
                    const double l1 = lambda1(r);
                    const double l2 = lambda2(r, lam, xi);
                    const double sg = sigma_fn(r, lam, xi);
                    f << format_double(r) << "," << format_double(lam) << ","
                      << format_double(xi) << "," << l << "," << format_double(scal) << ","
                      << format_double(l1) << "," << format_double(l2) << ","
                      << format_double(sg);
                    for (double t : spec.ige_at_tau) {
                        const double arg = l1 + l2 / t;
                        f << ",";
                        if (arg > 0.0)
                            f << format_double(static_cast<double>(l) * std::log(arg));
                        else
                            f << "nan";
                    }
                    f << "\n";
                    ++run.rows;
                }
    f.close();

    json manifest;
    manifest["axes"] = {{"r", spec.r.values},
                        {"lambda", spec.lambda.values},
                        {"xi", spec.xi.values},
                        {"l", spec.l}};
    manifest["ige_at_tau"] = spec.ige_at_tau;
    manifest["rows"] = run.rows;
    manifest["columns"] = columns;
    {
        std::string blob;
        for (double v : spec.r.values)
            blob += format_double(v) + ",";
        for (double v : spec.lambda.values)
            blob += format_double(v) + ",";
        for (double v : spec.xi.values)
            blob += format_double(v) + ",";
        for (std::size_t v : spec.l)
            blob += std::to_string(v) + ",";
        for (double v : spec.ige_at_tau)
            blob += format_double(v) + ",";
        blob += std::to_string(cfg.seed);
        manifest["config_hash"] = fnv1a(blob);
    }
    write_json(run.manifest_path, manifest);

    out << "sweep: " << run.rows << " rows -> " << run.csv_path << "\n";
    return run;
}

} // namespace igeo
