#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "igeo/config.hpp"
#include "igeo/geodesic.hpp"
#include "igeo/geometry.hpp"
#include "igeo/model.hpp"

namespace igeo {

/// Exit-status contract shared by the CLI and the test drivers:
/// 0 success, 1 validation failure, 2 runtime/domain error,
/// 3 accuracy-not-achieved.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitAccuracy = 3;

/// Maps the in-flight exception to the exit-status contract and prints a
/// diagnostic to `err`.
int exit_code_for_current_exception(std::ostream& err);

/// Flag > config > IGEO_OUTPUT_DIR > ".".
std::string resolve_output_dir(const RunConfig& cfg,
                               const std::optional<std::string>& flag_value);

struct CurvatureOptions {
    bool baseline = false;      // r -> 0 uncorrelated closed forms
    bool check_numeric = false; // also run the finite-difference oracle
    double sigma_ref = 1.0;
};

struct CurvatureRun {
    double scalar = 0.0;
    std::vector<RicciBlock> blocks;
    double numeric_deviation = -1.0; // max |analytic - numeric|, -1 when not run
};

CurvatureRun run_curvature(const RunConfig& cfg, const CurvatureOptions& opt,
                           const std::string& out_dir, std::ostream& out);

enum class GeodesicMode { Full, Diagonal, Canonical, Analytic };

GeodesicMode geodesic_mode_from_string(const std::string& s);

struct GeodesicOptions {
    GeodesicMode mode = GeodesicMode::Analytic;
    // Defaults to the analytic initial state at tau.start when absent.
    std::optional<std::vector<double>> initial;
    std::optional<std::vector<double>> velocity;
};

struct GeodesicRun {
    std::size_t samples = 0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double conservation_drift = 0.0; // full system only
    double analytic_sup_gap = -1.0;  // canonical numeric vs closed form
    HypothesisReport hypothesis;
};

GeodesicRun run_geodesic(const RunConfig& cfg, const GeodesicOptions& opt,
                         const std::string& out_dir, std::ostream& out);

enum class IgeMode { Closed, Quadrature, Both };

IgeMode ige_mode_from_string(const std::string& s);

struct IgeRun {
    std::vector<double> tau_grid;
    std::vector<double> v_closed;
    std::vector<double> v_quadrature; // empty unless quadrature requested
    std::vector<double> s_closed;
    double saturation_v = 0.0; // product of Lambda_1
    double saturation_s = 0.0; // sum of log Lambda_1
    double max_closed_quadrature_gap = -1.0;
    double fit_exponent = 0.0;
    double fit_residual = 0.0;
    double baseline_at_end = 0.0;
};

IgeRun run_ige(const RunConfig& cfg, IgeMode mode, const std::string& out_dir,
               std::ostream& out);

struct SweepRun {
    std::size_t rows = 0;
    std::string csv_path;
    std::string manifest_path;
};

SweepRun run_sweep(const SweepSpec& spec, const RunConfig& cfg, const std::string& out_dir,
                   std::ostream& out);

} // namespace igeo
