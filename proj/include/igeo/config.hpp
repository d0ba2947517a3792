#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "igeo/model.hpp"

namespace igeo {

/// A config or CLI value failed validation. Message names the field and the
/// violated constraint; maps to exit status 1.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct TauGrid {
    std::optional<double> start;
    std::optional<double> end;
    std::optional<std::size_t> grid_points;
    std::optional<bool> log_grid;

    /// Concrete grid with per-command defaults filled in.
    std::vector<double> materialize(double def_start, double def_end, std::size_t def_points,
                                    bool def_log) const;
};

struct Tolerances {
    double ode_rel = 1e-9;
    double ode_abs = 1e-12;
    double quadrature_abs = 1e-12;
    double fd_step = 1e-5;
};

struct OutputSpec {
    std::optional<std::string> directory; // resolved against the IGEO_OUTPUT_DIR env var
    bool csv = true;
    bool json = true;
    bool gnuplot = false;
};

struct RunConfig {
    std::size_t l = 1;
    std::vector<double> r{0.5};
    std::vector<double> lambda{0.5};
    std::vector<double> xi{1.0};
    TauGrid tau;
    Tolerances tolerances;
    DensityMode density_mode = DensityMode::Paper;
    OutputSpec output;
    std::uint64_t seed = 20260809;

    ModelParams model() const;
};

/// Axis of a parameter sweep: explicit values or a linear range.
struct SweepAxis {
    std::vector<double> values;
};

struct SweepSpec {
    SweepAxis r{{0.5}};
    SweepAxis lambda{{1.0}};
    SweepAxis xi{{1.0}};
    std::vector<std::size_t> l{1};
    std::vector<double> ige_at_tau;
    std::size_t grid_cap = 1000000;
    bool allow_large = false;

    std::size_t grid_size() const;
};

/// Strict JSON config loading: unknown keys and duplicate keys are rejected,
/// every violated constraint names its field. Throws ConfigError.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin = "<config>");

/// Applies CLI flag overrides on top of a loaded config (flags win), with the
/// same broadcast and validation rules as the file path.
void apply_model_overrides(RunConfig& cfg, std::optional<std::size_t> l,
                           std::optional<std::vector<double>> r,
                           std::optional<std::vector<double>> lambda,
                           std::optional<std::vector<double>> xi);

void apply_tau_overrides(RunConfig& cfg, std::optional<double> start, std::optional<double> end,
                         std::optional<std::size_t> points, std::optional<bool> log_grid);

SweepSpec load_sweep_spec(const std::string& path);
SweepSpec parse_sweep_spec(const std::string& json_text, const std::string& origin = "<spec>");

} // namespace igeo
