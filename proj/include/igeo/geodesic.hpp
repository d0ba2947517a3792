#pragma once

#include <cstddef>
#include <vector>

#include "igeo/model.hpp"

namespace igeo {

enum class GeodesicSystem { FullCorrelated, DiagonalAsymptotic, Canonical };

const char* geodesic_system_name(GeodesicSystem s);
Chart chart_for_system(GeodesicSystem s);

struct GeodesicState {
    double tau = 0.0;
    Macrostate position;
    std::vector<double> velocity;

    GeodesicState(double tau_, Macrostate position_, std::vector<double> velocity_);
};

struct IntegrationStats {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double max_error_estimate = 0.0;
};

struct GeodesicTrajectory {
    GeodesicSystem system = GeodesicSystem::FullCorrelated;
    std::vector<GeodesicState> samples;
    IntegrationStats stats;
};

/// Geodesic accelerations (one per coordinate) for the three systems.
///
/// Full, per block:
///   mu''    =  [r mu'^2 + 4 mu' sigma' + 2 r sigma'^2] / ((2 - r^2) sigma)
///   sigma'' = -[mu'^2 + 2 r mu' sigma' + (2 r^2 - 2) sigma'^2] / ((2 - r^2) sigma)
std::vector<double> rhs_full(const GeodesicState& state, const ModelParams& params);

/// Diagonal-chart asymptotic system, per block:
///   mu~''    = 2 mu~' sigma~' / sigma~
///   sigma~'' = -(alpha_-/alpha_+) mu~'^2 / sigma~ + sigma~'^2 / sigma~
std::vector<double> rhs_diagonal(const GeodesicState& state, const ModelParams& params);

/// Canonical system (the alpha ratio becomes 1/2), per block:
///   mu''    = 2 mu' sigma' / sigma
///   sigma'' = -mu'^2 / (2 sigma) + sigma'^2 / sigma
std::vector<double> rhs_canonical(const GeodesicState& state);

/// Adaptive initial-value integration of the chosen system up to tau_end.
/// Halts with SingularityError if any sigma crosses the 1e-12 floor or the
/// step size underflows below 1e-14 of the span.
GeodesicTrajectory integrate(GeodesicSystem system, const GeodesicState& initial,
                             const ModelParams& params, double tau_end, double rel_tol = 1e-9,
                             double abs_tol = 1e-12);

/// Closed-form canonical-chart geodesic for one block:
///   mu'(tau)    = (Xi^2 / 2 lambda) / (exp(-2 lambda tau) + Xi^2 / 8 lambda^2) - 4 lambda
///   sigma'(tau) = Xi exp(-lambda tau) / (exp(-2 lambda tau) + Xi^2 / 8 lambda^2)
struct CanonicalPoint {
    double mu = 0.0;
    double sigma = 0.0;
    double dmu = 0.0;
    double dsigma = 0.0;
    double d2mu = 0.0;
    double d2sigma = 0.0;
};

CanonicalPoint analytic_geodesic_canonical(double tau, double xi, double lambda);

/// The same geodesic carried to the Original chart through the canonical ->
/// diagonal -> original chart maps, for block k of params.
struct OriginalPoint {
    double mu = 0.0;
    double sigma = 0.0;
    double dmu = 0.0;
    double dsigma = 0.0;
};

OriginalPoint analytic_geodesic_original(double tau, const ModelParams& params, std::size_t k);

/// Full analytic state (all blocks) in the requested chart at tau, with
/// velocities; ready to seed the numeric integrator.
GeodesicState analytic_state(double tau, const ModelParams& params, Chart chart);

/// Checks the asymptotic decoupling ratio along a Diagonal-chart trajectory:
/// sup over the trailing half of |mu~/sigma~| * |slope_minus/slope_plus| per
/// block. Passes when the sup is below `margin`.
struct HypothesisReport {
    double max_ratio = 0.0;
    bool threshold_ok = false;
    double margin = 0.1;
};

HypothesisReport hypothesis_check(const GeodesicTrajectory& traj, const ModelParams& params,
                                  double margin = 0.1);

/// Maps a FullCorrelated trajectory into the Diagonal chart (positions and
/// velocities per block).
GeodesicTrajectory map_to_diagonal(const GeodesicTrajectory& traj, const ModelParams& params);

/// Single-shooting two-point boundary solver over the IVP integrator:
/// finds the initial velocity sending `from` to `to` at tau_end. Damped
/// Newton on the finite-difference shooting Jacobian.
struct BvpOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double residual_tol = 1e-8;
    std::size_t max_iterations = 50;
};

GeodesicTrajectory solve_bvp(GeodesicSystem system, const Macrostate& from, const Macrostate& to,
                             const ModelParams& params, double tau_end,
                             const BvpOptions& opt = {});

} // namespace igeo
