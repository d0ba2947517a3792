#pragma once

#include <cstddef>
#include <vector>

#include "igeo/model.hpp"
#include "igeo/quadrature.hpp"

namespace igeo {

/// Substitution coefficients of the complexity integrand, per block.
/// A = Xi, B = -4 lambda sqrt(alpha_+ / (2 alpha_-)), C = slope_plus * Xi,
/// D = B * slope_minus. Sign structure: A, C, D > 0 and B < 0.
struct AbcdCoefficients {
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

AbcdCoefficients abcd(double r, double lam, double xi);

/// Complexity integrand (A e^{-lambda tau'} + B e^{-2 lambda tau'}) /
/// (C e^{-lambda tau'} + D e^{-2 lambda tau'}), evaluated in the reduced
/// form (A + B u)/(C + D u) with u = e^{-lambda tau'}. Tends to A/C as
/// tau' -> infinity.
double ige_integrand(double tau_prime, double r, double lam, double xi);

enum class ClosedFormMode {
    Exact,     // definite integral of the integrand over [0, tau]
    Asymptotic // large-tau simplification; drops the e^{-lambda tau} transient
};

/// Antiderivative of the integrand:
/// (1/lambda)(A/C - B/D) ln((D e^{-lambda tau} + C)/D) + (A/C) tau.
double inner_antiderivative(double tau, const AbcdCoefficients& coeffs, double lam);

/// Inner integral of the complexity average. Exact mode integrates from 0
/// (antiderivative difference); Asymptotic mode is
/// (1/lambda)(A/C - B/D) ln(C/D) + (A/C) tau.
double inner_integral_closed(double tau, const AbcdCoefficients& coeffs, double lam,
                             ClosedFormMode mode = ClosedFormMode::Exact);

/// Saturation constant Lambda_1(r) = 2 r sqrt(2 - r^2) / (1 + sqrt(1 + 4 r^2)).
double lambda1(double r);

/// 1/tau coefficient Lambda_2 = sqrt((1 + 4 r^2)(2 - r^2)) / r * ln(Sigma) / lambda.
double lambda2(double r, double lam, double xi);

/// Sigma = C/D, strictly positive for all valid parameters.
double sigma_fn(double r, double lam, double xi);

/// Closed-form complexity for l identical blocks.
/// Asymptotic mode: (Lambda_1 + Lambda_2 / tau)^l.
/// Exact mode: (sqrt(2 - r^2) * inner_integral / tau)^l.
double igc_closed(double tau, double r, double lam, double xi, std::size_t l_blocks = 1,
                  ClosedFormMode mode = ClosedFormMode::Asymptotic);

/// Product over (generally unequal) blocks of a model.
double igc_closed_model(double tau, const ModelParams& params,
                        ClosedFormMode mode = ClosedFormMode::Asymptotic);

/// Complexity via adaptive quadrature of the integrand over [0, tau]:
/// sqrt(2 - r^2)/tau * integral. In Determinant mode the integrand carries
/// one extra 1/sigma factor, with sigma taken along the analytic geodesic;
/// the result diverges exponentially in tau and is reported for sensitivity
/// comparison only.
double igc_quadrature(double tau, double r, double lam, double xi,
                      DensityMode density_mode = DensityMode::Paper,
                      const QuadratureOptions& opt = {});

double igc_quadrature_model(double tau, const ModelParams& params,
                            DensityMode density_mode = DensityMode::Paper,
                            const QuadratureOptions& opt = {});

/// Entropy sum_k log(Lambda_1(r_k) + Lambda_2(r_k, lambda_k)/tau).
/// Throws std::domain_error naming the block when the log argument is
/// non-positive.
double ige(double tau, const ModelParams& params);

/// Saturation value sum_k log Lambda_1(r_k).
double ige_saturation(const ModelParams& params);

/// Uncorrelated contrast case: entropy sum_k lambda_k * tau, growing without
/// bound.
double uncorrelated_baseline(double tau, const std::vector<double>& lambdas);

/// Least-squares slope of log|values - saturation| against log tau.
/// Requires a grid spanning at least two decades and a constant-sign
/// approach to saturation.
struct PowerLawFit {
    double exponent = 0.0;
    double residual = 0.0;
};

PowerLawFit power_law_fit(const std::vector<double>& tau_grid, const std::vector<double>& values,
                          double saturation);

} // namespace igeo
