#pragma once

#include <vector>

#include "igeo/mat2.hpp"
#include "igeo/model.hpp"

namespace igeo {

/// r below this is numerically unusable for the basis change (the eigenvector
/// slopes behave like 1/r); callers wanting the uncorrelated limit should use
/// the dedicated baseline paths instead.
inline constexpr double kDiagonalRCutoff = 1e-6;

/// Discriminant of the per-block characteristic polynomial: 1 + 4 r^2.
double eigen_discriminant(double r);

/// Eigenvalues (3 -+ sqrt(1 + 4 r^2)) / 2 of the sigma = 1 metric block
/// [[1, r], [r, 2]].
double eigenvalue_minus(double r);
double eigenvalue_plus(double r);

/// Sigma-components of the (non-normalized) eigenvectors with first
/// component 1: slope_minus = (1 - sqrt(D))/(2r) < 0,
/// slope_plus = (1 + sqrt(D))/(2r) > 0.
double eigvec_slope_minus(double r);
double eigvec_slope_plus(double r);

/// mu-rescaling factor sqrt(2 alpha_- / alpha_+) taking Diagonal to
/// Canonical coordinates.
double mu_rescale_factor(double r);

/// Closed-form eigendecomposition of one metric block. E's columns are the
/// eigenvectors as printed (first component 1, not unit-normalized); all
/// downstream formulas assume that scaling.
struct BlockEigen {
    double alpha_minus = 0.0;
    double alpha_plus = 0.0;
    Mat2 E;
    Mat2 E_inv;
    double delta = 0.0;
};

/// Requires kDiagonalRCutoff <= r < 1.
BlockEigen block_eigen(double r);

/// (1/sigma^2) * E * diag(alpha_-, alpha_+) * E_inv; equals the metric block.
Mat2 reconstruct_metric(const BlockEigen& eig, double sigma);

/// Chart maps between Original, Diagonal and Canonical coordinates. Per
/// block: mu = mu~ + sigma~, sigma = slope_minus * mu~ + slope_plus * sigma~,
/// and the canonical rescaling mu' = mu_rescale_factor * mu~, sigma' = sigma~.
Macrostate original_from_diagonal(const Macrostate& theta, const ModelParams& params);
Macrostate diagonal_from_original(const Macrostate& theta, const ModelParams& params);
Macrostate canonical_from_diagonal(const Macrostate& theta, const ModelParams& params);
Macrostate diagonal_from_canonical(const Macrostate& theta, const ModelParams& params);

/// Same linear maps applied to tangent vectors (velocities).
std::vector<double> diagonal_from_original_tangent(const std::vector<double>& v,
                                                   const ModelParams& params);
std::vector<double> original_from_diagonal_tangent(const std::vector<double>& v,
                                                   const ModelParams& params);
std::vector<double> canonical_from_diagonal_tangent(const std::vector<double>& v,
                                                    const ModelParams& params);
std::vector<double> diagonal_from_canonical_tangent(const std::vector<double>& v,
                                                    const ModelParams& params);

} // namespace igeo
