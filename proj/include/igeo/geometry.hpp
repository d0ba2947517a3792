#pragma once

#include <array>
#include <vector>

#include "igeo/manifold.hpp"
#include "igeo/model.hpp"

namespace igeo {

/// Per-block connection coefficients Gamma^k_ij with k, i, j in {0, 1}
/// (0 <-> mu, 1 <-> sigma). Indexed gamma[k][i][j].
using Gamma2 = std::array<std::array<std::array<double, 2>, 2>, 2>;

struct ChristoffelField {
    std::vector<Gamma2> blocks;

    std::size_t l() const { return blocks.size(); }

    /// Max over blocks and slots of |a - b|.
    static double max_abs_diff(const ChristoffelField& a, const ChristoffelField& b);

    /// True when gamma[k][i][j] == gamma[k][j][i] exactly (torsion-free).
    bool symmetric() const;
};

struct RicciBlock {
    double r11 = 0.0, r12 = 0.0, r22 = 0.0;
};

struct CurvatureReport {
    std::vector<RicciBlock> blocks;
    double scalar = 0.0;
    std::vector<double> r_used;
};

/// Closed-form Levi-Civita connection of the Fisher-Rao metric. Per block,
/// with (r, sigma) = (r_k, sigma_k) and q = (2 - r^2) sigma:
///   Gamma^mu_{mu mu}    = -r/q     Gamma^sigma_{mu mu}       = 1/q
///   Gamma^mu_{mu sigma} = -2/q     Gamma^sigma_{mu sigma}    = r/q
///   Gamma^mu_{sigma sigma} = -2r/q Gamma^sigma_{sigma sigma} = (2r^2 - 2)/q
ChristoffelField christoffel_analytic(const Macrostate& theta, const ModelParams& params);

/// Finite-difference evaluation of Gamma^k_ij = (1/2) g^{km} (d_i g_mj +
/// d_j g_im - d_m g_ij) using central differences of metric_tensor. Built
/// only from the metric, independent of the closed forms.
ChristoffelField christoffel_numeric(const Macrostate& theta, const ModelParams& params,
                                     double h = 1e-5);

/// Closed-form Ricci tensor. Per block: R_11 = -1/((2-r^2) sigma^2),
/// R_12 = R_21 = -r/((2-r^2) sigma^2), R_22 = -2/((2-r^2) sigma^2).
/// The report's scalar field carries scalar_curvature(params).
CurvatureReport ricci_tensor(const Macrostate& theta, const ModelParams& params);

/// Finite-difference Ricci from the definition R_ij = d_k Gamma^k_ij -
/// d_j Gamma^k_ik + Gamma^k_ij Gamma^n_kn - Gamma^m_ik Gamma^k_jm, built on
/// christoffel_numeric. Test oracle for the closed forms.
CurvatureReport ricci_numeric(const Macrostate& theta, const ModelParams& params,
                              double h = 1e-4);

/// Scalar curvature; fully determined by the correlation strengths.
double scalar_curvature(const ModelParams& params);

/// Per-block contribution -2/(2 - r^2) to the scalar curvature, defined for
/// r in [0, 1]; at r = 0 this is the uncorrelated value -1 per block.
double scalar_curvature_term(double r);

/// r -> 0 closed forms, used by the uncorrelated baseline paths.
Gamma2 christoffel_uncorrelated(double sigma);
RicciBlock ricci_uncorrelated(double sigma);

} // namespace igeo
