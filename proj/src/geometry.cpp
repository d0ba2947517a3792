#include "igeo/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace igeo {

double ChristoffelField::max_abs_diff(const ChristoffelField& a, const ChristoffelField& b) {
    if (a.l() != b.l())
        throw std::invalid_argument("ChristoffelField::max_abs_diff: block count mismatch");
    double m = 0.0;
    for (std::size_t blk = 0; blk < a.l(); ++blk)
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    m = std::max(m, std::fabs(a.blocks[blk][k][i][j] - b.blocks[blk][k][i][j]));
    return m;
}

bool ChristoffelField::symmetric() const {
    for (const auto& g : blocks)
        for (int k = 0; k < 2; ++k)
            if (g[k][0][1] != g[k][1][0])
                return false;
    return true;
}

ChristoffelField christoffel_analytic(const Macrostate& theta, const ModelParams& params) {
    theta.require_chart(Chart::Original, "christoffel_analytic");
    detail::require_block_count(theta, params, "christoffel_analytic");
    detail::require_positive_sigma(theta, "christoffel_analytic");

    ChristoffelField field;
    field.blocks.reserve(params.l());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double q = (2.0 - r * r) * theta.sigma(k);
        Gamma2 g{};
        g[0][0][0] = -r / q;
        g[1][0][0] = 1.0 / q;
        g[0][0][1] = g[0][1][0] = -2.0 / q;
        g[1][0][1] = g[1][1][0] = r / q;
        g[0][1][1] = -2.0 * r / q;
        g[1][1][1] = (2.0 * r * r - 2.0) / q;
        field.blocks.push_back(g);
    }
    return field;
}

namespace {

// Central-difference derivative of the metric block with respect to block
// coordinate `axis` (0 = mu, 1 = sigma).
Mat2 metric_block_derivative(const Macrostate& theta, const ModelParams& params,
                             std::size_t block, int axis, double h) {
    std::vector<double> up = theta.coords();
    std::vector<double> dn = theta.coords();
    up[2 * block + axis] += h;
    dn[2 * block + axis] -= h;
    const Mat2 gp = metric_tensor(Macrostate::original(std::move(up)), params).blocks[block];
    const Mat2 gm = metric_tensor(Macrostate::original(std::move(dn)), params).blocks[block];
    return (gp - gm) * (1.0 / (2.0 * h));
}

double mat_at(const Mat2& m, int i, int j) {
    if (i == 0)
        return j == 0 ? m.a11 : m.a12;
    return j == 0 ? m.a21 : m.a22;
}

} // namespace

ChristoffelField christoffel_numeric(const Macrostate& theta, const ModelParams& params,
                                     double h) {
    theta.require_chart(Chart::Original, "christoffel_numeric");
    detail::require_block_count(theta, params, "christoffel_numeric");
    detail::require_positive_sigma(theta, "christoffel_numeric");
    if (!(h > 0.0))
        throw std::domain_error("christoffel_numeric: step h must be positive");
    for (std::size_t k = 0; k < params.l(); ++k)
        if (!(theta.sigma(k) - h > 0.0))
            throw std::domain_error("christoffel_numeric: stencil leaves the manifold at "
                                    "sigma[" + std::to_string(k) + "]");

    const BlockMetric ginv = inverse_metric(theta, params);

    ChristoffelField field;
    field.blocks.reserve(params.l());
    for (std::size_t blk = 0; blk < params.l(); ++blk) {
        // dg[m] = d_m g for the two block coordinates.
        const Mat2 dg[2] = {metric_block_derivative(theta, params, blk, 0, h),
                            metric_block_derivative(theta, params, blk, 1, h)};
        Gamma2 g{};
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    double sum = 0.0;
                    for (int m = 0; m < 2; ++m)
                        sum += mat_at(ginv.blocks[blk], k, m) *
                               (mat_at(dg[i], m, j) + mat_at(dg[j], i, m) - mat_at(dg[m], i, j));
                    g[k][i][j] = 0.5 * sum;
                }
        field.blocks.push_back(g);
    }
    return field;
}

CurvatureReport ricci_tensor(const Macrostate& theta, const ModelParams& params) {
    theta.require_chart(Chart::Original, "ricci_tensor");
    detail::require_block_count(theta, params, "ricci_tensor");
    detail::require_positive_sigma(theta, "ricci_tensor");

    CurvatureReport report;
    report.blocks.reserve(params.l());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double s = theta.sigma(k);
        const double q = (2.0 - r * r) * s * s;
        report.blocks.push_back(RicciBlock{-1.0 / q, -r / q, -2.0 / q});
    }
    report.scalar = scalar_curvature(params);
    report.r_used = params.r();
    return report;
}

CurvatureReport ricci_numeric(const Macrostate& theta, const ModelParams& params, double h) {
    theta.require_chart(Chart::Original, "ricci_numeric");
    const double fd_h = 1e-5; // inner step for the Gamma evaluations themselves

    const ChristoffelField gamma = christoffel_numeric(theta, params, fd_h);

    // d_m Gamma at theta, by differencing christoffel_numeric along each
    // block coordinate.
    CurvatureReport report;
    report.blocks.reserve(params.l());
    for (std::size_t blk = 0; blk < params.l(); ++blk) {
        Gamma2 dgamma[2];
        for (int axis = 0; axis < 2; ++axis) {
            std::vector<double> up = theta.coords();
            std::vector<double> dn = theta.coords();
            up[2 * blk + axis] += h;
            dn[2 * blk + axis] -= h;
            const Gamma2 gp =
                christoffel_numeric(Macrostate::original(std::move(up)), params, fd_h).blocks[blk];
            const Gamma2 gm =
                christoffel_numeric(Macrostate::original(std::move(dn)), params, fd_h).blocks[blk];
            for (int k = 0; k < 2; ++k)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        dgamma[axis][k][i][j] = (gp[k][i][j] - gm[k][i][j]) / (2.0 * h);
        }

        const Gamma2& g = gamma.blocks[blk];
        auto ricci_ij = [&](int i, int j) {
            double val = 0.0;
            for (int k = 0; k < 2; ++k)
                val += dgamma[k][k][i][j] - dgamma[j][k][i][k];
            for (int k = 0; k < 2; ++k)
                for (int n = 0; n < 2; ++n)
                    val += g[k][i][j] * g[n][k][n] - g[n][i][k] * g[k][j][n];
            return val;
        };
        report.blocks.push_back(RicciBlock{ricci_ij(0, 0), ricci_ij(0, 1), ricci_ij(1, 1)});
    }
    report.scalar = scalar_curvature(params);
    report.r_used = params.r();
    return report;
}

double scalar_curvature_term(double r) {
    if (!(r >= 0.0 && r <= 1.0))
        throw std::domain_error("scalar_curvature_term: r outside [0,1]");
    return -2.0 / (2.0 - r * r);
}

double scalar_curvature(const ModelParams& params) {
    double sum = 0.0;
    for (std::size_t k = 0; k < params.l(); ++k)
        sum += scalar_curvature_term(params.r(k));
    return sum;
}

Gamma2 christoffel_uncorrelated(double sigma) {
    if (!(sigma > 0.0))
        throw std::domain_error("christoffel_uncorrelated: sigma must be positive");
    Gamma2 g{};
    g[1][0][0] = 1.0 / (2.0 * sigma);
    g[0][0][1] = g[0][1][0] = -1.0 / sigma;
    g[1][1][1] = -1.0 / sigma;
    return g;
}

RicciBlock ricci_uncorrelated(double sigma) {
    if (!(sigma > 0.0))
        throw std::domain_error("ricci_uncorrelated: sigma must be positive");
    return RicciBlock{-1.0 / (2.0 * sigma * sigma), 0.0, -1.0 / (sigma * sigma)};
}

} // namespace igeo
