#include "igeo/diagonal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace igeo {

namespace {

void require_r_in_range(double r, const char* op) {
    if (!(r >= kDiagonalRCutoff && r < 1.0))
        throw std::domain_error(std::string(op) + ": r = " + std::to_string(r) +
                                " outside [" + std::to_string(kDiagonalRCutoff) +
                                ", 1); use the uncorrelated baseline for r -> 0");
}

} // namespace

double eigen_discriminant(double r) { return 1.0 + 4.0 * r * r; }

double eigenvalue_minus(double r) { return (3.0 - std::sqrt(eigen_discriminant(r))) / 2.0; }
double eigenvalue_plus(double r) { return (3.0 + std::sqrt(eigen_discriminant(r))) / 2.0; }

double eigvec_slope_minus(double r) {
    return (1.0 - std::sqrt(eigen_discriminant(r))) / (2.0 * r);
}
double eigvec_slope_plus(double r) {
    return (1.0 + std::sqrt(eigen_discriminant(r))) / (2.0 * r);
}

double mu_rescale_factor(double r) {
    return std::sqrt(2.0 * eigenvalue_minus(r) / eigenvalue_plus(r));
}

BlockEigen block_eigen(double r) {
    require_r_in_range(r, "block_eigen");

    BlockEigen eig;
    eig.delta = eigen_discriminant(r);
    const double sd = std::sqrt(eig.delta);
    eig.alpha_minus = (3.0 - sd) / 2.0;
    eig.alpha_plus = (3.0 + sd) / 2.0;

    const double s_minus = (1.0 - sd) / (2.0 * r);
    const double s_plus = (1.0 + sd) / (2.0 * r);
    eig.E = Mat2{1.0, 1.0, s_minus, s_plus};
    const double f = r / sd;
    eig.E_inv = Mat2{f * s_plus, -f, -f * s_minus, f};
    return eig;
}

Mat2 reconstruct_metric(const BlockEigen& eig, double sigma) {
    if (!(sigma > 0.0))
        throw std::domain_error("reconstruct_metric: sigma must be positive");
    const Mat2 d = Mat2::diag(eig.alpha_minus, eig.alpha_plus);
    return (eig.E * d * eig.E_inv) * (1.0 / (sigma * sigma));
}

namespace {

using BlockMap = std::array<double, 2> (*)(double, double, double);

Macrostate map_blocks(const Macrostate& theta, const ModelParams& params, Chart from, Chart to,
                      const char* op, BlockMap f, bool check_sigma_positive) {
    theta.require_chart(from, op);
    detail::require_block_count(theta, params, op);

    std::vector<double> out(theta.coords().size());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        require_r_in_range(r, op);
        const auto xy = f(theta.coords()[2 * k], theta.coords()[2 * k + 1], r);
        out[2 * k] = xy[0];
        out[2 * k + 1] = xy[1];
        if (check_sigma_positive && !(xy[1] > 0.0))
            throw std::range_error(std::string(op) + ": image sigma[" + std::to_string(k) +
                                   "] = " + std::to_string(xy[1]) +
                                   " leaves the manifold (must be positive)");
    }
    return Macrostate(to, std::move(out));
}

std::vector<double> map_tangent(const std::vector<double>& v, const ModelParams& params,
                                const char* op, BlockMap f) {
    if (v.size() != params.dim())
        throw std::invalid_argument(std::string(op) + ": tangent vector has " +
                                    std::to_string(v.size()) + " components, expected " +
                                    std::to_string(params.dim()));
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        require_r_in_range(r, op);
        const auto xy = f(v[2 * k], v[2 * k + 1], r);
        out[2 * k] = xy[0];
        out[2 * k + 1] = xy[1];
    }
    return out;
}

std::array<double, 2> diag_to_orig(double mu_t, double sg_t, double r) {
    return {mu_t + sg_t, eigvec_slope_minus(r) * mu_t + eigvec_slope_plus(r) * sg_t};
}

std::array<double, 2> orig_to_diag(double mu, double sg, double r) {
    const double sd = std::sqrt(eigen_discriminant(r));
    const double f = r / sd;
    // E^{-1} rows: [f*slope_plus, -f], [-f*slope_minus, f]
    return {f * eigvec_slope_plus(r) * mu - f * sg, -f * eigvec_slope_minus(r) * mu + f * sg};
}

std::array<double, 2> diag_to_canon(double mu_t, double sg_t, double r) {
    return {mu_rescale_factor(r) * mu_t, sg_t};
}

std::array<double, 2> canon_to_diag(double mu_p, double sg_p, double r) {
    return {mu_p / mu_rescale_factor(r), sg_p};
}

} // namespace

Macrostate original_from_diagonal(const Macrostate& theta, const ModelParams& params) {
    return map_blocks(theta, params, Chart::Diagonal, Chart::Original, "original_from_diagonal",
                      diag_to_orig, /*check_sigma_positive=*/true);
}

Macrostate diagonal_from_original(const Macrostate& theta, const ModelParams& params) {
    return map_blocks(theta, params, Chart::Original, Chart::Diagonal, "diagonal_from_original",
                      orig_to_diag, /*check_sigma_positive=*/false);
}

Macrostate canonical_from_diagonal(const Macrostate& theta, const ModelParams& params) {
    return map_blocks(theta, params, Chart::Diagonal, Chart::Canonical, "canonical_from_diagonal",
                      diag_to_canon, /*check_sigma_positive=*/false);
}

Macrostate diagonal_from_canonical(const Macrostate& theta, const ModelParams& params) {
    return map_blocks(theta, params, Chart::Canonical, Chart::Diagonal, "diagonal_from_canonical",
                      canon_to_diag, /*check_sigma_positive=*/false);
}

std::vector<double> diagonal_from_original_tangent(const std::vector<double>& v,
                                                   const ModelParams& params) {
    return map_tangent(v, params, "diagonal_from_original_tangent", orig_to_diag);
}

std::vector<double> original_from_diagonal_tangent(const std::vector<double>& v,
                                                   const ModelParams& params) {
    return map_tangent(v, params, "original_from_diagonal_tangent", diag_to_orig);
}

std::vector<double> canonical_from_diagonal_tangent(const std::vector<double>& v,
                                                    const ModelParams& params) {
    return map_tangent(v, params, "canonical_from_diagonal_tangent", diag_to_canon);
}

std::vector<double> diagonal_from_canonical_tangent(const std::vector<double>& v,
                                                    const ModelParams& params) {
    return map_tangent(v, params, "diagonal_from_canonical_tangent", canon_to_diag);
}

} // namespace igeo
