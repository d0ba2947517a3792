#include "igeo/complexity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "igeo/diagonal.hpp"

namespace igeo {

namespace {

void require_block_args(double r, double lam, double xi, const char* op) {
    if (!(r > 0.0 && r <= 1.0))
        throw std::domain_error(std::string(op) + ": r = " + std::to_string(r) +
                                " outside (0, 1]");
    if (!(lam > 0.0))
        throw std::domain_error(std::string(op) + ": lambda must be positive");
    if (!(xi > 0.0))
        throw std::domain_error(std::string(op) + ": xi must be positive");
}

double velocity_scale(double r, double lam) {
    // 4 lambda sqrt(alpha_+ / (2 alpha_-)), the common magnitude of B and D.
    return 4.0 * lam * std::sqrt(eigenvalue_plus(r) / (2.0 * eigenvalue_minus(r)));
}

} // namespace

AbcdCoefficients abcd(double r, double lam, double xi) {
    require_block_args(r, lam, xi, "abcd");
    AbcdCoefficients c;
    c.A = xi;
    c.B = -velocity_scale(r, lam);
    c.C = eigvec_slope_plus(r) * xi;
    c.D = c.B * eigvec_slope_minus(r);
    return c;
}

double ige_integrand(double tau_prime, double r, double lam, double xi) {
    const AbcdCoefficients c = abcd(r, lam, xi);
    const double u = std::exp(-lam * tau_prime);
    const double denom = c.C + c.D * u;
    if (!(denom > 0.0))
        throw std::runtime_error("ige_integrand: non-positive denominator");
    return (c.A + c.B * u) / denom;
}

double inner_antiderivative(double tau, const AbcdCoefficients& c, double lam) {
    const double u = std::exp(-lam * tau);
    return (1.0 / lam) * (c.A / c.C - c.B / c.D) * std::log((c.D * u + c.C) / c.D) +
           (c.A / c.C) * tau;
}

double inner_integral_closed(double tau, const AbcdCoefficients& c, double lam,
                             ClosedFormMode mode) {
    const double slope = c.A / c.C - c.B / c.D;
    if (mode == ClosedFormMode::Asymptotic)
        return (1.0 / lam) * slope * std::log(c.C / c.D) + (c.A / c.C) * tau;
    const double u = std::exp(-lam * tau);
    return (1.0 / lam) * slope * std::log((c.D * u + c.C) / (c.D + c.C)) + (c.A / c.C) * tau;
}

double lambda1(double r) {
    if (!(r > 0.0 && r <= 1.0))
        throw std::domain_error("lambda1: r outside (0, 1]");
    return 2.0 * r * std::sqrt(2.0 - r * r) / (1.0 + std::sqrt(1.0 + 4.0 * r * r));
}

double lambda2(double r, double lam, double xi) {
    require_block_args(r, lam, xi, "lambda2");
    return std::sqrt((1.0 + 4.0 * r * r) * (2.0 - r * r)) / r * std::log(sigma_fn(r, lam, xi)) /
           lam;
}

double sigma_fn(double r, double lam, double xi) {
    require_block_args(r, lam, xi, "sigma_fn");
    return eigvec_slope_plus(r) * xi /
           (velocity_scale(r, lam) * (-eigvec_slope_minus(r)));
}

double igc_closed(double tau, double r, double lam, double xi, std::size_t l_blocks,
                  ClosedFormMode mode) {
    require_block_args(r, lam, xi, "igc_closed");
    if (!(tau > 0.0))
        throw std::domain_error("igc_closed: tau must be positive");
    if (l_blocks < 1)
        throw std::invalid_argument("igc_closed: l_blocks must be >= 1");

    double block;
    if (mode == ClosedFormMode::Asymptotic) {
        block = lambda1(r) + lambda2(r, lam, xi) / tau;
    } else {
        const AbcdCoefficients c = abcd(r, lam, xi);
        block = std::sqrt(2.0 - r * r) * inner_integral_closed(tau, c, lam) / tau;
    }
    return std::pow(block, static_cast<double>(l_blocks));
}

double igc_closed_model(double tau, const ModelParams& params, ClosedFormMode mode) {
    double v = 1.0;
    for (std::size_t k = 0; k < params.l(); ++k)
        v *= igc_closed(tau, params.r(k), params.lambda(k), params.xi(k), 1, mode);
    return v;
}

namespace {

// The variation of the integrand lives on tau' of order a few 1/lambda; on
// long ranges a single Kronrod panel would sample only the flat tail, so the
// range is pre-split geometrically before handing it to the adaptive rule.
std::vector<double> quadrature_breakpoints(double tau, double lam) {
    std::vector<double> bs{0.0};
    double x = std::min(1.0 / lam, tau);
    while (x < tau) {
        bs.push_back(x);
        x *= 4.0;
    }
    bs.push_back(tau);
    return bs;
}

template <typename F>
double integrate_with_breakpoints(F&& f, double tau, double lam, const QuadratureOptions& opt) {
    const std::vector<double> bs = quadrature_breakpoints(tau, lam);
    QuadratureOptions piece = opt;
    piece.abs_tol = opt.abs_tol / static_cast<double>(bs.size() - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < bs.size(); ++i)
        sum += adaptive_integrate(f, bs[i], bs[i + 1], piece).value;
    return sum;
}

} // namespace

double igc_quadrature(double tau, double r, double lam, double xi, DensityMode density_mode,
                      const QuadratureOptions& opt) {
    require_block_args(r, lam, xi, "igc_quadrature");
    if (!(tau > 0.0))
        throw std::domain_error("igc_quadrature: tau must be positive");

    const AbcdCoefficients c = abcd(r, lam, xi);
    const double root = std::sqrt(2.0 - r * r);

    if (density_mode == DensityMode::Paper) {
        auto f = [&c, lam](double tp) {
            const double u = std::exp(-lam * tp);
            return (c.A + c.B * u) / (c.C + c.D * u);
        };
        return root / tau * integrate_with_breakpoints(f, tau, lam, opt);
    }

    // Determinant mode: one more 1/sigma factor, sigma along the analytic
    // geodesic: sigma(tau') = (C u + D u^2) / (u^2 + xi^2/(8 lambda^2)).
    const double cc = xi * xi / (8.0 * lam * lam);
    auto f = [&c, lam, cc](double tp) {
        const double u = std::exp(-lam * tp);
        const double denom = c.C + c.D * u;
        return (c.A + c.B * u) * (u * u + cc) / (u * denom * denom);
    };
    return root / tau * integrate_with_breakpoints(f, tau, lam, opt);
}

double igc_quadrature_model(double tau, const ModelParams& params, DensityMode density_mode,
                            const QuadratureOptions& opt) {
    double v = 1.0;
    for (std::size_t k = 0; k < params.l(); ++k)
        v *= igc_quadrature(tau, params.r(k), params.lambda(k), params.xi(k), density_mode, opt);
    return v;
}

double ige(double tau, const ModelParams& params) {
    if (!(tau > 0.0))
        throw std::domain_error("ige: tau must be positive");
    double s = 0.0;
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double arg =
            lambda1(params.r(k)) + lambda2(params.r(k), params.lambda(k), params.xi(k)) / tau;
        if (!(arg > 0.0))
            throw std::domain_error("ige: non-positive complexity in block " + std::to_string(k) +
                                    " at tau = " + std::to_string(tau));
        s += std::log(arg);
    }
    return s;
}

double ige_saturation(const ModelParams& params) {
    double s = 0.0;
    for (std::size_t k = 0; k < params.l(); ++k)
        s += std::log(lambda1(params.r(k)));
    return s;
}

double uncorrelated_baseline(double tau, const std::vector<double>& lambdas) {
    if (!(tau >= 0.0))
        throw std::domain_error("uncorrelated_baseline: tau must be non-negative");
    double s = 0.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (!(lambdas[k] > 0.0))
            throw std::domain_error("uncorrelated_baseline: lambda[" + std::to_string(k) +
                                    "] must be positive");
        s += lambdas[k] * tau;
    }
    return s;
}

PowerLawFit power_law_fit(const std::vector<double>& tau_grid, const std::vector<double>& values,
                          double saturation) {
    if (tau_grid.size() != values.size() || tau_grid.size() < 3)
        throw std::invalid_argument("power_law_fit: need matching grids with >= 3 points");
    double tmin = tau_grid.front(), tmax = tau_grid.front();
    for (double t : tau_grid) {
        if (!(t > 0.0))
            throw std::invalid_argument("power_law_fit: tau grid must be positive");
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    if (!(tmax / tmin >= 99.999))
        throw std::invalid_argument("power_law_fit: tau grid must span at least two decades");

    int sign = 0;
    std::vector<double> x(values.size()), y(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - saturation;
        const int s = (d > 0.0) - (d < 0.0);
        if (s == 0)
            throw std::invalid_argument("power_law_fit: value equals saturation at tau = " +
                                        std::to_string(tau_grid[i]));
        if (sign == 0)
            sign = s;
        else if (s != sign)
            throw std::invalid_argument("power_law_fit: sign change of values - saturation at "
                                        "tau = " + std::to_string(tau_grid[i]));
        x[i] = std::log(tau_grid[i]);
        y[i] = std::log(std::fabs(d));
    }

    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;

    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (slope * x[i] + intercept);
        ss += e * e;
    }
    return {slope, std::sqrt(ss / n)};
}

} // namespace igeo
