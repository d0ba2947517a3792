#include "igeo/geodesic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "igeo/diagonal.hpp"
#include "igeo/errors.hpp"
#include "igeo/ode.hpp"

namespace igeo {

namespace {
constexpr double kSigmaFloor = 1e-12;

void require_sigma_positive(const GeodesicState& state, const char* op) {
    for (std::size_t k = 0; k < state.position.blocks(); ++k) {
        const double s = state.position.sigma(k);
        if (!(s > 0.0))
            throw std::domain_error(std::string(op) + ": sigma[" + std::to_string(k) +
                                    "] must be positive, got " + std::to_string(s));
    }
}

void require_consistent(const GeodesicState& state, const ModelParams& params, const char* op) {
    if (state.position.blocks() != params.l())
        throw std::invalid_argument(std::string(op) + ": state has " +
                                    std::to_string(state.position.blocks()) +
                                    " blocks, params have " + std::to_string(params.l()));
    if (state.velocity.size() != params.dim())
        throw std::invalid_argument(std::string(op) + ": velocity has " +
                                    std::to_string(state.velocity.size()) +
                                    " components, expected " + std::to_string(params.dim()));
}
} // namespace

const char* geodesic_system_name(GeodesicSystem s) {
    switch (s) {
    case GeodesicSystem::FullCorrelated: return "full";
    case GeodesicSystem::DiagonalAsymptotic: return "diagonal";
    case GeodesicSystem::Canonical: return "canonical";
    }
    return "?";
}

Chart chart_for_system(GeodesicSystem s) {
    switch (s) {
    case GeodesicSystem::FullCorrelated: return Chart::Original;
    case GeodesicSystem::DiagonalAsymptotic: return Chart::Diagonal;
    case GeodesicSystem::Canonical: return Chart::Canonical;
    }
    return Chart::Original;
}

GeodesicState::GeodesicState(double tau_, Macrostate position_, std::vector<double> velocity_)
    : tau(tau_), position(std::move(position_)), velocity(std::move(velocity_)) {
    if (velocity.size() != position.coords().size())
        throw std::invalid_argument("GeodesicState: velocity size must match position size");
}

std::vector<double> rhs_full(const GeodesicState& state, const ModelParams& params) {
    state.position.require_chart(Chart::Original, "rhs_full");
    require_consistent(state, params, "rhs_full");
    require_sigma_positive(state, "rhs_full");

    std::vector<double> acc(params.dim());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double s = state.position.sigma(k);
        const double vm = state.velocity[2 * k];
        const double vs = state.velocity[2 * k + 1];
        const double q = (2.0 - r * r) * s;
        acc[2 * k] = (r * vm * vm + 4.0 * vm * vs + 2.0 * r * vs * vs) / q;
        acc[2 * k + 1] = -(vm * vm + 2.0 * r * vm * vs + (2.0 * r * r - 2.0) * vs * vs) / q;
    }
    return acc;
}

std::vector<double> rhs_diagonal(const GeodesicState& state, const ModelParams& params) {
    state.position.require_chart(Chart::Diagonal, "rhs_diagonal");
    require_consistent(state, params, "rhs_diagonal");
    require_sigma_positive(state, "rhs_diagonal");

    std::vector<double> acc(params.dim());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double ratio = eigenvalue_minus(params.r(k)) / eigenvalue_plus(params.r(k));
        const double s = state.position.sigma(k);
        const double vm = state.velocity[2 * k];
        const double vs = state.velocity[2 * k + 1];
        acc[2 * k] = 2.0 * vm * vs / s;
        acc[2 * k + 1] = -ratio * vm * vm / s + vs * vs / s;
    }
    return acc;
}

std::vector<double> rhs_canonical(const GeodesicState& state) {
    state.position.require_chart(Chart::Canonical, "rhs_canonical");
    require_sigma_positive(state, "rhs_canonical");

    const std::size_t l = state.position.blocks();
    std::vector<double> acc(2 * l);
    for (std::size_t k = 0; k < l; ++k) {
        const double s = state.position.sigma(k);
        const double vm = state.velocity[2 * k];
        const double vs = state.velocity[2 * k + 1];
        acc[2 * k] = 2.0 * vm * vs / s;
        acc[2 * k + 1] = -vm * vm / (2.0 * s) + vs * vs / s;
    }
    return acc;
}

GeodesicTrajectory integrate(GeodesicSystem system, const GeodesicState& initial,
                             const ModelParams& params, double tau_end, double rel_tol,
                             double abs_tol) {
    const Chart chart = chart_for_system(system);
    initial.position.require_chart(chart, "integrate");
    require_consistent(initial, params, "integrate");
    require_sigma_positive(initial, "integrate");
    if (!(tau_end > initial.tau))
        throw std::invalid_argument("integrate: tau_end must exceed the initial tau");

    const std::size_t l = params.l();
    const std::size_t dim = 2 * l;

    // Packed ODE state: [coords, velocities].
    std::vector<double> y0(2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        y0[i] = initial.position.coords()[i];
        y0[dim + i] = initial.velocity[i];
    }

    auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        const Macrostate pos(chart, std::vector<double>(y.begin(), y.begin() + dim));
        const GeodesicState s(0.0, pos, std::vector<double>(y.begin() + dim, y.end()));
        std::vector<double> acc;
        switch (system) {
        case GeodesicSystem::FullCorrelated: acc = rhs_full(s, params); break;
        case GeodesicSystem::DiagonalAsymptotic: acc = rhs_diagonal(s, params); break;
        case GeodesicSystem::Canonical: acc = rhs_canonical(s); break;
        }
        for (std::size_t i = 0; i < dim; ++i) {
            dy[i] = y[dim + i];
            dy[dim + i] = acc[i];
        }
    };

    auto sigma_above_floor = [dim, l](const std::vector<double>& y) {
        for (std::size_t k = 0; k < l; ++k)
            if (!(y[2 * k + 1] > kSigmaFloor))
                return false;
        (void)dim;
        return true;
    };

    OdeOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    opt.state_valid = sigma_above_floor;
    opt.continue_from = sigma_above_floor;

    const OdeSolution sol = integrate_dopri5(rhs, std::move(y0), initial.tau, tau_end, opt);

    GeodesicTrajectory traj;
    traj.system = system;
    traj.stats = IntegrationStats{sol.stats.steps_accepted, sol.stats.steps_rejected,
                                  sol.stats.max_error_estimate};
    traj.samples.reserve(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        Macrostate pos(chart, std::vector<double>(sol.y[i].begin(), sol.y[i].begin() + dim));
        traj.samples.emplace_back(sol.t[i], std::move(pos),
                                  std::vector<double>(sol.y[i].begin() + dim, sol.y[i].end()));
    }
    return traj;
}

CanonicalPoint analytic_geodesic_canonical(double tau, double xi, double lambda) {
    if (!(xi > 0.0) || !(lambda > 0.0))
        throw std::domain_error("analytic_geodesic_canonical: xi and lambda must be positive");

    const double e1 = std::exp(-lambda * tau);
    const double e2 = e1 * e1;
    const double c = xi * xi / (8.0 * lambda * lambda);
    const double f = e2 + c;

    CanonicalPoint p;
    // (xi^2 / 2 lambda) / f - 4 lambda, rewritten so the constant parts
    // cancel exactly; the printed difference loses all precision once
    // e^{-2 lambda tau} drops near machine epsilon
    p.mu = -4.0 * lambda * e2 / f;
    p.sigma = xi * e1 / f;
    p.dmu = xi * xi * e2 / (f * f);
    p.dsigma = lambda * xi * e1 * (e2 - c) / (f * f);
    p.d2mu = 2.0 * lambda * xi * xi * e2 * (e2 - c) / (f * f * f);
    p.d2sigma = lambda * lambda * xi * e1 * (e2 * e2 - 6.0 * c * e2 + c * c) / (f * f * f);
    return p;
}

OriginalPoint analytic_geodesic_original(double tau, const ModelParams& params, std::size_t k) {
    if (k >= params.l())
        throw std::invalid_argument("analytic_geodesic_original: block index out of range");
    const double r = params.r(k);
    const CanonicalPoint cp = analytic_geodesic_canonical(tau, params.xi(k), params.lambda(k));

    // canonical -> diagonal -> original, all linear per block
    const double inv_scale = 1.0 / mu_rescale_factor(r); // sqrt(alpha_+ / (2 alpha_-))
    const double mu_t = inv_scale * cp.mu;
    const double sg_t = cp.sigma;
    const double dmu_t = inv_scale * cp.dmu;
    const double dsg_t = cp.dsigma;

    const double s0 = eigvec_slope_minus(r);
    const double s1 = eigvec_slope_plus(r);

    OriginalPoint p;
    p.mu = mu_t + sg_t;
    p.sigma = s0 * mu_t + s1 * sg_t;
    p.dmu = dmu_t + dsg_t;
    p.dsigma = s0 * dmu_t + s1 * dsg_t;
    return p;
}

GeodesicState analytic_state(double tau, const ModelParams& params, Chart chart) {
    const std::size_t l = params.l();
    std::vector<double> coords(2 * l), vel(2 * l);

    for (std::size_t k = 0; k < l; ++k) {
        if (chart == Chart::Original) {
            const OriginalPoint p = analytic_geodesic_original(tau, params, k);
            coords[2 * k] = p.mu;
            coords[2 * k + 1] = p.sigma;
            vel[2 * k] = p.dmu;
            vel[2 * k + 1] = p.dsigma;
        } else {
            const CanonicalPoint cp =
                analytic_geodesic_canonical(tau, params.xi(k), params.lambda(k));
            if (chart == Chart::Canonical) {
                coords[2 * k] = cp.mu;
                coords[2 * k + 1] = cp.sigma;
                vel[2 * k] = cp.dmu;
                vel[2 * k + 1] = cp.dsigma;
            } else {
                const double inv_scale = 1.0 / mu_rescale_factor(params.r(k));
                coords[2 * k] = inv_scale * cp.mu;
                coords[2 * k + 1] = cp.sigma;
                vel[2 * k] = inv_scale * cp.dmu;
                vel[2 * k + 1] = cp.dsigma;
            }
        }
    }
    return GeodesicState(tau, Macrostate(chart, std::move(coords)), std::move(vel));
}

HypothesisReport hypothesis_check(const GeodesicTrajectory& traj, const ModelParams& params,
                                  double margin) {
    if (traj.samples.empty())
        throw std::invalid_argument("hypothesis_check: empty trajectory");
    if (chart_for_system(traj.system) != Chart::Diagonal)
        throw std::invalid_argument("hypothesis_check: trajectory must be in the diagonal chart");

    HypothesisReport report;
    report.margin = margin;

    const std::size_t start = traj.samples.size() / 2;
    for (std::size_t i = start; i < traj.samples.size(); ++i) {
        const Macrostate& pos = traj.samples[i].position;
        for (std::size_t k = 0; k < params.l(); ++k) {
            const double weight = std::fabs(eigvec_slope_minus(params.r(k)) /
                                            eigvec_slope_plus(params.r(k)));
            const double ratio = std::fabs(pos.mu(k) / pos.sigma(k)) * weight;
            report.max_ratio = std::max(report.max_ratio, ratio);
        }
    }
    report.threshold_ok = report.max_ratio < margin;
    return report;
}

GeodesicTrajectory map_to_diagonal(const GeodesicTrajectory& traj, const ModelParams& params) {
    if (traj.system != GeodesicSystem::FullCorrelated)
        throw std::invalid_argument("map_to_diagonal: expected a full-system trajectory");

    GeodesicTrajectory out;
    out.system = GeodesicSystem::DiagonalAsymptotic;
    out.stats = traj.stats;
    out.samples.reserve(traj.samples.size());
    for (const GeodesicState& s : traj.samples) {
        Macrostate pos = diagonal_from_original(s.position, params);
        std::vector<double> vel = diagonal_from_original_tangent(s.velocity, params);
        out.samples.emplace_back(s.tau, std::move(pos), std::move(vel));
    }
    return out;
}

namespace {

// Gaussian elimination with partial pivoting for the small shooting systems.
std::vector<double> solve_dense(std::vector<std::vector<double>> m, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::fabs(m[row][col]) > std::fabs(m[pivot][col]))
                pivot = row;
        if (std::fabs(m[pivot][col]) < 1e-300)
            throw std::runtime_error("solve_bvp: singular shooting Jacobian");
        std::swap(m[col], m[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = m[row][col] / m[col][col];
            for (std::size_t j = col; j < n; ++j)
                m[row][j] -= f * m[col][j];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            acc -= m[i][j] * x[j];
        x[i] = acc / m[i][i];
    }
    return x;
}

} // namespace

GeodesicTrajectory solve_bvp(GeodesicSystem system, const Macrostate& from, const Macrostate& to,
                             const ModelParams& params, double tau_end, const BvpOptions& opt) {
    const Chart chart = chart_for_system(system);
    from.require_chart(chart, "solve_bvp");
    to.require_chart(chart, "solve_bvp");
    if (from.coords().size() != to.coords().size())
        throw std::invalid_argument("solve_bvp: endpoint dimension mismatch");
    if (!(tau_end > 0.0))
        throw std::invalid_argument("solve_bvp: tau_end must be positive");

    const std::size_t dim = from.coords().size();

    auto shoot = [&](const std::vector<double>& v0) {
        return integrate(system, GeodesicState(0.0, from, v0), params, tau_end, opt.rel_tol,
                         opt.abs_tol);
    };
    auto residual = [&](const GeodesicTrajectory& traj) {
        std::vector<double> res(dim);
        const auto& end = traj.samples.back().position.coords();
        for (std::size_t i = 0; i < dim; ++i)
            res[i] = end[i] - to.coords()[i];
        return res;
    };
    auto norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v)
            m = std::max(m, std::fabs(x));
        return m;
    };

    // Straight-line initial guess.
    std::vector<double> v0(dim);
    for (std::size_t i = 0; i < dim; ++i)
        v0[i] = (to.coords()[i] - from.coords()[i]) / tau_end;

    GeodesicTrajectory traj = shoot(v0);
    std::vector<double> res = residual(traj);
    double res_norm = norm(res);

    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        if (res_norm < opt.residual_tol)
            return traj;

        // Finite-difference shooting Jacobian d(endpoint)/d(v0).
        std::vector<std::vector<double>> jac(dim, std::vector<double>(dim));
        for (std::size_t j = 0; j < dim; ++j) {
            const double h = 1e-7 * std::max(1.0, std::fabs(v0[j]));
            std::vector<double> vp = v0;
            vp[j] += h;
            const std::vector<double> rp = residual(shoot(vp));
            for (std::size_t i = 0; i < dim; ++i)
                jac[i][j] = (rp[i] - res[i]) / h;
        }

        const std::vector<double> step = solve_dense(jac, res);

        // Damped update: halve until the residual improves.
        double damping = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 8; ++halvings) {
            std::vector<double> v_try = v0;
            for (std::size_t i = 0; i < dim; ++i)
                v_try[i] -= damping * step[i];
            try {
                GeodesicTrajectory t_try = shoot(v_try);
                std::vector<double> r_try = residual(t_try);
                if (norm(r_try) < res_norm) {
                    v0 = std::move(v_try);
                    traj = std::move(t_try);
                    res = std::move(r_try);
                    res_norm = norm(res);
                    improved = true;
                    break;
                }
            } catch (const SingularityError&) {
                // Shot left the manifold; damp harder.
            }
            damping *= 0.5;
        }
        if (!improved)
            throw std::runtime_error("solve_bvp: damped Newton stalled at residual " +
                                     std::to_string(res_norm));
    }
    if (res_norm < opt.residual_tol)
        return traj;
    throw std::runtime_error("solve_bvp: no convergence within " +
                             std::to_string(opt.max_iterations) + " iterations (residual " +
                             std::to_string(res_norm) + ")");
}

} // namespace igeo
