#pragma once

// Adaptive explicit Runge-Kutta integrator, Dormand-Prince RK5(4)7M
// (coefficients from the 1980 paper; see also Hairer, Norsett & Wanner,
// Solving Ordinary Differential Equations I). Error control uses the
// embedded 4th-order estimate with a PI step-size controller.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "igeo/errors.hpp"

namespace igeo {

struct OdeOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double safety = 0.9;
    double max_growth = 5.0;   // max step-size increase per accepted step
    double min_shrink = 0.2;   // max step-size decrease per rejected step
    // A candidate state failing this check rejects the step; persistent
    // failure shrinks the step until the underflow guard trips.
    std::function<bool(const std::vector<double>&)> state_valid;
    // Called after each accepted step; returning false halts integration with
    // a SingularityError carrying the previous (still valid) state.
    std::function<bool(const std::vector<double>&)> continue_from;
};

struct OdeStats {
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    double max_error_estimate = 0.0;
};

struct OdeSolution {
    std::vector<double> t;
    std::vector<std::vector<double>> y;
    OdeStats stats;
};

template <typename Rhs>
OdeSolution integrate_dopri5(Rhs&& rhs, std::vector<double> y0, double t0, double t1,
                             const OdeOptions& opt = {}) {
    if (!(t1 > t0))
        throw std::invalid_argument("integrate_dopri5: t1 must exceed t0");
    if (!(opt.rel_tol > 0.0 && opt.rel_tol < 1.0) || !(opt.abs_tol > 0.0 && opt.abs_tol < 1.0))
        throw std::invalid_argument("integrate_dopri5: tolerances must lie in (0, 1)");

    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    // b (5th order) equals a[6]; e = b - b_hat (4th order) gives the error.
    static constexpr double e[7] = {71.0 / 57600,  0.0,          -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    const std::size_t n = y0.size();
    const double span = t1 - t0;
    const double h_min = 1e-14 * span;

    OdeSolution sol;
    sol.t.push_back(t0);
    sol.y.push_back(y0);

    std::vector<double> k[7];
    for (auto& ki : k)
        ki.resize(n);
    std::vector<double> y_stage(n), y_new(n), y_err(n);

    rhs(t0, y0, k[0]); // FSAL: k[0] carries f(t, y) across accepted steps

    double t = t0;
    double h = span / 100.0;
    double err_prev = 1.0;

    while (t < t1) {
        if (h < h_min)
            throw SingularityError("step size underflow at tau = " + std::to_string(t), t, y0);
        if (t + h > t1)
            h = t1 - t;

        bool stage_ok = true;
        for (int s = 1; s < 7 && stage_ok; ++s) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j)
                    acc += a[s][j] * k[j][i];
                y_stage[i] = y0[i] + h * acc;
            }
            if (opt.state_valid && !opt.state_valid(y_stage)) {
                stage_ok = false;
                break;
            }
            rhs(t + c[s] * h, y_stage, k[s]);
        }
        if (!stage_ok) {
            ++sol.stats.steps_rejected;
            h *= opt.min_shrink;
            continue;
        }

        // Stage 6 state is the 5th-order solution (FSAL pair).
        y_new = y_stage;

        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double de = 0.0;
            for (int s = 0; s < 7; ++s)
                de += e[s] * k[s][i];
            y_err[i] = h * de;
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::fabs(y0[i]), std::fabs(y_new[i]));
            const double w = y_err[i] / scale;
            err_norm += w * w;
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));
        if (!std::isfinite(err_norm))
            err_norm = 2.0; // force rejection

        if (err_norm <= 1.0) {
            t += h;
            std::swap(y0, y_new);
            k[0] = k[6];
            sol.t.push_back(t);
            sol.y.push_back(y0);
            ++sol.stats.steps_accepted;
            sol.stats.max_error_estimate = std::max(sol.stats.max_error_estimate, err_norm);

            if (opt.continue_from && !opt.continue_from(y0))
                throw SingularityError("sigma floor crossed at tau = " + std::to_string(t), t,
                                       sol.y[sol.y.size() - 2]);

            // PI controller (order 5, estimate order 4).
            const double fac = opt.safety * std::pow(std::max(err_norm, 1e-10), -0.7 / 5.0) *
                               std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
            h *= std::min(opt.max_growth, std::max(opt.min_shrink, fac));
            err_prev = std::max(err_norm, 1e-10);
        } else {
            ++sol.stats.steps_rejected;
            const double fac = opt.safety * std::pow(err_norm, -0.2);
            h *= std::max(opt.min_shrink, std::min(1.0, fac));
        }
    }
    return sol;
}

} // namespace igeo
