#pragma once

// Adaptive quadrature on a 7-point Gauss / 15-point Kronrod pair with
// interval bisection. Suited to smooth integrands; the error estimate is the
// QUADPACK-style rescaled |G7 - K15| difference.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "igeo/errors.hpp"

namespace igeo {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 2000;
};

namespace detail {

// Kronrod abscissae (positive half), Kronrod weights, Gauss weights for the
// embedded points. Values from the standard G7K15 tables.
inline constexpr double kGK15X[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK15WK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK15WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gk15(F&& f, double a, double b, double& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_mid = f(mid);
    double kronrod = kGK15WK[7] * f_mid;
    double gauss = kGK15WG[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15X[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kronrod += kGK15WK[i] * fsum;
        if (i % 2 == 1)
            gauss += kGK15WG[i / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;

    value = kronrod;
    const double diff = std::fabs(kronrod - gauss);
    error = 200.0 * diff * std::sqrt(200.0 * diff);
}

} // namespace detail

/// Integrates f over [a, b]. Throws AccuracyError when the subdivision budget
/// is exhausted before max(abs_tol, rel_tol * |result|) is met or the
/// integrand produces non-finite values.
template <typename F>
QuadratureResult adaptive_integrate(F&& f, double a, double b,
                                    const QuadratureOptions& opt = {}) {
    struct Interval {
        double a, b, value, error;
    };

    std::vector<Interval> heap;
    double v0, e0;
    detail::gk15(f, a, b, v0, e0);
    heap.push_back({a, b, v0, e0});

    auto total = [&heap] {
        double v = 0.0, e = 0.0;
        for (const auto& iv : heap) {
            v += iv.value;
            e += iv.error;
        }
        return std::pair<double, double>{v, e};
    };

    while (true) {
        auto [value, error] = total();
        if (!std::isfinite(value) || !std::isfinite(error))
            throw AccuracyError("quadrature produced non-finite values on [" +
                                    std::to_string(a) + ", " + std::to_string(b) + "]",
                                error, opt.abs_tol);
        const double target = std::max(opt.abs_tol, opt.rel_tol * std::fabs(value));
        if (error <= target)
            return {value, error, heap.size()};
        if (heap.size() >= opt.max_intervals)
            throw AccuracyError("quadrature did not converge within " +
                                    std::to_string(opt.max_intervals) + " intervals",
                                error, target);

        // Split the interval with the largest error estimate.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < heap.size(); ++i)
            if (heap[i].error > heap[worst].error)
                worst = i;
        const Interval iv = heap[worst];
        const double mid = 0.5 * (iv.a + iv.b);
        Interval left{iv.a, mid, 0.0, 0.0}, right{mid, iv.b, 0.0, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.error);
        detail::gk15(f, right.a, right.b, right.value, right.error);
        heap[worst] = left;
        heap.push_back(right);
    }
}

} // namespace igeo
