#include "igeo/manifold.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace igeo {

namespace {

// Any sigma > 0 is accepted; entries just stop being representable near the
// double range limits. That earns a note, not an error.
void warn_on_overflow(double entry, std::size_t k, const char* op) {
    if (!std::isfinite(entry))
        std::cerr << "warning: " << op << ": sigma[" << k
                  << "] is outside the representable range; entries overflowed\n";
}

} // namespace

BlockMetric metric_tensor(const Macrostate& theta, const ModelParams& params) {
    theta.require_chart(Chart::Original, "metric_tensor");
    detail::require_block_count(theta, params, "metric_tensor");
    detail::require_positive_sigma(theta, "metric_tensor");

    BlockMetric g;
    g.chart = Chart::Original;
    g.blocks.reserve(params.l());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double inv_s2 = 1.0 / (theta.sigma(k) * theta.sigma(k));
        warn_on_overflow(inv_s2, k, "metric_tensor");
        g.blocks.push_back(Mat2{inv_s2, r * inv_s2, r * inv_s2, 2.0 * inv_s2});
    }
    return g;
}

BlockMetric inverse_metric(const Macrostate& theta, const ModelParams& params) {
    theta.require_chart(Chart::Original, "inverse_metric");
    detail::require_block_count(theta, params, "inverse_metric");
    detail::require_positive_sigma(theta, "inverse_metric");

    BlockMetric ginv;
    ginv.chart = Chart::Original;
    ginv.blocks.reserve(params.l());
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double s = theta.sigma(k);
        const double f = s * s / (2.0 - r * r);
        warn_on_overflow(f, k, "inverse_metric");
        ginv.blocks.push_back(Mat2{2.0 * f, -r * f, -r * f, f});
    }
    return ginv;
}

double line_element(const Macrostate& theta, std::span<const double> dtheta,
                    const ModelParams& params) {
    theta.require_chart(Chart::Original, "line_element");
    detail::require_block_count(theta, params, "line_element");
    detail::require_positive_sigma(theta, "line_element");
    if (dtheta.size() != theta.coords().size())
        throw std::invalid_argument("line_element: displacement has " +
                                    std::to_string(dtheta.size()) + " components, expected " +
                                    std::to_string(theta.coords().size()));

    double ds2 = 0.0;
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double s = theta.sigma(k);
        const double dmu = dtheta[2 * k];
        const double dsg = dtheta[2 * k + 1];
        ds2 += (dmu * dmu + 2.0 * r * dmu * dsg + 2.0 * dsg * dsg) / (s * s);
    }
    return ds2;
}

double volume_density(const Macrostate& theta, const ModelParams& params, DensityMode mode) {
    theta.require_chart(Chart::Original, "volume_density");
    detail::require_block_count(theta, params, "volume_density");
    detail::require_positive_sigma(theta, "volume_density");

    double density = 1.0;
    for (std::size_t k = 0; k < params.l(); ++k) {
        const double r = params.r(k);
        const double s = theta.sigma(k);
        const double root = std::sqrt(2.0 - r * r);
        density *= (mode == DensityMode::Paper) ? root / s : root / (s * s);
    }
    return density;
}

} // namespace igeo
