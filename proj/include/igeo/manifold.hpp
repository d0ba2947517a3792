#pragma once

#include <span>

#include "igeo/model.hpp"

namespace igeo {

/// Fisher-Rao metric at an Original-chart macrostate. Block k is
/// (1/sigma_k^2) * [[1, r_k], [r_k, 2]].
BlockMetric metric_tensor(const Macrostate& theta, const ModelParams& params);

/// Inverse metric: block k is (sigma_k^2/(2 - r_k^2)) * [[2, -r_k], [-r_k, 1]].
BlockMetric inverse_metric(const Macrostate& theta, const ModelParams& params);

/// Line element ds^2 = sum_k (dmu_k^2 + 2 r_k dmu_k dsigma_k + 2 dsigma_k^2)
/// / sigma_k^2 for a displacement dtheta at theta.
double line_element(const Macrostate& theta, std::span<const double> dtheta,
                    const ModelParams& params);

/// Statistical volume density at theta, product over blocks.
/// Paper mode: prod_k sqrt(2 - r_k^2)/sigma_k. Determinant mode:
/// prod_k sqrt(2 - r_k^2)/sigma_k^2.
double volume_density(const Macrostate& theta, const ModelParams& params,
                      DensityMode mode = DensityMode::Paper);

} // namespace igeo
