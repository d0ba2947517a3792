#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "igeo/mat2.hpp"

namespace igeo {

/// Coordinate charts on the statistical manifold.
///
/// Original:  (mu_k, sigma_k) pairs, sigma_k > 0.
/// Diagonal:  eigenbasis coordinates (mu~_k, sigma~_k) of the per-block
///            metric eigendecomposition.
/// Canonical: diagonal coordinates with mu~ rescaled so the geodesic system
///            takes the uncorrelated Gaussian form.
enum class Chart { Original, Diagonal, Canonical };

const char* chart_name(Chart c);

/// Which volume density to use when integrating statistical volumes.
///
/// Paper:       sqrt(g) with g = (2 - r^2)/sigma^2 per block, the density all
///              closed-form complexity results are built on.
/// Determinant: sqrt(|det g|) = sqrt(2 - r^2)/sigma^2 per block, the literal
///              metric determinant, provided for sensitivity analysis.
enum class DensityMode { Paper, Determinant };

/// Full specification of one model instance: l microscopic degrees of
/// freedom, per-block correlation strengths r_k in (0,1), and the positive
/// geodesic integration constants (lambda_k, xi_k).
class ModelParams {
  public:
    ModelParams(std::size_t l, std::vector<double> r, std::vector<double> lambda,
                std::vector<double> xi);

    /// Equal-parameter convenience: l identical blocks.
    static ModelParams uniform(std::size_t l, double r, double lambda, double xi);

    std::size_t l() const { return l_; }
    std::size_t dim() const { return 2 * l_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& lambda() const { return lambda_; }
    const std::vector<double>& xi() const { return xi_; }

    double r(std::size_t k) const { return r_.at(k); }
    double lambda(std::size_t k) const { return lambda_.at(k); }
    double xi(std::size_t k) const { return xi_.at(k); }

  private:
    std::size_t l_;
    std::vector<double> r_;
    std::vector<double> lambda_;
    std::vector<double> xi_;
};

/// A point on the manifold in a specific chart. Coordinates are interleaved
/// per block: (c1_1, c2_1, c1_2, c2_2, ...), i.e. (mu_1, sigma_1, mu_2,
/// sigma_2, ...) in the Original chart. Interleaving keeps every operation
/// block-local.
class Macrostate {
  public:
    Macrostate(Chart chart, std::vector<double> coords);

    static Macrostate original(std::vector<double> coords);
    static Macrostate diagonal(std::vector<double> coords);
    static Macrostate canonical(std::vector<double> coords);

    Chart chart() const { return chart_; }
    std::size_t blocks() const { return coords_.size() / 2; }
    const std::vector<double>& coords() const { return coords_; }

    double mu(std::size_t k) const { return coords_.at(2 * k); }
    double sigma(std::size_t k) const { return coords_.at(2 * k + 1); }

    /// Throws std::invalid_argument when the state is not in `expected`.
    void require_chart(Chart expected, const char* op) const;

  private:
    Chart chart_;
    std::vector<double> coords_;
};

/// The 2l x 2l Fisher-Rao tensor (or its inverse) stored as l independent
/// 2x2 blocks.
struct BlockMetric {
    Chart chart = Chart::Original;
    std::vector<Mat2> blocks;

    std::size_t l() const { return blocks.size(); }
};

namespace detail {
/// Shared precondition helpers; they name the offending index in the message.
void require_positive_sigma(const Macrostate& theta, const char* op);
void require_block_count(const Macrostate& theta, const ModelParams& params, const char* op);
} // namespace detail

} // namespace igeo
