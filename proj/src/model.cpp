#include "igeo/model.hpp"

#include <cmath>
#include <stdexcept>

namespace igeo {

const char* chart_name(Chart c) {
    switch (c) {
    case Chart::Original: return "original";
    case Chart::Diagonal: return "diagonal";
    case Chart::Canonical: return "canonical";
    }
    return "?";
}

ModelParams::ModelParams(std::size_t l, std::vector<double> r, std::vector<double> lambda,
                         std::vector<double> xi)
    : l_(l), r_(std::move(r)), lambda_(std::move(lambda)), xi_(std::move(xi)) {
    if (l_ < 1)
        throw std::invalid_argument("ModelParams: l must be >= 1");
    if (r_.size() != l_ || lambda_.size() != l_ || xi_.size() != l_)
        throw std::invalid_argument("ModelParams: r, lambda, xi must each have length l");
    for (std::size_t k = 0; k < l_; ++k) {
        if (!(r_[k] > 0.0 && r_[k] < 1.0))
            throw std::invalid_argument("ModelParams: r[" + std::to_string(k) +
                                        "] outside (0,1): " + std::to_string(r_[k]));
        if (!(lambda_[k] > 0.0) || !std::isfinite(lambda_[k]))
            throw std::invalid_argument("ModelParams: lambda[" + std::to_string(k) +
                                        "] must be positive");
        if (!(xi_[k] > 0.0) || !std::isfinite(xi_[k]))
            throw std::invalid_argument("ModelParams: xi[" + std::to_string(k) +
                                        "] must be positive");
    }
}

ModelParams ModelParams::uniform(std::size_t l, double r, double lambda, double xi) {
    return ModelParams(l, std::vector<double>(l, r), std::vector<double>(l, lambda),
                       std::vector<double>(l, xi));
}

Macrostate::Macrostate(Chart chart, std::vector<double> coords)
    : chart_(chart), coords_(std::move(coords)) {
    if (coords_.empty() || coords_.size() % 2 != 0)
        throw std::invalid_argument("Macrostate: coordinate count must be a positive "
                                    "multiple of 2, got " + std::to_string(coords_.size()));
}

Macrostate Macrostate::original(std::vector<double> coords) {
    return Macrostate(Chart::Original, std::move(coords));
}
Macrostate Macrostate::diagonal(std::vector<double> coords) {
    return Macrostate(Chart::Diagonal, std::move(coords));
}
Macrostate Macrostate::canonical(std::vector<double> coords) {
    return Macrostate(Chart::Canonical, std::move(coords));
}

void Macrostate::require_chart(Chart expected, const char* op) const {
    if (chart_ != expected)
        throw std::invalid_argument(std::string(op) + ": macrostate is in the " +
                                    chart_name(chart_) + " chart, expected " +
                                    chart_name(expected));
}

namespace detail {

void require_positive_sigma(const Macrostate& theta, const char* op) {
    for (std::size_t k = 0; k < theta.blocks(); ++k) {
        const double s = theta.sigma(k);
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::domain_error(std::string(op) + ": sigma[" + std::to_string(k) +
                                    "] must be positive, got " + std::to_string(s));
    }
}

void require_block_count(const Macrostate& theta, const ModelParams& params, const char* op) {
    if (theta.blocks() != params.l())
        throw std::invalid_argument(std::string(op) + ": macrostate has " +
                                    std::to_string(theta.blocks()) + " blocks, params have " +
                                    std::to_string(params.l()));
}

} // namespace detail
} // namespace igeo
