#include "weakspin/pointer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakspin {

void validate(const WmConfig& cfg) {
    if (!(std::isfinite(cfg.coupling_a) && cfg.coupling_a > 0.0)) {
        throw std::invalid_argument("WmConfig: coupling_a must be finite and > 0");
    }
    if (!(std::isfinite(cfg.width) && cfg.width > 0.0)) {
        throw std::invalid_argument("WmConfig: width must be finite and > 0");
    }
}

double amplitude(const WmConfig& cfg, double q) {
    const double var = cfg.width * cfg.width;
    return std::pow(2.0 * std::numbers::pi * var, -0.25) *
           std::exp(-q * q / (4.0 * var));
}

FRatio f_ratio(const WmConfig& cfg, double q1) {
    const double exponent = -cfg.coupling_a * q1 / (cfg.width * cfg.width);
    if (exponent > kFRatioMaxExponent) {
        return {std::exp(kFRatioMaxExponent), true};
    }
    if (exponent < -kFRatioMaxExponent) {
        return {std::exp(-kFRatioMaxExponent), true};
    }
    return {std::exp(exponent), false};
}

double outcome_density(const WmConfig& cfg, double prior_theta, double q) {
    const double c = std::cos(0.5 * prior_theta);
    const double s = std::sin(0.5 * prior_theta);
    const double up = amplitude(cfg, q - cfg.coupling_a);
    const double down = amplitude(cfg, q + cfg.coupling_a);
    return up * up * c * c + down * down * s * s;
}

BranchWeights branch_weights(const WmConfig& cfg, double q) {
    const double four_var = 4.0 * cfg.width * cfg.width;
    const double lu = -(q - cfg.coupling_a) * (q - cfg.coupling_a) / four_var;
    const double ld = -(q + cfg.coupling_a) * (q + cfg.coupling_a) / four_var;
    const double top = std::max(lu, ld);
    return {std::exp(lu - top), std::exp(ld - top)};
}

Interval density_support(const WmConfig& cfg) {
    const double half = 12.0 * cfg.width + cfg.coupling_a;
    return {-half, half};
}

}  // namespace weakspin
