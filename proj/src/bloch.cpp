#include "weakspin/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakspin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin(theta) below this counts as a pole and phi is undefined.
constexpr double kPoleSinTol = 1e-14;

double wrap_phi(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace

BlochDirection make_direction(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw std::invalid_argument("BlochDirection: theta must lie in [0, pi]");
    }
    BlochDirection d{theta, wrap_phi(phi)};
    if (std::sin(theta) < kPoleSinTol) d.phi = 0.0;
    return d;
}

BlochDirection antipode(const BlochDirection& d) {
    return make_direction(std::numbers::pi - d.theta, d.phi + std::numbers::pi);
}

std::array<double, 3> unit_vector(const BlochDirection& d) {
    const double st = std::sin(d.theta);
    return {st * std::cos(d.phi), st * std::sin(d.phi), std::cos(d.theta)};
}

SpinState ket_from_direction(const BlochDirection& d) {
    // Exact eigenstates at the poles (cos(pi/2) is only ~6e-17 in floating
    // point).
    if (d.theta == 0.0) return {Complex{1.0}, Complex{0.0}};
    if (d.theta == std::numbers::pi) return {Complex{0.0}, Complex{1.0}};
    const double half_theta = 0.5 * d.theta;
    const double half_phi = 0.5 * d.phi;
    return {std::polar(std::cos(half_theta), -half_phi),
            std::polar(std::sin(half_theta), +half_phi)};
}

BlochDirection direction_from_ket(const SpinState& s) {
    const double theta = 2.0 * std::atan2(std::abs(s.amp_minus), std::abs(s.amp_plus));
    double phi = 0.0;
    if (std::sin(theta) >= kPoleSinTol) {
        phi = std::arg(s.amp_minus * std::conj(s.amp_plus));
    }
    return make_direction(theta, phi);
}

BlochDirection rotate_x(const BlochDirection& d, double alpha) {
    const auto [x, y, z] = unit_vector(d);
    const double ca = std::cos(alpha);
    const double sa = std::sin(alpha);
    const double yr = y * ca - z * sa;
    const double zr = z * ca + y * sa;
    const double theta = std::acos(std::clamp(zr, -1.0, 1.0));
    return make_direction(theta, std::atan2(yr, x));
}

SpinState rotate_x(const SpinState& s, double alpha) {
    const double c = std::cos(0.5 * alpha);
    const Complex minus_i_sin{0.0, -std::sin(0.5 * alpha)};
    return {c * s.amp_plus + minus_i_sin * s.amp_minus,
            minus_i_sin * s.amp_plus + c * s.amp_minus};
}

double norm(const SpinState& s) {
    return std::sqrt(std::norm(s.amp_plus) + std::norm(s.amp_minus));
}

double prob_up_z(const SpinState& s) {
    return std::norm(s.amp_plus);
}

}  // namespace weakspin
