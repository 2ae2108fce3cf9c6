#pragma once

#include <array>
#include <complex>

namespace weakspin {

using Complex = std::complex<double>;

// Direction on the unit sphere in polar coordinates. theta lies in [0, pi],
// phi in [0, 2*pi); at the poles phi is canonicalized to 0.
struct BlochDirection {
    double theta = 0.0;
    double phi = 0.0;
};

// Two-component spin state over the {|+>, |->} z-basis. Library functions
// produce and expect unit norm (within 1e-12).
struct SpinState {
    Complex amp_plus{1.0, 0.0};
    Complex amp_minus{0.0, 0.0};
};

// Canonical direction: phi wrapped into [0, 2*pi) and zeroed at the poles.
// Throws std::invalid_argument when theta is outside [0, pi].
BlochDirection make_direction(double theta, double phi);

// The direction opposite to d.
BlochDirection antipode(const BlochDirection& d);

// Cartesian components (x, y, z) of d.
std::array<double, 3> unit_vector(const BlochDirection& d);

// Spin-up state along d:
//   cos(theta/2) e^{-i phi/2} |+>  +  sin(theta/2) e^{+i phi/2} |->.
SpinState ket_from_direction(const BlochDirection& d);

// Inverse of ket_from_direction up to global phase. The phase is fixed by
// making amp_plus real non-negative before reading off phi; poles return
// phi = 0.
BlochDirection direction_from_ket(const SpinState& s);

// Rotation about the x-axis with the convention
//   (x, y, z) -> (x, y cos(alpha) - z sin(alpha), z cos(alpha) + y sin(alpha)),
// i.e. cos(theta') = cos(theta) cos(alpha) + sin(theta) sin(phi) sin(alpha).
BlochDirection rotate_x(const BlochDirection& d, double alpha);

// The same rotation on states: exp(-i alpha sigma_x / 2).
SpinState rotate_x(const SpinState& s, double alpha);

double norm(const SpinState& s);

// Born probability of the z_+ outcome, |amp_plus|^2.
double prob_up_z(const SpinState& s);

}  // namespace weakspin
