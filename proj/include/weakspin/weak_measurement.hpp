#pragma once

#include <random>

#include "weakspin/bloch.hpp"
#include "weakspin/pointer.hpp"

namespace weakspin {

// A recorded weak-measurement outcome: the observed pointer position and the
// f-ratio it induces.
struct WmOutcome {
    double q1 = 0.0;
    double f = 1.0;
};

// Conditional post-measurement state given pointer reading q1:
//   (psi(q1 - a) c_plus, psi(q1 + a) c_minus) / sqrt(N),
// equivalently tan(theta_q/2) = f(q1) tan(theta_p/2) with phi unchanged.
// z-eigenstates are fixed points for every reading.
SpinState apply_wm(const SpinState& prior, const WmConfig& cfg, double q1);

// Rotation of the spin away from the z-axis caused by reading q1:
//   2 arctan(f(q1) tan(theta_p/2)) - theta_p.
// Negative values rotate toward +z. theta_p = pi returns 0 (the |-> fixed
// point; the analytic limit of the arctan form).
double delta_theta(double prior_theta, const WmConfig& cfg, double q1);

// Draws a pointer reading distributed per outcome_density(cfg, theta_p, .):
// the +-a branch is picked with the Born weights, then a zero-mean Gaussian
// deviate of std `width` is added. Deterministic for a given rng state.
WmOutcome sample_outcome(const SpinState& prior, const WmConfig& cfg,
                         std::mt19937_64& rng);

// Projective verdict sign(q1), valid in the coupling_a >> width regime;
// q1 == 0 ties to +1.
int nm_limit_classify(const WmOutcome& outcome);

}  // namespace weakspin
