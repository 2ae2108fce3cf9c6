#include "weakspin/weak_measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace weakspin {

SpinState apply_wm(const SpinState& prior, const WmConfig& cfg, double q1) {
    const BranchWeights w = branch_weights(cfg, q1);
    const Complex up = w.up * prior.amp_plus;
    const Complex down = w.down * prior.amp_minus;
    const double n = std::sqrt(std::norm(up) + std::norm(down));
    if (!(n > 0.0)) {
        // Disfavored-branch weight underflowed with no amplitude on the
        // favored branch: the prior is a z-eigenstate, which stays fixed.
        const double pn = norm(prior);
        return {prior.amp_plus / pn, prior.amp_minus / pn};
    }
    return {up / n, down / n};
}

double delta_theta(double prior_theta, const WmConfig& cfg, double q1) {
    // tan(pi/2) is finite in floating point, so the |-> fixed point needs
    // the explicit limit.
    if (prior_theta >= std::numbers::pi) return 0.0;
    const double f = f_ratio(cfg, q1).value;
    if (f == 1.0) return 0.0;  // uninformative reading, exact fixed point
    return 2.0 * std::atan(f * std::tan(0.5 * prior_theta)) - prior_theta;
}

WmOutcome sample_outcome(const SpinState& prior, const WmConfig& cfg,
                         std::mt19937_64& rng) {
    const double p_up = std::min(1.0, prob_up_z(prior));
    std::bernoulli_distribution pick_up(p_up);
    const double center = pick_up(rng) ? cfg.coupling_a : -cfg.coupling_a;
    std::normal_distribution<double> deviate(center, cfg.width);
    const double q1 = deviate(rng);
    return {q1, f_ratio(cfg, q1).value};
}

int nm_limit_classify(const WmOutcome& outcome) {
    return outcome.q1 >= 0.0 ? +1 : -1;
}

}  // namespace weakspin
