#pragma once

namespace weakspin {

// Gaussian pointer model of the measurement apparatus. The pointer is
// displaced by +coupling_a for a spin-up system and -coupling_a for
// spin-down; `width` is the standard deviation of the initial |psi(q)|^2
// distribution. coupling_a <~ width is the weak regime, coupling_a >> width
// the projective one; the formulas hold for any ratio.
struct WmConfig {
    double coupling_a = 1.0;
    double width = 1.0;
};

// Throws std::invalid_argument unless both parameters are finite and > 0.
void validate(const WmConfig& cfg);

// Pointer amplitude psi(q) = (2 pi width^2)^{-1/4} exp(-q^2 / (4 width^2)),
// real and positive with |psi|^2 integrating to 1.
double amplitude(const WmConfig& cfg, double q);

// Exponent magnitude beyond which f_ratio saturates.
inline constexpr double kFRatioMaxExponent = 700.0;

// f(q1) = psi(q1 + a) / psi(q1 - a) = exp(-a q1 / width^2), the single
// parameter governing the conditional spin rotation. `clamped` is set when
// the exponent exceeds kFRatioMaxExponent in magnitude; the value is then
// the saturated boundary ratio and the reading is effectively projective.
struct FRatio {
    double value = 1.0;
    bool clamped = false;
};

FRatio f_ratio(const WmConfig& cfg, double q1);

// Probability density of reading pointer position q given a prior spin at
// polar angle prior_theta:
//   |psi(q - a)|^2 cos^2(theta/2) + |psi(q + a)|^2 sin^2(theta/2).
double outcome_density(const WmConfig& cfg, double prior_theta, double q);

// Relative branch amplitudes (psi(q - a), psi(q + a)) rescaled so the larger
// one equals 1; down/up equals f(q) while never underflowing both.
struct BranchWeights {
    double up;
    double down;
};

BranchWeights branch_weights(const WmConfig& cfg, double q);

// Interval outside which the outcome density tails are below 1e-30:
// [-(12 width + a), +(12 width + a)].
struct Interval {
    double lo;
    double hi;
};

Interval density_support(const WmConfig& cfg);

}  // namespace weakspin
