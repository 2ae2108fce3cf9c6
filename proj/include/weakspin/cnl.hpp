#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "weakspin/bloch.hpp"
#include "weakspin/pointer.hpp"

namespace weakspin {

// Two-spin state over the product z-basis, ordered
// {|z+ z+>, |z+ z->, |z- z+>, |z- z->} with the lhs spin as the major index.
struct TwoQubitState {
    std::array<Complex, 4> amps{};
};

// Families of source densities F(u, v) over direction pairs.
enum class SourceFamily {
    kUniformAnticorrelated,  // u uniform on the sphere, v = -u
    kDeltaPair,              // point mass at fixed (u0, v0)
    kProductUniform,         // u and v independent and uniform
};

const char* family_name(SourceFamily kind);

// A source density over U x V. `scale` multiplies the density; a valid
// distribution has scale = 1, anything else trips the mass check in cnl_lhs.
struct SourceDistribution {
    SourceFamily kind = SourceFamily::kUniformAnticorrelated;
    BlochDirection u0{};  // delta-pair emission direction of the lhs spin
    BlochDirection v0{};  // delta-pair emission direction of the rhs spin
    double scale = 1.0;
};

// Raised when the measured total mass of F deviates from 1 by more than
// kMassTolerance.
class NormalizationError : public std::runtime_error {
  public:
    explicit NormalizationError(double mass);
    double measured_mass() const { return mass_; }

  private:
    double mass_;
};

inline constexpr double kMassTolerance = 1e-6;

// Product quadrature over the sphere: Gauss-Legendre in cos(theta) crossed
// with a uniform periodic rule in phi. Both orders must be >= 16.
struct SphereQuadrature {
    int n_theta = 64;
    int n_phi = 64;
};

// The singlet (|z+ z-> - |z- z+>)/sqrt(2).
TwoQubitState singlet();

// exp(-i alpha sigma_x / 2) applied to the lhs spin.
TwoQubitState rotate_lhs_x(const TwoQubitState& state, double alpha);

// Conditional state given pointer reading q_l on the lhs: the lhs
// z-components are reweighted by psi(q_l -+ a) and the state renormalized.
TwoQubitState apply_lhs_wm(const TwoQubitState& state, const WmConfig& cfg,
                           double q_l);

// Born probabilities for a z-measurement on the lhs and a measurement along
// b on the rhs, ordered {(+,+), (+,-), (-,+), (-,-)}.
std::array<double, 4> joint_probs(const TwoQubitState& state,
                                  const BlochDirection& b);

// Full conditioned experiment: singlet, lhs rotated by alpha about x, weak
// measurement reading q_l, then projective measurements along z (lhs) and
// b (rhs). The four probabilities sum to 1.
std::array<double, 4> conditional_joint_probs(double alpha, const WmConfig& cfg,
                                              double q_l,
                                              const BlochDirection& b);

// Quantum marginal of the lhs z+ outcome conditional on q_l: 1/(1 + f^2).
// Independent of both alpha and b.
double qm_marginal(const WmConfig& cfg, double q_l);

// Marginal the hidden-variable model must reproduce for a source spin
// emitted along u:
//   cos^2(arctan(f tan(theta_u(alpha)/2))) = 1/(1 + f^2 tan^2(theta_u(alpha)/2))
// with theta_u(alpha) the rotated polar angle from rotate_x.
double hv_secondary_prob(const BlochDirection& u, double alpha,
                         const WmConfig& cfg, double q_l);

// Average of hv_secondary_prob over F(u, v). The integrand does not depend
// on v, so v integrates out for every shipped family. Throws
// NormalizationError when the measured mass of F is off unity.
double cnl_lhs(const SourceDistribution& dist, double alpha, const WmConfig& cfg,
               double q_l, const SphereQuadrature& quad);

struct CnlRow {
    double alpha;  // radians
    double q_l;
    double f;
    double lhs;       // hidden-variable side
    double rhs;       // quantum marginal
    double abs_diff;  // |lhs - rhs|
};

struct CnlSummary {
    double max_abs_diff = 0.0;
    double argmax_alpha = 0.0;
    double argmax_q_l = 0.0;
};

struct CnlReport {
    std::vector<CnlRow> rows;
    CnlSummary summary;

    // The model is refuted at tolerance tau when the worst row exceeds it.
    bool violated(double tau) const { return summary.max_abs_diff > tau; }
};

// Evaluates the consistency condition on every (alpha, q_l) grid point, in
// grid order with q_l as the fast index.
CnlReport cnl_test(const SourceDistribution& dist, const WmConfig& cfg,
                   const std::vector<double>& alpha_grid,
                   const std::vector<double>& ql_grid,
                   const SphereQuadrature& quad);

}  // namespace weakspin
