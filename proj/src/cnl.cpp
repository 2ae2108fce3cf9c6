#include "weakspin/cnl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "weakspin/quadrature.hpp"

namespace weakspin {

const char* family_name(SourceFamily kind) {
    switch (kind) {
        case SourceFamily::kUniformAnticorrelated: return "uniform";
        case SourceFamily::kDeltaPair: return "delta";
        case SourceFamily::kProductUniform: return "product";
    }
    return "unknown";
}

NormalizationError::NormalizationError(double mass)
    : std::runtime_error("source distribution is not normalized: total mass " +
                         std::to_string(mass)),
      mass_(mass) {}

TwoQubitState singlet() {
    const double r = 1.0 / std::numbers::sqrt2;
    TwoQubitState s;
    s.amps = {Complex{0.0}, Complex{r}, Complex{-r}, Complex{0.0}};
    return s;
}

TwoQubitState rotate_lhs_x(const TwoQubitState& state, double alpha) {
    // U = [[c, -i s], [-i s, c]] with c = cos(alpha/2), s = sin(alpha/2),
    // acting on the major (lhs) index.
    const double c = std::cos(0.5 * alpha);
    const Complex minus_i_sin{0.0, -std::sin(0.5 * alpha)};
    TwoQubitState out;
    for (int j = 0; j < 2; ++j) {
        const Complex top = state.amps[j];
        const Complex bottom = state.amps[2 + j];
        out.amps[j] = c * top + minus_i_sin * bottom;
        out.amps[2 + j] = minus_i_sin * top + c * bottom;
    }
    return out;
}

TwoQubitState apply_lhs_wm(const TwoQubitState& state, const WmConfig& cfg,
                           double q_l) {
    const BranchWeights w = branch_weights(cfg, q_l);
    TwoQubitState out;
    for (int j = 0; j < 2; ++j) {
        out.amps[j] = w.up * state.amps[j];
        out.amps[2 + j] = w.down * state.amps[2 + j];
    }
    double norm2 = 0.0;
    for (const Complex& a : out.amps) norm2 += std::norm(a);
    const double n = std::sqrt(norm2);
    for (Complex& a : out.amps) a /= n;
    return out;
}

std::array<double, 4> joint_probs(const TwoQubitState& state,
                                  const BlochDirection& b) {
    const SpinState b_up = ket_from_direction(b);
    const SpinState b_down = ket_from_direction(antipode(b));
    std::array<double, 4> probs{};
    for (int i = 0; i < 2; ++i) {
        const Complex a0 = state.amps[2 * i];
        const Complex a1 = state.amps[2 * i + 1];
        probs[2 * i] = std::norm(std::conj(b_up.amp_plus) * a0 +
                                 std::conj(b_up.amp_minus) * a1);
        probs[2 * i + 1] = std::norm(std::conj(b_down.amp_plus) * a0 +
                                     std::conj(b_down.amp_minus) * a1);
    }
    return probs;
}

std::array<double, 4> conditional_joint_probs(double alpha, const WmConfig& cfg,
                                              double q_l,
                                              const BlochDirection& b) {
    validate(cfg);
    return joint_probs(apply_lhs_wm(rotate_lhs_x(singlet(), alpha), cfg, q_l), b);
}

double qm_marginal(const WmConfig& cfg, double q_l) {
    const double f = f_ratio(cfg, q_l).value;
    return 1.0 / (1.0 + f * f);
}

double hv_secondary_prob(const BlochDirection& u, double alpha,
                         const WmConfig& cfg, double q_l) {
    const double theta = rotate_x(u, alpha).theta;
    if (theta >= std::numbers::pi) return 0.0;  // |-> fixed point
    // 1/(1 + f^2 tan^2(theta/2)) rearranged so the pole stays well conditioned.
    const double c = std::cos(0.5 * theta);
    const double fs = f_ratio(cfg, q_l).value * std::sin(0.5 * theta);
    return c * c / (c * c + fs * fs);
}

double cnl_lhs(const SourceDistribution& dist, double alpha, const WmConfig& cfg,
               double q_l, const SphereQuadrature& quad) {
    validate(cfg);
    if (quad.n_theta < 16 || quad.n_phi < 16) {
        throw std::invalid_argument(
            "SphereQuadrature: n_theta and n_phi must be >= 16");
    }

    if (dist.kind == SourceFamily::kDeltaPair) {
        // Point mass: the integral collapses onto u0 and the mass is the scale.
        if (std::abs(dist.scale - 1.0) > kMassTolerance) {
            throw NormalizationError(dist.scale);
        }
        return dist.scale * hv_secondary_prob(dist.u0, alpha, cfg, q_l);
    }

    // Both remaining families have a uniform u-marginal of density
    // scale / (4 pi); v is either -u or independent and uniform, and the
    // integrand is v-free either way.
    const GaussLegendre rule = gauss_legendre(quad.n_theta);
    const double dphi = 2.0 * std::numbers::pi / quad.n_phi;
    const double density = dist.scale / (4.0 * std::numbers::pi);

    double weight_total = 0.0;
    for (double w : rule.weights) weight_total += w;
    const double mass = density * weight_total * dphi * quad.n_phi;
    if (std::abs(mass - 1.0) > kMassTolerance) throw NormalizationError(mass);

    double sum = 0.0;
    for (int i = 0; i < quad.n_theta; ++i) {
        const double theta_u = std::acos(std::clamp(rule.nodes[i], -1.0, 1.0));
        double row = 0.0;
        for (int j = 0; j < quad.n_phi; ++j) {
            row += hv_secondary_prob(make_direction(theta_u, dphi * j), alpha,
                                     cfg, q_l);
        }
        sum += rule.weights[i] * row;
    }
    return density * dphi * sum;
}

CnlReport cnl_test(const SourceDistribution& dist, const WmConfig& cfg,
                   const std::vector<double>& alpha_grid,
                   const std::vector<double>& ql_grid,
                   const SphereQuadrature& quad) {
    if (alpha_grid.empty() || ql_grid.empty()) {
        throw std::invalid_argument("cnl_test: grids must be non-empty");
    }
    CnlReport report;
    report.rows.reserve(alpha_grid.size() * ql_grid.size());
    bool first = true;
    for (double alpha : alpha_grid) {
        for (double q_l : ql_grid) {
            CnlRow row;
            row.alpha = alpha;
            row.q_l = q_l;
            row.f = f_ratio(cfg, q_l).value;
            row.lhs = cnl_lhs(dist, alpha, cfg, q_l, quad);
            row.rhs = qm_marginal(cfg, q_l);
            row.abs_diff = std::abs(row.lhs - row.rhs);
            if (first || row.abs_diff > report.summary.max_abs_diff) {
                report.summary = {row.abs_diff, alpha, q_l};
                first = false;
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace weakspin
