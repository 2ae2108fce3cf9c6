#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "weakspin/cnl.hpp"
#include "weakspin/weak_measurement.hpp"

using namespace weakspin;

namespace {

constexpr double kPi = std::numbers::pi;

BlochDirection random_direction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> cos_theta(-1.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    return make_direction(std::acos(cos_theta(rng)), angle(rng));
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = ((n - 1 - i) * lo + i * hi) / (n - 1);
    return xs;
}

// Average of 1/(1 + f^2 tan^2(theta/2)) over a uniform sphere, derived by
// substituting x = cos(theta):
//   (1/2) Int_{-1}^{1} (1+x) / ((1-f^2) x + 1+f^2) dx
//     = 1/(1-f^2) + f^2 ln(f^2) / (1-f^2)^2.
double uniform_average(double f2) {
    const double a = 1.0 - f2;
    return 1.0 / a + f2 * std::log(f2) / (a * a);
}

}  // namespace

TEST_CASE("singlet amplitudes and perfect anticorrelation") {
    const TwoQubitState s = singlet();
    CHECK(s.amps[0] == Complex{0.0});
    CHECK(std::abs(s.amps[1] - 1.0 / std::numbers::sqrt2) < 1e-15);
    CHECK(std::abs(s.amps[2] + 1.0 / std::numbers::sqrt2) < 1e-15);
    CHECK(s.amps[3] == Complex{0.0});

    const auto p = joint_probs(s, make_direction(0.0, 0.0));
    CHECK(p[0] == 0.0);
    CHECK(std::abs(p[1] - 0.5) < 1e-15);
    CHECK(std::abs(p[2] - 0.5) < 1e-15);
    CHECK(p[3] == 0.0);
    // the reduced lhs <sigma_z> vanishes
    CHECK(std::abs((p[0] + p[1]) - (p[2] + p[3])) < 1e-15);
}

TEST_CASE("joint probabilities are a distribution for any rhs axis") {
    std::mt19937_64 rng(67);
    const TwoQubitState s = singlet();
    for (int i = 0; i < 500; ++i) {
        const auto p = joint_probs(s, random_direction(rng));
        double total = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("unperturbed conditioned singlet keeps z-anticorrelation") {
    const WmConfig cfg{1.0, 1.0};
    const auto p = conditional_joint_probs(0.0, cfg, 0.0, make_direction(0.0, 0.0));
    CHECK(std::abs(p[0]) < 1e-15);
    CHECK(std::abs(p[1] - 0.5) < 1e-15);
    CHECK(std::abs(p[2] - 0.5) < 1e-15);
    CHECK(std::abs(p[3]) < 1e-15);
}

TEST_CASE("weak measurement along z preserves z-anticorrelation") {
    const WmConfig cfg{1.0, 1.0};
    const auto p = conditional_joint_probs(0.0, cfg, 1.0, make_direction(0.0, 0.0));
    CHECK(p[0] < 1e-15);
    CHECK(p[3] < 1e-15);
    CHECK(std::abs(p[1] - 1.0 / (1.0 + std::exp(-2.0))) < 1e-14);
    CHECK(std::abs(p[2] - (1.0 - 1.0 / (1.0 + std::exp(-2.0)))) < 1e-14);
}

TEST_CASE("lhs rotation opens the same-outcome channel like a rotated singlet") {
    // P(z+, z+) = sin^2(alpha/2) / 2 at the uninformative reading
    const WmConfig cfg{1.0, 1.0};
    for (double alpha : {0.3, 1.1, 2.2, 3.0}) {
        const auto p = conditional_joint_probs(alpha, cfg, 0.0, make_direction(0.0, 0.0));
        const double s = std::sin(0.5 * alpha);
        CHECK(std::abs(p[0] - 0.5 * s * s) < 1e-14);
    }
}

TEST_CASE("the lhs marginal ignores alpha and the rhs axis") {
    const WmConfig cfg{1.0, 1.0};
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    const double expected = qm_marginal(cfg, 1.0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto p = conditional_joint_probs(angle(rng), cfg, 1.0, random_direction(rng));
        const double marginal = p[0] + p[1];
        CHECK(std::abs(marginal - expected) < 1e-12);
        CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) < 1e-12);
        lo = std::min(lo, marginal);
        hi = std::max(hi, marginal);
    }
    CHECK(hi - lo < 1e-12);
}

TEST_CASE("qm_marginal closed form") {
    const WmConfig cfg{1.0, 1.0};
    CHECK(qm_marginal(cfg, 0.0) == 0.5);
    CHECK(std::abs(qm_marginal(cfg, 1.0) - 1.0 / (1.0 + std::exp(-2.0))) < 1e-15);
    CHECK(std::abs(qm_marginal(cfg, 1.0) - 0.88079707797788244) < 1e-15);
    // saturated readings pin the marginal to the poles
    CHECK(qm_marginal(cfg, 1e5) == 1.0);
    CHECK(qm_marginal(cfg, -1e5) == 0.0);
}

TEST_CASE("hv_secondary_prob closed-form points") {
    const WmConfig cfg{1.0, 1.0};
    const BlochDirection z_plus = make_direction(0.0, 0.0);
    for (double q_l : {-2.0, 0.0, 1.5}) {
        CHECK(hv_secondary_prob(z_plus, 0.0, cfg, q_l) == 1.0);
    }
    CHECK(std::abs(hv_secondary_prob(z_plus, kPi / 2, cfg, 1.0) -
                   1.0 / (1.0 + std::exp(-2.0))) < 1e-12);
    CHECK(hv_secondary_prob(z_plus, kPi, cfg, 1.0) == 0.0);
}

TEST_CASE("hv_secondary_prob equals the single-spin pipeline") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> coupling(0.3, 2.0);
    std::uniform_real_distribution<double> width(0.5, 2.0);
    std::uniform_real_distribution<double> reading(-3.0, 3.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    for (int i = 0; i < 10000; ++i) {
        const WmConfig cfg{coupling(rng), width(rng)};
        const BlochDirection u = random_direction(rng);
        const double alpha = angle(rng);
        const double q_l = reading(rng);
        const double direct = hv_secondary_prob(u, alpha, cfg, q_l);
        const double pipeline =
            prob_up_z(apply_wm(ket_from_direction(rotate_x(u, alpha)), cfg, q_l));
        CHECK(std::abs(direct - pipeline) < 1e-12);
    }
}

TEST_CASE("uniform source averages to the closed-form integral") {
    const WmConfig cfg{1.0, 1.0};
    const SourceDistribution uniform{};
    const SphereQuadrature quad{};

    CHECK(std::abs(cnl_lhs(uniform, 0.7, cfg, 0.0, quad) - 0.5) < 1e-9);

    const double f2 = std::exp(-2.0);
    const double analytic = uniform_average(f2);
    CHECK(std::abs(analytic - 0.79448681226651042) < 1e-15);
    for (double alpha : {0.0, 0.9, kPi / 2, kPi}) {
        CHECK(std::abs(cnl_lhs(uniform, alpha, cfg, 1.0, quad) - analytic) < 1e-6);
    }

    SourceDistribution product;
    product.kind = SourceFamily::kProductUniform;
    CHECK(cnl_lhs(product, 0.9, cfg, 1.0, quad) == cnl_lhs(uniform, 0.9, cfg, 1.0, quad));
}

TEST_CASE("a point-mass source reduces to the secondary probability") {
    const WmConfig cfg{1.0, 1.0};
    SourceDistribution delta;
    delta.kind = SourceFamily::kDeltaPair;
    delta.u0 = make_direction(0.4, 2.2);
    delta.v0 = antipode(delta.u0);
    const SphereQuadrature quad{};
    for (double alpha : {0.0, 1.3, 2.9}) {
        CHECK(cnl_lhs(delta, alpha, cfg, 0.7, quad) ==
              hv_secondary_prob(delta.u0, alpha, cfg, 0.7));
    }
}

TEST_CASE("a non-normalized source is rejected with its measured mass") {
    const WmConfig cfg{1.0, 1.0};
    SourceDistribution bad;
    bad.scale = 1.5;
    try {
        cnl_lhs(bad, 0.3, cfg, 0.5, SphereQuadrature{});
        FAIL("expected NormalizationError");
    } catch (const NormalizationError& err) {
        CHECK(std::abs(err.measured_mass() - 1.5) < 1e-9);
    }
    bad.kind = SourceFamily::kDeltaPair;
    bad.scale = 0.25;
    CHECK_THROWS_AS(cnl_lhs(bad, 0.3, cfg, 0.5, SphereQuadrature{}), NormalizationError);
}

TEST_CASE("sphere quadrature order is validated and converged") {
    const WmConfig cfg{1.0, 1.0};
    const SourceDistribution uniform{};
    CHECK_THROWS_AS(cnl_lhs(uniform, 0.3, cfg, 0.5, SphereQuadrature{8, 64}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cnl_lhs(uniform, 0.3, cfg, 0.5, SphereQuadrature{64, 15}),
                    std::invalid_argument);
    for (double alpha : {0.0, 0.8, kPi / 2}) {
        for (double q_l : {0.25, 1.0}) {
            const double coarse = cnl_lhs(uniform, alpha, cfg, q_l, SphereQuadrature{64, 64});
            const double fine = cnl_lhs(uniform, alpha, cfg, q_l, SphereQuadrature{128, 128});
            CHECK(std::abs(fine - coarse) < 1e-8);
        }
    }
}

TEST_CASE("cnl_test refutes the uniform model on the default-style grid") {
    const WmConfig cfg{1.0, 1.0};
    const SourceDistribution uniform{};
    const std::vector<double> alphas = linspace(0.0, kPi, 19);
    const std::vector<double> qls = linspace(-2.0, 2.0, 21);
    const CnlReport report = cnl_test(uniform, cfg, alphas, qls, SphereQuadrature{});

    CHECK(report.rows.size() == 19 * 21);
    // rows run in grid order with q_l as the fast index
    CHECK(report.rows[0].alpha == alphas[0]);
    CHECK(report.rows[0].q_l == qls[0]);
    CHECK(report.rows[1].q_l == qls[1]);
    CHECK(report.rows[21].alpha == alphas[1]);

    for (const CnlRow& row : report.rows) {
        CHECK(row.lhs >= 0.0);
        CHECK(row.lhs <= 1.0 + 1e-12);
        CHECK(row.rhs >= 0.0);
        CHECK(row.rhs <= 1.0 + 1e-12);
        CHECK(row.abs_diff == std::abs(row.lhs - row.rhs));
    }

    CHECK(report.summary.max_abs_diff > 0.086);
    CHECK(report.violated(1e-3));

    // the q_l = 1 row carries the frozen discrepancy
    for (const CnlRow& row : report.rows) {
        if (row.alpha == alphas[0] && row.q_l == 1.0) {
            CHECK(std::abs(row.lhs - uniform_average(std::exp(-2.0))) < 1e-6);
            CHECK(std::abs(row.rhs - 0.88079707797788244) < 1e-12);
            CHECK(std::abs(row.abs_diff - 0.086310265711372025) < 1e-6);
        }
    }
}

TEST_CASE("cnl_test pins the point-mass failure at the rotation pole") {
    const WmConfig cfg{1.0, 1.0};
    SourceDistribution delta;
    delta.kind = SourceFamily::kDeltaPair;
    delta.u0 = make_direction(0.0, 0.0);
    delta.v0 = antipode(delta.u0);
    const std::vector<double> alphas = {0.0, kPi / 2, kPi};
    const std::vector<double> qls = {-1.0, 0.0, 1.0};
    const CnlReport report = cnl_test(delta, cfg, alphas, qls, SphereQuadrature{});

    bool found = false;
    for (const CnlRow& row : report.rows) {
        if (row.alpha == kPi && row.q_l == 1.0) {
            found = true;
            CHECK(row.lhs == 0.0);
            CHECK(std::abs(row.rhs - 0.88079707797788244) < 1e-12);
            CHECK(std::abs(row.abs_diff - 0.88079707797788244) < 1e-12);
        }
        // at alpha = pi/2 the point mass at +z happens to agree with the
        // quantum marginal; the failure is the alpha-dependence itself
        if (row.alpha == kPi / 2) CHECK(row.abs_diff < 1e-12);
    }
    CHECK(found);
    // (alpha = 0, q_l = -1) attains the same discrepancy by symmetry, so only
    // the max value is pinned, not the argmax position
    CHECK(std::abs(report.summary.max_abs_diff - 0.88079707797788244) < 1e-12);
    CHECK(report.violated(1e-3));
}

TEST_CASE("the uninformative reading is consistent for the isotropic source") {
    const WmConfig cfg{1.0, 1.0};
    const SourceDistribution uniform{};
    const std::vector<double> alphas = linspace(0.0, kPi, 7);
    const std::vector<double> qls = {0.0};
    const CnlReport report = cnl_test(uniform, cfg, alphas, qls, SphereQuadrature{});
    for (const CnlRow& row : report.rows) CHECK(row.abs_diff < 1e-9);
    CHECK_FALSE(report.violated(1e-3));
}

TEST_CASE("cnl_test rejects empty grids") {
    const WmConfig cfg{1.0, 1.0};
    const SourceDistribution uniform{};
    CHECK_THROWS_AS(cnl_test(uniform, cfg, {}, {0.0}, SphereQuadrature{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cnl_test(uniform, cfg, {0.0}, {}, SphereQuadrature{}),
                    std::invalid_argument);
}
