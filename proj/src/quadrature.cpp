#include "weakspin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakspin {

namespace {

// Legendre polynomial pair (P_n(x), P_n'(x)) via the three-term recurrence.
struct LegendreEval {
    double value;
    double deriv;
};

LegendreEval legendre(int n, double x) {
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= n; ++k) {
        const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    const double deriv = n * (x * p - p_prev) / (x * x - 1.0);
    return {p, deriv};
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the i-th largest root, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const LegendreEval p = legendre(n, x);
            const double dx = p.value / p.deriv;
            x -= dx;
            if (std::abs(dx) <= 1e-15) break;
        }
        const LegendreEval p = legendre(n, x);
        const double w = 2.0 / ((1.0 - x * x) * p.deriv * p.deriv);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

double integrate(const GaussLegendre& rule, const std::function<double(double)>& f,
                 double a, double b) {
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + halfwidth * rule.nodes[i]);
    }
    return halfwidth * sum;
}

double integrate_composite(const GaussLegendre& rule,
                           const std::function<double(double)>& f, double a,
                           double b, int panels) {
    if (panels < 1) throw std::invalid_argument("integrate_composite: panels must be >= 1");
    const double step = (b - a) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) {
        sum += integrate(rule, f, a + k * step, a + (k + 1) * step);
    }
    return sum;
}

}  // namespace weakspin
