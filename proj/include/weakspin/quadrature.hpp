#pragma once

#include <functional>
#include <vector>

namespace weakspin {

// Gauss-Legendre rule on [-1, 1]; nodes ascending, weights positive and
// summing to 2.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point rule computed by Newton iteration on P_n. Throws for n < 1.
GaussLegendre gauss_legendre(int n);

// Integral of f over [a, b] with a single mapped rule.
double integrate(const GaussLegendre& rule, const std::function<double(double)>& f,
                 double a, double b);

// Integral of f over [a, b] split into `panels` equal panels.
double integrate_composite(const GaussLegendre& rule,
                           const std::function<double(double)>& f, double a,
                           double b, int panels);

}  // namespace weakspin
