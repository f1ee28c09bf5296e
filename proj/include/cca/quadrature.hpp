#pragma once

#include <functional>
#include <vector>

namespace cca {

// Gauss-Hermite rule recast for a standard normal weight:
// E[f(Z)] ~ sum_i weights[i] * f(nodes[i]), Z ~ N(0,1).
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermite gauss_hermite_normal(int n);

// Romberg integration of f on [a,b] to a relative tolerance.
double romberg(const std::function<double(double)>& f, double a, double b, double rel_tol,
               int max_levels = 22);

}  // namespace cca
