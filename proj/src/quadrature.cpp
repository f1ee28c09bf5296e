#include "cca/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cca {

namespace {

// Physicists' Gauss-Hermite nodes/weights for weight exp(-x^2): orthonormal
// three-term recurrence plus Newton refinement of each root, largest first.
void gauss_hermite_physicists(int n, std::vector<double>& x, std::vector<double>& w) {
    constexpr double kPim4 = 0.7511255444649425;  // pi^(-1/4)
    constexpr double kEps = 3.0e-14;
    constexpr int kMaxIt = 10;

    x.assign(static_cast<size_t>(n), 0.0);
    w.assign(static_cast<size_t>(n), 0.0);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses for the roots in descending order
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[static_cast<size_t>(i) - 2];
        }
        double pp = 0.0;
        int it = 0;
        for (; it < kMaxIt; ++it) {
            double p1 = kPim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= kEps) break;
        }
        if (it == kMaxIt)
            throw std::runtime_error("gauss_hermite: root refinement stalled at order " +
                                     std::to_string(n));
        x[static_cast<size_t>(i)] = z;
        x[static_cast<size_t>(n) - 1 - i] = -z;
        w[static_cast<size_t>(i)] = 2.0 / (pp * pp);
        w[static_cast<size_t>(n) - 1 - i] = w[static_cast<size_t>(i)];
    }
}

}  // namespace

GaussHermite gauss_hermite_normal(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_normal: order must be >= 1");
    std::vector<double> x, w;
    gauss_hermite_physicists(n, x, w);
    GaussHermite rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    const double inv_sqrt_pi = 1.0 / std::sqrt(3.14159265358979323846);
    for (int i = 0; i < n; ++i) {
        // change of variables z = sqrt(2) x maps weight exp(-x^2) onto the
        // standard normal density
        rule.nodes[static_cast<size_t>(i)] = std::sqrt(2.0) * x[static_cast<size_t>(i)];
        rule.weights[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] * inv_sqrt_pi;
    }
    return rule;
}

double romberg(const std::function<double(double)>& f, double a, double b, double rel_tol,
               int max_levels) {
    if (!(b > a)) throw std::invalid_argument("romberg: need b > a");
    if (rel_tol <= 0.0) throw std::invalid_argument("romberg: rel_tol must be > 0");
    if (max_levels < 2 || max_levels > 30)
        throw std::invalid_argument("romberg: max_levels out of range");

    std::vector<std::vector<double>> r(static_cast<size_t>(max_levels));
    const double h0 = b - a;
    r[0] = {0.5 * h0 * (f(a) + f(b))};
    for (int k = 1; k < max_levels; ++k) {
        const double h = h0 / static_cast<double>(1L << k);
        double sum = 0.0;
        const long new_points = 1L << (k - 1);
        for (long i = 0; i < new_points; ++i) sum += f(a + (2 * i + 1) * h);
        r[static_cast<size_t>(k)].resize(static_cast<size_t>(k) + 1);
        r[static_cast<size_t>(k)][0] = 0.5 * r[static_cast<size_t>(k) - 1][0] + h * sum;
        double pow4 = 1.0;
        for (int j = 1; j <= k; ++j) {
            pow4 *= 4.0;
            r[static_cast<size_t>(k)][static_cast<size_t>(j)] =
                r[static_cast<size_t>(k)][static_cast<size_t>(j) - 1] +
                (r[static_cast<size_t>(k)][static_cast<size_t>(j) - 1] -
                 r[static_cast<size_t>(k) - 1][static_cast<size_t>(j) - 1]) /
                    (pow4 - 1.0);
        }
        if (k >= 4) {
            const double cur = r[static_cast<size_t>(k)][static_cast<size_t>(k)];
            const double prev = r[static_cast<size_t>(k) - 1][static_cast<size_t>(k) - 1];
            const double scale = std::max(std::abs(cur), 1e-300);
            if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        }
    }
    throw std::runtime_error("romberg: no convergence within level budget");
}

}  // namespace cca
