#pragma once

// Test-side reference implementations. These deliberately avoid the
// library's numerical paths: eigenvalues come from the characteristic
// polynomial via sign changes and bisection, and normal draws come from
// std::normal_distribution, not the library's Box-Muller stream.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

// det(A - x I) by Gaussian elimination with partial pivoting.
inline double char_poly(std::vector<double> a, int n, double x) {
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i) * n + i] -= x;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<size_t>(r) * n + col]) >
                std::abs(a[static_cast<size_t>(piv) * n + col]))
                piv = r;
        if (a[static_cast<size_t>(piv) * n + col] == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(a[static_cast<size_t>(piv) * n + c],
                          a[static_cast<size_t>(col) * n + c]);
            det = -det;
        }
        const double d = a[static_cast<size_t>(col) * n + col];
        det *= d;
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<size_t>(r) * n + col] / d;
            for (int c = col; c < n; ++c)
                a[static_cast<size_t>(r) * n + c] -= f * a[static_cast<size_t>(col) * n + c];
        }
    }
    return det;
}

// All eigenvalues of a symmetric matrix with distinct eigenvalues, by
// scanning det(A - x I) for sign changes over the Gershgorin interval and
// bisecting each bracket. Callers must pick matrices whose spectra are
// simple; even-multiplicity roots produce no sign change.
inline std::vector<double> eig_bisection(const std::vector<double>& a, int n,
                                         long grid_points = 40001) {
    if (n < 1) throw std::invalid_argument("eig_bisection: empty matrix");
    if (n == 1) return {a[0]};

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) r += std::abs(a[static_cast<size_t>(i) * n + j]);
        lo = std::min(lo, a[static_cast<size_t>(i) * n + i] - r);
        hi = std::max(hi, a[static_cast<size_t>(i) * n + i] + r);
    }
    if (lo == hi) return std::vector<double>(static_cast<size_t>(n), lo);
    const double pad = 1e-6 * (hi - lo) + 1e-9;
    lo -= pad;
    hi += pad;

    long grid = grid_points;
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<double> roots;
        const double h = (hi - lo) / static_cast<double>(grid - 1);
        double x_prev = lo;
        double f_prev = char_poly(a, n, x_prev);
        for (long k = 1; k < grid; ++k) {
            const double x = lo + static_cast<double>(k) * h;
            const double f = char_poly(a, n, x);
            if (f_prev == 0.0) {
                roots.push_back(x_prev);
            } else if (f_prev * f < 0.0) {
                double xl = x_prev, xr = x, fl = f_prev;
                for (int it = 0; it < 200; ++it) {
                    const double xm = 0.5 * (xl + xr);
                    const double fm = char_poly(a, n, xm);
                    if (fm == 0.0) {
                        xl = xr = xm;
                        break;
                    }
                    if (fl * fm < 0.0) {
                        xr = xm;
                    } else {
                        xl = xm;
                        fl = fm;
                    }
                }
                roots.push_back(0.5 * (xl + xr));
            }
            x_prev = x;
            f_prev = f;
        }
        if (f_prev == 0.0) roots.push_back(x_prev);
        if (static_cast<int>(roots.size()) == n) {
            std::sort(roots.begin(), roots.end());
            return roots;
        }
        grid = grid * 4 - 3;
    }
    throw std::runtime_error("eig_bisection: failed to isolate all roots");
}

struct SampleMoments {
    long n = 0;
    double mean = 0.0;
    double var = 0.0;  // population
    double m4 = 0.0;   // fourth central moment
};

inline SampleMoments sample_moments(const std::vector<double>& xs) {
    SampleMoments m;
    m.n = static_cast<long>(xs.size());
    if (m.n == 0) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(m.n);
    for (double x : xs) {
        const double d = x - m.mean;
        m.var += d * d;
        m.m4 += d * d * d * d;
    }
    m.var /= static_cast<double>(m.n);
    m.m4 /= static_cast<double>(m.n);
    return m;
}

// Standard error of the sample standard deviation for a sample of size n
// drawn from the distribution whose moments are given (delta method).
inline double std_error_of_std(const SampleMoments& m, long n) {
    if (m.var <= 0.0 || n < 2) return 0.0;
    const double v = (m.m4 - m.var * m.var) / (4.0 * m.var * static_cast<double>(n));
    return std::sqrt(std::max(0.0, v));
}

// Monte Carlo draws of the two-cavity splitting sqrt(delta0^2 + 4 j^2),
// delta0 ~ N(0, sigma^2), via std::normal_distribution.
inline std::vector<double> molecule_splitting_samples(double j, double sigma, long count,
                                                      std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        const double d = sigma * normal(gen);
        out.push_back(std::sqrt(d * d + 4.0 * j * j));
    }
    return out;
}

// Least-squares line fit returning R^2.
inline double linear_r_squared(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (n != y.size() || n < 3) throw std::invalid_argument("linear_r_squared: bad inputs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_r_squared: degenerate x");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (size_t i = 0; i < n; ++i) {
        const double fit = slope * x[i] + intercept;
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    if (ss_tot == 0.0) return 1.0;
    return 1.0 - ss_res / ss_tot;
}

}  // namespace oracles
