#include "cca/eigensolver.hpp"

#include <algorithm>
#include <cmath>

namespace cca {

namespace {

double offdiag_frobenius(const double* a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = a[static_cast<size_t>(i) * n + j];
            s += 2.0 * v * v;
        }
    return std::sqrt(s);
}

}  // namespace

int jacobi_diagonalize(double* a, int n, double tol, int max_sweeps, double& residual_out) {
    if (n < 1) throw std::invalid_argument("jacobi_diagonalize: dimension must be >= 1");
    if (tol <= 0.0) throw std::invalid_argument("jacobi_diagonalize: tol must be > 0");
    if (max_sweeps < 0) throw std::invalid_argument("jacobi_diagonalize: max_sweeps must be >= 0");

    double fro2 = 0.0;
    for (size_t k = 0; k < static_cast<size_t>(n) * n; ++k) fro2 += a[k] * a[k];
    const double fro = std::sqrt(fro2);
    if (fro == 0.0 || n == 1) {
        residual_out = 0.0;
        return 0;
    }

    auto stride = [n](int i, int j) { return static_cast<size_t>(i) * n + j; };

    int sweep = 0;
    residual_out = offdiag_frobenius(a, n) / fro;
    while (residual_out > tol) {
        if (sweep >= max_sweeps)
            throw EigensolverError(
                "jacobi_diagonalize: residual " + std::to_string(residual_out) +
                    " above tolerance after " + std::to_string(max_sweeps) + " sweeps",
                residual_out);
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[stride(p, q)];
                if (apq == 0.0) continue;
                const double app = a[stride(p, p)];
                const double aqq = a[stride(q, q)];
                const double theta = (aqq - app) / (2.0 * apq);
                // tan of the rotation angle; the large-theta branch avoids
                // overflow in theta*theta.
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[stride(p, p)] = app - t * apq;
                a[stride(q, q)] = aqq + t * apq;
                a[stride(p, q)] = 0.0;
                a[stride(q, p)] = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a[stride(r, p)];
                    const double arq = a[stride(r, q)];
                    const double nrp = arp - s * (arq + tau * arp);
                    const double nrq = arq + s * (arp - tau * arq);
                    a[stride(r, p)] = nrp;
                    a[stride(p, r)] = nrp;
                    a[stride(r, q)] = nrq;
                    a[stride(q, r)] = nrq;
                }
            }
        }
        ++sweep;
        residual_out = offdiag_frobenius(a, n) / fro;
    }
    return sweep;
}

EigenSpectrum eigenvalues_symmetric(const SymmetricMatrix& m, double tol, int max_sweeps) {
    const int n = m.n();
    if (n < 1) throw std::invalid_argument("eigenvalues_symmetric: dimension must be >= 1");
    std::vector<double> work = m.data();
    EigenSpectrum spec;
    spec.iterations = jacobi_diagonalize(work.data(), n, tol, max_sweeps, spec.offdiag_residual);
    spec.values.resize(n);
    for (int i = 0; i < n; ++i) spec.values[i] = work[static_cast<size_t>(i) * n + i];
    std::sort(spec.values.begin(), spec.values.end());
    return spec;
}

std::vector<double> separations(const EigenSpectrum& spectrum) {
    if (spectrum.values.size() < 2)
        throw std::invalid_argument("separations: need at least two eigenvalues");
    std::vector<double> seps(spectrum.values.size() - 1);
    for (size_t i = 0; i + 1 < spectrum.values.size(); ++i)
        seps[i] = spectrum.values[i + 1] - spectrum.values[i];
    return seps;
}

}  // namespace cca
