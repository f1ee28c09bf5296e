#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cca/lattice.hpp"

namespace cca {

struct EigenSpectrum {
    std::vector<double> values;      // ascending, THz
    int iterations = 0;              // completed Jacobi sweeps
    double offdiag_residual = 0.0;   // off-diagonal Frobenius / total Frobenius
};

class EigensolverError : public std::runtime_error {
public:
    EigensolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Cyclic Jacobi rotations on a row-major n*n symmetric matrix, in place.
// On return the eigenvalues sit on the diagonal (unsorted). Returns the
// number of completed sweeps; throws EigensolverError if the relative
// off-diagonal residual is still above tol after max_sweeps.
int jacobi_diagonalize(double* a, int n, double tol, int max_sweeps, double& residual_out);

// All eigenvalues of a dense symmetric matrix, ascending. tol is the relative
// off-diagonal Frobenius residual at which iteration stops.
EigenSpectrum eigenvalues_symmetric(const SymmetricMatrix& m, double tol = 1e-12,
                                    int max_sweeps = 100);

// Differences between consecutive ascending eigenvalues; length n-1.
std::vector<double> separations(const EigenSpectrum& spectrum);

}  // namespace cca
