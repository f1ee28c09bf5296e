#pragma once

#include <vector>

namespace cca {

// One cavity in a rectangular array, addressed by (row, col) and by the
// row-major flat index used for Hamiltonian rows/columns.
struct CavitySite {
    int row = 0;
    int col = 0;
    int flat_index = 0;
};

// Relative orientation of a nearest-neighbour cavity pair. Diagonal60 is the
// 60-degree pair (strongest overlap), Vertical and Horizontal are the stacked
// and lateral pairs. Anything farther apart is None.
enum class CouplingClass { Diagonal60, Vertical, Horizontal, None };

const char* to_string(CouplingClass cls);

// The three inter-cavity coupling strengths, stored as g/2pi in THz.
struct CouplingSet {
    double t = 0.0;   // Diagonal60
    double j1 = 0.0;  // Vertical
    double j2 = 0.0;  // Horizontal

    double value(CouplingClass cls) const;
};

struct CouplingEdge {
    int a = 0;  // flat indices, a < b
    int b = 0;
    CouplingClass cls = CouplingClass::None;
};

struct CouplingGraph {
    int rows = 0;
    int cols = 0;
    bool both_diagonals = false;
    std::vector<CouplingEdge> edges;

    int sites() const { return rows * cols; }
    CavitySite site(int flat_index) const;
};

// Dense real symmetric matrix in THz. The only mutator writes (i,j) and
// (j,i) together, so entries are symmetric exactly, not up to tolerance.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int n);

    int n() const { return n_; }
    double operator()(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }
    void set(int i, int j, double v);

    double trace() const;
    double frobenius_norm() const;

    // row-major n*n storage
    const std::vector<double>& data() const { return e_; }

private:
    int n_;
    std::vector<double> e_;
};

// Orientation class of a site pair. The 60-degree class covers the
// (r,c)-(r+1,c+1) diagonal; with both_diagonals it also covers
// (r,c)-(r+1,c-1). Pairs beyond nearest neighbours map to None.
CouplingClass classify_pair(const CavitySite& a, const CavitySite& b,
                            bool both_diagonals = false);

// Rectangular rows x cols cavity array with all nearest-neighbour edges
// classified. Throws std::invalid_argument for an empty grid.
CouplingGraph build_grid_geometry(int rows, int cols, bool both_diagonals);

// Single-excitation Hamiltonian: detunings on the diagonal, the coupling for
// each classified edge off the diagonal, zero for unlinked pairs.
SymmetricMatrix build_hamiltonian(const CouplingGraph& graph,
                                  const CouplingSet& couplings,
                                  const std::vector<double>& detunings);

}  // namespace cca
