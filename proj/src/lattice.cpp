#include "cca/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cca {

const char* to_string(CouplingClass cls) {
    switch (cls) {
        case CouplingClass::Diagonal60: return "Diagonal60";
        case CouplingClass::Vertical: return "Vertical";
        case CouplingClass::Horizontal: return "Horizontal";
        case CouplingClass::None: return "None";
    }
    return "None";
}

double CouplingSet::value(CouplingClass cls) const {
    switch (cls) {
        case CouplingClass::Diagonal60: return t;
        case CouplingClass::Vertical: return j1;
        case CouplingClass::Horizontal: return j2;
        case CouplingClass::None: return 0.0;
    }
    return 0.0;
}

CavitySite CouplingGraph::site(int flat_index) const {
    if (flat_index < 0 || flat_index >= sites())
        throw std::invalid_argument("site: flat_index " + std::to_string(flat_index) +
                                    " outside 0.." + std::to_string(sites() - 1));
    return CavitySite{flat_index / cols, flat_index % cols, flat_index};
}

SymmetricMatrix::SymmetricMatrix(int n) : n_(n) {
    if (n < 0) throw std::invalid_argument("SymmetricMatrix: negative dimension");
    e_.assign(static_cast<size_t>(n) * n, 0.0);
}

void SymmetricMatrix::set(int i, int j, double v) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::invalid_argument("SymmetricMatrix::set: index out of range");
    e_[static_cast<size_t>(i) * n_ + j] = v;
    e_[static_cast<size_t>(j) * n_ + i] = v;
}

double SymmetricMatrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += e_[static_cast<size_t>(i) * n_ + i];
    return s;
}

double SymmetricMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : e_) s += v * v;
    return std::sqrt(s);
}

CouplingClass classify_pair(const CavitySite& a, const CavitySite& b, bool both_diagonals) {
    if (a.row == b.row && a.col == b.col)
        throw std::invalid_argument("classify_pair: identical sites");
    const int dr = b.row - a.row;
    const int dc = b.col - a.col;
    if (dr == 0 && std::abs(dc) == 1) return CouplingClass::Horizontal;
    if (dc == 0 && std::abs(dr) == 1) return CouplingClass::Vertical;
    if (std::abs(dr) == 1 && std::abs(dc) == 1) {
        if (dr * dc > 0 || both_diagonals) return CouplingClass::Diagonal60;
    }
    return CouplingClass::None;
}

CouplingGraph build_grid_geometry(int rows, int cols, bool both_diagonals) {
    if (rows < 1) throw std::invalid_argument("build_grid_geometry: rows must be >= 1");
    if (cols < 1) throw std::invalid_argument("build_grid_geometry: cols must be >= 1");
    CouplingGraph g;
    g.rows = rows;
    g.cols = cols;
    g.both_diagonals = both_diagonals;
    const int n = rows * cols;
    for (int a = 0; a < n; ++a) {
        const CavitySite sa = g.site(a);
        for (int b = a + 1; b < n; ++b) {
            const CavitySite sb = g.site(b);
            const CouplingClass cls = classify_pair(sa, sb, both_diagonals);
            if (cls != CouplingClass::None) g.edges.push_back(CouplingEdge{a, b, cls});
        }
    }
    return g;
}

SymmetricMatrix build_hamiltonian(const CouplingGraph& graph, const CouplingSet& couplings,
                                  const std::vector<double>& detunings) {
    const int n = graph.sites();
    if (graph.rows < 1 || graph.cols < 1)
        throw std::invalid_argument("build_hamiltonian: empty coupling graph");
    if (static_cast<int>(detunings.size()) != n)
        throw std::invalid_argument("build_hamiltonian: detunings size " +
                                    std::to_string(detunings.size()) + " != sites " +
                                    std::to_string(n));
    SymmetricMatrix h(n);
    for (int i = 0; i < n; ++i) h.set(i, i, detunings[i]);
    for (const CouplingEdge& e : graph.edges) h.set(e.a, e.b, couplings.value(e.cls));
    return h;
}

}  // namespace cca
