#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "doctest.h"

#include "cca/lattice.hpp"

using cca::CavitySite;
using cca::CouplingClass;
using cca::CouplingEdge;
using cca::CouplingGraph;
using cca::CouplingSet;
using cca::SymmetricMatrix;

namespace {

// independent re-statement of the orientation rules, used as a brute-force
// cross-check of the graph builder
CouplingClass reference_classify(int r1, int c1, int r2, int c2, bool both_diagonals) {
    const int dr = r2 - r1;
    const int dc = c2 - c1;
    if (dr == 0 && (dc == 1 || dc == -1)) return CouplingClass::Horizontal;
    if (dc == 0 && (dr == 1 || dr == -1)) return CouplingClass::Vertical;
    if ((dr == 1 || dr == -1) && (dc == 1 || dc == -1) && (dr == dc || both_diagonals))
        return CouplingClass::Diagonal60;
    return CouplingClass::None;
}

long count_class(const CouplingGraph& g, CouplingClass cls) {
    return std::count_if(g.edges.begin(), g.edges.end(),
                         [cls](const CouplingEdge& e) { return e.cls == cls; });
}

}  // namespace

TEST_CASE("single cavity has no coupled pairs") {
    const CouplingGraph g = cca::build_grid_geometry(1, 1, false);
    CHECK(g.sites() == 1);
    CHECK(g.edges.empty());
}

TEST_CASE("2x2 grid carries one diagonal, two vertical, two horizontal pairs") {
    const CouplingGraph g = cca::build_grid_geometry(2, 2, false);
    CHECK(g.sites() == 4);
    CHECK(g.edges.size() == 5);
    CHECK(count_class(g, CouplingClass::Diagonal60) == 1);
    CHECK(count_class(g, CouplingClass::Vertical) == 2);
    CHECK(count_class(g, CouplingClass::Horizontal) == 2);

    const CouplingGraph g2 = cca::build_grid_geometry(2, 2, true);
    CHECK(g2.edges.size() == 6);
    CHECK(count_class(g2, CouplingClass::Diagonal60) == 2);
}

TEST_CASE("4x4 grid matches brute-force pair classification") {
    for (const bool both : {false, true}) {
        const CouplingGraph g = cca::build_grid_geometry(4, 4, both);
        std::vector<std::tuple<int, int, CouplingClass>> expected;
        for (int a = 0; a < 16; ++a)
            for (int b = a + 1; b < 16; ++b) {
                const CouplingClass cls =
                    reference_classify(a / 4, a % 4, b / 4, b % 4, both);
                if (cls != CouplingClass::None) expected.emplace_back(a, b, cls);
            }
        REQUIRE(g.edges.size() == expected.size());
        CHECK(g.edges.size() == (both ? 42u : 33u));
        std::vector<std::tuple<int, int, CouplingClass>> actual;
        for (const CouplingEdge& e : g.edges) actual.emplace_back(e.a, e.b, e.cls);
        std::sort(actual.begin(), actual.end());
        std::sort(expected.begin(), expected.end());
        CHECK(actual == expected);
    }
}

TEST_CASE("edge counts follow the closed form on small grids") {
    for (int rows = 1; rows <= 6; ++rows)
        for (int cols = 1; cols <= 6; ++cols)
            for (const bool both : {false, true}) {
                const CouplingGraph g = cca::build_grid_geometry(rows, cols, both);
                const long horizontal = static_cast<long>(rows) * (cols - 1);
                const long vertical = static_cast<long>(rows - 1) * cols;
                const long diagonal =
                    static_cast<long>(rows - 1) * (cols - 1) * (both ? 2 : 1);
                CHECK(static_cast<long>(g.edges.size()) ==
                      horizontal + vertical + diagonal);
                CHECK(count_class(g, CouplingClass::Horizontal) == horizontal);
                CHECK(count_class(g, CouplingClass::Vertical) == vertical);
                CHECK(count_class(g, CouplingClass::Diagonal60) == diagonal);
            }
}

TEST_CASE("pair orientation examples") {
    auto site = [](int r, int c) { return CavitySite{r, c, 0}; };
    CHECK(cca::classify_pair(site(0, 0), site(0, 1)) == CouplingClass::Horizontal);
    CHECK(cca::classify_pair(site(0, 0), site(1, 0)) == CouplingClass::Vertical);
    CHECK(cca::classify_pair(site(0, 0), site(1, 1)) == CouplingClass::Diagonal60);
    CHECK(cca::classify_pair(site(1, 0), site(0, 1)) == CouplingClass::None);
    CHECK(cca::classify_pair(site(1, 0), site(0, 1), true) == CouplingClass::Diagonal60);
    CHECK(cca::classify_pair(site(0, 0), site(2, 2)) == CouplingClass::None);
    CHECK(cca::classify_pair(site(0, 0), site(0, 2)) == CouplingClass::None);
    CHECK_THROWS_AS(cca::classify_pair(site(1, 1), site(1, 1)), std::invalid_argument);
}

TEST_CASE("pair orientation is symmetric in its arguments") {
    const CouplingGraph g = cca::build_grid_geometry(3, 3, false);
    for (const bool both : {false, true})
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) {
                if (a == b) continue;
                CHECK(cca::classify_pair(g.site(a), g.site(b), both) ==
                      cca::classify_pair(g.site(b), g.site(a), both));
            }
}

TEST_CASE("coupling set routes strengths by orientation") {
    const CouplingSet cs{1.2, 0.8, 0.3};
    CHECK(cs.value(CouplingClass::Diagonal60) == 1.2);
    CHECK(cs.value(CouplingClass::Vertical) == 0.8);
    CHECK(cs.value(CouplingClass::Horizontal) == 0.3);
    CHECK(cs.value(CouplingClass::None) == 0.0);
}

TEST_CASE("2x2 array Hamiltonian entries") {
    const CouplingGraph g = cca::build_grid_geometry(2, 2, false);
    const CouplingSet cs{1.2, 0.8, 0.0};
    const SymmetricMatrix h = cca::build_hamiltonian(g, cs, {0.0, 0.0, 0.0, 0.0});
    REQUIRE(h.n() == 4);
    // diagonal pair (0,0)-(1,1)
    CHECK(h(0, 3) == 1.2);
    // vertical pairs
    CHECK(h(0, 2) == 0.8);
    CHECK(h(1, 3) == 0.8);
    // horizontal pairs carry j2 = 0
    CHECK(h(0, 1) == 0.0);
    CHECK(h(2, 3) == 0.0);
    // anti-diagonal pair is uncoupled without the flag
    CHECK(h(1, 2) == 0.0);
    for (int i = 0; i < 4; ++i) CHECK(h(i, i) == 0.0);
}

TEST_CASE("two-site chains reduce to the textbook 2x2 matrix") {
    const CouplingGraph row_pair = cca::build_grid_geometry(1, 2, false);
    const SymmetricMatrix h1 = cca::build_hamiltonian(row_pair, CouplingSet{0, 0, 1.0}, {0, 0});
    CHECK(h1(0, 1) == 1.0);
    CHECK(h1(0, 0) == 0.0);

    const CouplingGraph col_pair = cca::build_grid_geometry(2, 1, false);
    const SymmetricMatrix h2 = cca::build_hamiltonian(col_pair, CouplingSet{0, 1.0, 0}, {0, 0});
    CHECK(h2(0, 1) == 1.0);
}

TEST_CASE("hamiltonian is exactly symmetric with exact trace") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    const CouplingGraph g = cca::build_grid_geometry(3, 4, true);
    std::vector<double> detunings(static_cast<size_t>(g.sites()));
    for (double& d : detunings) d = uni(gen);
    const SymmetricMatrix h = cca::build_hamiltonian(g, CouplingSet{1.1, 0.7, 0.2}, detunings);
    for (int i = 0; i < h.n(); ++i)
        for (int j = 0; j < h.n(); ++j) CHECK(h(i, j) == h(j, i));
    double sum = 0.0;
    for (double d : detunings) sum += d;
    CHECK(h.trace() == sum);
}

TEST_CASE("zero couplings leave a diagonal matrix") {
    const CouplingGraph g = cca::build_grid_geometry(2, 3, false);
    const std::vector<double> detunings{0.5, -1.0, 2.0, 0.0, 3.5, -0.25};
    const SymmetricMatrix h = cca::build_hamiltonian(g, CouplingSet{0, 0, 0}, detunings);
    for (int i = 0; i < h.n(); ++i)
        for (int j = 0; j < h.n(); ++j)
            CHECK(h(i, j) == (i == j ? detunings[static_cast<size_t>(i)] : 0.0));
}

TEST_CASE("geometry and matrix validation") {
    CHECK_THROWS_AS(cca::build_grid_geometry(0, 3, false), std::invalid_argument);
    CHECK_THROWS_AS(cca::build_grid_geometry(3, 0, false), std::invalid_argument);
    CHECK_THROWS_AS(cca::build_grid_geometry(-1, 2, false), std::invalid_argument);

    const CouplingGraph g = cca::build_grid_geometry(2, 2, false);
    CHECK_THROWS_AS(cca::build_hamiltonian(g, CouplingSet{1, 1, 1}, {0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(g.site(4), std::invalid_argument);
    CHECK_THROWS_AS(g.site(-1), std::invalid_argument);

    SymmetricMatrix m(2);
    CHECK_THROWS_AS(m.set(0, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SymmetricMatrix(-1), std::invalid_argument);
}

TEST_CASE("flat index round trip") {
    const CouplingGraph g = cca::build_grid_geometry(3, 5, false);
    for (int f = 0; f < g.sites(); ++f) {
        const CavitySite s = g.site(f);
        CHECK(s.flat_index == f);
        CHECK(s.row * 5 + s.col == f);
    }
}
