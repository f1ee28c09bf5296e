#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cca/lattice.hpp"
#include "cca/rng.hpp"

namespace cca {

// Fabrication disorder: each cavity's detuning is an independent draw from
// N(0, sigma_f^2), sigma_f in THz (per-cavity standard deviation).
struct DisorderModel {
    double sigma_f = 0.0;
};

// Ensemble moments of the eigenvalues and of their consecutive separations,
// both indexed in ascending spectral order. Standard deviations are
// population (divide by the trial count).
struct EnsembleStats {
    double sigma_f = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
    std::vector<double> mean_eigs;
    std::vector<double> std_eigs;
    std::vector<double> mean_seps;
    std::vector<double> std_seps;
};

struct SweepTable {
    std::vector<EnsembleStats> rows;
};

// Execution and eigensolver knobs. None of these may change the statistics:
// results are bitwise identical for any thread count.
struct RunOptions {
    int threads = 1;
    double eig_tol = 1e-12;
    int max_sweeps = 100;
};

// n independent N(0, sigma_f^2) detunings from the given stream.
std::vector<double> sample_detunings(GaussianStream& stream, int n, const DisorderModel& model);

// Monte Carlo ensemble over disorder realisations: trial k seeds its own
// generator from mix_seed(master_seed, k), so trials are independent of
// scheduling and of each other.
EnsembleStats run_ensemble(const CouplingGraph& graph, const CouplingSet& couplings,
                           const DisorderModel& model, long trials, std::uint64_t master_seed,
                           const RunOptions& options = RunOptions{});

// One ensemble per grid value. The grid must be non-empty, non-negative and
// strictly increasing. Grid point i runs under a seed derived from
// (master_seed, i), so a whole sweep is reproducible from one seed.
SweepTable sweep_sigma(const CouplingGraph& graph, const CouplingSet& couplings,
                       const std::vector<double>& sigma_grid, long trials,
                       std::uint64_t master_seed, const RunOptions& options = RunOptions{});

// CSV with one row per grid value:
// sigma_f,trials,mean_eig_1..n,std_eig_1..n,mean_sep_1..n-1,std_sep_1..n-1
// Values carry 9 significant digits.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

// Long-format companion (sigma_f,series,value) for plotting tools.
void write_plot_csv(std::ostream& out, const SweepTable& table);

}  // namespace cca
