#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cca/disorder.hpp"
#include "cca/lattice.hpp"

namespace cca {

// Conversion between vacuum wavelength (nm) and frequency (THz).
constexpr double kSpeedOfLightNmTHz = 299792.458;

// One measured array: its mode frequencies in THz, ascending after ingest.
struct SpectrumRecord {
    std::string array_id;
    int array_size = 0;
    std::vector<double> mode_frequencies;
};

// Moments of one separation index across records. `index` is 0-based:
// index k is the gap between ascending modes k and k+1. sigma/mu ratio is 0
// when mu is 0.
struct SeparationStats {
    int index = 0;
    double mu = 0.0;     // THz
    double sigma = 0.0;  // THz, population
    double ratio = 0.0;  // sigma / mu
    long count = 0;
};

struct SeparationStatsResult {
    std::vector<SeparationStats> stats;
    std::vector<std::string> excluded_ids;  // records whose mode count disagreed
};

enum class Regime { CouplingDominated, DisorderDominated, Ambiguous };

const char* to_string(Regime regime);

// Per-gap moments across records sharing one array size (the majority size
// among the inputs); records with a different mode count are excluded and
// reported, never silently dropped.
SeparationStatsResult separation_stats(const std::vector<SpectrumRecord>& records);

// Labels each gap: ratio < threshold -> CouplingDominated; within 20% of the
// uncoupled half-normal ratio -> DisorderDominated; otherwise Ambiguous.
std::vector<Regime> regime_classify(const std::vector<SeparationStats>& stats,
                                    double threshold = 0.3);

struct FitInit {
    CouplingSet couplings;   // t, j1, j2 starting point
    double sigma_f = 0.0;    // per-cavity detuning spread starting point
    bool freeze_j2 = false;  // pin j2 at its initial value (3-parameter fit)
};

struct FitResult {
    double t = 0.0;
    double j1 = 0.0;
    double j2 = 0.0;
    double sigma_f = 0.0;
    double objective = 0.0;  // at 10^4 trials, final parameters
    int iterations = 0;
    bool converged = false;
    int clamp_events = 0;  // how often a negative candidate was clamped to 0
};

// Least-squares match of simulated separation moments to observed ones over
// (t, j1, j2, sigma_f), Nelder-Mead with common random numbers: every
// objective evaluation reuses the same master seed, so the objective is
// deterministic and the fit reproducible. Negative candidates are clamped to
// zero and counted. Converged means the simplex diameter fell below 1e-3 THz
// within 500 iterations.
FitResult fit_parameters(const std::vector<SeparationStats>& observed,
                         const CouplingGraph& graph, const FitInit& init, long trials,
                         std::uint64_t master_seed, const RunOptions& options = RunOptions{});

// Indices (0-based, ordered by decreasing gap) of separations that stand out
// in the lowest-disorder row of a sweep: gap >= 2x the median gap. A single
// positive gap counts as dominant; if every gap ties the median, none do.
std::vector<int> dominant_separations(const SweepTable& table);

// Reads measurement CSV with columns array_id,array_size,mode_index,value.
// Values are THz, or vacuum nm when wavelengths_nm is set (converted on
// ingest). Modes are sorted ascending per record; mode_index must cover
// 0..array_size-1 exactly once per record.
std::vector<SpectrumRecord> read_spectra_csv(std::istream& in, bool wavelengths_nm = false);

// CSV: gap_index,mu_THz,sigma_THz,ratio,count (gap_index 0-based).
void write_stats_csv(std::ostream& out, const std::vector<SeparationStats>& stats);

}  // namespace cca
