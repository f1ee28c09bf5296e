#include "cca/disorder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "cca/csv.hpp"
#include "cca/eigensolver.hpp"

namespace cca {

namespace {

// Welford accumulator with Chan's merge. Merging block accumulators in a
// fixed order makes the result independent of which thread ran which block.
struct RunningMoments {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }

    void merge(const RunningMoments& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double d = o.mean - mean;
        const long tot = n + o.n;
        mean += d * (static_cast<double>(o.n) / tot);
        m2 += o.m2 + d * d * (static_cast<double>(n) * static_cast<double>(o.n) / tot);
        n = tot;
    }

    double std_population() const {
        return n > 0 ? std::sqrt(std::max(0.0, m2 / n)) : 0.0;
    }
};

// Trials are processed in fixed blocks; block results merge in block order,
// so the statistics are bitwise reproducible for any thread count.
constexpr long kTrialBlock = 256;

struct BlockMoments {
    std::vector<RunningMoments> eigs;
    std::vector<RunningMoments> seps;
};

// Per-worker scratch: one Hamiltonian fill + Jacobi pass per trial with no
// allocation in the loop.
struct TrialWorkspace {
    std::vector<double> detunings;
    std::vector<double> matrix;
    std::vector<double> values;

    explicit TrialWorkspace(int n)
        : detunings(n), matrix(static_cast<size_t>(n) * n), values(n) {}
};

struct EdgeValue {
    size_t ij;
    size_t ji;
    double value;
};

void run_trial(std::uint64_t trial_seed, const DisorderModel& model,
               const std::vector<EdgeValue>& edges, int n, const RunOptions& options,
               TrialWorkspace& ws) {
    GaussianStream stream(trial_seed);
    for (int i = 0; i < n; ++i) ws.detunings[i] = model.sigma_f * stream.normal();

    std::fill(ws.matrix.begin(), ws.matrix.end(), 0.0);
    for (int i = 0; i < n; ++i) ws.matrix[static_cast<size_t>(i) * n + i] = ws.detunings[i];
    for (const EdgeValue& e : edges) {
        ws.matrix[e.ij] = e.value;
        ws.matrix[e.ji] = e.value;
    }

    double residual = 0.0;
    jacobi_diagonalize(ws.matrix.data(), n, options.eig_tol, options.max_sweeps, residual);
    for (int i = 0; i < n; ++i) ws.values[i] = ws.matrix[static_cast<size_t>(i) * n + i];
    std::sort(ws.values.begin(), ws.values.end());
}

}  // namespace

std::vector<double> sample_detunings(GaussianStream& stream, int n, const DisorderModel& model) {
    if (n < 1) throw std::invalid_argument("sample_detunings: n must be >= 1");
    if (model.sigma_f < 0.0)
        throw std::invalid_argument("sample_detunings: sigma_f must be >= 0");
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = model.sigma_f * stream.normal();
    return d;
}

EnsembleStats run_ensemble(const CouplingGraph& graph, const CouplingSet& couplings,
                           const DisorderModel& model, long trials, std::uint64_t master_seed,
                           const RunOptions& options) {
    const int n = graph.sites();
    if (graph.rows < 1 || graph.cols < 1)
        throw std::invalid_argument("run_ensemble: empty coupling graph");
    if (n < 2) throw std::invalid_argument("run_ensemble: need at least two cavities");
    if (trials < 1) throw std::invalid_argument("run_ensemble: trials must be >= 1");
    if (model.sigma_f < 0.0) throw std::invalid_argument("run_ensemble: sigma_f must be >= 0");
    if (options.threads < 1) throw std::invalid_argument("run_ensemble: threads must be >= 1");

    std::vector<EdgeValue> edges;
    edges.reserve(graph.edges.size());
    for (const CouplingEdge& e : graph.edges)
        edges.push_back(EdgeValue{static_cast<size_t>(e.a) * n + e.b,
                                  static_cast<size_t>(e.b) * n + e.a,
                                  couplings.value(e.cls)});

    const long num_blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<BlockMoments> blocks(static_cast<size_t>(num_blocks));

    std::atomic<long> next_block{0};
    std::atomic<long> failed_trial{-1};
    std::string failure_what;

    auto worker = [&]() {
        TrialWorkspace ws(n);
        long b;
        while ((b = next_block.fetch_add(1)) < num_blocks) {
            if (failed_trial.load() >= 0) return;
            BlockMoments& bm = blocks[static_cast<size_t>(b)];
            bm.eigs.assign(static_cast<size_t>(n), RunningMoments{});
            bm.seps.assign(static_cast<size_t>(n - 1), RunningMoments{});
            const long begin = b * kTrialBlock;
            const long end = std::min(trials, begin + kTrialBlock);
            for (long k = begin; k < end; ++k) {
                try {
                    run_trial(mix_seed(master_seed, static_cast<std::uint64_t>(k)), model,
                              edges, n, options, ws);
                } catch (const std::exception& ex) {
                    long expected = -1;
                    if (failed_trial.compare_exchange_strong(expected, k))
                        failure_what = ex.what();
                    return;
                }
                for (int i = 0; i < n; ++i) bm.eigs[static_cast<size_t>(i)].add(ws.values[i]);
                for (int i = 0; i + 1 < n; ++i)
                    bm.seps[static_cast<size_t>(i)].add(ws.values[i + 1] - ws.values[i]);
            }
        }
    };

    const int nthreads = static_cast<int>(std::min<long>(options.threads, num_blocks));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    if (failed_trial.load() >= 0)
        throw EigensolverError("run_ensemble: trial " + std::to_string(failed_trial.load()) +
                                   " failed: " + failure_what,
                               0.0);

    std::vector<RunningMoments> eigs(static_cast<size_t>(n));
    std::vector<RunningMoments> seps(static_cast<size_t>(n - 1));
    for (const BlockMoments& bm : blocks) {
        for (int i = 0; i < n; ++i) eigs[static_cast<size_t>(i)].merge(bm.eigs[static_cast<size_t>(i)]);
        for (int i = 0; i + 1 < n; ++i)
            seps[static_cast<size_t>(i)].merge(bm.seps[static_cast<size_t>(i)]);
    }

    EnsembleStats stats;
    stats.sigma_f = model.sigma_f;
    stats.trials = trials;
    stats.seed = master_seed;
    stats.mean_eigs.resize(static_cast<size_t>(n));
    stats.std_eigs.resize(static_cast<size_t>(n));
    stats.mean_seps.resize(static_cast<size_t>(n - 1));
    stats.std_seps.resize(static_cast<size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        stats.mean_eigs[static_cast<size_t>(i)] = eigs[static_cast<size_t>(i)].mean;
        stats.std_eigs[static_cast<size_t>(i)] = eigs[static_cast<size_t>(i)].std_population();
    }
    for (int i = 0; i + 1 < n; ++i) {
        stats.mean_seps[static_cast<size_t>(i)] = seps[static_cast<size_t>(i)].mean;
        stats.std_seps[static_cast<size_t>(i)] = seps[static_cast<size_t>(i)].std_population();
    }
    return stats;
}

SweepTable sweep_sigma(const CouplingGraph& graph, const CouplingSet& couplings,
                       const std::vector<double>& sigma_grid, long trials,
                       std::uint64_t master_seed, const RunOptions& options) {
    if (sigma_grid.empty()) throw std::invalid_argument("sweep_sigma: sigma_grid is empty");
    for (size_t i = 0; i < sigma_grid.size(); ++i) {
        if (sigma_grid[i] < 0.0)
            throw std::invalid_argument("sweep_sigma: sigma_grid values must be >= 0");
        if (i > 0 && sigma_grid[i] <= sigma_grid[i - 1])
            throw std::invalid_argument("sweep_sigma: sigma_grid must be strictly increasing");
    }
    SweepTable table;
    table.rows.reserve(sigma_grid.size());
    for (size_t i = 0; i < sigma_grid.size(); ++i) {
        // Each grid point gets an independent seed stream keyed by position.
        const std::uint64_t point_seed = mix_seed(master_seed, static_cast<std::uint64_t>(i));
        DisorderModel model{sigma_grid[i]};
        table.rows.push_back(run_ensemble(graph, couplings, model, trials, point_seed, options));
    }
    return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("write_sweep_csv: empty table");
    const size_t n = table.rows.front().mean_eigs.size();
    for (const EnsembleStats& row : table.rows)
        if (row.mean_eigs.size() != n)
            throw std::invalid_argument("write_sweep_csv: rows disagree on array size");

    out << "sigma_f,trials";
    for (size_t i = 1; i <= n; ++i) out << ",mean_eig_" << i;
    for (size_t i = 1; i <= n; ++i) out << ",std_eig_" << i;
    for (size_t i = 1; i < n; ++i) out << ",mean_sep_" << i;
    for (size_t i = 1; i < n; ++i) out << ",std_sep_" << i;
    out << "\n";
    for (const EnsembleStats& row : table.rows) {
        out << csv_double(row.sigma_f) << "," << row.trials;
        for (double v : row.mean_eigs) out << "," << csv_double(v);
        for (double v : row.std_eigs) out << "," << csv_double(v);
        for (double v : row.mean_seps) out << "," << csv_double(v);
        for (double v : row.std_seps) out << "," << csv_double(v);
        out << "\n";
    }
}

void write_plot_csv(std::ostream& out, const SweepTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("write_plot_csv: empty table");
    out << "sigma_f,series,value\n";
    for (const EnsembleStats& row : table.rows) {
        const std::string sf = csv_double(row.sigma_f);
        for (size_t i = 0; i < row.mean_eigs.size(); ++i)
            out << sf << ",mean_eig_" << (i + 1) << "," << csv_double(row.mean_eigs[i]) << "\n";
        for (size_t i = 0; i < row.std_eigs.size(); ++i)
            out << sf << ",std_eig_" << (i + 1) << "," << csv_double(row.std_eigs[i]) << "\n";
        for (size_t i = 0; i < row.mean_seps.size(); ++i)
            out << sf << ",mean_sep_" << (i + 1) << "," << csv_double(row.mean_seps[i]) << "\n";
        for (size_t i = 0; i < row.std_seps.size(); ++i)
            out << sf << ",std_sep_" << (i + 1) << "," << csv_double(row.std_seps[i]) << "\n";
    }
}

}  // namespace cca
