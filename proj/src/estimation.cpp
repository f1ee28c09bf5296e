#include "cca/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "cca/csv.hpp"
#include "cca/molecule.hpp"

namespace cca {

namespace {

struct Moments {
    long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double std_population() const {
        return n > 0 ? std::sqrt(std::max(0.0, m2 / n)) : 0.0;
    }
};

long parse_long_field(const std::string& s, const std::string& field, size_t line_no) {
    try {
        size_t pos = 0;
        const long v = std::stol(trim(s), &pos);
        if (pos != trim(s).size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                    ": field " + field + " is not an integer: '" + s + "'");
    }
}

double parse_double_field(const std::string& s, const std::string& field, size_t line_no) {
    try {
        size_t pos = 0;
        const double v = std::stod(trim(s), &pos);
        if (pos != trim(s).size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("not finite");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                    ": field " + field + " is not a finite number: '" + s +
                                    "'");
    }
}

}  // namespace

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::CouplingDominated: return "CouplingDominated";
        case Regime::DisorderDominated: return "DisorderDominated";
        case Regime::Ambiguous: return "Ambiguous";
    }
    return "Ambiguous";
}

SeparationStatsResult separation_stats(const std::vector<SpectrumRecord>& records) {
    if (records.empty()) throw std::invalid_argument("separation_stats: no records");
    for (const SpectrumRecord& r : records) {
        if (r.array_size < 2)
            throw std::invalid_argument("separation_stats: record " + r.array_id +
                                        ": array_size must be >= 2");
        if (r.mode_frequencies.empty())
            throw std::invalid_argument("separation_stats: record " + r.array_id +
                                        ": no mode frequencies");
    }

    // The reference mode count is the majority count; ties go to the smaller
    // one so the choice never depends on input order.
    std::map<size_t, long> count_by_size;
    for (const SpectrumRecord& r : records) ++count_by_size[r.mode_frequencies.size()];
    size_t ref_size = 0;
    long best = -1;
    for (const auto& [size, count] : count_by_size)
        if (count > best) {
            best = count;
            ref_size = size;
        }
    if (ref_size < 2)
        throw std::invalid_argument("separation_stats: records carry fewer than two modes");

    SeparationStatsResult result;
    std::vector<Moments> gaps(ref_size - 1);
    long used = 0;
    for (const SpectrumRecord& r : records) {
        if (r.mode_frequencies.size() != ref_size) {
            result.excluded_ids.push_back(r.array_id);
            continue;
        }
        std::vector<double> freqs = r.mode_frequencies;
        std::sort(freqs.begin(), freqs.end());
        for (size_t k = 0; k + 1 < freqs.size(); ++k) gaps[k].add(freqs[k + 1] - freqs[k]);
        ++used;
    }
    if (used < 2)
        throw std::invalid_argument(
            "separation_stats: need at least two records with the reference mode count, got " +
            std::to_string(used));

    result.stats.resize(gaps.size());
    for (size_t k = 0; k < gaps.size(); ++k) {
        SeparationStats& s = result.stats[k];
        s.index = static_cast<int>(k);
        s.mu = gaps[k].mean;
        s.sigma = gaps[k].std_population();
        s.ratio = s.mu > 0.0 ? s.sigma / s.mu : 0.0;
        s.count = gaps[k].n;
    }
    return result;
}

std::vector<Regime> regime_classify(const std::vector<SeparationStats>& stats,
                                    double threshold) {
    const double r_star = uncoupled_ratio();
    if (!(threshold > 0.0) || threshold >= 0.8 * r_star)
        throw std::invalid_argument(
            "regime_classify: threshold must lie in (0, " + csv_double(0.8 * r_star) +
            ") so the coupling band stays below the disorder band");
    if (stats.empty()) throw std::invalid_argument("regime_classify: no stats");
    std::vector<Regime> regimes;
    regimes.reserve(stats.size());
    for (const SeparationStats& s : stats) {
        if (s.ratio < 0.0)
            throw std::invalid_argument("regime_classify: negative ratio at gap_index " +
                                        std::to_string(s.index));
        if (s.ratio < threshold) {
            regimes.push_back(Regime::CouplingDominated);
        } else if (std::abs(s.ratio - r_star) <= 0.2 * r_star) {
            regimes.push_back(Regime::DisorderDominated);
        } else {
            regimes.push_back(Regime::Ambiguous);
        }
    }
    return regimes;
}

namespace {

// Nelder-Mead on the 4-vector (t, j1, j2, sigma_f). The objective simulates
// an ensemble with one fixed master seed (common random numbers), so repeated
// evaluations of the same point return the same value.
struct Objective {
    const CouplingGraph& graph;
    const std::vector<double>& obs_mu;
    const std::vector<double>& obs_sigma;
    long trials;
    std::uint64_t master_seed;
    const RunOptions& options;
    int* clamp_events;

    std::vector<double> clamp(const std::vector<double>& p) const {
        std::vector<double> q = p;
        for (double& v : q)
            if (v < 0.0) {
                v = 0.0;
                ++*clamp_events;
            }
        return q;
    }

    double operator()(const std::vector<double>& p, long eval_trials) const {
        const std::vector<double> q = clamp(p);
        const CouplingSet couplings{q[0], q[1], q[2]};
        const DisorderModel model{q[3]};
        const EnsembleStats sim =
            run_ensemble(graph, couplings, model, eval_trials, master_seed, options);
        double obj = 0.0;
        for (size_t k = 0; k < obs_mu.size(); ++k) {
            const double dm = sim.mean_seps[k] - obs_mu[k];
            const double ds = sim.std_seps[k] - obs_sigma[k];
            obj += dm * dm + ds * ds;
        }
        if (!std::isfinite(obj))
            throw std::runtime_error("fit_parameters: objective is not finite");
        return obj;
    }
};

double simplex_diameter(const std::vector<std::vector<double>>& verts) {
    double d = 0.0;
    for (size_t a = 0; a < verts.size(); ++a)
        for (size_t b = a + 1; b < verts.size(); ++b)
            for (size_t i = 0; i < verts[a].size(); ++i)
                d = std::max(d, std::abs(verts[a][i] - verts[b][i]));
    return d;
}

}  // namespace

FitResult fit_parameters(const std::vector<SeparationStats>& observed,
                         const CouplingGraph& graph, const FitInit& init, long trials,
                         std::uint64_t master_seed, const RunOptions& options) {
    const int n = graph.sites();
    if (n < 2) throw std::invalid_argument("fit_parameters: need at least two cavities");
    if (trials < 1000)
        throw std::invalid_argument("fit_parameters: trials must be >= 1000, got " +
                                    std::to_string(trials));
    if (observed.size() != static_cast<size_t>(n - 1))
        throw std::invalid_argument("fit_parameters: observed stats cover " +
                                    std::to_string(observed.size()) + " gaps, graph has " +
                                    std::to_string(n - 1));

    std::vector<double> obs_mu(observed.size()), obs_sigma(observed.size());
    std::vector<bool> seen(observed.size(), false);
    for (const SeparationStats& s : observed) {
        if (s.index < 0 || s.index >= n - 1 || seen[static_cast<size_t>(s.index)])
            throw std::invalid_argument(
                "fit_parameters: observed gap_index values must cover 0.." +
                std::to_string(n - 2) + " exactly once");
        seen[static_cast<size_t>(s.index)] = true;
        obs_mu[static_cast<size_t>(s.index)] = s.mu;
        obs_sigma[static_cast<size_t>(s.index)] = s.sigma;
    }

    int clamp_events = 0;
    Objective objective{graph, obs_mu, obs_sigma, trials, master_seed, options, &clamp_events};

    constexpr int kMaxIterations = 500;
    constexpr double kDiameterTol = 1e-3;

    std::vector<double> p0 = {init.couplings.t, init.couplings.j1, init.couplings.j2,
                              init.sigma_f};
    for (double& v : p0)
        if (v < 0.0) v = 0.0;
    const std::vector<size_t> active =
        init.freeze_j2 ? std::vector<size_t>{0, 1, 3} : std::vector<size_t>{0, 1, 2, 3};
    const size_t dim = active.size();
    auto expand = [&](const std::vector<double>& v) {
        std::vector<double> q = p0;
        for (size_t i = 0; i < dim; ++i) q[active[i]] = v[i];
        return q;
    };
    auto eval = [&](const std::vector<double>& v, long eval_trials) {
        return objective(expand(v), eval_trials);
    };

    std::vector<std::vector<double>> verts;
    std::vector<double> v0(dim);
    for (size_t i = 0; i < dim; ++i) v0[i] = p0[active[i]];
    verts.push_back(v0);
    for (size_t i = 0; i < dim; ++i) {
        std::vector<double> v = v0;
        v[i] += std::max(0.25 * std::abs(v[i]), 0.1);
        verts.push_back(v);
    }
    std::vector<double> fvals(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) fvals[i] = eval(verts[i], trials);

    auto order = [&]() {
        std::vector<size_t> idx(verts.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });
        std::vector<std::vector<double>> nv(verts.size());
        std::vector<double> nf(verts.size());
        for (size_t i = 0; i < idx.size(); ++i) {
            nv[i] = verts[idx[i]];
            nf[i] = fvals[idx[i]];
        }
        verts.swap(nv);
        fvals.swap(nf);
    };

    int iterations = 0;
    bool converged = false;
    order();
    while (iterations < kMaxIterations) {
        if (simplex_diameter(verts) < kDiameterTol) {
            converged = true;
            break;
        }
        ++iterations;

        std::vector<double> centroid(dim, 0.0);
        for (size_t i = 0; i + 1 < verts.size(); ++i)
            for (size_t d = 0; d < dim; ++d) centroid[d] += verts[i][d];
        for (double& c : centroid) c /= static_cast<double>(verts.size() - 1);

        const std::vector<double>& worst = verts.back();
        std::vector<double> reflected(dim);
        for (size_t d = 0; d < dim; ++d) reflected[d] = centroid[d] + (centroid[d] - worst[d]);
        const double fr = eval(reflected, trials);

        if (fr < fvals.front()) {
            std::vector<double> expanded(dim);
            for (size_t d = 0; d < dim; ++d)
                expanded[d] = centroid[d] + 2.0 * (centroid[d] - worst[d]);
            const double fe = eval(expanded, trials);
            if (fe < fr) {
                verts.back() = expanded;
                fvals.back() = fe;
            } else {
                verts.back() = reflected;
                fvals.back() = fr;
            }
        } else if (fr < fvals[fvals.size() - 2]) {
            verts.back() = reflected;
            fvals.back() = fr;
        } else {
            const bool outside = fr < fvals.back();
            std::vector<double> contracted(dim);
            const std::vector<double>& towards = outside ? reflected : verts.back();
            for (size_t d = 0; d < dim; ++d)
                contracted[d] = centroid[d] + 0.5 * (towards[d] - centroid[d]);
            const double fc = eval(contracted, trials);
            if (fc < std::min(fr, fvals.back())) {
                verts.back() = contracted;
                fvals.back() = fc;
            } else {
                // shrink towards the best vertex
                for (size_t i = 1; i < verts.size(); ++i) {
                    for (size_t d = 0; d < dim; ++d)
                        verts[i][d] = verts.front()[d] + 0.5 * (verts[i][d] - verts.front()[d]);
                    fvals[i] = eval(verts[i], trials);
                }
            }
        }
        order();
    }

    const std::vector<double> best = objective.clamp(expand(verts.front()));
    const long final_trials = std::max<long>(trials, 10000);

    FitResult result;
    result.t = best[0];
    result.j1 = best[1];
    result.j2 = best[2];
    result.sigma_f = best[3];
    result.iterations = iterations;
    result.converged = converged;
    result.objective = objective(best, final_trials);
    result.clamp_events = clamp_events;
    return result;
}

std::vector<int> dominant_separations(const SweepTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("dominant_separations: empty table");
    size_t lowest = 0;
    for (size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].sigma_f < table.rows[lowest].sigma_f) lowest = i;
    const std::vector<double>& gaps = table.rows[lowest].mean_seps;
    if (gaps.empty())
        throw std::invalid_argument("dominant_separations: row carries no separations");

    std::vector<int> picked;
    if (gaps.size() == 1) {
        if (gaps[0] > 0.0) picked.push_back(0);
    } else {
        std::vector<double> sorted = gaps;
        std::sort(sorted.begin(), sorted.end());
        const size_t h = sorted.size() / 2;
        const double median =
            sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
        for (size_t k = 0; k < gaps.size(); ++k) {
            const bool dominant = median > 0.0 ? gaps[k] >= 2.0 * median : gaps[k] > 0.0;
            if (dominant) picked.push_back(static_cast<int>(k));
        }
    }
    std::sort(picked.begin(), picked.end(), [&](int a, int b) {
        if (gaps[static_cast<size_t>(a)] != gaps[static_cast<size_t>(b)])
            return gaps[static_cast<size_t>(a)] > gaps[static_cast<size_t>(b)];
        return a < b;
    });
    return picked;
}

std::vector<SpectrumRecord> read_spectra_csv(std::istream& in, bool wavelengths_nm) {
    const std::string expected_header = wavelengths_nm
                                            ? "array_id,array_size,mode_index,wavelength_nm"
                                            : "array_id,array_size,mode_index,frequency_THz";
    std::string line;
    size_t line_no = 0;
    bool header_seen = false;

    struct Partial {
        int array_size = 0;
        std::map<long, double> modes;  // mode_index -> frequency
        size_t first_line = 0;
    };
    std::vector<std::string> id_order;
    std::map<std::string, Partial> partials;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != expected_header)
                throw std::invalid_argument("read_spectra_csv: line " +
                                            std::to_string(line_no) + ": expected header '" +
                                            expected_header + "', got '" + t + "'");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(t);
        if (fields.size() != 4)
            throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                        ": expected 4 fields, got " +
                                        std::to_string(fields.size()));
        const std::string id = trim(fields[0]);
        if (id.empty())
            throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                        ": field array_id is empty");
        const long size = parse_long_field(fields[1], "array_size", line_no);
        if (size < 2)
            throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                        ": field array_size must be >= 2, got " +
                                        std::to_string(size));
        const long mode = parse_long_field(fields[2], "mode_index", line_no);
        if (mode < 0 || mode >= size)
            throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                        ": field mode_index must lie in 0.." +
                                        std::to_string(size - 1) + ", got " +
                                        std::to_string(mode));
        double value = parse_double_field(
            fields[3], wavelengths_nm ? "wavelength_nm" : "frequency_THz", line_no);
        if (wavelengths_nm) {
            if (value <= 0.0)
                throw std::invalid_argument("read_spectra_csv: line " +
                                            std::to_string(line_no) +
                                            ": field wavelength_nm must be > 0");
            value = kSpeedOfLightNmTHz / value;
        }

        auto [it, inserted] = partials.try_emplace(id);
        if (inserted) {
            it->second.array_size = static_cast<int>(size);
            it->second.first_line = line_no;
            id_order.push_back(id);
        } else if (it->second.array_size != static_cast<int>(size)) {
            throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                        ": record " + id +
                                        " declares array_size inconsistently");
        }
        if (!it->second.modes.emplace(mode, value).second)
            throw std::invalid_argument("read_spectra_csv: line " + std::to_string(line_no) +
                                        ": record " + id + " repeats mode_index " +
                                        std::to_string(mode));
    }
    if (!header_seen) throw std::invalid_argument("read_spectra_csv: empty input");
    if (partials.empty()) throw std::invalid_argument("read_spectra_csv: no data rows");

    std::vector<SpectrumRecord> records;
    records.reserve(id_order.size());
    for (const std::string& id : id_order) {
        const Partial& p = partials[id];
        if (static_cast<long>(p.modes.size()) != p.array_size)
            throw std::invalid_argument("read_spectra_csv: record " + id + " declares " +
                                        std::to_string(p.array_size) + " modes but provides " +
                                        std::to_string(p.modes.size()));
        SpectrumRecord r;
        r.array_id = id;
        r.array_size = p.array_size;
        r.mode_frequencies.reserve(p.modes.size());
        for (const auto& [mode, freq] : p.modes) r.mode_frequencies.push_back(freq);
        std::sort(r.mode_frequencies.begin(), r.mode_frequencies.end());
        records.push_back(std::move(r));
    }
    return records;
}

void write_stats_csv(std::ostream& out, const std::vector<SeparationStats>& stats) {
    if (stats.empty()) throw std::invalid_argument("write_stats_csv: no stats");
    out << "gap_index,mu_THz,sigma_THz,ratio,count\n";
    for (const SeparationStats& s : stats) {
        out << s.index << "," << csv_double(s.mu) << "," << csv_double(s.sigma) << ","
            << csv_double(s.ratio) << "," << s.count << "\n";
    }
}

}  // namespace cca
