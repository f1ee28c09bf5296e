// Command-line front end: disorder sweeps, single ensembles, two-cavity
// splitting tables, measurement analysis, and parameter fitting.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cca/csv.hpp"
#include "cca/disorder.hpp"
#include "cca/estimation.hpp"
#include "cca/lattice.hpp"
#include "cca/molecule.hpp"

namespace {

// "a:b:c" -> {a, a+c, ..., <= b}; a bare number is a one-point grid.
std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument(flag + ": " + why + " (got '" + text + "')");
    };
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    auto to_double = [&](const std::string& s) {
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size() || !std::isfinite(v)) fail("malformed number '" + s + "'");
            return v;
        } catch (const std::invalid_argument&) {
            fail("malformed number '" + s + "'");
        } catch (const std::out_of_range&) {
            fail("number out of range '" + s + "'");
        }
        return 0.0;
    };
    if (parts.size() == 1) {
        const double v = to_double(parts[0]);
        if (v < 0.0) fail("values must be >= 0");
        return {v};
    }
    if (parts.size() != 3) fail("expected start:stop:step");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (start < 0.0) fail("start must be >= 0");
    if (step <= 0.0) fail("step must be > 0");
    if (stop < start) fail("stop must be >= start");
    std::vector<double> grid;
    const long count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

void write_file_atomically(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

struct LatticeOpts {
    int rows = 2;
    int cols = 2;
    bool both_diagonals = false;
    double t = 1.2;
    double j1 = 0.8;
    double j2 = 0.0;
};

void add_lattice_options(CLI::App* cmd, LatticeOpts& o) {
    cmd->add_option("--rows", o.rows, "array rows")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000));
    cmd->add_option("--cols", o.cols, "array columns")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000));
    cmd->add_flag("--both-diagonals", o.both_diagonals,
                  "couple both 60-degree diagonals of each plaquette");
    cmd->add_option("--t", o.t, "diagonal coupling t/2pi in THz")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--j1", o.j1, "vertical coupling J1/2pi in THz")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--j2", o.j2, "horizontal coupling J2/2pi in THz")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
}

void append_lattice_metadata(std::ostringstream& out, const std::string& command,
                             const LatticeOpts& o) {
    out << "# command=" << command << "\n";
    out << "# rows=" << o.rows << "\n";
    out << "# cols=" << o.cols << "\n";
    out << "# both_diagonals=" << (o.both_diagonals ? 1 : 0) << "\n";
    out << "# t=" << cca::csv_double(o.t) << "\n";
    out << "# j1=" << cca::csv_double(o.j1) << "\n";
    out << "# j2=" << cca::csv_double(o.j2) << "\n";
}

int run_sweep(const LatticeOpts& lat, const std::string& sigma_grid_text, long trials,
              std::uint64_t seed, int threads, const std::string& output,
              const std::string& plot_output) {
    const std::vector<double> grid = parse_grid(sigma_grid_text, "--sigma-grid");
    const cca::CouplingGraph graph =
        cca::build_grid_geometry(lat.rows, lat.cols, lat.both_diagonals);
    const cca::CouplingSet couplings{lat.t, lat.j1, lat.j2};
    cca::RunOptions options;
    options.threads = threads;
    const cca::SweepTable table =
        cca::sweep_sigma(graph, couplings, grid, trials, seed, options);

    std::ostringstream body;
    append_lattice_metadata(body, "sweep", lat);
    body << "# sigma_grid=" << sigma_grid_text << "\n";
    body << "# trials=" << trials << "\n";
    body << "# seed=" << seed << "\n";
    cca::write_sweep_csv(body, table);
    write_file_atomically(output, body.str());
    std::cout << "sweep: " << table.rows.size() << " sigma values, " << trials
              << " trials each -> " << output << "\n";

    if (!plot_output.empty()) {
        std::ostringstream plot;
        append_lattice_metadata(plot, "sweep", lat);
        plot << "# sigma_grid=" << sigma_grid_text << "\n";
        plot << "# trials=" << trials << "\n";
        plot << "# seed=" << seed << "\n";
        cca::write_plot_csv(plot, table);
        write_file_atomically(plot_output, plot.str());
        std::cout << "sweep: plot series -> " << plot_output << "\n";
    }
    return 0;
}

int run_ensemble_cmd(const LatticeOpts& lat, double sigma_f, long trials, std::uint64_t seed,
                     int threads, const std::string& output) {
    const cca::CouplingGraph graph =
        cca::build_grid_geometry(lat.rows, lat.cols, lat.both_diagonals);
    const cca::CouplingSet couplings{lat.t, lat.j1, lat.j2};
    cca::RunOptions options;
    options.threads = threads;
    cca::SweepTable table;
    table.rows.push_back(
        cca::run_ensemble(graph, couplings, cca::DisorderModel{sigma_f}, trials, seed, options));

    std::ostringstream body;
    append_lattice_metadata(body, "ensemble", lat);
    body << "# sigma_f=" << cca::csv_double(sigma_f) << "\n";
    body << "# trials=" << trials << "\n";
    body << "# seed=" << seed << "\n";
    cca::write_sweep_csv(body, table);
    write_file_atomically(output, body.str());
    std::cout << "ensemble: sigma_f=" << cca::csv_double(sigma_f) << ", " << trials
              << " trials -> " << output << "\n";
    return 0;
}

int run_molecule(const std::string& j_grid_text, const std::string& sigma_grid_text,
                 const std::string& output) {
    const std::vector<double> j_grid = parse_grid(j_grid_text, "--j-grid");
    const std::vector<double> sigma_grid = parse_grid(sigma_grid_text, "--sigma-grid");

    std::ostringstream body;
    body << "# command=molecule\n";
    body << "# j_grid=" << j_grid_text << "\n";
    body << "# sigma_grid=" << sigma_grid_text << "\n";
    body << "j,sigma_f,mu,sigma,ratio,mu_weak_disorder,mu_no_coupling\n";
    for (double j : j_grid) {
        for (double sigma : sigma_grid) {
            const cca::MoleculeParams p{j, sigma};
            const double mu = cca::molecule_mean_separation(p);
            const double sd = cca::molecule_std_separation(p);
            const double ratio = mu > 0.0 ? sd / mu : 0.0;
            const double weak = j > 0.0 ? cca::molecule_mean_weak_disorder(p)
                                        : std::numeric_limits<double>::quiet_NaN();
            body << cca::csv_double(j) << "," << cca::csv_double(sigma) << ","
                 << cca::csv_double(mu) << "," << cca::csv_double(sd) << ","
                 << cca::csv_double(ratio) << "," << cca::csv_double(weak) << ","
                 << cca::csv_double(cca::molecule_mean_no_coupling(sigma)) << "\n";
        }
    }
    write_file_atomically(output, body.str());
    std::cout << "molecule: " << j_grid.size() << " x " << sigma_grid.size()
              << " parameter grid -> " << output << "\n";
    return 0;
}

std::vector<cca::SpectrumRecord> read_records(const std::string& input, bool nm) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open input file '" + input + "'");
    return cca::read_spectra_csv(in, nm);
}

int run_analyze(const std::string& input, const std::string& units, double threshold,
                const std::string& output) {
    const std::vector<cca::SpectrumRecord> records = read_records(input, units == "nm");
    const cca::SeparationStatsResult result = cca::separation_stats(records);
    const std::vector<cca::Regime> regimes = cca::regime_classify(result.stats, threshold);

    std::cout << "records=" << records.size()
              << " used=" << (records.size() - result.excluded_ids.size())
              << " excluded=" << result.excluded_ids.size() << "\n";
    for (size_t k = 0; k < result.stats.size(); ++k) {
        const cca::SeparationStats& s = result.stats[k];
        std::cout << "gap_index=" << s.index << " mu=" << cca::csv_double(s.mu)
                  << " sigma=" << cca::csv_double(s.sigma)
                  << " ratio=" << cca::csv_double(s.ratio) << " count=" << s.count
                  << " regime=" << cca::to_string(regimes[k]) << "\n";
    }
    for (const std::string& id : result.excluded_ids)
        std::cout << "excluded: " << id << " (mode count differs from reference)\n";

    if (!output.empty()) {
        std::ostringstream body;
        body << "# command=analyze\n";
        body << "# input=" << input << "\n";
        body << "# units=" << units << "\n";
        body << "# threshold=" << cca::csv_double(threshold) << "\n";
        cca::write_stats_csv(body, result.stats);
        write_file_atomically(output, body.str());
        std::cout << "analyze: stats -> " << output << "\n";
    }
    return 0;
}

int run_fit(const std::string& input, const std::string& units, const LatticeOpts& lat,
            double sigma_f_init, bool freeze_j2, long trials, std::uint64_t seed, int threads,
            const std::string& output) {
    const std::vector<cca::SpectrumRecord> records = read_records(input, units == "nm");
    const cca::SeparationStatsResult observed = cca::separation_stats(records);
    const cca::CouplingGraph graph =
        cca::build_grid_geometry(lat.rows, lat.cols, lat.both_diagonals);
    cca::FitInit init;
    init.couplings = cca::CouplingSet{lat.t, lat.j1, lat.j2};
    init.sigma_f = sigma_f_init;
    init.freeze_j2 = freeze_j2;
    cca::RunOptions options;
    options.threads = threads;
    const cca::FitResult fit =
        cca::fit_parameters(observed.stats, graph, init, trials, seed, options);

    std::cout << "fit: t=" << cca::csv_double(fit.t) << " j1=" << cca::csv_double(fit.j1)
              << " j2=" << cca::csv_double(fit.j2)
              << " sigma_f=" << cca::csv_double(fit.sigma_f) << "\n";
    std::cout << "fit: objective=" << cca::csv_double(fit.objective)
              << " iterations=" << fit.iterations
              << " converged=" << (fit.converged ? "true" : "false")
              << " clamp_events=" << fit.clamp_events << "\n";
    for (const std::string& id : observed.excluded_ids)
        std::cout << "excluded: " << id << " (mode count differs from reference)\n";

    if (!output.empty()) {
        nlohmann::json doc;
        doc["t"] = fit.t;
        doc["j1"] = fit.j1;
        doc["j2"] = fit.j2;
        doc["sigma_f"] = fit.sigma_f;
        doc["objective"] = fit.objective;
        doc["iterations"] = fit.iterations;
        doc["converged"] = fit.converged;
        doc["clamp_events"] = fit.clamp_events;
        write_file_atomically(output, doc.dump(2) + "\n");
        std::cout << "fit: result -> " << output << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled cavity array spectra: simulation and estimation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file with long option names as keys; flags override");

    int exit_code = 0;

    // sweep
    LatticeOpts sweep_lat;
    std::string sweep_grid = "0:5:0.25";
    long sweep_trials = 10000;
    std::uint64_t sweep_seed = 12345;
    int sweep_threads = 1;
    std::string sweep_output;
    std::string sweep_plot;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "disorder sweep: ensemble statistics on a sigma_f grid");
    sweep->configurable();
    add_lattice_options(sweep, sweep_lat);
    sweep->add_option("--sigma-grid", sweep_grid, "sigma_f grid start:stop:step in THz")
        ->capture_default_str();
    sweep->add_option("--trials", sweep_trials, "disorder realisations per grid value")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", sweep_seed, "master seed")->capture_default_str();
    sweep->add_option("--threads", sweep_threads, "worker threads (never changes results)")
        ->capture_default_str()
        ->check(CLI::Range(1, 256));
    sweep->add_option("--output", sweep_output, "sweep CSV path")->required();
    sweep->add_option("--plot-output", sweep_plot, "long-format series CSV path");
    sweep->callback([&]() {
        exit_code = run_sweep(sweep_lat, sweep_grid, sweep_trials, sweep_seed, sweep_threads,
                              sweep_output, sweep_plot);
    });

    // ensemble
    LatticeOpts ens_lat;
    double ens_sigma = 0.0;
    long ens_trials = 10000;
    std::uint64_t ens_seed = 12345;
    int ens_threads = 1;
    std::string ens_output;
    CLI::App* ens = app.add_subcommand(
        "ensemble", "single-sigma ensemble statistics for one array");
    ens->configurable();
    add_lattice_options(ens, ens_lat);
    ens->add_option("--sigma-f", ens_sigma, "per-cavity detuning spread in THz")
        ->required()
        ->check(CLI::NonNegativeNumber);
    ens->add_option("--trials", ens_trials, "disorder realisations")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    ens->add_option("--seed", ens_seed, "master seed")->capture_default_str();
    ens->add_option("--threads", ens_threads, "worker threads (never changes results)")
        ->capture_default_str()
        ->check(CLI::Range(1, 256));
    ens->add_option("--output", ens_output, "CSV path")->required();
    ens->callback([&]() {
        exit_code =
            run_ensemble_cmd(ens_lat, ens_sigma, ens_trials, ens_seed, ens_threads, ens_output);
    });

    // molecule
    std::string mol_j_grid = "0:2:0.5";
    std::string mol_sigma_grid = "0:1:0.1";
    std::string mol_output;
    CLI::App* mol = app.add_subcommand(
        "molecule", "two-cavity splitting statistics over a (j, sigma_f) grid");
    mol->configurable();
    mol->add_option("--j-grid", mol_j_grid, "coupling grid start:stop:step in THz")
        ->capture_default_str();
    mol->add_option("--sigma-grid", mol_sigma_grid,
                    "detuning-difference spread grid start:stop:step in THz")
        ->capture_default_str();
    mol->add_option("--output", mol_output, "CSV path")->required();
    mol->callback([&]() { exit_code = run_molecule(mol_j_grid, mol_sigma_grid, mol_output); });

    // analyze
    std::string an_input;
    std::string an_units = "THz";
    double an_threshold = 0.3;
    std::string an_output;
    CLI::App* an = app.add_subcommand(
        "analyze", "per-gap statistics and regime labels from measured spectra");
    an->configurable();
    an->add_option("--input", an_input, "measurement CSV")->required();
    an->add_option("--units", an_units, "input units: THz frequencies or nm wavelengths")
        ->capture_default_str()
        ->check(CLI::IsMember({"THz", "nm"}));
    an->add_option("--threshold", an_threshold, "sigma/mu below this is coupling-dominated")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    an->add_option("--output", an_output, "stats CSV path");
    an->callback(
        [&]() { exit_code = run_analyze(an_input, an_units, an_threshold, an_output); });

    // fit
    std::string fit_input;
    std::string fit_units = "THz";
    LatticeOpts fit_lat;
    fit_lat.t = 1.0;
    fit_lat.j1 = 0.6;
    fit_lat.j2 = 0.0;
    double fit_sigma_init = 0.1;
    bool fit_freeze_j2 = false;
    long fit_trials = 2000;
    std::uint64_t fit_seed = 12345;
    int fit_threads = 1;
    std::string fit_output;
    CLI::App* fit = app.add_subcommand(
        "fit", "estimate couplings and disorder from measured spectra");
    fit->configurable();
    fit->add_option("--input", fit_input, "measurement CSV")->required();
    fit->add_option("--units", fit_units, "input units: THz frequencies or nm wavelengths")
        ->capture_default_str()
        ->check(CLI::IsMember({"THz", "nm"}));
    add_lattice_options(fit, fit_lat);
    fit->get_option("--t")->description("initial diagonal coupling t/2pi in THz");
    fit->get_option("--j1")->description("initial vertical coupling J1/2pi in THz");
    fit->get_option("--j2")->description("initial horizontal coupling J2/2pi in THz");
    fit->add_option("--sigma-f", fit_sigma_init, "initial per-cavity detuning spread in THz")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    fit->add_flag("--freeze-j2", fit_freeze_j2, "pin j2 at its initial value (3-parameter fit)");
    fit->add_option("--trials", fit_trials, "realisations per objective evaluation (>= 1000)")
        ->capture_default_str()
        ->check(CLI::Range(1000L, 10000000L));
    fit->add_option("--seed", fit_seed, "master seed (common random numbers)")
        ->capture_default_str();
    fit->add_option("--threads", fit_threads, "worker threads (never changes results)")
        ->capture_default_str()
        ->check(CLI::Range(1, 256));
    fit->add_option("--output", fit_output, "JSON result path");
    fit->callback([&]() {
        exit_code = run_fit(fit_input, fit_units, fit_lat, fit_sigma_init, fit_freeze_j2,
                            fit_trials, fit_seed, fit_threads, fit_output);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
