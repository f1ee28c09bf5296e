#include "cca/molecule.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "cca/quadrature.hpp"

namespace cca {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_params(const MoleculeParams& p, const char* where) {
    if (p.j < 0.0) throw std::invalid_argument(std::string(where) + ": j must be >= 0");
    if (p.sigma_f < 0.0)
        throw std::invalid_argument(std::string(where) + ": sigma_f must be >= 0");
}

double normal_pdf(double x, double sigma) {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

// E[f(sigma*Z)] by Gauss-Hermite at two orders; if they disagree (the
// integrand has a kink near zero once sigma >~ j) fall back to Romberg on
// [0, 10 sigma], which covers the normal mass to ~1e-23.
double gaussian_expectation(double sigma, const std::function<double(double)>& f) {
    static const GaussHermite rule64 = gauss_hermite_normal(64);
    static const GaussHermite rule128 = gauss_hermite_normal(128);

    auto apply = [&](const GaussHermite& rule) {
        double s = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * f(sigma * rule.nodes[i]);
        return s;
    };
    const double e64 = apply(rule64);
    const double e128 = apply(rule128);
    if (std::abs(e64 - e128) <= 1e-9 * std::max(std::abs(e128), 1e-300)) return e128;

    // even integrand: twice the half-line integral against the normal density
    auto half = [&](double x) { return f(x) * normal_pdf(x, sigma); };
    return 2.0 * romberg(half, 0.0, 10.0 * sigma, 1e-11);
}

}  // namespace

double molecule_separation(double delta0, double j) {
    if (j < 0.0) throw std::invalid_argument("molecule_separation: j must be >= 0");
    return std::hypot(delta0, 2.0 * j);
}

double molecule_mean_separation(const MoleculeParams& p) {
    check_params(p, "molecule_mean_separation");
    if (p.sigma_f == 0.0) return 2.0 * p.j;
    const double twoj = 2.0 * p.j;
    return gaussian_expectation(p.sigma_f,
                                [twoj](double x) { return std::hypot(x, twoj); });
}

double molecule_second_moment(const MoleculeParams& p) {
    check_params(p, "molecule_second_moment");
    const double fourj2 = 4.0 * p.j * p.j;
    if (p.sigma_f == 0.0) return fourj2;
    return gaussian_expectation(p.sigma_f, [fourj2](double x) { return x * x + fourj2; });
}

double molecule_std_separation(const MoleculeParams& p) {
    check_params(p, "molecule_std_separation");
    if (p.sigma_f == 0.0) return 0.0;
    const double mu = molecule_mean_separation(p);
    const double m2 = molecule_second_moment(p);
    return std::sqrt(std::max(0.0, m2 - mu * mu));
}

double uncoupled_ratio() { return std::sqrt(kPi / 2.0 - 1.0); }

double molecule_mean_weak_disorder(const MoleculeParams& p) {
    check_params(p, "molecule_mean_weak_disorder");
    if (p.j == 0.0)
        throw std::invalid_argument("molecule_mean_weak_disorder: j must be > 0");
    return 2.0 * p.j + p.sigma_f * p.sigma_f / (4.0 * p.j);
}

double molecule_mean_no_coupling(double sigma_f) {
    if (sigma_f < 0.0)
        throw std::invalid_argument("molecule_mean_no_coupling: sigma_f must be >= 0");
    return std::sqrt(2.0 / kPi) * sigma_f;
}

}  // namespace cca
