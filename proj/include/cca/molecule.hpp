#pragma once

namespace cca {

// Two coupled cavities: coupling j (THz) and Gaussian bare-detuning spread
// sigma_f (THz). sigma_f here is the standard deviation of the *difference*
// of the two cavity frequencies; a per-cavity spread s corresponds to
// sigma_f = sqrt(2) * s.
struct MoleculeParams {
    double j = 0.0;
    double sigma_f = 0.0;
};

// Mode splitting of a two-cavity system at bare detuning delta0:
// sqrt(delta0^2 + 4 j^2).
double molecule_separation(double delta0, double j);

// Ensemble mean E[sqrt(delta0^2 + 4 j^2)], delta0 ~ N(0, sigma_f^2), by
// adaptive quadrature (8-digit accuracy or better).
double molecule_mean_separation(const MoleculeParams& p);

// Ensemble standard deviation of the splitting.
double molecule_std_separation(const MoleculeParams& p);

// Ensemble second moment E[delta0^2 + 4 j^2]; closed form is
// sigma_f^2 + 4 j^2, computed here by the same quadrature as the mean so the
// two can be cross-checked.
double molecule_second_moment(const MoleculeParams& p);

// std/mean of the splitting with no coupling: sqrt(pi/2 - 1), the half-normal
// ratio. Scale-free signature of disorder-dominated splittings.
double uncoupled_ratio();

// Weak-disorder expansion of the mean splitting: 2 j + sigma_f^2 / (4 j).
double molecule_mean_weak_disorder(const MoleculeParams& p);

// Zero-coupling mean splitting: sqrt(2/pi) * sigma_f.
double molecule_mean_no_coupling(double sigma_f);

}  // namespace cca
