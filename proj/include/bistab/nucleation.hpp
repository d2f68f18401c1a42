// nucleation.hpp — Activation energy and relaxation rate of a metastable
// variational state from the critical-droplet picture on the square lattice:
//
//   E_a(l)  = -l^2 (f_m - f_s) + 4 l (f_sp - f_m),
//   l*      = 2 (f_sp - f_m) / (f_m - f_s),
//   E_a~    = 4 (f_sp - f_m)^2 / (f_m - f_s),
//   lambda  = 2 (f_m - f_s),
//   I       = f_sp sqrt(f_m / (2 pi lambda)) exp(-E_a~ / f_m).

#pragma once

#include <optional>
#include <vector>

namespace bistab {

struct NucleationResult {
    double ell_star = 0.0;
    double activation_energy = 0.0;
    double lambda = 0.0;
    bool degenerate = false;  // f_m == f_s: infinite critical length and barrier
};

// Maximizer and maximum of E_a(l), plus the saddle curvature lambda.
// Pre: f_sp >= f_m >= f_s >= 0; violations throw std::invalid_argument.
NucleationResult activation(double f_s, double f_m, double f_sp);

// Relaxation rate per site (units of gamma); 0 in the degenerate case.
double relaxation_rate(double f_s, double f_m, double f_sp);

// log10 of the rate, evaluated in log space so deep barriers stay finite.
double log10_relaxation_rate(double f_s, double f_m, double f_sp);

struct RateCurveRow {
    double g_over_gamma = 0.0;
    bool valid = false;  // false when fewer than two minima exist
    double f_s = 0.0;
    double f_m = 0.0;
    double f_sp = 0.0;
    double log10_rate = 0.0;
};

// Scans the dissipative Ising model over g/gamma: minima, saddle, and rate
// per grid point; rows with a single minimum are marked invalid.
std::vector<RateCurveRow> rate_curve(double J, double gamma, double g_lo, double g_hi,
                                     int n_points);

}  // namespace bistab
