// gradexp.hpp — Gradient expansion of the variational norm under linear field
// profiles. The overlap functional F(phi, dx, dy) sums the overlapping pair
// terms with per-site fields phi + ox*dx + oy*dy along the rotated axis and
// subtracts the homogeneous value, so F(phi, 0, 0) = 0 by construction.
// Its Taylor coefficients feed the lattice Langevin drift:
//
//   F ~ (a/2)(dx+dy) + b dx dy + b' phi (dx+dy) + c (dx^2+dy^2).

#pragma once

#include "bistab/landscape.hpp"
#include "bistab/profile.hpp"
#include "bistab/varnorm.hpp"

namespace bistab {

struct LangevinCoeffs {
    double a = 0.0;
    double b = 0.0;
    double b_prime = 0.0;
    double c = 0.0;
    Profile f0;
    double noise_amp = 0.0;  // f0 at the metastable minimum
    // projections of the two minima onto the field axis (island = stable,
    // bulk = metastable / anti-bias)
    double phi_stable = 0.0;
    double phi_meta = 0.0;
    double f0_stable = 0.0;
    double f0_meta = 0.0;
};

// Overlap part of the inhomogeneous norm under the linear field profile.
// `orth` freezes the orthogonal coordinate (0 for classical models); the
// purity normalization uses the center-site state.
double overlap_functional(const NormEvaluator& ev, const FieldRotation& rot, double phi,
                          double dx, double dy, double orth = 0.0);

struct ExtractOptions {
    double fd_step = 1e-3;
    double phi_eval = 0.0;          // expansion point for the mixed phi-delta term
    double richardson_tol = 1e-4;
};

// Central differences with one Richardson halving; throws NumericalError on
// FD inconsistency. f0 and the minima projections are provided by the caller
// (landscape::effective_f0).
LangevinCoeffs extract_coeffs(const NormEvaluator& ev, const FieldRotation& rot,
                              const Profile& f0, double phi_stable, double phi_meta,
                              const ExtractOptions& opt = {});

}  // namespace bistab
