// exactref.hpp — Brute-force dense oracles used by tests and the `verify`
// mode. Everything here works on fully Kronecker-embedded operators over the
// joint support or patch, with no factorization or purity shortcuts, so that
// agreement with the engine is meaningful.

#pragma once

#include "bistab/models.hpp"
#include "bistab/varnorm.hpp"

namespace bistab {

struct Patch {
    Support sites;  // open boundary

    static Patch rectangle(int nx, int ny);
    int n_sites() const { return static_cast<int>(sites.size()); }
};

// Pair term Tr[(L_i rho)^dag (L_j rho)] / purity^{n_ij} evaluated on the full
// joint support with dense embedded superoperators. Joint support <= 6 sites.
Complex dense_pair_oracle(const BlochVector& a, const PairConfig& cfg, const LatticeModel& model);

// Exact steady state of the single driven-dissipative spin (Ising with J = 0):
// alpha = (0, 2 g gamma, -gamma^2) / (gamma^2 + 2 g^2).
BlochVector single_site_steady(double g, double gamma);

// <L(rho)|L(rho)> / purity^N on a finite open patch (<= 12 sites), with
// L(rho) assembled from every term instance that fits inside the patch.
double dense_patch_norm(const LatticeModel& model, const BlochVector& a, const Patch& patch);

}  // namespace bistab
