// models.hpp — Lattice models on the 2D square lattice (z = 4): dissipative
// Ising, classical Toom majority-vote dynamics, and Toom with a coherent
// projector-sandwiched drive.

#pragma once

#include "bistab/opalg.hpp"

#include <array>
#include <map>
#include <string>

namespace bistab {

struct LatticeGeometry {
    int dimension = 2;
    int coordination = 4;
};

// Which Bloch components the variational ansatz may vary.
struct AnsatzRestriction {
    std::array<bool, 3> free{true, true, true};  // (x, y, z)

    int n_free() const { return int(free[0]) + int(free[1]) + int(free[2]); }
};

// Translation-invariant set of local Lindblad terms, one canonical instance
// per unit cell, anchored at (0,0).
struct LatticeModel {
    std::string name;
    std::vector<LindbladTerm> terms;
    LatticeGeometry geometry;
    std::map<std::string, double> parameters;
    AnsatzRestriction restriction;
};

// Toom transition rates in units of the global rate gamma. Unbarred rates act
// with the local majority, barred rates against it.
struct ToomRates {
    double with_lower = 0.0;     // gamma_mu:     sigma_- on majority-0 triples
    double against_raise = 0.0;  // gammabar_mu:  sigma_+ on majority-0 triples
    double with_raise = 0.0;     // gamma_nu:     sigma_+ on majority-1 triples
    double against_lower = 0.0;  // gammabar_nu:  sigma_- on majority-1 triples
};

enum class RateMapping {
    linear,       // with-majority rates = gamma; against-majority linear in T
    exponential,  // noise exponentials absorbed into the with-majority rates
};

RateMapping rate_mapping_from_string(const std::string& s);
std::string to_string(RateMapping m);

// Majority-vote projectors on the (C, E, N) triple, center slowest index.
Matrix majority_projector(int majority_value);

// (T, h) -> four rates; see README for the two mapping conventions.
ToomRates toom_rates(double T, double h, double gamma,
                     RateMapping mapping = RateMapping::linear);

// H = (g/2) sum_i sx_i + (J/4) sum_<ij> sz_i sz_j, jumps sqrt(gamma) sigma_-.
LatticeModel build_ising(double g, double J, double gamma);

// Four 3-site jump operators on the (C, E, N) triple per site.
LatticeModel build_toom_classical(double T, double h, double gamma,
                                  RateMapping mapping = RateMapping::linear);

// Classical Toom terms plus the coherent drive
// Omega [P0_N sx_C P0_E + P1_N sx_C P1_E].
LatticeModel build_toom_quantum(double T, double h, double Omega, double gamma,
                                RateMapping mapping = RateMapping::linear);

}  // namespace bistab
