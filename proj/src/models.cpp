#include "bistab/models.hpp"

#include <cmath>
#include <stdexcept>

namespace bistab {

namespace {

const Support kSite{{0, 0}};
const Support kBondX{{0, 0}, {1, 0}};
const Support kBondY{{0, 0}, {0, 1}};
// Toom triple: center, East, North. Center is the slowest index.
const Support kTriple{{0, 0}, {1, 0}, {0, 1}};

void check_toom_args(double T, double h, double gamma) {
    if (!(T >= 0.0 && T <= 2.0)) throw std::invalid_argument("toom: T must be in [0, 2]");
    if (!(std::abs(h) <= 1.0)) throw std::invalid_argument("toom: |h| must be <= 1");
    if (!(gamma > 0.0)) throw std::invalid_argument("toom: gamma must be > 0");
}

}  // namespace

RateMapping rate_mapping_from_string(const std::string& s) {
    if (s == "linear") return RateMapping::linear;
    if (s == "exponential") return RateMapping::exponential;
    throw std::invalid_argument("unknown rate mapping '" + s + "' (linear|exponential)");
}

std::string to_string(RateMapping m) {
    return m == RateMapping::linear ? "linear" : "exponential";
}

Matrix majority_projector(int majority_value) {
    if (majority_value != 0 && majority_value != 1)
        throw std::invalid_argument("majority_projector: value must be 0 or 1");
    Matrix m = Matrix::Zero(8, 8);
    for (int b = 0; b < 8; ++b) {
        const int ones = ((b >> 2) & 1) + ((b >> 1) & 1) + (b & 1);
        if ((majority_value == 1) == (ones >= 2)) m(b, b) = 1.0;
    }
    return m;
}

ToomRates toom_rates(double T, double h, double gamma, RateMapping mapping) {
    check_toom_args(T, h, gamma);
    ToomRates r;
    if (mapping == RateMapping::linear) {
        r.with_lower = gamma;
        r.with_raise = gamma;
        r.against_raise = gamma * T * (1.0 + h) / 2.0;  // up-flips, favored by h > 0
        r.against_lower = gamma * T * (1.0 - h) / 2.0;
    } else {
        const double eu = T * (1.0 + h) / 2.0;
        const double ed = T * (1.0 - h) / 2.0;
        if (!(eu > 0.0 && ed > 0.0))
            throw std::invalid_argument(
                "toom: exponential mapping requires T(1+-h)/2 > 0 (use T > 0, |h| < 1)");
        r.with_raise = -gamma * std::log(eu);
        r.with_lower = -gamma * std::log(ed);
        if (r.with_raise < 0.0 || r.with_lower < 0.0)
            throw std::invalid_argument("toom: exponential mapping requires T(1+-h)/2 <= 1");
        r.against_raise = gamma;
        r.against_lower = gamma;
    }
    return r;
}

LatticeModel build_ising(double g, double J, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("build_ising: gamma must be > 0");
    LatticeModel m;
    m.name = "ising";
    m.parameters = {{"g", g}, {"J", J}, {"gamma", gamma}};
    m.restriction.free = {true, true, true};

    m.terms.push_back(make_hamiltonian_term(kSite, 0.5 * g * pauli_x(), "field"));
    const Matrix zz = kron(pauli_z(), pauli_z());
    m.terms.push_back(make_hamiltonian_term(kBondX, 0.25 * J * zz, "bond_x"));
    m.terms.push_back(make_hamiltonian_term(kBondY, 0.25 * J * zz, "bond_y"));
    m.terms.push_back(make_dissipator_term(kSite, sigma_minus(), gamma, "decay"));
    return m;
}

LatticeModel build_toom_classical(double T, double h, double gamma, RateMapping mapping) {
    const ToomRates r = toom_rates(T, h, gamma, mapping);
    LatticeModel m;
    m.name = "toom";
    m.parameters = {{"T", T}, {"h", h}, {"gamma", gamma}};
    m.restriction.free = {false, false, true};  // diagonal dynamics: alpha_z only

    const Matrix m0 = majority_projector(0);
    const Matrix m1 = majority_projector(1);
    const Matrix id4 = Matrix::Identity(4, 4);
    const Matrix lower_c = kron(sigma_minus(), id4);  // sigma_- on the center
    const Matrix raise_c = kron(sigma_plus(), id4);

    m.terms.push_back(make_dissipator_term(kTriple, lower_c * m0, r.with_lower, "lower_maj0"));
    m.terms.push_back(make_dissipator_term(kTriple, raise_c * m0, r.against_raise, "raise_maj0"));
    m.terms.push_back(make_dissipator_term(kTriple, raise_c * m1, r.with_raise, "raise_maj1"));
    m.terms.push_back(make_dissipator_term(kTriple, lower_c * m1, r.against_lower, "lower_maj1"));
    return m;
}

LatticeModel build_toom_quantum(double T, double h, double Omega, double gamma,
                                RateMapping mapping) {
    if (!(Omega >= 0.0)) throw std::invalid_argument("build_toom_quantum: Omega must be >= 0");
    LatticeModel m = build_toom_classical(T, h, gamma, mapping);
    m.name = "toom_quantum";
    m.parameters["Omega"] = Omega;
    // the drive conserves sigma_x on all sites, so alpha_x stays frozen at 0
    m.restriction.free = {false, true, true};

    // support order (C, E, N): drive = Omega (sx_C P0_E P0_N + sx_C P1_E P1_N)
    Matrix drive = kron(pauli_x(), kron(proj0(), proj0())) + kron(pauli_x(), kron(proj1(), proj1()));
    m.terms.push_back(make_hamiltonian_term(kTriple, Omega * drive, "drive"));
    return m;
}

}  // namespace bistab
