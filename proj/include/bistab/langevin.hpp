// langevin.hpp — Stochastic field dynamics on a periodic L x L lattice:
//
//   d phi_i = -[ f0'(phi_i) - a - (b-b') (phi_N + phi_E - 2 phi_i)
//                - 2 b' phi_i - c (phi_N + phi_S + phi_W + phi_E - 4 phi_i) ] dt
//             + sqrt(noise_amp dt) eta_i,
//
// integrated with explicit Euler-Maruyama, fields clamped to [-1, 1].
// Samples own independent noise streams (mix64 of the master seed) and are
// reduced in sample order, so ensembles are bitwise reproducible at any
// thread count.

#pragma once

#include "bistab/gradexp.hpp"
#include "bistab/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bistab {

struct FieldLattice {
    int L = 0;
    std::vector<double> phi;  // row-major, index = y*L + x, periodic

    double& at(int x, int y) { return phi[static_cast<std::size_t>(y) * L + x]; }
    double at(int x, int y) const { return phi[static_cast<std::size_t>(y) * L + x]; }
    double spatial_mean() const;
};

// Right-triangle island: legs of `side` sites along +x and +y from the corner
// (0,0), i.e. sites with x + y < side. side = 0 gives the uniform lattice.
FieldLattice init_island(int L, int side, double phi_island, double phi_bulk);

// Square island helper (tests): sites with x < side and y < side.
FieldLattice init_square_island(int L, int side, double phi_island, double phi_bulk);

enum class DriftMode {
    eq_of_motion,      // the printed equation of motion (default)
    exact_functional,  // exact lattice derivative of sum_i [f0 + f_grad]
};

enum class NoiseMode {
    constant,  // amplitude f0 at the metastable minimum
    local,     // amplitude f0(phi_i) per site
};

std::vector<double> drift(const FieldLattice& field, const LangevinCoeffs& coeffs,
                          DriftMode mode = DriftMode::eq_of_motion);

struct StepStats {
    std::int64_t clamp_events = 0;
};

// One Euler-Maruyama step; noise_amp < 0 keeps the coefficient default.
void step(FieldLattice& field, const LangevinCoeffs& coeffs, double dt, NormalStream& stream,
          StepStats* stats = nullptr, DriftMode mode = DriftMode::eq_of_motion,
          NoiseMode noise = NoiseMode::constant, double noise_amp_override = -1.0);

// Lyapunov functional of the zero-chirality gradient flow:
// sum_i f0(phi_i) + (c/2) sum_i [(phi_E - phi_i)^2 + (phi_N - phi_i)^2].
double lattice_energy(const FieldLattice& field, const LangevinCoeffs& coeffs);

struct LangevinOptions {
    double dt = 0.0;     // <= 0: auto 0.01 / max(1, |f0''|max, 4c, 2|b-b'|)
    double t_max = 1000.0;
    int record_stride = 0;  // 0: auto, ~2000 records
    double stationary_window = 0.2;  // final fraction of [0, t_max]
    DriftMode drift_mode = DriftMode::eq_of_motion;
    NoiseMode noise_mode = NoiseMode::constant;
    double noise_amp_override = -1.0;  // >= 0 replaces coeffs.noise_amp
    int threads = 0;                   // 0: library default
};

struct EnsembleStats {
    int n_samples = 0;
    double dt = 0.0;
    int n_steps = 0;
    std::vector<double> times;
    std::vector<double> mean_trajectory;      // ensemble average of spatial mean
    std::vector<double> sample_stationary;    // per-sample final-window averages
    double stationary_mag = 0.0;
    double retain_fraction = 0.0;
    double phi_island = 0.0;
    double phi_bulk = 0.0;
    bool ergodic_by_construction = false;
    std::int64_t clamp_events = 0;
};

// n_samples trajectories from the triangular-island initial state
// (island = stable / bias-favored minimum, bulk = metastable one).
EnsembleStats run_ensemble(const LangevinCoeffs& coeffs, int L, int side, int n_samples,
                           std::uint64_t master_seed, const LangevinOptions& opt = {});

enum class Phase { bistable, ergodic };

std::string to_string(Phase p);

// Bistable when the anti-bias orientation survives: retain_fraction >=
// threshold for h != 0; for h = 0, |stationary_mag| >= |phi_bulk|/2 with the
// initial sign.
Phase classify(const EnsembleStats& stats, double h, double threshold = 0.5);

}  // namespace bistab
