// phasediag.hpp — Parameter sweeps and transition locators: the Ising
// first-order point from the crossing of the two minima's norms, and the
// Toom bistable/ergodic maps from landscape -> gradient expansion ->
// Langevin ensemble -> classification.

#pragma once

#include "bistab/langevin.hpp"
#include "bistab/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bistab {

struct ToomPointSpec {
    bool quantum = false;
    double T = 0.0;
    double h = 0.0;
    double Omega = 0.0;
    double gamma = 1.0;
    RateMapping mapping = RateMapping::linear;
};

struct PipelineOptions {
    int L = 20;
    int side = 10;
    int n_samples = 100;
    int f0_grid_n = 401;
    double classify_threshold = 0.5;
    std::uint64_t seed = 20220901;
    LangevinOptions langevin;
};

struct PointOutcome {
    std::string label = "absent";  // bistable | ergodic | single-minimum | absent
    bool ok = false;
    int n_minima = 0;
    double retain_fraction = 0.0;
    double stationary_mag = 0.0;
    double phi_stable = 0.0;
    double phi_meta = 0.0;
    double f0_stable = 0.0;
    double f0_meta = 0.0;
    LangevinCoeffs coeffs;
    EnsembleStats stats;
};

// Full per-point pipeline. Fewer than two minima yields the
// "single-minimum" label (ergodic by construction).
PointOutcome classify_point(const ToomPointSpec& spec, const PipelineOptions& opt);

// Bisection on sign(f_v^gas - f_v^liquid) at fixed J; the gas branch is the
// minimum with lower alpha_z. Throws NumericalError when the bracket does not
// straddle the crossing.
double locate_first_order(double J, double gamma, double g_lo, double g_hi, double tol);

struct BoundaryPoint {
    std::string axis;
    double value = 0.0;
    double half_width = 0.0;
    int evaluations = 0;
};

// Classification bisection along one parameter axis ("T", "Omega" or "h");
// each evaluation runs a fresh seed-derived ensemble.
BoundaryPoint locate_boundary(const ToomPointSpec& base, const std::string& axis, double lo,
                              double hi, double tol, const PipelineOptions& opt);

struct CriticalPoint {
    double value = 0.0;
    double uncertainty = 0.0;  // bracket half-width + binomial ensemble error
    int n_samples_used = 0;
};

// Critical point on the h = 0 line (axis "T" classical, "Omega" quantum).
// A coarse pre-scan guards against multiple classification flips; ensemble
// noise triggers an automatic n_samples increase.
CriticalPoint locate_critical_point(const ToomPointSpec& base, const std::string& axis,
                                    double lo, double hi, double tol,
                                    const PipelineOptions& opt);

struct SweepRow {
    double x = 0.0;  // T or Omega
    double h = 0.0;
    std::string label = "absent";
    double retain_fraction = 0.0;
    int n_minima = 0;
    double f0_stable = 0.0;
    double f0_meta = 0.0;
};

struct PhaseDiagram {
    std::string plane;  // "T-h" or "Omega-h"
    std::vector<SweepRow> grid;
    std::vector<BoundaryPoint> boundaries;
    std::optional<CriticalPoint> critical_point;
};

// Grid sweep over (T, h) or (Omega, h); per-point failures are recorded as
// absent and never abort the sweep.
PhaseDiagram sweep(const ToomPointSpec& base, const std::string& axis, double x_lo, double x_hi,
                   int nx, double h_lo, double h_hi, int nh, const PipelineOptions& opt);

}  // namespace bistab
