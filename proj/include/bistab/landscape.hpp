// landscape.hpp — Minima, saddle points, and plane scans of the variational
// norm; rotation of the (alpha_z, alpha_y) plane onto the effective classical
// field and the orthogonally-minimized profile f0(phi).
//
// The optimizers work on a generic objective over R^3 with a free-component
// mask and an optional ball constraint, so the saddle search can be unit
// tested on analytic toy landscapes.

#pragma once

#include "bistab/profile.hpp"
#include "bistab/varnorm.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace bistab {

using ObjectiveFn = std::function<double(const Eigen::Vector3d&)>;

struct DescentOptions {
    std::array<bool, 3> free{true, true, true};
    double ball_radius = 1.0;
    double grad_tol = 1e-8;
    int max_iters = 10000;
    double fd_step = NormEvaluator::kGradStep;
};

struct DescentResult {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    double f = 0.0;
    bool converged = false;
    int iters = 0;
};

DescentResult descend(const ObjectiveFn& f, const Eigen::Vector3d& start,
                      const DescentOptions& opt);

struct Minimum {
    BlochVector alpha;
    double f_v = 0.0;
};

// Multi-start local minimization over the model's free ansatz components:
// 13 starts per axis for 3 free components, 41 for 1-2 free components,
// projected onto |alpha| <= 1, deduplicated to 1e-3 and sorted by f_v.
std::vector<Minimum> find_minima(const NormEvaluator& ev);

struct SaddlePoint {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    double f = 0.0;
};

// Climbing-image string method (32 images) followed by Newton refinement;
// the result has gradient norm < 1e-6 and exactly one negative Hessian
// eigenvalue over the free components.
SaddlePoint find_saddle_fn(const ObjectiveFn& f, const Eigen::Vector3d& m1,
                           const Eigen::Vector3d& m2, const DescentOptions& opt,
                           int n_images = 32);

std::pair<BlochVector, double> find_saddle(const NormEvaluator& ev, const BlochVector& m1,
                                           const BlochVector& m2);

// Stable / metastable minima plus the intermediate saddle.
struct CriticalProfile {
    BlochVector stable;
    double f_stable = 0.0;
    BlochVector metastable;
    double f_metastable = 0.0;
    BlochVector saddle;
    double f_saddle = 0.0;
};

// Requires at least two minima; picks the two lowest.
CriticalProfile critical_profile(const NormEvaluator& ev);

struct PlaneScan {
    Eigen::Vector3d p0, e1, e2;
    std::vector<double> u, v;
    Eigen::MatrixXd values;  // NaN where |alpha| > 1
};

PlaneScan scan_plane(const NormEvaluator& ev, const Eigen::Vector3d& p0,
                     const Eigen::Vector3d& e1, const Eigen::Vector3d& e2, int n1, int n2,
                     double u0, double u1, double v0, double v1);

// Rotation of the (alpha_z, alpha_y) plane: phi = cos(theta) alpha_z +
// sin(theta) alpha_y, theta along the direction from m1 to m2.
struct FieldRotation {
    double theta = 0.0;
    BlochVector origin;          // rotation center (the coordinate origin)
    Eigen::Vector2d axis{1, 0};  // unit vector in (alpha_z, alpha_y)

    double phi_of(const BlochVector& a) const;
    double orth_of(const BlochVector& a) const;
    BlochVector alpha_of(double phi, double orth) const;
};

FieldRotation rotate_to_field(const BlochVector& m1, const BlochVector& m2);

// Minimizer of f_v over the orthogonal coordinate at fixed phi (identically 0
// for single-parameter models).
double orth_minimizer(const NormEvaluator& ev, const FieldRotation& rot, double phi);

// f0(phi) = min over the orthogonal coordinate of f_v, tabulated on the grid.
Profile effective_f0(const NormEvaluator& ev, const FieldRotation& rot,
                     const std::vector<double>& phi_grid);

// Default grid: n points spanning 1.2x the inter-minima distance, clipped to
// the admissible interval [-1, 1].
std::vector<double> default_phi_grid(double phi_m1, double phi_m2, int n = 401);

// Golden-section minimization on [lo, hi] to interval tolerance.
double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       double tol = 1e-10);

}  // namespace bistab
