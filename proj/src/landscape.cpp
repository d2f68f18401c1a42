#include "bistab/landscape.hpp"

#include "bistab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bistab {

namespace {

Eigen::Vector3d project_ball(Eigen::Vector3d x, double radius) {
    const double n = x.norm();
    if (n > radius) x *= radius / n;
    return x;
}

Eigen::Vector3d fd_gradient(const ObjectiveFn& f, const Eigen::Vector3d& x,
                            const DescentOptions& opt) {
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    const double h = opt.fd_step;
    for (int k = 0; k < 3; ++k) {
        if (!opt.free[k]) continue;
        Eigen::Vector3d up = x, dn = x;
        up[k] += h;
        dn[k] -= h;
        const bool up_ok = up.norm() <= opt.ball_radius;
        const bool dn_ok = dn.norm() <= opt.ball_radius;
        if (up_ok && dn_ok)
            g[k] = (f(up) - f(dn)) / (2.0 * h);
        else if (up_ok)
            g[k] = (f(up) - f(x)) / h;
        else
            g[k] = (f(x) - f(dn)) / h;
    }
    return g;
}

// steepest admissible direction: -grad, minus the outward radial component
// when pinned to the ball boundary
Eigen::Vector3d descent_direction(const Eigen::Vector3d& x, const Eigen::Vector3d& g,
                                  const DescentOptions& opt) {
    Eigen::Vector3d d = -g;
    if (x.norm() >= opt.ball_radius * (1.0 - 1e-12)) {
        const Eigen::Vector3d n = x.normalized();
        const double outward = d.dot(n);
        if (outward > 0.0) d -= outward * n;
    }
    return d;
}

BlochVector to_bloch(const Eigen::Vector3d& x) { return BlochVector{x[0], x[1], x[2]}; }
Eigen::Vector3d to_vec(const BlochVector& a) { return Eigen::Vector3d(a.x, a.y, a.z); }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return out;
}

struct FdHessian {
    Eigen::MatrixXd h;        // nfree x nfree
    std::vector<int> dims;    // free dimension indices
};

FdHessian fd_hessian(const ObjectiveFn& f, const Eigen::Vector3d& x, const DescentOptions& opt,
                     double step = 1e-4) {
    FdHessian out;
    for (int k = 0; k < 3; ++k)
        if (opt.free[k]) out.dims.push_back(k);
    const int n = static_cast<int>(out.dims.size());
    out.h.resize(n, n);
    const double f0 = f(x);
    for (int a = 0; a < n; ++a) {
        Eigen::Vector3d up = x, dn = x;
        up[out.dims[a]] += step;
        dn[out.dims[a]] -= step;
        out.h(a, a) = (f(up) - 2.0 * f0 + f(dn)) / (step * step);
        for (int b = a + 1; b < n; ++b) {
            Eigen::Vector3d pp = x, pm = x, mp = x, mm = x;
            pp[out.dims[a]] += step;
            pp[out.dims[b]] += step;
            pm[out.dims[a]] += step;
            pm[out.dims[b]] -= step;
            mp[out.dims[a]] -= step;
            mp[out.dims[b]] += step;
            mm[out.dims[a]] -= step;
            mm[out.dims[b]] -= step;
            out.h(a, b) = out.h(b, a) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
        }
    }
    return out;
}

}  // namespace

DescentResult descend(const ObjectiveFn& f, const Eigen::Vector3d& start,
                      const DescentOptions& opt) {
    DescentResult res;
    Eigen::Vector3d x = project_ball(start, opt.ball_radius);
    double fx = f(x);
    double t = 1.0;
    for (int it = 0; it < opt.max_iters; ++it) {
        const Eigen::Vector3d g = fd_gradient(f, x, opt);
        const Eigen::Vector3d d = descent_direction(x, g, opt);
        if (d.norm() < opt.grad_tol) {
            res = {x, fx, true, it};
            return res;
        }
        // Armijo backtracking on the projected step
        t = std::min(t * 2.0, 1.0);
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Eigen::Vector3d xt = project_ball(x + t * d, opt.ball_radius);
            const double ft = f(xt);
            const double decrement = 1e-4 * g.dot(x - xt);
            if (ft <= fx - decrement) {
                x = xt;
                fx = ft;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // step stalled below FD noise; accept as converged if the
            // direction is already small on the gradient scale
            res = {x, fx, d.norm() < 1e2 * opt.grad_tol, it};
            return res;
        }
    }
    res = {x, fx, false, opt.max_iters};
    return res;
}

std::vector<Minimum> find_minima(const NormEvaluator& ev) {
    DescentOptions opt;
    opt.free = ev.model().restriction.free;
    opt.ball_radius = 1.0;
    const int nfree = ev.model().restriction.n_free();
    const int per_axis = nfree >= 3 ? 13 : 41;

    const std::vector<double> axis = linspace(-1.0, 1.0, per_axis);
    std::vector<Eigen::Vector3d> starts;
    const auto& fr = opt.free;
    for (double vx : fr[0] ? axis : std::vector<double>{0.0})
        for (double vy : fr[1] ? axis : std::vector<double>{0.0})
            for (double vz : fr[2] ? axis : std::vector<double>{0.0}) {
                Eigen::Vector3d s(vx, vy, vz);
                if (s.norm() <= 1.0) starts.push_back(s);
            }

    ObjectiveFn f = [&ev](const Eigen::Vector3d& x) { return ev.value(to_bloch(x)); };

    std::vector<DescentResult> results(starts.size());
    std::vector<char> threw(starts.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(starts.size()); ++i) {
        try {
            results[i] = descend(f, starts[i], opt);
        } catch (const std::exception&) {
            threw[i] = 1;
        }
    }
    for (std::size_t i = 0; i < starts.size(); ++i)
        if (threw[i]) results[i].converged = false;

    std::vector<int> failed;
    std::vector<int> order;
    for (int i = 0; i < static_cast<int>(results.size()); ++i)
        (results[i].converged ? order : failed).push_back(i);
    if (order.empty() || failed.size() * 2 > results.size()) {
        std::ostringstream msg;
        msg << "find_minima: " << failed.size() << "/" << results.size()
            << " starts failed to converge;";
        for (std::size_t k = 0; k < failed.size() && k < 5; ++k) {
            const auto& s = starts[failed[k]];
            msg << " (" << s[0] << "," << s[1] << "," << s[2] << ")";
        }
        throw NumericalError(msg.str());
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return results[a].f < results[b].f; });

    std::vector<Minimum> minima;
    for (int idx : order) {
        bool dup = false;
        for (const auto& m : minima)
            if ((results[idx].x - to_vec(m.alpha)).norm() < 1e-3) {
                dup = true;
                break;
            }
        if (!dup) minima.push_back({to_bloch(results[idx].x), results[idx].f});
    }
    return minima;
}

SaddlePoint find_saddle_fn(const ObjectiveFn& f, const Eigen::Vector3d& m1,
                           const Eigen::Vector3d& m2, const DescentOptions& opt, int n_images) {
    if ((m1 - m2).norm() < 1e-6)
        throw std::invalid_argument("find_saddle: degenerate input (m1 == m2)");

    // string of images, endpoints fixed at the minima
    std::vector<Eigen::Vector3d> img(n_images);
    for (int k = 0; k < n_images; ++k)
        img[k] = m1 + (m2 - m1) * static_cast<double>(k) / (n_images - 1);

    const double spacing = (m2 - m1).norm() / (n_images - 1);
    for (int it = 0; it < 2000; ++it) {
        double max_move = 0.0;
        for (int k = 1; k + 1 < n_images; ++k) {
            const Eigen::Vector3d g = fd_gradient(f, img[k], opt);
            const double gn = g.norm();
            if (gn == 0.0) continue;
            const double step = std::min(0.1 * spacing / gn, 0.5);
            img[k] = project_ball(img[k] - step * g, opt.ball_radius);
            max_move = std::max(max_move, step * gn);
        }
        // reparameterize to equal arc length
        std::vector<double> arc(n_images, 0.0);
        for (int k = 1; k < n_images; ++k) arc[k] = arc[k - 1] + (img[k] - img[k - 1]).norm();
        std::vector<Eigen::Vector3d> redist(n_images);
        redist[0] = img[0];
        redist[n_images - 1] = img[n_images - 1];
        for (int k = 1; k + 1 < n_images; ++k) {
            const double target = arc[n_images - 1] * k / (n_images - 1);
            int seg = 1;
            while (seg < n_images - 1 && arc[seg] < target) ++seg;
            const double w = (target - arc[seg - 1]) / std::max(arc[seg] - arc[seg - 1], 1e-300);
            redist[k] = img[seg - 1] + w * (img[seg] - img[seg - 1]);
        }
        img = std::move(redist);
        if (max_move < 1e-10) break;
    }

    // highest interior image seeds the local refinement
    int peak = -1;
    double fpeak = -std::numeric_limits<double>::infinity();
    for (int k = 1; k + 1 < n_images; ++k) {
        const double fk = f(img[k]);
        if (fk > fpeak) {
            fpeak = fk;
            peak = k;
        }
    }
    const double fends = std::max(f(img.front()), f(img.back()));
    if (peak < 0 || fpeak <= fends + 1e-14)
        throw NumericalError("find_saddle: string collapsed (inputs share a basin)");

    // Newton / eigenvector-following refinement
    Eigen::Vector3d x = img[peak];
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const Eigen::Vector3d g = fd_gradient(f, x, opt);
        if (g.norm() < 1e-6 && it > 0) {
            converged = true;
            break;
        }
        const FdHessian H = fd_hessian(f, x, opt);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.h);
        const int n = static_cast<int>(H.dims.size());
        Eigen::VectorXd gf(n);
        for (int a = 0; a < n; ++a) gf[a] = g[H.dims[a]];
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
        for (int a = 0; a < n; ++a) {
            double lam = es.eigenvalues()[a];
            const double floor = 1e-10 * std::max(1.0, std::abs(es.eigenvalues().cwiseAbs().maxCoeff()));
            if (std::abs(lam) < floor) lam = lam < 0 ? -floor : floor;
            delta -= (es.eigenvectors().col(a).dot(gf) / lam) * es.eigenvectors().col(a);
        }
        if (delta.norm() > 0.05) delta *= 0.05 / delta.norm();
        for (int a = 0; a < n; ++a) x[H.dims[a]] += delta[a];
        x = project_ball(x, opt.ball_radius);
    }
    {
        const Eigen::Vector3d g = fd_gradient(f, x, opt);
        if (!converged && g.norm() >= 1e-6)
            throw NumericalError("find_saddle: refinement did not converge");
    }

    const FdHessian H = fd_hessian(f, x, opt);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.h);
    int negative = 0;
    const double scale = std::max(1e-12, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int a = 0; a < es.eigenvalues().size(); ++a)
        if (es.eigenvalues()[a] < -1e-7 * scale) ++negative;
    if (negative != 1)
        throw NumericalError("find_saddle: stationary point has " + std::to_string(negative) +
                             " negative Hessian eigenvalues (want 1)");

    return {x, f(x)};
}

std::pair<BlochVector, double> find_saddle(const NormEvaluator& ev, const BlochVector& m1,
                                           const BlochVector& m2) {
    DescentOptions opt;
    opt.free = ev.model().restriction.free;
    opt.ball_radius = 1.0;
    ObjectiveFn f = [&ev](const Eigen::Vector3d& x) { return ev.value(to_bloch(x)); };
    const SaddlePoint sp = find_saddle_fn(f, to_vec(m1), to_vec(m2), opt);
    return {to_bloch(sp.x), sp.f};
}

CriticalProfile critical_profile(const NormEvaluator& ev) {
    const auto minima = find_minima(ev);
    if (minima.size() < 2)
        throw NumericalError("critical_profile: found " + std::to_string(minima.size()) +
                             " minima (need 2)");
    CriticalProfile cp;
    cp.stable = minima[0].alpha;
    cp.f_stable = minima[0].f_v;
    cp.metastable = minima[1].alpha;
    cp.f_metastable = minima[1].f_v;
    const auto sp = find_saddle(ev, cp.stable, cp.metastable);
    cp.saddle = sp.first;
    cp.f_saddle = sp.second;
    if (cp.f_saddle < cp.f_metastable - 1e-10)
        throw NumericalError("critical_profile: saddle below metastable minimum");
    return cp;
}

PlaneScan scan_plane(const NormEvaluator& ev, const Eigen::Vector3d& p0,
                     const Eigen::Vector3d& e1, const Eigen::Vector3d& e2, int n1, int n2,
                     double u0, double u1, double v0, double v1) {
    if (e1.cross(e2).norm() < 1e-12)
        throw std::invalid_argument("scan_plane: e1 and e2 must be linearly independent");
    PlaneScan scan;
    scan.p0 = p0;
    scan.e1 = e1;
    scan.e2 = e2;
    scan.u = linspace(u0, u1, n1);
    scan.v = linspace(v0, v1, n2);
    scan.values.resize(n1, n2);
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const Eigen::Vector3d x = p0 + scan.u[i] * e1 + scan.v[j] * e2;
            scan.values(i, j) = x.norm() <= 1.0 ? ev.value(to_bloch(x))
                                                : std::numeric_limits<double>::quiet_NaN();
        }
    return scan;
}

double FieldRotation::phi_of(const BlochVector& a) const {
    return std::cos(theta) * a.z + std::sin(theta) * a.y;
}

double FieldRotation::orth_of(const BlochVector& a) const {
    return -std::sin(theta) * a.z + std::cos(theta) * a.y;
}

BlochVector FieldRotation::alpha_of(double phi, double orth) const {
    BlochVector a;
    a.x = 0.0;
    a.z = std::cos(theta) * phi - std::sin(theta) * orth;
    a.y = std::sin(theta) * phi + std::cos(theta) * orth;
    return a;
}

FieldRotation rotate_to_field(const BlochVector& m1, const BlochVector& m2) {
    const double dz = m2.z - m1.z;
    const double dy = m2.y - m1.y;
    const double norm = std::hypot(dz, dy);
    if (norm < 1e-12) throw std::invalid_argument("rotate_to_field: m1 == m2");
    FieldRotation rot;
    rot.theta = std::atan2(dy, dz);
    rot.axis = Eigen::Vector2d(dz / norm, dy / norm);
    rot.origin = BlochVector{};
    return rot;
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double orth_minimizer(const NormEvaluator& ev, const FieldRotation& rot, double phi) {
    if (ev.model().restriction.n_free() < 2) return 0.0;
    const double bound = std::sqrt(std::max(0.0, 1.0 - phi * phi));
    if (bound < 1e-9) return 0.0;
    auto f = [&](double orth) { return ev.value(rot.alpha_of(phi, orth)); };
    // coarse bracket then golden refinement
    const int nc = 21;
    double best = 0.0, fbest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < nc; ++k) {
        const double o = -bound + 2.0 * bound * k / (nc - 1);
        const double fo = f(o);
        if (fo < fbest) {
            fbest = fo;
            best = o;
        }
    }
    const double h = 2.0 * bound / (nc - 1);
    return golden_minimize(f, std::max(-bound, best - h), std::min(bound, best + h), 1e-9);
}

Profile effective_f0(const NormEvaluator& ev, const FieldRotation& rot,
                     const std::vector<double>& phi_grid) {
    for (const double phi : phi_grid)
        if (std::abs(phi) > 1.0)
            throw std::invalid_argument("effective_f0: |phi| > 1 is not admissible");
    std::vector<double> vals(phi_grid.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(phi_grid.size()); ++i)
        vals[i] = ev.value(rot.alpha_of(phi_grid[i], orth_minimizer(ev, rot, phi_grid[i])));
    return Profile(phi_grid, vals);
}

std::vector<double> default_phi_grid(double phi_m1, double phi_m2, int n) {
    const double mid = 0.5 * (phi_m1 + phi_m2);
    double dist = std::abs(phi_m2 - phi_m1);
    if (dist < 1e-6) dist = 2.0;  // degenerate: fall back to the full interval
    const double lo = std::max(-1.0, mid - 0.6 * dist);
    const double hi = std::min(1.0, mid + 0.6 * dist);
    return linspace(lo, hi, n);
}

}  // namespace bistab
