#include "bistab/phasediag.hpp"

#include "bistab/errors.hpp"
#include "bistab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bistab {

namespace {

LatticeModel build_point(const ToomPointSpec& s) {
    return s.quantum ? build_toom_quantum(s.T, s.h, s.Omega, s.gamma, s.mapping)
                     : build_toom_classical(s.T, s.h, s.gamma, s.mapping);
}

ToomPointSpec with_axis(const ToomPointSpec& base, const std::string& axis, double value) {
    ToomPointSpec s = base;
    if (axis == "T")
        s.T = value;
    else if (axis == "Omega")
        s.Omega = value;
    else if (axis == "h")
        s.h = value;
    else
        throw std::invalid_argument("unknown sweep axis '" + axis + "'");
    return s;
}

}  // namespace

PointOutcome classify_point(const ToomPointSpec& spec, const PipelineOptions& opt) {
    PointOutcome out;
    const NormEvaluator ev(build_point(spec));
    const auto minima = find_minima(ev);
    out.n_minima = static_cast<int>(minima.size());
    if (minima.size() < 2) {
        out.label = "single-minimum";
        out.ok = true;
        out.stats.ergodic_by_construction = true;
        if (!minima.empty()) {
            out.phi_stable = out.phi_meta = minima[0].alpha.z;
            out.f0_stable = out.f0_meta = minima[0].f_v;
        }
        return out;
    }

    // stable = bias-favored (lower f_v); at h = 0 the anti-bias bulk is the
    // positive-phi minimum by convention
    Minimum stable = minima[0];
    Minimum meta = minima[1];
    const FieldRotation rot = rotate_to_field(stable.alpha, meta.alpha);
    if (spec.h == 0.0) {
        if (rot.phi_of(meta.alpha) < rot.phi_of(stable.alpha)) std::swap(stable, meta);
    }

    const double phi_s = rot.phi_of(stable.alpha);
    const double phi_m = rot.phi_of(meta.alpha);
    const Profile f0 = effective_f0(ev, rot, default_phi_grid(phi_s, phi_m, opt.f0_grid_n));
    out.coeffs = extract_coeffs(ev, rot, f0, phi_s, phi_m);
    out.phi_stable = phi_s;
    out.phi_meta = phi_m;
    out.f0_stable = out.coeffs.f0_stable;
    out.f0_meta = out.coeffs.f0_meta;

    LangevinOptions lopt = opt.langevin;
    out.stats = run_ensemble(out.coeffs, opt.L, opt.side, opt.n_samples, opt.seed, lopt);
    out.retain_fraction = out.stats.retain_fraction;
    out.stationary_mag = out.stats.stationary_mag;
    out.label = to_string(classify(out.stats, spec.h, opt.classify_threshold));
    out.ok = true;
    return out;
}

double locate_first_order(double J, double gamma, double g_lo, double g_hi, double tol) {
    auto branch_gap = [&](double g) {
        const NormEvaluator ev(build_ising(g, J, gamma));
        const auto minima = find_minima(ev);
        if (minima.size() < 2) {
            std::ostringstream msg;
            msg << "locate_first_order: single minimum at g/gamma = " << g / gamma;
            throw NumericalError(msg.str());
        }
        const Minimum& a = minima[0];
        const Minimum& b = minima[1];
        const bool a_is_gas = a.alpha.z < b.alpha.z;
        const double f_gas = a_is_gas ? a.f_v : b.f_v;
        const double f_liq = a_is_gas ? b.f_v : a.f_v;
        return f_gas - f_liq;
    };

    double lo = g_lo, hi = g_hi;
    double s_lo = branch_gap(lo), s_hi = branch_gap(hi);
    if (s_lo == 0.0) return lo;
    if (s_hi == 0.0) return hi;
    if (s_lo * s_hi > 0.0)
        throw NumericalError("locate_first_order: no sign change of the branch gap in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double s_mid = branch_gap(mid);
        if (s_mid == 0.0) return mid;
        if (s_mid * s_lo < 0.0) {
            hi = mid;
            s_hi = s_mid;
        } else {
            lo = mid;
            s_lo = s_mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

Phase eval_phase(const ToomPointSpec& spec, const PipelineOptions& opt, std::uint64_t eval_seed,
                 double* retain = nullptr) {
    PipelineOptions local = opt;
    local.seed = eval_seed;
    const PointOutcome out = classify_point(spec, local);
    if (retain) *retain = out.retain_fraction;
    return out.label == "bistable" ? Phase::bistable : Phase::ergodic;
}

}  // namespace

BoundaryPoint locate_boundary(const ToomPointSpec& base, const std::string& axis, double lo,
                              double hi, double tol, const PipelineOptions& opt) {
    BoundaryPoint bp;
    bp.axis = axis;
    int evals = 0;
    auto phase_at = [&](double v) {
        return eval_phase(with_axis(base, axis, v), opt, mix64(opt.seed, 1000 + evals++));
    };
    Phase p_lo = phase_at(lo);
    Phase p_hi = phase_at(hi);
    if (p_lo == p_hi)
        throw NumericalError("locate_boundary: both bracket endpoints classify as " +
                             to_string(p_lo));
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const Phase p_mid = phase_at(mid);
        if (p_mid == p_lo)
            lo = mid;
        else
            hi = mid;
    }
    bp.value = 0.5 * (lo + hi);
    bp.half_width = 0.5 * (hi - lo);
    bp.evaluations = evals;
    return bp;
}

CriticalPoint locate_critical_point(const ToomPointSpec& base, const std::string& axis,
                                    double lo, double hi, double tol,
                                    const PipelineOptions& opt) {
    if (base.h != 0.0)
        throw std::invalid_argument("locate_critical_point: defined on the h = 0 line");

    PipelineOptions work = opt;
    int evals = 0;
    auto phase_at = [&](double v, double* retain = nullptr) {
        return eval_phase(with_axis(base, axis, v), work, mix64(work.seed, 2000 + evals++),
                          retain);
    };

    // coarse monotonicity guard: the classification must flip exactly once
    const int n_scan = 5;
    for (int attempt = 0;; ++attempt) {
        std::vector<Phase> scan(n_scan);
        for (int k = 0; k < n_scan; ++k)
            scan[k] = phase_at(lo + (hi - lo) * k / (n_scan - 1));
        int flips = 0;
        for (int k = 1; k < n_scan; ++k) flips += scan[k] != scan[k - 1];
        if (flips == 1) break;
        if (attempt >= 2)
            throw NumericalError(
                "locate_critical_point: classification flips " + std::to_string(flips) +
                " times along the scan line after n_samples increase (ensemble noise)");
        work.n_samples *= 2;  // auto-increase against ensemble noise
    }

    double a = lo, b = hi;
    double retain_a = 0.0, retain_b = 0.0;
    Phase p_a = phase_at(a, &retain_a);
    const Phase p_b = phase_at(b, &retain_b);
    if (p_a == p_b)
        throw NumericalError("locate_critical_point: endpoints classify identically");
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        double retain_mid = 0.0;
        const Phase p_mid = phase_at(mid, &retain_mid);
        if (p_mid == p_a) {
            a = mid;
            retain_a = retain_mid;
        } else {
            b = mid;
            retain_b = retain_mid;
        }
    }

    CriticalPoint cp;
    cp.value = 0.5 * (a + b);
    cp.n_samples_used = work.n_samples;
    const double half_width = 0.5 * (b - a);
    // binomial error on retain_fraction mapped through the local slope
    const double p_mean = 0.5 * (retain_a + retain_b);
    const double sigma_p =
        std::sqrt(std::max(p_mean * (1.0 - p_mean), 0.25 / work.n_samples) / work.n_samples);
    const double slope = std::abs(retain_b - retain_a) / std::max(b - a, 1e-300);
    const double stat_err = slope > 0.0 ? std::min(sigma_p / slope, b - a) : b - a;
    cp.uncertainty = half_width + stat_err;
    return cp;
}

PhaseDiagram sweep(const ToomPointSpec& base, const std::string& axis, double x_lo, double x_hi,
                   int nx, double h_lo, double h_hi, int nh, const PipelineOptions& opt) {
    PhaseDiagram pd;
    pd.plane = axis + "-h";
    int index = 0;
    for (int i = 0; i < nx; ++i) {
        const double x = nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (nx - 1);
        for (int j = 0; j < nh; ++j) {
            const double h = nh == 1 ? h_lo : h_lo + (h_hi - h_lo) * j / (nh - 1);
            SweepRow row;
            row.x = x;
            row.h = h;
            try {
                ToomPointSpec spec = with_axis(base, axis, x);
                spec.h = h;
                PipelineOptions local = opt;
                local.seed = mix64(opt.seed, static_cast<std::uint64_t>(index));
                const PointOutcome out = classify_point(spec, local);
                row.label = out.label;
                row.retain_fraction = out.retain_fraction;
                row.n_minima = out.n_minima;
                row.f0_stable = out.f0_stable;
                row.f0_meta = out.f0_meta;
            } catch (const std::exception&) {
                row.label = "absent";
            }
            pd.grid.push_back(row);
            ++index;
        }
    }
    return pd;
}

}  // namespace bistab
