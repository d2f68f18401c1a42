#include "bistab/langevin.hpp"

#include "bistab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bistab {

double FieldLattice::spatial_mean() const {
    double sum = 0.0;
    for (const double v : phi) sum += v;
    return sum / static_cast<double>(phi.size());
}

FieldLattice init_island(int L, int side, double phi_island, double phi_bulk) {
    if (L <= 0) throw std::invalid_argument("init_island: L must be positive");
    if (side < 0 || side > L) throw std::invalid_argument("init_island: side must be in [0, L]");
    FieldLattice f;
    f.L = L;
    f.phi.assign(static_cast<std::size_t>(L) * L, phi_bulk);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x + y < side; ++x) f.at(x, y) = phi_island;
    return f;
}

FieldLattice init_square_island(int L, int side, double phi_island, double phi_bulk) {
    if (L <= 0) throw std::invalid_argument("init_square_island: L must be positive");
    if (side < 0 || side > L)
        throw std::invalid_argument("init_square_island: side must be in [0, L]");
    FieldLattice f;
    f.L = L;
    f.phi.assign(static_cast<std::size_t>(L) * L, phi_bulk);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) f.at(x, y) = phi_island;
    return f;
}

namespace {

inline int wrap_up(int i, int L) { return i + 1 == L ? 0 : i + 1; }
inline int wrap_dn(int i, int L) { return i == 0 ? L - 1 : i - 1; }

void drift_into(const FieldLattice& field, const LangevinCoeffs& coeffs, DriftMode mode,
                std::vector<double>& out) {
    const int L = field.L;
    out.resize(field.phi.size());
    const double a = coeffs.a;
    const double b = coeffs.b;
    const double bp = coeffs.b_prime;
    const double c = coeffs.c;
    const double chirality = b - bp;
    for (int y = 0; y < L; ++y) {
        const int yn = wrap_up(y, L), ys = wrap_dn(y, L);
        for (int x = 0; x < L; ++x) {
            const int xe = wrap_up(x, L), xw = wrap_dn(x, L);
            const double p = field.at(x, y);
            const double pn = field.at(x, yn), ps = field.at(x, ys);
            const double pe = field.at(xe, y), pw = field.at(xw, y);
            const double f0p = coeffs.f0.deriv(p);
            double val;
            if (mode == DriftMode::eq_of_motion) {
                const double ne = pn + pe - 2.0 * p;
                const double lap = pn + ps + pw + pe - 4.0 * p;
                val = -(f0p - a - chirality * ne - 2.0 * bp * p - c * lap);
            } else {
                // exact derivative of sum_i [f0(phi_i) + f_grad(phi_i, grad phi_i)]
                const double dxk = pe - p, dyk = pn - p;
                const double pwn = field.at(xw, yn);  // phi_{k-E+N}
                const double pes = field.at(xe, ys);  // phi_{k-N+E}
                const double dx_w = p - pw;           // delta_x at k-E
                const double dy_s = p - ps;           // delta_y at k-N
                const double dy_w = pwn - pw;         // delta_y at k-E
                const double dx_s = pes - ps;         // delta_x at k-N
                const double grad = f0p + (bp - b - 2.0 * c) * (dxk + dyk) - 2.0 * bp * p +
                                    b * (dy_w + dx_s) + bp * (pw + ps) +
                                    2.0 * c * (dx_w + dy_s);
                val = -grad;
            }
            out[static_cast<std::size_t>(y) * L + x] = val;
        }
    }
}

}  // namespace

std::vector<double> drift(const FieldLattice& field, const LangevinCoeffs& coeffs,
                          DriftMode mode) {
    std::vector<double> out;
    drift_into(field, coeffs, mode, out);
    return out;
}

void step(FieldLattice& field, const LangevinCoeffs& coeffs, double dt, NormalStream& stream,
          StepStats* stats, DriftMode mode, NoiseMode noise, double noise_amp_override) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    thread_local std::vector<double> buf;
    drift_into(field, coeffs, mode, buf);
    const double amp = noise_amp_override >= 0.0 ? noise_amp_override : coeffs.noise_amp;
    const double sdt = std::sqrt(dt);
    std::int64_t clamps = 0;
    for (std::size_t i = 0; i < field.phi.size(); ++i) {
        double local_amp = amp;
        if (noise_amp_override < 0.0 && noise == NoiseMode::local)
            local_amp = std::max(0.0, coeffs.f0.eval(field.phi[i]));
        double nv = field.phi[i] + buf[i] * dt;
        if (local_amp > 0.0) nv += std::sqrt(local_amp) * sdt * stream.next();
        if (nv > 1.0) {
            nv = 1.0;
            ++clamps;
        } else if (nv < -1.0) {
            nv = -1.0;
            ++clamps;
        }
        field.phi[i] = nv;
    }
    if (stats) stats->clamp_events += clamps;
}

double lattice_energy(const FieldLattice& field, const LangevinCoeffs& coeffs) {
    const int L = field.L;
    double e = 0.0;
    for (int y = 0; y < L; ++y) {
        const int yn = wrap_up(y, L);
        for (int x = 0; x < L; ++x) {
            const int xe = wrap_up(x, L);
            const double p = field.at(x, y);
            const double dx = field.at(xe, y) - p;
            const double dy = field.at(x, yn) - p;
            e += coeffs.f0.eval(p) + 0.5 * coeffs.c * (dx * dx + dy * dy);
        }
    }
    return e;
}

EnsembleStats run_ensemble(const LangevinCoeffs& coeffs, int L, int side, int n_samples,
                           std::uint64_t master_seed, const LangevinOptions& opt) {
    if (n_samples <= 0) throw std::invalid_argument("run_ensemble: n_samples must be > 0");
    EnsembleStats stats;
    stats.n_samples = n_samples;
    double dt = opt.dt;
    if (dt <= 0.0) {
        const double stiff = std::max(
            {1.0, coeffs.f0.max_curvature(), 4.0 * std::abs(coeffs.c),
             2.0 * std::abs(coeffs.b - coeffs.b_prime)});
        dt = 0.01 / stiff;
    }
    const int steps = std::max(1, static_cast<int>(std::llround(opt.t_max / dt)));
    const int stride = opt.record_stride > 0 ? opt.record_stride : std::max(1, steps / 2000);
    stats.dt = dt;
    stats.n_steps = steps;
    stats.phi_island = std::clamp(coeffs.phi_stable, -1.0, 1.0);
    stats.phi_bulk = std::clamp(coeffs.phi_meta, -1.0, 1.0);

    std::vector<int> record_steps;
    for (int s = 0; s <= steps; s += stride) record_steps.push_back(s);
    if (record_steps.back() != steps) record_steps.push_back(steps);
    const int n_rec = static_cast<int>(record_steps.size());
    stats.times.resize(n_rec);
    for (int r = 0; r < n_rec; ++r) stats.times[r] = record_steps[r] * dt;

    std::vector<double> traj(static_cast<std::size_t>(n_samples) * n_rec, 0.0);
    std::vector<std::int64_t> clamp_by_sample(n_samples, 0);

#ifdef _OPENMP
    const int n_threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(n_threads)
#endif
    for (int s = 0; s < n_samples; ++s) {
        FieldLattice field = init_island(L, side, stats.phi_island, stats.phi_bulk);
        NormalStream stream(mix64(master_seed, static_cast<std::uint64_t>(s)));
        StepStats ss;
        int rec = 0;
        traj[static_cast<std::size_t>(s) * n_rec + rec++] = field.spatial_mean();
        for (int k = 1; k <= steps; ++k) {
            step(field, coeffs, dt, stream, &ss, opt.drift_mode, opt.noise_mode,
                 opt.noise_amp_override);
            if (rec < n_rec && record_steps[rec] == k)
                traj[static_cast<std::size_t>(s) * n_rec + rec++] = field.spatial_mean();
        }
        clamp_by_sample[s] = ss.clamp_events;
    }

    // deterministic reductions in sample order
    stats.mean_trajectory.assign(n_rec, 0.0);
    stats.sample_stationary.assign(n_samples, 0.0);
    const double t_window = (1.0 - opt.stationary_window) * opt.t_max;
    int retained = 0;
    for (int s = 0; s < n_samples; ++s) {
        double acc = 0.0;
        int cnt = 0;
        for (int r = 0; r < n_rec; ++r) {
            const double v = traj[static_cast<std::size_t>(s) * n_rec + r];
            stats.mean_trajectory[r] += v;
            if (stats.times[r] >= t_window) {
                acc += v;
                ++cnt;
            }
        }
        stats.sample_stationary[s] =
            cnt > 0 ? acc / cnt : traj[static_cast<std::size_t>(s + 1) * n_rec - 1];
        if (stats.sample_stationary[s] * stats.phi_bulk > 0.0) ++retained;
        stats.clamp_events += clamp_by_sample[s];
    }
    for (auto& v : stats.mean_trajectory) v /= n_samples;
    double mag = 0.0;
    for (const double v : stats.sample_stationary) mag += v;
    stats.stationary_mag = mag / n_samples;
    stats.retain_fraction = static_cast<double>(retained) / n_samples;
    return stats;
}

std::string to_string(Phase p) { return p == Phase::bistable ? "bistable" : "ergodic"; }

Phase classify(const EnsembleStats& stats, double h, double threshold) {
    if (stats.ergodic_by_construction) return Phase::ergodic;
    if (h != 0.0)
        return stats.retain_fraction >= threshold ? Phase::bistable : Phase::ergodic;
    const bool same_sign = stats.stationary_mag * stats.phi_bulk > 0.0;
    return same_sign && std::abs(stats.stationary_mag) >= 0.5 * std::abs(stats.phi_bulk)
               ? Phase::bistable
               : Phase::ergodic;
}

}  // namespace bistab
