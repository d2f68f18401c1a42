#include "bistab/langevin.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace bistab;

namespace {

Profile poly_profile(const std::vector<double>& coeffs, int n = 41) {
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = -1.0 + 2.0 * i / (n - 1);
        double acc = 0.0, pw = 1.0;
        for (const double ck : coeffs) {
            acc += ck * pw;
            pw *= x[i];
        }
        y[i] = acc;
    }
    return Profile(x, y);
}

LangevinCoeffs synthetic(double a, double b, double bp, double c,
                         const std::vector<double>& f0_poly, double noise) {
    LangevinCoeffs lc;
    lc.a = a;
    lc.b = b;
    lc.b_prime = bp;
    lc.c = c;
    lc.f0 = poly_profile(f0_poly);
    lc.noise_amp = noise;
    lc.phi_stable = 0.8;
    lc.phi_meta = -0.8;
    return lc;
}

}  // namespace

TEST_CASE("island construction") {
    const FieldLattice tri = init_island(20, 10, 1.0, -1.0);
    int count = 0;
    for (const double v : tri.phi) count += v > 0.0;
    CHECK(count == 55);  // triangular number for legs of 10

    const FieldLattice uni = init_island(12, 0, 1.0, -0.5);
    for (const double v : uni.phi) CHECK(v == -0.5);

    const FieldLattice sq = init_square_island(20, 10, 1.0, -1.0);
    int csq = 0;
    for (const double v : sq.phi) csq += v > 0.0;
    CHECK(csq == 100);

    CHECK_THROWS_AS(init_island(10, 11, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("drift: pure quadratic relaxation") {
    const LangevinCoeffs lc = synthetic(0, 0, 0, 0, {0.0, 0.0, 0.5}, 0.0);
    FieldLattice f = init_island(8, 4, 0.6, -0.3);
    const auto d = drift(f, lc);
    for (std::size_t i = 0; i < f.phi.size(); ++i)
        CHECK(d[i] == doctest::Approx(-f.phi[i]).epsilon(1e-12));
}

TEST_CASE("drift: uniform fixed point") {
    // f0 = phi^2/2, a = 0.3, b' = 0.1: phi* = a / (1 - 2 b')
    const LangevinCoeffs lc = synthetic(0.3, 0.0, 0.1, 0.2, {0.0, 0.0, 0.5}, 0.0);
    const double phi_star = 0.3 / (1.0 - 0.2);
    FieldLattice f = init_island(6, 0, 0.0, phi_star);
    for (const double v : drift(f, lc)) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("drift: chirality breaks the x reflection") {
    // only the (b - b') one-sided stencil active
    const LangevinCoeffs lc = synthetic(0, 1.0, 0, 0, {0.0}, 0.0);
    const int L = 8;
    FieldLattice f;
    f.L = L;
    f.phi.assign(L * L, -1.0);
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L / 2; ++x) f.at(x, y) = 1.0;  // step in x

    const auto d = drift(f, lc);
    // mirrored configuration
    FieldLattice g;
    g.L = L;
    g.phi.assign(L * L, 0.0);
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) g.at(x, y) = f.at(L - 1 - x, y);
    const auto dm = drift(g, lc);
    double max_asym = 0.0;
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x)
            max_asym = std::max(max_asym,
                                std::abs(d[static_cast<std::size_t>(y) * L + x] -
                                         dm[static_cast<std::size_t>(y) * L + (L - 1 - x)]));
    CHECK(max_asym > 0.5);  // one-sided NE stencil: reflection is not a symmetry

    // hand value at the left edge of the down-step (x = L/2 - 1):
    // NE sum = phi_N + phi_E - 2 phi_i = 1 + (-1) - 2 = -2, drift = (b-b')*(-2)
    const auto dl = drift(f, lc);
    CHECK(dl[static_cast<std::size_t>(0) * L + (L / 2 - 1)] ==
          doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("exact-functional drift matches finite differences of the energy") {
    const LangevinCoeffs lc = synthetic(0.12, 0.4, 0.15, 0.08, {0.1, -0.05, 0.3, 0.0, 0.2},
                                        0.0);
    const int L = 5;
    FieldLattice f;
    f.L = L;
    f.phi.resize(L * L);
    NormalStream ns(99);
    for (auto& v : f.phi) v = 0.4 * std::tanh(ns.next());

    // total functional: sum_i [f0 + (a/2 + b' phi) (dx+dy) + b dx dy + c (dx^2+dy^2)]
    auto total = [&](const FieldLattice& ff) {
        double e = 0.0;
        for (int y = 0; y < L; ++y)
            for (int x = 0; x < L; ++x) {
                const double p = ff.at(x, y);
                const double dx = ff.at((x + 1) % L, y) - p;
                const double dy = ff.at(x, (y + 1) % L) - p;
                e += lc.f0.eval(p) + (0.5 * lc.a + lc.b_prime * p) * (dx + dy) +
                     lc.b * dx * dy + lc.c * (dx * dx + dy * dy);
            }
        return e;
    };

    const auto d = drift(f, lc, DriftMode::exact_functional);
    const double h = 1e-6;
    for (int i = 0; i < L * L; ++i) {
        FieldLattice up = f, dn = f;
        up.phi[i] += h;
        dn.phi[i] -= h;
        const double fd = -(total(up) - total(dn)) / (2.0 * h);
        CHECK(std::abs(d[i] - fd) < 1e-6);
    }
}

TEST_CASE("step determinism and zero-noise stationarity") {
    const LangevinCoeffs lc = synthetic(0.3, 0.0, 0.1, 0.2, {0.0, 0.0, 0.5}, 0.0);
    const double phi_star = 0.375;
    FieldLattice f = init_island(6, 0, 0.0, phi_star);
    NormalStream s1(mix64(42, 0));
    step(f, lc, 0.01, s1);
    for (const double v : f.phi) CHECK(std::abs(v - phi_star) < 1e-12);

    // identical seeds give bitwise identical trajectories
    const LangevinCoeffs noisy = synthetic(0, 0, 0, 0.1, {0.0, 0.0, 0.5}, 0.02);
    FieldLattice a = init_island(8, 4, 0.5, -0.5);
    FieldLattice b = a;
    NormalStream sa(mix64(7, 3)), sb(mix64(7, 3));
    for (int k = 0; k < 50; ++k) {
        step(a, noisy, 0.01, sa);
        step(b, noisy, 0.01, sb);
    }
    CHECK(a.phi == b.phi);
}

TEST_CASE("free-field variance grows like noise_amp * t") {
    const LangevinCoeffs lc = synthetic(0, 0, 0, 0, {0.0}, 0.01);
    const int L = 100;  // 10^4 sites
    FieldLattice f = init_island(L, 0, 0.0, 0.0);
    NormalStream s(mix64(1234, 0));
    const double dt = 0.01;
    const int steps = 100;
    for (int k = 0; k < steps; ++k) step(f, lc, dt, s);
    const double mean = f.spatial_mean();
    double var = 0.0;
    for (const double v : f.phi) var += (v - mean) * (v - mean);
    var /= f.phi.size();
    CHECK(var == doctest::Approx(0.01 * steps * dt).epsilon(0.05));
}

TEST_CASE("zero-noise gradient flow decreases the energy") {
    const LangevinCoeffs lc = synthetic(0, 0, 0, 0.05, {0.2, 0.0, -0.4, 0.0, 0.25}, 0.0);
    FieldLattice f = init_island(10, 5, 0.9, -0.9);
    NormalStream s(1);
    double prev = lattice_energy(f, lc);
    for (int k = 0; k < 200; ++k) {
        step(f, lc, 0.02, s);
        const double e = lattice_energy(f, lc);
        CHECK(e <= prev + 1e-10);
        prev = e;
    }
}

TEST_CASE("translation covariance of the deterministic flow") {
    const LangevinCoeffs lc = synthetic(0.1, 0.3, 0.05, 0.1, {0.0, 0.1, 0.3}, 0.0);
    const int L = 8;
    FieldLattice f = init_island(L, 4, 0.7, -0.7);
    FieldLattice g;
    g.L = L;
    g.phi.resize(L * L);
    const int sx = 3, sy = 5;
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x) g.at((x + sx) % L, (y + sy) % L) = f.at(x, y);

    NormalStream s1(1), s2(2);
    for (int k = 0; k < 100; ++k) {
        step(f, lc, 0.01, s1);
        step(g, lc, 0.01, s2);
    }
    for (int y = 0; y < L; ++y)
        for (int x = 0; x < L; ++x)
            CHECK(g.at((x + sx) % L, (y + sy) % L) == doctest::Approx(f.at(x, y)).epsilon(1e-14));
}

TEST_CASE("clamping is monitored") {
    const LangevinCoeffs lc = synthetic(0, 0, 0, 0, {0.0}, 25.0);  // huge noise
    FieldLattice f = init_island(10, 0, 0.0, 0.0);
    NormalStream s(5);
    StepStats stats;
    for (int k = 0; k < 20; ++k) step(f, lc, 0.1, s, &stats);
    CHECK(stats.clamp_events > 0);
    for (const double v : f.phi) CHECK(std::abs(v) <= 1.0);
}

TEST_CASE("ensemble reproducibility and thread invariance") {
    const LangevinCoeffs lc = synthetic(0.0, 0.6, 0.1, 0.15, {0.05, 0.0, -0.2, 0.0, 0.15},
                                        0.002);
    LangevinOptions opt;
    opt.t_max = 5.0;
    opt.dt = 0.01;
    opt.threads = 2;
    const EnsembleStats s1 = run_ensemble(lc, 12, 6, 8, 777, opt);
    const EnsembleStats s2 = run_ensemble(lc, 12, 6, 8, 777, opt);
    CHECK(s1.stationary_mag == s2.stationary_mag);
    CHECK(s1.retain_fraction == s2.retain_fraction);
    CHECK(s1.mean_trajectory == s2.mean_trajectory);

    LangevinOptions serial = opt;
    serial.threads = 1;
    const EnsembleStats s3 = run_ensemble(lc, 12, 6, 8, 777, serial);
    CHECK(s1.stationary_mag == s3.stationary_mag);
    CHECK(s1.mean_trajectory == s3.mean_trajectory);
    CHECK(s1.sample_stationary == s3.sample_stationary);
}

TEST_CASE("stream splitting passes a chi-square uniformity check") {
    // pool draws across distinct sample streams, bin the normal CDF deciles
    std::vector<int> bins(10, 0);
    int total = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        NormalStream ns(mix64(987654321, s));
        for (int k = 0; k < 100; ++k) {
            const double z = ns.next();
            const double u = 0.5 * std::erfc(-z / std::numbers::sqrt2);
            int b = static_cast<int>(u * 10.0);
            if (b == 10) b = 9;
            ++bins[b];
            ++total;
        }
    }
    const double expect = total / 10.0;
    double chi2 = 0.0;
    for (const int n : bins) chi2 += (n - expect) * (n - expect) / expect;
    CHECK(chi2 < 30.0);  // 9 dof; fixed seed, generous bound
}

TEST_CASE("classification rules") {
    EnsembleStats s;
    s.n_samples = 10;
    s.phi_bulk = -0.8;
    s.retain_fraction = 1.0;
    CHECK(classify(s, 0.01) == Phase::bistable);
    s.retain_fraction = 0.0;
    CHECK(classify(s, 0.01) == Phase::ergodic);
    s.retain_fraction = 0.5;
    CHECK(classify(s, 0.01, 0.5) == Phase::bistable);

    // h = 0: majority magnitude rule with the initial sign
    s.stationary_mag = -0.5;
    CHECK(classify(s, 0.0) == Phase::bistable);
    s.stationary_mag = -0.3;
    CHECK(classify(s, 0.0) == Phase::ergodic);
    s.stationary_mag = 0.7;
    CHECK(classify(s, 0.0) == Phase::ergodic);

    s.ergodic_by_construction = true;
    s.retain_fraction = 1.0;
    CHECK(classify(s, 0.01) == Phase::ergodic);
}
