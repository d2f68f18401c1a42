#include "bistab/landscape.hpp"

#include "bistab/errors.hpp"
#include "bistab/exactref.hpp"

#include <doctest.h>

#include <random>

using namespace bistab;

TEST_CASE("descend finds the minimum of a shifted quadratic") {
    DescentOptions opt;
    opt.ball_radius = 10.0;
    const auto f = [](const Eigen::Vector3d& x) {
        return (x - Eigen::Vector3d(0.3, -0.2, 0.5)).squaredNorm();
    };
    const auto res = descend(f, Eigen::Vector3d(1, 1, 1), opt);
    CHECK(res.converged);
    CHECK((res.x - Eigen::Vector3d(0.3, -0.2, 0.5)).norm() < 1e-6);
}

TEST_CASE("descend respects the ball constraint") {
    DescentOptions opt;
    opt.ball_radius = 1.0;
    const auto f = [](const Eigen::Vector3d& x) {
        return (x - Eigen::Vector3d(2.0, 0.0, 0.0)).squaredNorm();
    };
    const auto res = descend(f, Eigen::Vector3d(0, 0.5, 0), opt);
    CHECK(res.converged);
    CHECK((res.x - Eigen::Vector3d(1.0, 0.0, 0.0)).norm() < 1e-5);
}

TEST_CASE("find_minima on the decoupled driven spin") {
    const NormEvaluator ev(build_ising(1.0, 0.0, 1.0));
    const auto minima = find_minima(ev);
    REQUIRE(minima.size() == 1);
    const BlochVector expect = single_site_steady(1.0, 1.0);
    CHECK(std::abs(minima[0].alpha.y - expect.y) < 1e-5);
    CHECK(std::abs(minima[0].alpha.z - expect.z) < 1e-5);
    CHECK(minima[0].f_v < 1e-10);
}

TEST_CASE("find_minima on the classical majority-vote landscape") {
    const NormEvaluator ev(build_toom_classical(0.5, 0.0, 1.0));
    const auto minima = find_minima(ev);
    REQUIRE(minima.size() == 2);
    // symmetric pair, dedup floor respected
    CHECK(std::abs(minima[0].alpha.z + minima[1].alpha.z) < 1e-5);
    for (std::size_t i = 0; i < minima.size(); ++i)
        for (std::size_t j = i + 1; j < minima.size(); ++j) {
            const double dz = minima[i].alpha.z - minima[j].alpha.z;
            const double dy = minima[i].alpha.y - minima[j].alpha.y;
            CHECK(std::hypot(dz, dy) >= 1e-3);
        }

    // every minimum beats 20 random small perturbations
    std::mt19937_64 gen(51);
    std::normal_distribution<double> n;
    for (const auto& m : minima) {
        for (int k = 0; k < 20; ++k) {
            double dz = n(gen);
            BlochVector probe = m.alpha;
            probe.z += 1e-3 * (dz > 0 ? 1.0 : -1.0) * std::min(std::abs(dz), 1.0);
            if (probe.z > 1.0) probe.z = 1.0;
            if (probe.z < -1.0) probe.z = -1.0;
            if (std::abs(probe.z - m.alpha.z) < 1e-9) continue;
            CHECK(ev.value(probe) > m.f_v);
        }
    }
}

TEST_CASE("toy double well saddle") {
    DescentOptions opt;
    opt.ball_radius = 10.0;
    opt.free = {true, true, false};
    const auto f = [](const Eigen::Vector3d& v) {
        const double x = v[0], y = v[1];
        return (x * x - 1.0) * (x * x - 1.0) + y * y;
    };
    const Eigen::Vector3d m1(-1, 0, 0), m2(1, 0, 0);
    const SaddlePoint sp = find_saddle_fn(f, m1, m2, opt);
    CHECK(sp.x.norm() < 1e-6);
    CHECK(sp.f == doctest::Approx(1.0).epsilon(1e-8));

    // swap invariance
    const SaddlePoint sp_rev = find_saddle_fn(f, m2, m1, opt);
    CHECK((sp.x - sp_rev.x).norm() < 1e-6);

    CHECK_THROWS_AS(find_saddle_fn(f, m1, m1, opt), std::invalid_argument);
}

TEST_CASE("saddle of the one-parameter double well") {
    const NormEvaluator ev(build_toom_classical(0.5, 0.0, 1.0));
    const auto minima = find_minima(ev);
    REQUIRE(minima.size() == 2);
    const auto sp = find_saddle(ev, minima[0].alpha, minima[1].alpha);
    CHECK(std::abs(sp.first.z) < 1e-4);  // h = 0: barrier at the origin
    CHECK(sp.second > std::max(minima[0].f_v, minima[1].f_v));
}

TEST_CASE("scan_plane marks out-of-ball points absent") {
    const NormEvaluator ev(build_ising(1.0, 0.0, 1.0));
    const auto scan = scan_plane(ev, Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 1),
                                 Eigen::Vector3d(0, 1, 0), 41, 41, -1.2, 1.2, -1.2, 1.2);
    CHECK(std::isnan(scan.values(0, 0)));  // corner beyond the ball

    // interior minimum of the scan sits near the exact steady state
    double best = 1e300;
    int bi = -1, bj = -1;
    for (int i = 0; i < 41; ++i)
        for (int j = 0; j < 41; ++j)
            if (!std::isnan(scan.values(i, j)) && scan.values(i, j) < best) {
                best = scan.values(i, j);
                bi = i;
                bj = j;
            }
    const BlochVector expect = single_site_steady(1.0, 1.0);
    CHECK(std::abs(scan.u[bi] - expect.z) < 0.08);
    CHECK(std::abs(scan.v[bj] - expect.y) < 0.08);

    CHECK_THROWS_AS(scan_plane(ev, Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 1),
                               Eigen::Vector3d(0, 0, 2), 5, 5, 0, 1, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("rotate_to_field") {
    const FieldRotation r1 = rotate_to_field(BlochVector{0, 0, -0.8}, BlochVector{0, 0, 0.8});
    CHECK(r1.theta == doctest::Approx(0.0));
    CHECK(r1.phi_of(BlochVector{0, 0.3, 0.5}) == doctest::Approx(0.5));

    const FieldRotation r2 = rotate_to_field(BlochVector{0, 0, 0}, BlochVector{0, 0.5, 0.5});
    CHECK(r2.theta == doctest::Approx(std::numbers::pi / 4));

    // projections reproduce both minima
    const BlochVector m1{0, 0.2, -0.6}, m2{0, -0.1, 0.7};
    const FieldRotation r3 = rotate_to_field(m1, m2);
    const BlochVector back1 = r3.alpha_of(r3.phi_of(m1), r3.orth_of(m1));
    CHECK(std::abs(back1.y - m1.y) < 1e-14);
    CHECK(std::abs(back1.z - m1.z) < 1e-14);

    CHECK_THROWS_AS(rotate_to_field(m1, m1), std::invalid_argument);
}

TEST_CASE("effective_f0 for the deterministic ruleset") {
    const NormEvaluator ev(build_toom_classical(0.0, 0.0, 1.0));
    const FieldRotation rot = rotate_to_field(BlochVector{0, 0, -1}, BlochVector{0, 0, 1});
    const Profile f0 = effective_f0(ev, rot, default_phi_grid(-1.0, 1.0, 101));
    CHECK(std::abs(f0.eval(1.0)) < 1e-10);
    CHECK(std::abs(f0.eval(-1.0)) < 1e-10);
    for (double phi : {0.15, 0.4, 0.85})
        CHECK(f0.eval(phi) == doctest::Approx(f0.eval(-phi)).epsilon(1e-10));
}

TEST_CASE("quantum profile reduces to the classical one at zero drive") {
    const NormEvaluator evq(build_toom_quantum(0.5, 0.0, 0.0, 1.0));
    const NormEvaluator evc(build_toom_classical(0.5, 0.0, 1.0));
    const FieldRotation rot = rotate_to_field(BlochVector{0, 0, -1}, BlochVector{0, 0, 1});
    const auto grid = default_phi_grid(-0.9, 0.9, 41);
    const Profile fq = effective_f0(evq, rot, grid);
    const Profile fc = effective_f0(evc, rot, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(fq.ys()[i] - fc.ys()[i]) < 1e-10);
}

TEST_CASE("orthogonal minimization lowers the section") {
    const NormEvaluator ev(build_toom_quantum(0.3, 0.0, 0.4, 1.0));
    const auto minima = find_minima(ev);
    REQUIRE(minima.size() >= 2);
    const FieldRotation rot = rotate_to_field(minima[0].alpha, minima[1].alpha);
    const Profile f0 =
        effective_f0(ev, rot, default_phi_grid(rot.phi_of(minima[0].alpha),
                                               rot.phi_of(minima[1].alpha), 101));
    for (const auto& m : {minima[0], minima[1]}) {
        const double orth_fixed = rot.orth_of(m.alpha);
        for (double phi : {0.3 * rot.phi_of(m.alpha), 0.8 * rot.phi_of(m.alpha)}) {
            const double sect = ev.value(rot.alpha_of(phi, orth_fixed));
            CHECK(f0.eval(phi) <= sect + 1e-9);
        }
    }
}
