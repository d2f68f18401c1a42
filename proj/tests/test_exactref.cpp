#include "bistab/exactref.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace bistab;

TEST_CASE("single_site_steady") {
    const auto a0 = single_site_steady(0.0, 1.0);
    CHECK(a0.x == 0.0);
    CHECK(a0.y == doctest::Approx(0.0));
    CHECK(a0.z == doctest::Approx(-1.0));

    const auto a1 = single_site_steady(1.0, 1.0);
    CHECK(a1.y == doctest::Approx(2.0 / 3.0));
    CHECK(a1.z == doctest::Approx(-1.0 / 3.0));

    const auto a2 = single_site_steady(1.0, 2.0);
    CHECK(a2.y == doctest::Approx(2.0 / 3.0));
    CHECK(a2.z == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("dense pair oracle on known values") {
    const auto model = build_ising(1.0, 5.0, 1.0);
    const NormEvaluator ev(model);
    const BlochVector down{0, 0, -1};
    for (const auto& cfg : ev.pairs()) {
        if (cfg.term_i == 0 && cfg.term_j == 0)
            CHECK(dense_pair_oracle(down, cfg, model).real() ==
                  doctest::Approx(0.5).epsilon(1e-12));
        if (cfg.term_i == 3 && cfg.term_j == 3)
            CHECK(std::abs(dense_pair_oracle(down, cfg, model)) < 1e-14);
    }
}

TEST_CASE("oracle is independent of joint-support ordering") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const auto model = build_toom_classical(0.8, 0.1, 1.0);
    const NormEvaluator ev(model);
    const BlochVector a{0, u(gen), u(gen)};
    for (std::size_t k = 0; k < ev.pairs().size(); k += 13) {
        PairConfig cfg = ev.pairs()[k];
        const Complex base = dense_pair_oracle(a, cfg, model);
        std::reverse(cfg.joint_support.begin(), cfg.joint_support.end());
        CHECK(std::abs(dense_pair_oracle(a, cfg, model) - base) < 1e-12);
    }
}

TEST_CASE("dense patch norm: decoupled decay lattice") {
    const auto model = build_ising(0.0, 0.0, 1.0);
    const BlochVector up{0, 0, 1};
    const Patch p22 = Patch::rectangle(2, 2);
    CHECK(dense_patch_norm(model, up, p22) == doctest::Approx(20.0).epsilon(1e-12));

    const NormEvaluator ev(model);
    CHECK(ev.patch_pair_sum(up, p22.sites) == doctest::Approx(20.0).epsilon(1e-12));

    // dark state
    CHECK(std::abs(dense_patch_norm(model, BlochVector{0, 0, -1}, p22)) < 1e-13);

    // two patch sizes pin the (A, B) split: F = A N + B N^2
    const Patch p33 = Patch::rectangle(3, 3);
    const double f4 = dense_patch_norm(model, up, p22);
    const double f9 = dense_patch_norm(model, up, p33);
    const double B = (f9 / 9.0 - f4 / 4.0) / 5.0;
    const double A = f4 / 4.0 - 4.0 * B;
    const NormValue nv = ev.f_v(up);
    CHECK(A == doctest::Approx(nv.overlap_part).epsilon(1e-9));
    CHECK(B == doctest::Approx(nv.disjoint_part).epsilon(1e-9));
}

TEST_CASE("engine patch sum reconstructs the dense patch norm") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    const std::vector<LatticeModel> models = {build_ising(1.3, 0.7, 1.0),
                                              build_toom_classical(0.75, 0.1, 1.0)};
    for (const auto& model : models) {
        const NormEvaluator ev(model);
        for (int rep = 0; rep < 3; ++rep) {
            const BlochVector a{u(gen), u(gen), u(gen)};
            for (int n : {2, 3}) {
                const Patch patch = Patch::rectangle(n, n);
                const double dense = dense_patch_norm(model, a, patch);
                const double engine = ev.patch_pair_sum(a, patch.sites);
                CHECK(dense == doctest::Approx(engine).epsilon(1e-9));
                CHECK(dense >= -1e-12);
            }
        }
    }
}

TEST_CASE("patch norm is invariant under site reordering") {
    const auto model = build_ising(0.9, 1.4, 1.0);
    const BlochVector a{0.1, -0.2, 0.3};
    Patch patch = Patch::rectangle(2, 2);
    const double base = dense_patch_norm(model, a, patch);
    std::swap(patch.sites[0], patch.sites[3]);
    std::swap(patch.sites[1], patch.sites[2]);
    CHECK(dense_patch_norm(model, a, patch) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("patch size cap") {
    const auto model = build_ising(1.0, 1.0, 1.0);
    CHECK_THROWS_AS(dense_patch_norm(model, BlochVector{0, 0, 0}, Patch::rectangle(4, 4)),
                    std::invalid_argument);
}
