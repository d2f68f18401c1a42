#include "bistab/opalg.hpp"

#include <doctest.h>

#include <random>

using namespace bistab;

namespace {

Matrix random_density(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> n;
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = Complex(n(gen), n(gen));
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

BlochVector random_bloch(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BlochVector a;
    do {
        a = BlochVector{u(gen), u(gen), u(gen)};
    } while (a.norm2() > 1.0);
    return a;
}

}  // namespace

TEST_CASE("product_state basics") {
    const Support one{{0, 0}};
    const auto mixed = product_state(BlochVector{0, 0, 0}, one);
    CHECK(mixed.matrix.rows() == 2);
    CHECK((mixed.matrix - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

    const auto down = product_state(BlochVector{0, 0, -1}, one);
    CHECK(std::abs(down.matrix(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(down.matrix(1, 1)) < 1e-15);

    const Support two{{0, 0}, {1, 0}};
    const auto dd = product_state(BlochVector{0, 0, -1}, two);
    CHECK(dd.matrix.rows() == 4);
    CHECK(std::abs(dd.matrix(0, 0) - 1.0) < 1e-15);
    CHECK(dd.matrix.cwiseAbs().sum() == doctest::Approx(1.0));

    CHECK_THROWS_AS(product_state(BlochVector{0.8, 0.8, 0.8}, one), std::invalid_argument);
}

TEST_CASE("product_state is Hermitian, unit trace, positive") {
    std::mt19937_64 gen(7);
    const Support sup{{0, 0}, {1, 0}, {0, 1}};
    for (int k = 0; k < 20; ++k) {
        const auto rho = product_state(random_bloch(gen), sup);
        CHECK((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(std::abs(rho.matrix.trace() - Complex(1.0)) < 1e-13);
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
        CHECK(es.eigenvalues().minCoeff() > -1e-13);
        CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-13);
    }
}

TEST_CASE("purity") {
    CHECK(purity(BlochVector{0, 0, 0}) == doctest::Approx(0.5));
    CHECK(purity(BlochVector{0, 0, 1}) == doctest::Approx(1.0));
    CHECK(purity(BlochVector{0, 0.6, 0}) == doctest::Approx(0.68));
}

TEST_CASE("embed") {
    const Support bond{{0, 0}, {1, 0}};
    const Support triple{{0, 0}, {1, 0}, {0, 1}};
    const LocalOperator zz(bond, kron(pauli_z(), pauli_z()));
    CHECK(embed(zz, triple).matrix.rows() == 8);

    const LocalOperator id(bond, Matrix::Identity(4, 4));
    CHECK((embed(id, triple).matrix - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-15);

    const LocalOperator z({{0, 0}}, pauli_z());
    const Matrix expect = kron(pauli_z(), Matrix::Identity(2, 2));
    CHECK((embed(z, bond).matrix - expect).cwiseAbs().maxCoeff() < 1e-15);

    // permuted target: sigma_z lands on the second listed site
    const Support swapped{{1, 0}, {0, 0}};
    const Matrix expect2 = kron(Matrix::Identity(2, 2), pauli_z());
    CHECK((embed(z, swapped).matrix - expect2).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(embed(zz, Support{{0, 0}}), std::invalid_argument);
}

TEST_CASE("apply_term on the decay channel") {
    const Support one{{0, 0}};
    const auto decay = make_dissipator_term(one, sigma_minus(), 1.0, "decay");

    const LocalOperator up(one, proj1());
    const Matrix full = apply_term(decay, up).matrix;
    CHECK((full - (proj0() - proj1())).cwiseAbs().maxCoeff() < 1e-14);

    const LocalOperator down(one, proj0());
    CHECK(apply_term(decay, down).matrix.cwiseAbs().maxCoeff() < 1e-14);

    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const Matrix res = apply_term(decay, LocalOperator(one, plus)).matrix;
    Matrix expect(2, 2);
    expect << 0.5, -0.25, -0.25, -0.5;
    CHECK((res - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("apply_term is linear and traceless") {
    std::mt19937_64 gen(11);
    const Support one{{0, 0}};
    const auto decay = make_dissipator_term(one, sigma_minus(), 0.7, "decay");
    const auto field = make_hamiltonian_term(one, 0.5 * pauli_x(), "field");
    for (const auto& term : {decay, field}) {
        for (int k = 0; k < 10; ++k) {
            const Matrix r1 = random_density(2, gen);
            const Matrix r2 = random_density(2, gen);
            const double w = 0.3;
            const Matrix lhs = apply_term_matrix(term, (w * r1 + (1.0 - w) * r2).eval());
            const Matrix rhs =
                w * apply_term_matrix(term, r1) + (1.0 - w) * apply_term_matrix(term, r2);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(apply_term_matrix(term, r1).trace()) < 1e-12);
        }
    }
}

TEST_CASE("hamiltonian terms must be Hermitian") {
    CHECK_THROWS_AS(make_hamiltonian_term({{0, 0}}, sigma_plus(), "bad"),
                    std::invalid_argument);
}

TEST_CASE("hs_inner") {
    CHECK(hs_inner(pauli_x(), pauli_x()).real() == doctest::Approx(2.0));
    CHECK(std::abs(hs_inner(pauli_x(), pauli_y())) < 1e-15);
    CHECK(hs_inner(sigma_minus(), sigma_minus()).real() == doctest::Approx(1.0));

    std::mt19937_64 gen(3);
    for (int k = 0; k < 10; ++k) {
        const Matrix a = random_density(4, gen);
        const Matrix b = random_density(4, gen);
        CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-14);
        CHECK(hs_inner(a, a).real() >= 0.0);
    }
    CHECK_THROWS_AS(hs_inner(pauli_x(), Matrix::Identity(4, 4)), std::invalid_argument);
}

TEST_CASE("weighted_partial_trace matches the dense contraction") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> n;
    Matrix a(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) a(i, j) = Complex(n(gen), n(gen));

    const Matrix w0 = random_density(2, gen);
    const Matrix w2 = random_density(2, gen);

    // keep site 1, trace sites 0 and 2 against w0 and w2
    Matrix expect = Matrix::Zero(2, 2);
    for (int o = 0; o < 2; ++o)
        for (int op = 0; op < 2; ++op)
            for (int p0 = 0; p0 < 2; ++p0)
                for (int p0p = 0; p0p < 2; ++p0p)
                    for (int p2 = 0; p2 < 2; ++p2)
                        for (int p2p = 0; p2p < 2; ++p2p)
                            expect(o, op) += a(p0 * 4 + o * 2 + p2, p0p * 4 + op * 2 + p2p) *
                                             w0(p0p, p0) * w2(p2p, p2);
    const Matrix got = weighted_partial_trace(a, 3, {1}, {w0, w2});
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-13);

    // tracing every site against a product state reproduces Tr[A rho]
    const Matrix mid = random_density(2, gen);
    const Matrix rho = kron(w0, kron(mid, w2));
    const Matrix full = weighted_partial_trace(a, 3, {}, {w0, mid, w2});
    CHECK(std::abs(full(0, 0) - (a * rho).trace()) < 1e-13);
}

TEST_CASE("permute_sites") {
    const Matrix zx = kron(pauli_z(), pauli_x());
    const Matrix xz = kron(pauli_x(), pauli_z());
    CHECK((permute_sites(zx, {1, 0}) - xz).cwiseAbs().maxCoeff() < 1e-15);
}
