#include "bistab/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bistab {

namespace {

bool distinct_offsets(const Support& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i] == s[j]) return false;
    return true;
}

Eigen::Index pow2(int n) { return Eigen::Index{1} << n; }

}  // namespace

LocalOperator::LocalOperator(Support s, Matrix m) : support(std::move(s)), matrix(std::move(m)) {
    if (!distinct_offsets(support))
        throw std::invalid_argument("LocalOperator: support offsets must be distinct");
    if (matrix.rows() != matrix.cols() || matrix.rows() != pow2(n_sites()))
        throw std::invalid_argument("LocalOperator: matrix dimension must be 2^|support|");
}

LindbladTerm make_hamiltonian_term(Support support, const Matrix& h, std::string name) {
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("hamiltonian term '" + name + "' is not Hermitian");
    LindbladTerm t;
    t.kind = TermKind::hamiltonian;
    t.op = LocalOperator(std::move(support), h);
    t.rate = 1.0;
    t.name = std::move(name);
    return t;
}

LindbladTerm make_dissipator_term(Support support, const Matrix& jump, double rate,
                                  std::string name) {
    if (rate < 0.0) throw std::invalid_argument("dissipator term '" + name + "': rate < 0");
    LindbladTerm t;
    t.kind = TermKind::dissipator;
    t.op = LocalOperator(std::move(support), std::sqrt(rate) * jump);
    t.rate = rate;
    t.name = std::move(name);
    return t;
}

const Matrix& pauli_id() {
    static const Matrix m = Matrix::Identity(2, 2);
    return m;
}
const Matrix& pauli_x() {
    static const Matrix m = [] {
        Matrix v(2, 2);
        v << 0, 1, 1, 0;
        return v;
    }();
    return m;
}
const Matrix& pauli_y() {
    static const Matrix m = [] {
        Matrix v(2, 2);
        v << Complex(0, 0), Complex(0, 1), Complex(0, -1), Complex(0, 0);
        return v;
    }();
    return m;
}
const Matrix& pauli_z() {
    static const Matrix m = [] {
        Matrix v(2, 2);
        v << -1, 0, 0, 1;
        return v;
    }();
    return m;
}
const Matrix& sigma_plus() {
    static const Matrix m = [] {
        Matrix v = Matrix::Zero(2, 2);
        v(1, 0) = 1.0;
        return v;
    }();
    return m;
}
const Matrix& sigma_minus() {
    static const Matrix m = [] {
        Matrix v = Matrix::Zero(2, 2);
        v(0, 1) = 1.0;
        return v;
    }();
    return m;
}
const Matrix& proj0() {
    static const Matrix m = [] {
        Matrix v = Matrix::Zero(2, 2);
        v(0, 0) = 1.0;
        return v;
    }();
    return m;
}
const Matrix& proj1() {
    static const Matrix m = [] {
        Matrix v = Matrix::Zero(2, 2);
        v(1, 1) = 1.0;
        return v;
    }();
    return m;
}

Matrix bloch_state(const BlochVector& a) {
    if (!a.valid())
        throw std::invalid_argument("bloch_state: |alpha| > 1 (invalid state)");
    return 0.5 * (pauli_id() + a.x * pauli_x() + a.y * pauli_y() + a.z * pauli_z());
}

double purity(const BlochVector& a) {
    if (!a.valid())
        throw std::invalid_argument("purity: |alpha| > 1 (invalid state)");
    return 0.5 * (1.0 + a.norm2());
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

LocalOperator product_state(const std::vector<BlochVector>& alphas, const Support& support) {
    if (alphas.size() != support.size())
        throw std::invalid_argument("product_state: one Bloch vector per site required");
    Matrix m = Matrix::Identity(1, 1);
    for (const auto& a : alphas) m = kron(m, bloch_state(a));
    return LocalOperator(support, std::move(m));
}

LocalOperator product_state(const BlochVector& alpha, const Support& support) {
    return product_state(std::vector<BlochVector>(support.size(), alpha), support);
}

Matrix permute_sites(const Matrix& m, const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    const Eigen::Index dim = pow2(n);
    if (m.rows() != dim || m.cols() != dim)
        throw std::invalid_argument("permute_sites: dimension mismatch");
    // old row index for a given new row index
    std::vector<Eigen::Index> src(dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        Eigen::Index s = 0;
        for (int k = 0; k < n; ++k) {
            const Eigen::Index bit = (r >> (n - 1 - k)) & 1;
            s |= bit << (n - 1 - perm[k]);
        }
        src[r] = s;
    }
    Matrix out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) out(r, c) = m(src[r], src[c]);
    return out;
}

LocalOperator embed(const LocalOperator& a, const Support& target) {
    const int k = a.n_sites();
    const int n = static_cast<int>(target.size());
    std::vector<int> perm(n);
    int next_extra = k;
    for (int t = 0; t < n; ++t) {
        auto it = std::find(a.support.begin(), a.support.end(), target[t]);
        perm[t] = (it != a.support.end()) ? static_cast<int>(it - a.support.begin())
                                          : next_extra++;
    }
    if (next_extra - k != n - k || [&] {
            for (const auto& s : a.support)
                if (std::find(target.begin(), target.end(), s) == target.end()) return true;
            return false;
        }())
        throw std::invalid_argument("embed: operator support not contained in target");
    Matrix ext = kron(a.matrix, Matrix::Identity(pow2(n - k), pow2(n - k)));
    return LocalOperator(target, permute_sites(ext, perm));
}

Matrix apply_term_matrix(const LindbladTerm& term, const Matrix& rho) {
    const Matrix& op = term.op.matrix;
    if (op.rows() != rho.rows() || rho.rows() != rho.cols())
        throw std::invalid_argument("apply_term: dimension mismatch");
    if (term.kind == TermKind::hamiltonian) {
        return Complex(0, -1) * (op * rho - rho * op);
    }
    Matrix cdc = op.adjoint() * op;
    return op * rho * op.adjoint() - 0.5 * (cdc * rho + rho * cdc);
}

LocalOperator apply_term(const LindbladTerm& term, const LocalOperator& rho) {
    if (term.op.support == rho.support)
        return LocalOperator(rho.support, apply_term_matrix(term, rho.matrix));
    LindbladTerm embedded = term;
    embedded.op = embed(term.op, rho.support);
    return LocalOperator(rho.support, apply_term_matrix(embedded, rho.matrix));
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hs_inner: dimension mismatch");
    return (a.conjugate().cwiseProduct(b)).sum();
}

Matrix weighted_partial_trace(const Matrix& a, int n_sites, const std::vector<int>& keep,
                              const std::vector<Matrix>& traced_weights) {
    const Eigen::Index dim = pow2(n_sites);
    if (a.rows() != dim || a.cols() != dim)
        throw std::invalid_argument("weighted_partial_trace: dimension mismatch");
    std::vector<int> traced;
    for (int s = 0; s < n_sites; ++s)
        if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);
    if (traced.size() != traced_weights.size())
        throw std::invalid_argument("weighted_partial_trace: one weight per traced site required");

    const int m = static_cast<int>(keep.size());
    const int t = static_cast<int>(traced.size());
    Matrix out = Matrix::Zero(pow2(m), pow2(m));
    for (Eigen::Index r = 0; r < dim; ++r) {
        Eigen::Index o = 0;
        for (int k = 0; k < m; ++k) o |= ((r >> (n_sites - 1 - keep[k])) & 1) << (m - 1 - k);
        for (Eigen::Index c = 0; c < dim; ++c) {
            Eigen::Index op = 0;
            for (int k = 0; k < m; ++k) op |= ((c >> (n_sites - 1 - keep[k])) & 1) << (m - 1 - k);
            // weight product: (x)_k W_k(p'_k, p_k), row bit from the column index
            Complex w = 1.0;
            for (int k = 0; k < t; ++k) {
                const Eigen::Index pr = (r >> (n_sites - 1 - traced[k])) & 1;
                const Eigen::Index pc = (c >> (n_sites - 1 - traced[k])) & 1;
                w *= traced_weights[k](pc, pr);
            }
            out(o, op) += a(r, c) * w;
        }
    }
    return out;
}

}  // namespace bistab
