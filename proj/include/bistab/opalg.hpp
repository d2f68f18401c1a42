// opalg.hpp — Dense complex operator algebra and Lindblad superoperator
// kernels on few-site supports (<= 6 sites, dimension <= 64).
//
// Basis convention, fixed globally:
//   per-site basis (|0>, |1>) with |0> = spin-down (sigma_z eigenvalue -1),
//   sigma_- = |0><1|, sigma_+ = |1><0|.
//   Multi-site basis: site order as listed in the support, first site is the
//   slowest (most significant) index.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace bistab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Integer lattice offset on the 2D square lattice.
struct Offset {
    int x = 0;
    int y = 0;

    friend bool operator==(const Offset& a, const Offset& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Offset& a, const Offset& b) { return !(a == b); }
    friend bool operator<(const Offset& a, const Offset& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
    friend Offset operator+(const Offset& a, const Offset& b) { return {a.x + b.x, a.y + b.y}; }
    friend Offset operator-(const Offset& a, const Offset& b) { return {a.x - b.x, a.y - b.y}; }
};

using Support = std::vector<Offset>;

// Per-site variational parameters of the product ansatz,
// rho0 = (I + ax sx + ay sy + az sz)/2.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm2() const { return x * x + y * y + z * z; }
    bool valid() const { return norm2() <= 1.0 + 1e-12; }
};

// Operator on an ordered list of lattice offsets; matrix dimension 2^|support|.
struct LocalOperator {
    Support support;
    Matrix matrix;

    LocalOperator() = default;
    LocalOperator(Support s, Matrix m);

    int n_sites() const { return static_cast<int>(support.size()); }
    Eigen::Index dim() const { return matrix.rows(); }
};

enum class TermKind { hamiltonian, dissipator };

// One local piece of the Lindblad generator. For dissipators the operator is
// the jump operator scaled by sqrt(rate); the rate stays in metadata.
struct LindbladTerm {
    TermKind kind = TermKind::hamiltonian;
    LocalOperator op;
    double rate = 1.0;
    std::string name;
};

LindbladTerm make_hamiltonian_term(Support support, const Matrix& h, std::string name);
LindbladTerm make_dissipator_term(Support support, const Matrix& jump, double rate,
                                  std::string name);

// --------------------------- 2x2 building blocks ---------------------------

const Matrix& pauli_id();
const Matrix& pauli_x();
const Matrix& pauli_y();
const Matrix& pauli_z();
const Matrix& sigma_plus();   // |1><0|
const Matrix& sigma_minus();  // |0><1|
const Matrix& proj0();        // |0><0|
const Matrix& proj1();        // |1><1|

// Single-site ansatz state rho0(alpha).
Matrix bloch_state(const BlochVector& a);

// Tr[rho0^2] = (1 + |alpha|^2)/2, in (0.5, 1].
double purity(const BlochVector& a);

// ------------------------------- operations --------------------------------

// Tensor product of single-site states, first entry slowest index.
// Throws std::invalid_argument if any |alpha| > 1.
LocalOperator product_state(const std::vector<BlochVector>& alphas, const Support& support);

// Homogeneous product state on a support.
LocalOperator product_state(const BlochVector& alpha, const Support& support);

// Kronecker product with A slowest.
Matrix kron(const Matrix& a, const Matrix& b);

// Reorder the site indices of an n-site operator: site k of the result is
// site perm[k] of the input.
Matrix permute_sites(const Matrix& m, const std::vector<int>& perm);

// Tensor-extend A by identity onto `target` (which must contain A.support),
// permuting indices to match the target order.
LocalOperator embed(const LocalOperator& a, const Support& target);

// Superoperator action of a term on a density operator over the same support
// (term embedded first if needed): hamiltonian -> -i[h, rho];
// dissipator -> c rho c^dag - {c^dag c, rho}/2.
LocalOperator apply_term(const LindbladTerm& term, const LocalOperator& rho);

// Same action when term and rho share the support already (fast path).
Matrix apply_term_matrix(const LindbladTerm& term, const Matrix& rho);

// Hilbert-Schmidt inner product Tr[A^dag B].
Complex hs_inner(const Matrix& a, const Matrix& b);

// Tr_traced[ A * (I_keep (x) W) ] where W is the tensor product of the given
// per-site 2x2 weights on the traced-out sites. `keep` lists the site indices
// (positions within A's site ordering) that survive, in the order they should
// appear in the result.
Matrix weighted_partial_trace(const Matrix& a, int n_sites, const std::vector<int>& keep,
                              const std::vector<Matrix>& traced_weights);

}  // namespace bistab
