// hilbert.hpp — Tensor-product basis bookkeeping and elementary operators:
// mode descriptions, mixed-radix basis indexing, ladder/transition operators,
// and embedding of single-mode operators into the full product space.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace srqed {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// ----------------------------- Mode description -----------------------------

enum class ModeKind { Resonator, Qubit };

// One subsystem: a Fock-truncated resonator or a multi-level qubit.
// Frequencies are linear (nu = omega/2pi) in GHz throughout the public API.
struct ModeSpec {
    ModeKind kind{ModeKind::Qubit};
    int dim{2};
    // Resonator: one fundamental frequency. Qubit: the dim-1 transition
    // frequencies nu_{i,i+1}.
    std::vector<double> level_freqs_ghz;

    static ModeSpec resonator(double freq_ghz, int fock_cutoff = 3);
    static ModeSpec qubit(std::vector<double> transition_freqs_ghz);

    void validate() const;  // throws std::invalid_argument
};

// ------------------------------- Basis labels -------------------------------

// Occupation numbers, one per mode, in mode order.
struct BasisLabel {
    std::vector<int> occupations;

    BasisLabel() = default;
    BasisLabel(std::initializer_list<int> occ) : occupations(occ) {}
    explicit BasisLabel(std::vector<int> occ) : occupations(std::move(occ)) {}

    std::string to_string() const;  // e.g. "|1,0,2>"
};

// Row-major mixed-radix index, mode 0 most significant.
int basis_index(const BasisLabel& label, const std::vector<int>& dims);
BasisLabel basis_label(int index, const std::vector<int>& dims);

inline int total_dim(const std::vector<int>& dims) {
    int d = 1;
    for (int n : dims) d *= n;
    return d;
}

// --------------------------------- Operator ---------------------------------

// Dense operator tagged with the per-mode dimensions of its space.
struct Operator {
    std::vector<int> dims;
    Matrix mat;
    bool hermitian{false};

    Operator() = default;
    Operator(std::vector<int> d, Matrix m, bool herm = false);

    int dim() const { return static_cast<int>(mat.rows()); }
    Operator adjoint() const { return Operator(dims, mat.adjoint(), hermitian); }
};

bool is_hermitian(const Matrix& m, double tol = 1e-12);

// -------------------------------- StateVector -------------------------------

// Normalized amplitude vector over the product basis.
struct StateVector {
    std::vector<int> dims;
    Vector amps;

    StateVector() = default;
    // Normalizes on construction; throws on zero norm or size mismatch.
    StateVector(std::vector<int> d, Vector a);

    static StateVector basis_state(const std::vector<int>& dims, const BasisLabel& label);

    int dim() const { return static_cast<int>(amps.size()); }
    double norm() const { return amps.norm(); }
};

std::complex<double> inner(const StateVector& bra, const StateVector& ket);

// --------------------------- Elementary operators ----------------------------

// a with a[n-1, n] = sqrt(n); cutoff_dim is the truncated Fock dimension.
Operator annihilation_op(int cutoff_dim);

// |i><j| on a dim-level system. transition_op(2, 1, 0) is sigma_plus.
Operator transition_op(int dim, int i, int j);

// Diagonal number operator a^dag a.
Operator number_op(int cutoff_dim);

Operator identity_op(int dim);
Operator identity_op(const std::vector<int>& dims);

// I (x) ... (x) op (x) ... (x) I with op at mode_index, ordering consistent
// with basis_index.
Operator embed(const Operator& op, int mode_index, const std::vector<int>& dims);

}  // namespace srqed
