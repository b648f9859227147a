#include "srqed/hilbert.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace srqed {

// ----------------------------- Mode description -----------------------------

ModeSpec ModeSpec::resonator(double freq_ghz, int fock_cutoff) {
    ModeSpec m;
    m.kind = ModeKind::Resonator;
    m.dim = fock_cutoff + 1;
    m.level_freqs_ghz = {freq_ghz};
    m.validate();
    return m;
}

ModeSpec ModeSpec::qubit(std::vector<double> transition_freqs_ghz) {
    ModeSpec m;
    m.kind = ModeKind::Qubit;
    m.dim = static_cast<int>(transition_freqs_ghz.size()) + 1;
    m.level_freqs_ghz = std::move(transition_freqs_ghz);
    m.validate();
    return m;
}

void ModeSpec::validate() const {
    if (dim < 2) throw std::invalid_argument("ModeSpec: dim must be >= 2");
    const std::size_t expected =
        kind == ModeKind::Resonator ? 1u : static_cast<std::size_t>(dim - 1);
    if (level_freqs_ghz.size() != expected) {
        throw std::invalid_argument("ModeSpec: wrong number of level frequencies");
    }
    for (double f : level_freqs_ghz) {
        if (!std::isfinite(f) || f <= 0.0) {
            throw std::invalid_argument("ModeSpec: frequencies must be finite and > 0");
        }
    }
}

// ------------------------------- Basis labels --------------------------------

std::string BasisLabel::to_string() const {
    std::ostringstream os;
    os << '|';
    for (std::size_t i = 0; i < occupations.size(); ++i) {
        if (i) os << ',';
        os << occupations[i];
    }
    os << '>';
    return os.str();
}

int basis_index(const BasisLabel& label, const std::vector<int>& dims) {
    if (label.occupations.size() != dims.size()) {
        throw std::invalid_argument("basis_index: label/dims length mismatch");
    }
    int idx = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const int occ = label.occupations[k];
        if (occ < 0 || occ >= dims[k]) {
            throw std::out_of_range("basis_index: occupation out of range for mode " +
                                    std::to_string(k));
        }
        idx = idx * dims[k] + occ;
    }
    return idx;
}

BasisLabel basis_label(int index, const std::vector<int>& dims) {
    const int d = total_dim(dims);
    if (index < 0 || index >= d) {
        throw std::out_of_range("basis_label: index out of range");
    }
    BasisLabel label;
    label.occupations.resize(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        label.occupations[k] = index % dims[k];
        index /= dims[k];
    }
    return label;
}

// --------------------------------- Operator ----------------------------------

Operator::Operator(std::vector<int> d, Matrix m, bool herm)
    : dims(std::move(d)), mat(std::move(m)), hermitian(herm) {
    if (mat.rows() != mat.cols()) {
        throw std::invalid_argument("Operator: matrix must be square");
    }
    if (mat.rows() != total_dim(dims)) {
        throw std::invalid_argument("Operator: matrix size does not match dims");
    }
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// -------------------------------- StateVector --------------------------------

StateVector::StateVector(std::vector<int> d, Vector a) : dims(std::move(d)), amps(std::move(a)) {
    if (amps.size() != total_dim(dims)) {
        throw std::invalid_argument("StateVector: amplitude size does not match dims");
    }
    const double n = amps.norm();
    if (n < 1e-14) throw std::invalid_argument("StateVector: zero norm");
    amps /= n;
}

StateVector StateVector::basis_state(const std::vector<int>& dims, const BasisLabel& label) {
    Vector v = Vector::Zero(total_dim(dims));
    v(basis_index(label, dims)) = 1.0;
    return StateVector(dims, std::move(v));
}

std::complex<double> inner(const StateVector& bra, const StateVector& ket) {
    if (bra.dims != ket.dims) {
        throw std::invalid_argument("inner: dimension mismatch");
    }
    return bra.amps.dot(ket.amps);  // Eigen dot conjugates the left argument
}

// --------------------------- Elementary operators ----------------------------

Operator annihilation_op(int cutoff_dim) {
    if (cutoff_dim < 2) throw std::invalid_argument("annihilation_op: dim must be >= 2");
    Matrix m = Matrix::Zero(cutoff_dim, cutoff_dim);
    for (int n = 1; n < cutoff_dim; ++n) {
        m(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return Operator({cutoff_dim}, std::move(m));
}

Operator transition_op(int dim, int i, int j) {
    if (dim < 2) throw std::invalid_argument("transition_op: dim must be >= 2");
    if (i < 0 || i >= dim || j < 0 || j >= dim) {
        throw std::out_of_range("transition_op: level index out of range");
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return Operator({dim}, std::move(m), i == j);
}

Operator number_op(int cutoff_dim) {
    if (cutoff_dim < 2) throw std::invalid_argument("number_op: dim must be >= 2");
    Matrix m = Matrix::Zero(cutoff_dim, cutoff_dim);
    for (int n = 0; n < cutoff_dim; ++n) m(n, n) = static_cast<double>(n);
    return Operator({cutoff_dim}, std::move(m), true);
}

Operator identity_op(int dim) {
    return Operator({dim}, Matrix::Identity(dim, dim), true);
}

Operator identity_op(const std::vector<int>& dims) {
    const int d = total_dim(dims);
    return Operator(dims, Matrix::Identity(d, d), true);
}

Operator embed(const Operator& op, int mode_index, const std::vector<int>& dims) {
    if (mode_index < 0 || mode_index >= static_cast<int>(dims.size())) {
        throw std::invalid_argument("embed: mode index out of range");
    }
    if (op.dim() != dims[mode_index]) {
        throw std::invalid_argument("embed: operator dim does not match target mode");
    }

    // Index factorization i = left*(d_mode*right_dim) + row*right_dim + right,
    // with right_dim the product of dims after mode_index.
    int left_dim = 1, right_dim = 1;
    for (int k = 0; k < mode_index; ++k) left_dim *= dims[k];
    for (int k = mode_index + 1; k < static_cast<int>(dims.size()); ++k) right_dim *= dims[k];
    const int d_mode = dims[mode_index];

    const int d = left_dim * d_mode * right_dim;
    Matrix full = Matrix::Zero(d, d);
    for (int left = 0; left < left_dim; ++left) {
        for (int row = 0; row < d_mode; ++row) {
            for (int col = 0; col < d_mode; ++col) {
                const Complex v = op.mat(row, col);
                if (v == Complex(0.0, 0.0)) continue;
                const int base_r = (left * d_mode + row) * right_dim;
                const int base_c = (left * d_mode + col) * right_dim;
                for (int right = 0; right < right_dim; ++right) {
                    full(base_r + right, base_c + right) = v;
                }
            }
        }
    }
    return Operator(dims, std::move(full), op.hermitian);
}

}  // namespace srqed
