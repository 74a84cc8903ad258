#include "qtraj/core.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qtraj {

int block_count(const Matrix& m, int system_dim) {
    if (m.rows() != m.cols())
        throw DimensionError("block operator must be square");
    if (system_dim <= 0 || m.rows() % system_dim != 0)
        throw DimensionError("matrix dimension not divisible into blocks");
    return static_cast<int>(m.rows()) / system_dim;
}

Matrix block(const Matrix& m, int block_dim, int i, int j) {
    if (m.rows() != m.cols())
        throw DimensionError("block operator must be square");
    if (block_dim <= 0 || m.rows() % block_dim != 0)
        throw DimensionError("matrix dimension not divisible into blocks");
    const int d = static_cast<int>(m.rows()) / block_dim;
    if (i < 0 || j < 0 || i >= block_dim || j >= block_dim)
        throw DimensionError("block index out of range");
    return m.block(i * d, j * d, d, d);
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
    const int da = static_cast<int>(a.rows());
    const int db = static_cast<int>(b.rows());
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw DimensionError("tensor_product expects square factors");
    Matrix out(da * db, da * db);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j)
            out.block(i * da, j * da, da, da) = b(i, j) * a;
    return out;
}

Matrix partial_trace_h0(const Matrix& w, int system_dim) {
    const int nb = block_count(w, system_dim);
    Matrix out = Matrix::Zero(system_dim, system_dim);
    for (int i = 0; i < nb; ++i)
        out += w.block(i * system_dim, i * system_dim, system_dim, system_dim);
    return out;
}

Matrix matrix_exponential(const Matrix& m, Real scale) {
    if (m.rows() != m.cols())
        throw DimensionError("matrix_exponential expects a square matrix");
    Matrix scaled = scale * m;
    return scaled.exp();
}

bool is_hermitian(const Matrix& m, Real tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, Real tol) {
    if (m.rows() != m.cols()) return false;
    const Matrix res = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
    return max_abs(res) <= tol;
}

std::vector<Real> hermitian_eigenvalues(const Matrix& m, Real herm_tol) {
    if (!is_hermitian(m, herm_tol))
        throw ValidationError("hermitian_eigenvalues: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<Real>(ev.data(), ev.data() + ev.size());
}

void DensityMatrix::validate(const Matrix& m, const ToleranceProfile& tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionError("density matrix must be square and non-empty");
    if (!is_hermitian(m, tol.hermiticity))
        throw ValidationError("density matrix is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > tol.trace_one ||
        std::abs(m.trace().imag()) > tol.trace_one)
        throw ValidationError("density matrix trace is not 1");
    const auto ev = hermitian_eigenvalues(m, tol.hermiticity * 1e2);
    if (ev.front() < tol.min_eigenvalue)
        throw ValidationError("density matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(Matrix m, const ToleranceProfile& tol)
    : m_(std::move(m)) {
    validate(m_, tol);
}

Matrix identity(int d) { return Matrix::Identity(d, d); }

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}

Matrix sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}

Matrix basis_projector(int d, int j) {
    if (j < 0 || j >= d) throw DimensionError("basis index out of range");
    Matrix m = Matrix::Zero(d, d);
    m(j, j) = 1;
    return m;
}

}  // namespace qtraj
