#pragma once

// Dense complex linear algebra on small Hilbert spaces: density-matrix
// validation, tensor-product block layout, partial trace, matrix exponential.
//
// The compound space H0 (x) H of dimensions (K+1) and (N+1) uses the basis
// ordering in which the H0 index varies fastest: basis vector (a, i) sits at
// flat index i*(K+1) + a.  A matrix on the compound space is then an
// (N+1) x (N+1) grid of (K+1) x (K+1) blocks.

#include <stdexcept>
#include <vector>

#include "qtraj/types.hpp"

namespace qtraj {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// View of block (i, j) of a compound-space matrix, as a fresh (K+1)^2 matrix.
Matrix block(const Matrix& m, int block_dim, int i, int j);

/// Number of blocks per side; throws if the matrix is not square or not
/// divisible into system_dim-sized blocks.
int block_count(const Matrix& m, int system_dim);

/// Kronecker layout per the compound basis: block (i, j) of the result is
/// b(i, j) * a.
Matrix tensor_product(const Matrix& a, const Matrix& b);

/// Sum of diagonal blocks: the reduction of a compound-space operator to H0.
Matrix partial_trace_h0(const Matrix& w, int system_dim);

/// exp(scale * m) for square complex m.
Matrix matrix_exponential(const Matrix& m, Real scale = 1.0);

/// Ascending eigenvalues of a Hermitian matrix; rejects non-Hermitian input.
std::vector<Real> hermitian_eigenvalues(const Matrix& m, Real herm_tol = 1e-8);

inline Real max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Matrix& m, Real tol);
bool is_unitary(const Matrix& m, Real tol);

/// Validated state on H0.
class DensityMatrix {
  public:
    DensityMatrix(Matrix m, const ToleranceProfile& tol = default_tolerances());

    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    /// Validation residuals without construction.
    static void validate(const Matrix& m,
                         const ToleranceProfile& tol = default_tolerances());

  private:
    Matrix m_;
};

// Small fixed operators used throughout the experiments.
Matrix identity(int d);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix sigma_plus();   // |1><0|
Matrix sigma_minus();  // |0><1|
Matrix basis_projector(int d, int j);  // |X_j><X_j|

}  // namespace qtraj
