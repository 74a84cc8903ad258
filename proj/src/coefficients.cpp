#include "qtraj/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qtraj {

namespace {

Matrix sum_adjoint_products(const std::vector<Matrix>& lk0) {
    if (lk0.empty()) return Matrix();
    Matrix s = Matrix::Zero(lk0[0].rows(), lk0[0].cols());
    for (const auto& l : lk0) s += l.adjoint() * l;
    return s;
}

}  // namespace

LimitCoefficients::LimitCoefficients(Matrix l00, std::vector<Matrix> lk0,
                                     const ToleranceProfile& tol)
    : l00_(std::move(l00)), lk0_(std::move(lk0)) {
    const auto d = l00_.rows();
    if (l00_.cols() != d)
        throw DimensionError("L00 must be square");
    for (const auto& l : lk0_)
        if (l.rows() != d || l.cols() != d)
            throw DimensionError("noise coefficient dimensions disagree");

    // L00 = -(iH + 1/2 sum L*L)  =>  H = Herm(i (L00 + 1/2 sum L*L)).
    Matrix half = lk0_.empty() ? Matrix::Zero(d, d)
                               : Matrix(0.5 * sum_adjoint_products(lk0_));
    const Matrix raw_h = Complex(0, 1) * (l00_ + half);
    h_ = 0.5 * (raw_h + raw_h.adjoint());
    structure_residual_ =
        max_abs(l00_ + Complex(0, 1) * h_ + half);
    if (structure_residual_ > tol.structure)
        throw ValidationError(
            "coefficients violate the unitarity decomposition, residual " +
            std::to_string(structure_residual_));
}

LimitCoefficients LimitCoefficients::from_hamiltonian_part(
    const Matrix& h, std::vector<Matrix> lk0, const ToleranceProfile& tol) {
    if (!is_hermitian(h, tol.hermiticity))
        throw ValidationError("Hamiltonian part must be Hermitian");
    const auto d = h.rows();
    Matrix half = lk0.empty() ? Matrix::Zero(d, d)
                              : Matrix(0.5 * sum_adjoint_products(lk0));
    Matrix l00 = -(Complex(0, 1) * h + half);
    return LimitCoefficients(std::move(l00), std::move(lk0), tol);
}

Matrix truncate(const Matrix& m, Real k_trunc) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const Real re = std::clamp(m(i, j).real(), -k_trunc, k_trunc);
            const Real im = std::clamp(m(i, j).imag(), -k_trunc, k_trunc);
            out(i, j) = Complex(re, im);
        }
    return out;
}

LimitMaps::LimitMaps(LimitCoefficients coeffs, SpectralObservable obs,
                     Real k_trunc, const ToleranceProfile& tol)
    : coeffs_(std::move(coeffs)), obs_(std::move(obs)), k_trunc_(k_trunc),
      tol_(tol) {
    if (k_trunc_ <= 1.0)
        throw ValidationError("truncation level must exceed 1");
    if (obs_.field_dim() != coeffs_.noise_count() + 1)
        throw DimensionError("observable field dimension does not match coefficients");
}

Matrix LimitMaps::lindblad(const Matrix& rho) const {
    if (rho.rows() != coeffs_.dim() || rho.cols() != coeffs_.dim())
        throw DimensionError("lindblad: dimension mismatch");
    Matrix out = coeffs_.l00() * rho + rho * coeffs_.l00().adjoint();
    for (int k = 1; k <= coeffs_.noise_count(); ++k)
        out += coeffs_.l(k) * rho * coeffs_.l(k).adjoint();
    return out;
}

Matrix LimitMaps::jump_numerator(int i, const Matrix& rho) const {
    // E_0[(I (x) P_i) U (rho (x) beta) U* (I (x) P_i)] at leading order is
    // sum_{k,l >= 1} P_i(l, k) L_k0 rho L_l0*; the (l, k) indexing follows
    // from expanding the blocks in the compound basis.
    const int d = coeffs_.dim();
    Matrix out = Matrix::Zero(d, d);
    for (int k = 1; k <= coeffs_.noise_count(); ++k)
        for (int l = 1; l <= coeffs_.noise_count(); ++l) {
            const Complex w = obs_.p(i, l, k);
            if (w != Complex(0, 0))
                out += w * (coeffs_.l(k) * rho * coeffs_.l(l).adjoint());
        }
    return out;
}

Complex LimitMaps::v_complex(int i, const Matrix& rho) const {
    return jump_numerator(i, rho).trace();
}

Real LimitMaps::v(int i, const Matrix& rho) const {
    return v_complex(i, rho).real();
}

Matrix LimitMaps::g(int i, const Matrix& rho) const {
    const Matrix num = jump_numerator(i, rho);
    const Complex tr = num.trace();
    if (tr.real() <= tol_.denominator_floor)
        throw JumpUndefinedError("g_i undefined: jump intensity at the floor");
    return num / tr - rho;
}

Matrix LimitMaps::g_tilde(int i, const Matrix& rho) const {
    const Matrix num = jump_numerator(i, rho);
    const Real re_v = num.trace().real();
    if (re_v <= tol_.denominator_floor)
        throw JumpUndefinedError("g~_i undefined: jump intensity at the floor");
    return num / re_v;
}

Matrix LimitMaps::h(int i, const Matrix& rho) const {
    const Real p00 = obs_.p(i, 0, 0).real();
    if (p00 <= tol_.zero_p00)
        throw JumpUndefinedError("h_i requires a diffusive channel (p^i_00 > 0)");
    const int d = coeffs_.dim();
    Matrix num = Matrix::Zero(d, d);
    for (int k = 1; k <= coeffs_.noise_count(); ++k) {
        // The weights p^i_k0 and p^i_0k enter as P_i(0, k) and P_i(k, 0).
        num += obs_.p(i, 0, k) * (coeffs_.l(k) * rho);
        num += obs_.p(i, k, 0) * (rho * coeffs_.l(k).adjoint());
    }
    return (num - num.trace() * rho) / std::sqrt(p00);
}

}  // namespace qtraj
