#include "qtraj/interaction.hpp"

#include <cmath>
#include <string>

namespace qtraj {

void HamiltonianModel::validate(const ToleranceProfile& tol) const {
    if (h0.rows() != h0.cols() || h_field.rows() != h_field.cols())
        throw DimensionError("free Hamiltonians must be square");
    if (!is_hermitian(h0, tol.hermiticity))
        throw ValidationError("system Hamiltonian is not Hermitian");
    if (!is_hermitian(h_field, tol.hermiticity))
        throw ValidationError("field Hamiltonian is not Hermitian");
    for (const auto& [v, w] : interaction_ops)
        if (v.rows() != h0.rows() || v.cols() != h0.cols() ||
            w.rows() != h_field.rows() || w.cols() != h_field.cols())
            throw DimensionError("interaction operator dimensions disagree");
    if (!is_hermitian(interaction_hamiltonian(), tol.hermiticity))
        throw ValidationError("interaction Hamiltonian is not Hermitian");
}

Matrix HamiltonianModel::interaction_hamiltonian() const {
    const int d = system_dim() * field_dim();
    Matrix h_int = Matrix::Zero(d, d);
    for (const auto& [v, w] : interaction_ops) h_int += tensor_product(v, w);
    return h_int;
}

UnitaryFamily::UnitaryFamily(Builder build, FamilySource source,
                             int system_dim, int field_dim,
                             const ToleranceProfile& tol)
    : build_(std::move(build)), source_(source), system_dim_(system_dim),
      field_dim_(field_dim), tol_(tol) {}

Matrix UnitaryFamily::operator()(std::int64_t n) const {
    if (n <= 0) throw DimensionError("step count must be positive");
    Matrix u = build_(n);
    if (!is_unitary(u, tol_.unitarity))
        throw ValidationError("family produced a non-unitary operator at n = " +
                              std::to_string(n));
    return u;
}

Matrix build_unitary(const HamiltonianModel& model, std::int64_t n,
                     const ToleranceProfile& tol) {
    model.validate(tol);
    const Matrix h_tot =
        tensor_product(model.h0, identity(model.field_dim())) +
        tensor_product(identity(model.system_dim()), model.h_field) +
        std::pow(static_cast<Real>(n), model.interaction_scaling_exponent) *
            model.interaction_hamiltonian();
    return matrix_exponential(Complex(0, 1) * h_tot, 1.0 / static_cast<Real>(n));
}

UnitaryFamily family_from_hamiltonian(const HamiltonianModel& model,
                                      const ToleranceProfile& tol) {
    model.validate(tol);
    return UnitaryFamily(
        [model, tol](std::int64_t n) { return build_unitary(model, n, tol); },
        FamilySource::hamiltonian, model.system_dim(), model.field_dim(), tol);
}

std::vector<Matrix> extract_blocks(const Matrix& u, int system_dim, int column) {
    const int nb = block_count(u, system_dim);
    if (column < 0 || column >= nb)
        throw DimensionError("block column out of range");
    std::vector<Matrix> out;
    out.reserve(nb);
    for (int i = 0; i < nb; ++i) out.push_back(block(u, nb, i, column));
    return out;
}

UnitaryFamily build_from_coefficients(const LimitCoefficients& coeffs,
                                      const ToleranceProfile& tol) {
    const int sys = coeffs.dim();
    const int field = coeffs.noise_count() + 1;
    const Matrix h = coeffs.hamiltonian();
    std::vector<Matrix> noise;
    for (int k = 1; k < field; ++k) noise.push_back(coeffs.l(k));

    auto builder = [sys, field, h, noise](std::int64_t n) {
        const Real inv_sqrt = 1.0 / std::sqrt(static_cast<Real>(n));
        Matrix g = Matrix::Zero(sys * field, sys * field);
        g.block(0, 0, sys, sys) = -Complex(0, 1) * h / static_cast<Real>(n);
        for (int k = 1; k < field; ++k) {
            g.block(k * sys, 0, sys, sys) = inv_sqrt * noise[k - 1];
            g.block(0, k * sys, sys, sys) = -inv_sqrt * noise[k - 1].adjoint();
        }
        return matrix_exponential(g);
    };
    return UnitaryFamily(std::move(builder), FamilySource::direct_coefficients,
                         sys, field, tol);
}

LimitCoefficients extract_limit_coefficients(
    const UnitaryFamily& family, const std::vector<std::int64_t>& n_probe,
    const ToleranceProfile& tol) {
    if (n_probe.size() < 2)
        throw DimensionError("need at least two probe values");
    for (std::size_t i = 1; i < n_probe.size(); ++i)
        if (n_probe[i] <= n_probe[i - 1])
            throw DimensionError("probe values must be increasing");

    const int sys = family.system_dim();
    const int field = family.field_dim();
    const std::int64_t n1 = n_probe[n_probe.size() - 2];
    const std::int64_t n2 = n_probe.back();

    auto scaled_blocks = [&](std::int64_t n) {
        const Matrix u = family(n);
        std::vector<Matrix> out;
        out.push_back(static_cast<Real>(n) *
                      (block(u, field, 0, 0) - identity(sys)));
        for (int k = 1; k < field; ++k)
            out.push_back(std::sqrt(static_cast<Real>(n)) *
                          block(u, field, k, 0));
        return out;
    };

    const auto a1 = scaled_blocks(n1);
    const auto a2 = scaled_blocks(n2);

    // Richardson under an err ~ c/n model: limit = (n2 a2 - n1 a1)/(n2 - n1).
    std::vector<Matrix> extrap;
    std::vector<Real> residuals;
    Real worst = 0;
    for (std::size_t i = 0; i < a2.size(); ++i) {
        const Matrix est = (static_cast<Real>(n2) * a2[i] -
                            static_cast<Real>(n1) * a1[i]) /
                           static_cast<Real>(n2 - n1);
        const Real res = max_abs(est - a2[i]);
        extrap.push_back(est);
        residuals.push_back(res);
        worst = std::max(worst, res);
    }
    if (worst > tol.asymptotic_residual)
        throw ValidationError(
            "family does not satisfy the asymptotic normalization, residual " +
            std::to_string(worst));

    // Extraction noise can exceed the exact-arithmetic structural tolerance.
    ToleranceProfile relaxed = tol;
    relaxed.structure = std::max(tol.structure, 10.0 * worst + 1e-12);
    std::vector<Matrix> lk0(extrap.begin() + 1, extrap.end());
    LimitCoefficients coeffs(extrap[0], std::move(lk0), relaxed);
    coeffs.set_extraction_residuals(std::move(residuals));
    return coeffs;
}

}  // namespace qtraj
