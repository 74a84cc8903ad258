#pragma once

// The single-interaction unitary family U(n) and its block asymptotics.
// Two sources: a physical Hamiltonian with an interaction-scaling exponent,
// or declared limit coefficients realized through a skew-Hermitian block
// generator.

#include <cstdint>
#include <functional>
#include <vector>

#include "qtraj/coefficients.hpp"
#include "qtraj/core.hpp"

namespace qtraj {

struct HamiltonianModel {
    Matrix h0;       // free Hamiltonian of the system
    Matrix h_field;  // free Hamiltonian of one field copy
    // H_int = sum_k V_k (x) W_k; scaled by n^exponent inside U(n).
    std::vector<std::pair<Matrix, Matrix>> interaction_ops;
    Real interaction_scaling_exponent = 0.5;

    void validate(const ToleranceProfile& tol = default_tolerances()) const;
    int system_dim() const { return static_cast<int>(h0.rows()); }
    int field_dim() const { return static_cast<int>(h_field.rows()); }
    Matrix interaction_hamiltonian() const;
};

enum class FamilySource { hamiltonian, direct_coefficients };

class UnitaryFamily {
  public:
    using Builder = std::function<Matrix(std::int64_t)>;

    UnitaryFamily(Builder build, FamilySource source, int system_dim,
                  int field_dim,
                  const ToleranceProfile& tol = default_tolerances());

    /// U(n); checked unitary on every call.
    Matrix operator()(std::int64_t n) const;

    FamilySource source() const { return source_; }
    int system_dim() const { return system_dim_; }
    int field_dim() const { return field_dim_; }

  private:
    Builder build_;
    FamilySource source_;
    int system_dim_;
    int field_dim_;
    ToleranceProfile tol_;
};

/// U(n) = exp(i (1/n) [H0 (x) I + I (x) H + n^eps H_int]).
Matrix build_unitary(const HamiltonianModel& model, std::int64_t n,
                     const ToleranceProfile& tol = default_tolerances());

UnitaryFamily family_from_hamiltonian(
    const HamiltonianModel& model,
    const ToleranceProfile& tol = default_tolerances());

/// Blocks [U_{0,column}, ..., U_{N,column}].
std::vector<Matrix> extract_blocks(const Matrix& u, int system_dim, int column);

/// Canonical family realizing declared coefficients: U(n) = exp(G(n)) with
/// G_00 = -iH/n, G_k0 = L_k0/sqrt(n), G_0k = -L_k0*/sqrt(n).
UnitaryFamily build_from_coefficients(
    const LimitCoefficients& coeffs,
    const ToleranceProfile& tol = default_tolerances());

/// Numerical estimate of the limit coefficients from block scalings,
/// Richardson-extrapolated over the probe list; throws when the estimated
/// residual exceeds the asymptotic-consistency threshold.
LimitCoefficients extract_limit_coefficients(
    const UnitaryFamily& family, const std::vector<std::int64_t>& n_probe,
    const ToleranceProfile& tol = default_tolerances());

}  // namespace qtraj
