#pragma once

// Limit coefficients of the single-interaction unitary and the derived maps
// driving the continuous-time dynamics: the Lindblad-type map L, per-channel
// jump intensities v_i, jump displacements g_i (and their ratio form), and
// diffusive directions h_i.

#include <optional>
#include <vector>

#include "qtraj/observable.hpp"

namespace qtraj {

struct JumpUndefinedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class LimitCoefficients {
  public:
    /// From the drift block and noise blocks; the self-adjoint part H is
    /// recovered from L00 = -(iH + 1/2 sum_k L_k0* L_k0) and checked.
    LimitCoefficients(Matrix l00, std::vector<Matrix> lk0,
                      const ToleranceProfile& tol = default_tolerances());

    /// From Hamiltonian part and noise blocks; L00 is derived.
    static LimitCoefficients from_hamiltonian_part(
        const Matrix& h, std::vector<Matrix> lk0,
        const ToleranceProfile& tol = default_tolerances());

    const Matrix& l00() const { return l00_; }
    const Matrix& l(int k) const { return lk0_.at(k - 1); }  // k = 1..N
    int noise_count() const { return static_cast<int>(lk0_.size()); }
    int dim() const { return static_cast<int>(l00_.rows()); }
    const Matrix& hamiltonian() const { return h_; }

    /// Residual of the structural decomposition, ||L00 + iH + 1/2 sum L*L||_max
    /// with H the Hermitian part of i(L00 + 1/2 sum L*L).
    Real structure_residual() const { return structure_residual_; }

    const std::vector<Real>& extraction_residuals() const { return residuals_; }
    void set_extraction_residuals(std::vector<Real> r) { residuals_ = std::move(r); }

  private:
    Matrix l00_;
    std::vector<Matrix> lk0_;
    Matrix h_;
    Real structure_residual_ = 0;
    std::vector<Real> residuals_;
};

/// Coordinatewise clamp of Re and Im parts to [-k, k]; identity on states
/// for k > 1.
Matrix truncate(const Matrix& m, Real k_trunc);

class LimitMaps {
  public:
    LimitMaps(LimitCoefficients coeffs, SpectralObservable obs,
              Real k_trunc = 2.0,
              const ToleranceProfile& tol = default_tolerances());

    const LimitCoefficients& coefficients() const { return coeffs_; }
    const SpectralObservable& observable() const { return obs_; }
    Real truncation_level() const { return k_trunc_; }
    const ToleranceProfile& tolerances() const { return tol_; }

    /// L(rho) = L00 rho + rho L00* + sum_k L_k0 rho L_k0*.
    Matrix lindblad(const Matrix& rho) const;

    /// Numerator of the jump channel i: sum_kl p^i entries weighting
    /// L_k0 rho L_l0*.
    Matrix jump_numerator(int i, const Matrix& rho) const;

    /// v_i(rho): Re of the trace of the jump numerator.  The imaginary
    /// residual is returned alongside for validation.
    Real v(int i, const Matrix& rho) const;
    Complex v_complex(int i, const Matrix& rho) const;

    /// g_i(rho) = numerator / Tr[numerator] - rho; requires v_i above floor.
    Matrix g(int i, const Matrix& rho) const;

    /// g~_i(rho) = numerator / Re(v_i); on states g~ - rho = g.
    Matrix g_tilde(int i, const Matrix& rho) const;

    /// h_i(rho) for diffusive channels (i in J union {0}).
    Matrix h(int i, const Matrix& rho) const;

    /// Truncated composites F^k = F(phi^k(.)).
    Matrix truncated(const Matrix& rho) const { return truncate(rho, k_trunc_); }

  private:
    LimitCoefficients coeffs_;
    SpectralObservable obs_;
    Real k_trunc_;
    ToleranceProfile tol_;
};

}  // namespace qtraj
