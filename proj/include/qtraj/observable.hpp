#pragma once

// A measured observable of the field, given by its spectral decomposition
// A = sum_i lambda_i P_i.  Outcome i is a "jump" channel when the (0,0)
// entry of P_i vanishes and a "diffusive" channel otherwise.

#include <vector>

#include "qtraj/core.hpp"

namespace qtraj {

class SpectralObservable {
  public:
    /// Validates the projector axioms (Hermitian, idempotent, mutually
    /// orthogonal, complete) and permutes the list so that p^0_00 != 0.
    SpectralObservable(std::vector<Real> eigenvalues,
                       std::vector<Matrix> projectors,
                       const ToleranceProfile& tol = default_tolerances());

    int outcome_count() const { return static_cast<int>(projectors_.size()); }
    int field_dim() const { return static_cast<int>(projectors_[0].rows()); }

    Real eigenvalue(int i) const { return eigenvalues_.at(i); }
    const Matrix& projector(int i) const { return projectors_.at(i); }

    /// Entry (k, l) of P_i.
    Complex p(int i, int k, int l) const { return projectors_.at(i)(k, l); }

    /// Jump channels: i >= 1 with p^i_00 = 0 (within the zero threshold).
    const std::vector<int>& jump_channels() const { return jump_; }
    /// Diffusive channels: {1..p} \ jump set.
    const std::vector<int>& diffusive_channels() const { return diffusive_; }

    bool is_jump(int i) const;

  private:
    std::vector<Real> eigenvalues_;
    std::vector<Matrix> projectors_;
    std::vector<int> jump_;
    std::vector<int> diffusive_;
};

}  // namespace qtraj
