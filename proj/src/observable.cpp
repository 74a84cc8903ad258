#include "qtraj/observable.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace qtraj {

SpectralObservable::SpectralObservable(std::vector<Real> eigenvalues,
                                       std::vector<Matrix> projectors,
                                       const ToleranceProfile& tol)
    : eigenvalues_(std::move(eigenvalues)), projectors_(std::move(projectors)) {
    if (projectors_.empty() || eigenvalues_.size() != projectors_.size())
        throw DimensionError("observable needs matching eigenvalues and projectors");

    const auto d = projectors_[0].rows();
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const Matrix& P = projectors_[i];
        if (P.rows() != d || P.cols() != d)
            throw DimensionError("projector dimensions disagree");
        if (!is_hermitian(P, tol.projector))
            throw ValidationError("projector " + std::to_string(i) + " is not Hermitian");
        if (max_abs(P * P - P) > tol.projector)
            throw ValidationError("projector " + std::to_string(i) + " is not idempotent");
        for (std::size_t j = 0; j < i; ++j)
            if (max_abs(P * projectors_[j]) > tol.projector)
                throw ValidationError("projectors " + std::to_string(i) + " and " +
                                      std::to_string(j) + " are not orthogonal");
    }
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& P : projectors_) sum += P;
    if (max_abs(sum - Matrix::Identity(d, d)) > tol.projector)
        throw ValidationError("projectors do not sum to the identity");

    // Put a projector with p_00 != 0 in slot 0; completeness guarantees one exists.
    if (std::abs(projectors_[0](0, 0)) <= tol.zero_p00) {
        for (std::size_t i = 1; i < projectors_.size(); ++i) {
            if (std::abs(projectors_[i](0, 0)) > tol.zero_p00) {
                std::swap(projectors_[0], projectors_[i]);
                std::swap(eigenvalues_[0], eigenvalues_[i]);
                break;
            }
        }
    }
    if (std::abs(projectors_[0](0, 0)) <= tol.zero_p00)
        throw ValidationError("no projector has a nonzero (0,0) entry");

    for (int i = 1; i < outcome_count(); ++i) {
        if (std::abs(projectors_[i](0, 0).real()) <= tol.zero_p00)
            jump_.push_back(i);
        else
            diffusive_.push_back(i);
    }
}

bool SpectralObservable::is_jump(int i) const {
    return std::find(jump_.begin(), jump_.end(), i) != jump_.end();
}

}  // namespace qtraj
