#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qtraj {

using Real    = double;
using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Numerical slack applied to the exact algebraic identities.
struct ToleranceProfile {
    Real hermiticity      = 1e-10;  // max |M - M*| entrywise
    Real trace_one        = 1e-10;  // |Tr rho - 1|
    Real min_eigenvalue   = -1e-9;  // PSD floor
    Real unitarity        = 1e-9;   // ||U U* - I||_max
    Real projector        = 1e-10;  // idempotence / orthogonality / completeness
    Real zero_p00         = 1e-12;  // p^i_00 treated as zero below this
    Real probability_floor = 1e-14; // outcomes below this are unreachable
    Real denominator_floor = 1e-12; // v_i denominators
    Real dual_path        = 1e-10;  // partial-trace form vs block form
    Real probability_sum  = 1e-10;  // |sum p^i - 1|
    Real structure           = 1e-8;   // ||L00 + iH + 1/2 sum L* L||
    Real asymptotic_residual = 1e-3; // coefficient-extraction residual at n = 1e6
};

inline const ToleranceProfile& default_tolerances() {
    static const ToleranceProfile tol{};
    return tol;
}

}  // namespace qtraj
