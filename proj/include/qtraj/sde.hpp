#pragma once

// Jump-diffusion integrator for the limiting state equation.  Between jump
// candidates the truncated drift/diffusion fields are advanced by
// Euler-Maruyama; jumps arrive by thinning a rate-K Poisson clock per jump
// channel against the running intensity Re v_i, and an accepted jump
// replaces the state by the ratio form g~_i of the displaced state.
//
// Randomness consumption order (the reproducibility contract):
//   1. per jump channel, in increasing channel order, the candidate arrival
//      times on [0, horizon] via exponential(K) gaps;
//   2. then chronologically: one gaussian per diffusive direction (channel 0
//      first, then the diffusive channels in increasing order) per Euler
//      substep, and one uniform on [0, K] per jump candidate.

#include "qtraj/coefficients.hpp"
#include "qtraj/rng.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

struct SdeConfig {
    Real horizon = 1.0;
    std::int64_t steps_per_unit = 1000;  // Euler grid spacing 1/steps_per_unit
    std::int64_t record_stride = 1;      // record every k-th grid instant
    Real intensity_bound = 0;            // <= 0: use the certified bound
    int threads = 0;                     // ensemble fan-out; 0 = hardware
};

/// Certified dominating rate: on the truncation window |Re v_i| <=
/// ||M_i||_F * k * d * sqrt(2) with v_i(rho) = Re Tr[M_i rho] and
/// M_i = sum_kl p^i_(l,k) L_l* L_k.
Real certified_intensity_bound(const LimitMaps& maps);

/// Truncated drift in compensated-displacement form:
/// L(phi rho) - sum_{i in I} (numerator_i(phi rho) - Re v_i(phi rho) phi rho).
Matrix drift(const LimitMaps& maps, const Matrix& rho);

/// One Euler-Maruyama substep of length dt with the supplied standard
/// normals, ordered channel 0 first then the diffusive channels ascending.
Matrix euler_step(const LimitMaps& maps, const Matrix& rho, Real dt,
                  const std::vector<Real>& normals);

/// Integrate one path; states recorded on the Euler grid every record_stride
/// instants (instants 0 and the last always included).
RecordedPath integrate_path(const Matrix& rho0, const LimitMaps& maps,
                            const SdeConfig& config, Rng& rng);

/// Fan integrate_path over substreams of master_seed; deterministic and
/// independent of scheduling.
TrajectoryEnsemble integrate_ensemble(const Matrix& rho0,
                                      const LimitMaps& maps,
                                      const SdeConfig& config, int path_count,
                                      std::uint64_t master_seed);

}  // namespace qtraj
