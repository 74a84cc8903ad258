#pragma once

// Ensembles of sampled paths.  Discrete-chain and SDE runs share the layout:
// a common time grid of recorded instants and one state row per path per
// instant.  Jump bookkeeping is populated by the SDE integrator only;
// outcome sequences by the discrete sampler only.

#include <cstdint>
#include <functional>
#include <vector>

#include "qtraj/core.hpp"

namespace qtraj {

enum class TrajectoryKind { discrete, continuous };

struct JumpEvent {
    Real time;
    int channel;
    Real acceptance_uniform;  // the thinning draw on [0, K]
    bool accepted;
    Matrix pre_state;
    Matrix post_state;  // equals pre_state when rejected
};

struct RecordedPath {
    std::vector<Matrix> states;  // aligned with the ensemble time grid
    std::vector<std::uint8_t> outcomes;  // discrete: one outcome per step
    std::vector<JumpEvent> jumps;        // SDE: thinning candidates
    std::vector<int> jump_counts;        // SDE: accepted jumps per channel
    std::vector<Real> integrated_intensity;  // SDE: int (Re v_i)^+ ds
    std::uint64_t path_index = 0;
    Real max_renorm_correction = 0;  // discrete per-step drift repair
    Real max_coordinate = 0;         // SDE: sup |Re/Im entry| along the path
};

struct TrajectoryEnsemble {
    TrajectoryKind kind;
    std::vector<Real> time_grid;
    std::int64_t n = 0;  // discrete: steps per unit time
    std::vector<RecordedPath> paths;

    /// Index of the recorded instant governing time t under the
    /// piecewise-constant interpolation; throws when t precedes the grid.
    std::size_t grid_index(Real t) const;
};

struct StatSummary {
    Real mean = 0;
    Real std_error = 0;
    std::size_t count = 0;
};

using Statistic = std::function<Real(const Matrix&)>;

/// Mean and standard error of statistic(rho(t)) over the ensemble.
StatSummary empirical_law(const TrajectoryEnsemble& ensemble, Real t,
                          const Statistic& statistic);

/// Per-entry mean matrix and entrywise standard errors at time t.
struct MomentSummary {
    Matrix mean;
    RealMatrix std_error_re;
    RealMatrix std_error_im;
};
MomentSummary ensemble_moments(const TrajectoryEnsemble& ensemble, Real t);

/// Raw sample of statistic values at time t (for distribution comparisons).
std::vector<Real> statistic_sample(const TrajectoryEnsemble& ensemble, Real t,
                                   const Statistic& statistic);

}  // namespace qtraj
