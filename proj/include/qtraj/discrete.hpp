#pragma once

// The measurement Markov chain: transition states and outcome probabilities
// for a single interaction-plus-measurement step, path sampling, and the
// n-scaled discrete Markov generator.

#include "qtraj/interaction.hpp"
#include "qtraj/observable.hpp"
#include "qtraj/rng.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

struct DiscreteStep {
    int outcome_index = 0;
    Matrix post_state;
    Real probability = 0;
    bool reachable = true;  // false when probability is at the floor
};

/// One measurement step from state rho through the compound unitary u with
/// the field prepared in |X_beta><X_beta|.  Computes the partial-trace form,
/// cross-checks the first-column block form, and validates the probability
/// sum.  Unreachable outcomes carry post_state = rho by convention.
std::vector<DiscreteStep> transition(
    const Matrix& rho, const Matrix& u, int beta_index,
    const SpectralObservable& obs,
    const ToleranceProfile& tol = default_tolerances());

/// Precomputed single-n machinery for the sampling loops.
class TransitionKernel {
  public:
    TransitionKernel(const UnitaryFamily& family, SpectralObservable obs,
                     std::int64_t n, int beta_index = 0,
                     const ToleranceProfile& tol = default_tolerances());

    std::vector<DiscreteStep> transition(const Matrix& rho) const;

    /// A_n f(rho) = n sum_i (f(post_i) - f(rho)) p^i(rho) over reachable i.
    Real generator(const Matrix& rho, const Statistic& f) const;

    std::int64_t n() const { return n_; }
    const SpectralObservable& observable() const { return obs_; }
    int system_dim() const { return system_dim_; }

  private:
    SpectralObservable obs_;
    std::int64_t n_;
    int beta_index_;
    int system_dim_;
    ToleranceProfile tol_;
    Matrix u_;
    std::vector<Matrix> column_blocks_;   // U_{k, beta}
    std::vector<Matrix> field_projectors_;  // I (x) P_i
};

/// Sample one path of floor(n * horizon) steps; outcome i drawn by
/// inverse-CDF with a single uniform per step.  States recorded every
/// record_stride steps (step 0 and the final step always included).
RecordedPath sample_path(const Matrix& rho0, const TransitionKernel& kernel,
                         Real horizon, Rng& rng,
                         std::int64_t record_stride = 1);

/// Fan out sample_path over substreams of master_seed; deterministic and
/// independent of scheduling.
TrajectoryEnsemble sample_ensemble(const Matrix& rho0,
                                   const TransitionKernel& kernel,
                                   Real horizon, int path_count,
                                   std::uint64_t master_seed,
                                   std::int64_t record_stride = 1,
                                   int threads = 0);

}  // namespace qtraj
