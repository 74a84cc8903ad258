#pragma once

// Verification layer: the jump-diffusion limit generator evaluated on a
// small family of test functions with closed-form derivatives, the sampled
// sup-gap between the n-scaled discrete generator and its limit, the
// deterministic master-equation oracle, and the statistical harness
// comparing discrete and SDE ensembles at finite times.

#include <string>
#include <utility>

#include "qtraj/discrete.hpp"
#include "qtraj/sde.hpp"

namespace qtraj {

/// f(rho) built from Re-trace pairings, with exact first and second
/// directional derivatives.
class TestFunction {
  public:
    enum class Kind { linear, quadratic, product };

    static TestFunction linear(Matrix b);
    static TestFunction quadratic(Matrix b);
    static TestFunction product(Matrix b1, Matrix b2);

    Real operator()(const Matrix& rho) const;
    /// Df_rho(mu).
    Real d1(const Matrix& rho, const Matrix& mu) const;
    /// D2f(mu, nu); constant in rho for this family.
    Real d2(const Matrix& mu, const Matrix& nu) const;

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    Statistic as_statistic() const;

  private:
    TestFunction(Kind kind, Matrix b1, Matrix b2, std::string name);
    Kind kind_;
    Matrix b1_, b2_;
    std::string name_;
};

/// Random state c |psi><psi| + (1 - c) I/d with psi a normalized complex
/// Gaussian vector and c uniform on [0, 1].
Matrix random_state(int dim, Rng& rng);

/// A^J f(rho) = Df(L(rho)) + 1/2 sum_{i in J u {0}} D2f(h_i, h_i)
///            + sum_{i in I} v_i [f(rho + g_i) - f(rho) - Df(g_i)],
/// jump terms skipped when v_i <= the denominator floor.
Real evaluate_limit_generator(const LimitMaps& maps, const TestFunction& f,
                              const Matrix& rho);

struct GeneratorReport {
    std::vector<std::int64_t> n_values;
    std::vector<Real> sup_gaps;  // sampled sup over the state set, per n
    Real slope = 0;              // least-squares log-gap vs log-n
    Real threshold = 0;
    bool pass = false;
};

/// Sampled sup-gap |A_n f - A^J f| over `state_sample` random states per n,
/// with the decay slope fitted in log-log coordinates.  Passes when the
/// slope is at most `slope_threshold` or every gap is below 1e-9.
GeneratorReport generator_gap(const UnitaryFamily& family,
                              const LimitMaps& maps, const TestFunction& f,
                              const std::vector<std::int64_t>& n_values,
                              int state_sample, std::uint64_t seed,
                              Real slope_threshold);

/// Solve d mu = L(mu) dt exactly via the real superoperator of L in the
/// [Re entries; Im entries] coordinatization and its matrix exponential.
Matrix master_solution(const LimitCoefficients& coeffs, const Matrix& rho0,
                       Real t);

/// Two-sample Kolmogorov-Smirnov distance (tie-aware).
Real ks_distance(std::vector<Real> a, std::vector<Real> b);

/// Two-sample Levy distance.  Unlike KS it metrizes weak convergence even
/// for atomic laws, where an O(1/n) atom shift keeps KS pinned at the atom
/// mass; the distribution check below therefore uses this metric.
Real levy_distance(std::vector<Real> a, std::vector<Real> b);

using DistributionDistance = Real (*)(std::vector<Real>, std::vector<Real>);

/// Same-law threshold for `metric`: max split-half distance of `sample`
/// over `reshuffles` random equal splits, rescaled from the split-half
/// effective size to that of an (m1, m2) comparison.
Real distribution_bootstrap_threshold(const std::vector<Real>& sample,
                                      std::size_t m1, std::size_t m2,
                                      int reshuffles, std::uint64_t seed,
                                      DistributionDistance metric);

inline Real ks_bootstrap_threshold(const std::vector<Real>& sample,
                                   std::size_t m1, std::size_t m2,
                                   int reshuffles, std::uint64_t seed) {
    return distribution_bootstrap_threshold(sample, m1, m2, reshuffles, seed,
                                            &ks_distance);
}

struct ConvergenceCheck {
    std::string statistic;
    Real time = 0;
    std::vector<Real> gaps;           // |discrete mean - sde mean| per n
    std::vector<Real> std_errors;     // discrete SE per n
    Real sde_std_error = 0;
    bool monotone = false;
    Real measured_mean_bias = 0;   // |mean at n_prev - mean at n_largest|
    Real measured_dist_bias = 0;   // Levy(sample at n_prev, n_largest)
    Real budget = 0;               // 4 sigma + measured bias + allowance
    bool within_budget = false;
    Real dist = 0;            // Levy distance at the largest n
    Real dist_threshold = 0;  // bootstrap + bias allowance
    bool dist_pass = false;
    bool pass = false;
};

struct ConvergenceReport {
    std::vector<ConvergenceCheck> checks;
    bool pass = false;
};

/// Finite-time comparison: per (time, statistic), discrete ensemble means
/// per n against the SDE ensemble mean.  The residual scheme bias at the
/// largest n is measured Richardson-style from the two largest discrete
/// ensembles and added to the 4-sigma band; `bias_budget` is an optional
/// extra caller-supplied allowance.
ConvergenceReport convergence_test(
    const std::vector<TrajectoryEnsemble>& discrete_by_n,
    const TrajectoryEnsemble& sde, const std::vector<Real>& times,
    const std::vector<std::pair<std::string, Statistic>>& statistics,
    Real bias_budget, std::uint64_t bootstrap_seed);

struct DerivativeCheck {
    Real max_d1_error = 0;  // closed form vs central differences
    Real max_d2_error = 0;
    bool pass = false;
};

/// Central-difference validation of the closed-form derivatives with steps
/// 1e-4 and 1e-5; relative error at most 1e-6.
DerivativeCheck finite_difference_check(const TestFunction& f,
                                        const Matrix& rho,
                                        const std::vector<Matrix>& directions);

/// Fitted constant C in E||rho_l - rho_r||_F^2 <= C (l - r)/n over the
/// recorded instants of a discrete ensemble (max over recorded pairs).
Real moment_bound_constant(const TrajectoryEnsemble& ensemble);

}  // namespace qtraj
