#include "qtraj/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

namespace qtraj {

namespace {

Real re_trace(const Matrix& b, const Matrix& m) {
    return (b * m).trace().real();
}

}  // namespace

TestFunction::TestFunction(Kind kind, Matrix b1, Matrix b2, std::string name)
    : kind_(kind), b1_(std::move(b1)), b2_(std::move(b2)),
      name_(std::move(name)) {
    if (b1_.rows() != b1_.cols() || b2_.rows() != b2_.cols() ||
        b1_.rows() != b2_.rows())
        throw DimensionError("test-function parameters must be square and equal");
}

TestFunction TestFunction::linear(Matrix b) {
    Matrix zero = Matrix::Zero(b.rows(), b.cols());
    return TestFunction(Kind::linear, std::move(b), std::move(zero), "linear");
}

TestFunction TestFunction::quadratic(Matrix b) {
    Matrix copy = b;
    return TestFunction(Kind::quadratic, std::move(b), std::move(copy),
                        "quadratic");
}

TestFunction TestFunction::product(Matrix b1, Matrix b2) {
    return TestFunction(Kind::product, std::move(b1), std::move(b2), "product");
}

Real TestFunction::operator()(const Matrix& rho) const {
    switch (kind_) {
        case Kind::linear:
            return re_trace(b1_, rho);
        case Kind::quadratic: {
            const Real x = re_trace(b1_, rho);
            return x * x;
        }
        case Kind::product:
            return re_trace(b1_, rho) * re_trace(b2_, rho);
    }
    return 0;
}

Real TestFunction::d1(const Matrix& rho, const Matrix& mu) const {
    switch (kind_) {
        case Kind::linear:
            return re_trace(b1_, mu);
        case Kind::quadratic:
            return 2.0 * re_trace(b1_, rho) * re_trace(b1_, mu);
        case Kind::product:
            return re_trace(b1_, mu) * re_trace(b2_, rho) +
                   re_trace(b1_, rho) * re_trace(b2_, mu);
    }
    return 0;
}

Real TestFunction::d2(const Matrix& mu, const Matrix& nu) const {
    switch (kind_) {
        case Kind::linear:
            return 0;
        case Kind::quadratic:
            return 2.0 * re_trace(b1_, mu) * re_trace(b1_, nu);
        case Kind::product:
            return re_trace(b1_, mu) * re_trace(b2_, nu) +
                   re_trace(b1_, nu) * re_trace(b2_, mu);
    }
    return 0;
}

Statistic TestFunction::as_statistic() const {
    return [f = *this](const Matrix& rho) { return f(rho); };
}

Matrix random_state(int dim, Rng& rng) {
    Eigen::VectorXcd psi(dim);
    for (int i = 0; i < dim; ++i)
        psi(i) = Complex(rng.gaussian(), rng.gaussian());
    psi.normalize();
    const Real c = rng.uniform01();
    Matrix rho = c * (psi * psi.adjoint()) +
                 ((1.0 - c) / static_cast<Real>(dim)) * identity(dim);
    return 0.5 * (rho + rho.adjoint());
}

Real evaluate_limit_generator(const LimitMaps& maps, const TestFunction& f,
                              const Matrix& rho) {
    Real out = f.d1(rho, maps.lindblad(rho));
    const auto& obs = maps.observable();
    Matrix h0 = maps.h(0, rho);
    out += 0.5 * f.d2(h0, h0);
    for (int i : obs.diffusive_channels()) {
        const Matrix hi = maps.h(i, rho);
        out += 0.5 * f.d2(hi, hi);
    }
    const Real floor = maps.tolerances().denominator_floor;
    for (int i : obs.jump_channels()) {
        const Real vi = maps.v(i, rho);
        if (vi <= floor) continue;
        const Matrix gi = maps.g(i, rho);
        out += vi * (f(rho + gi) - f(rho) - f.d1(rho, gi));
    }
    return out;
}

GeneratorReport generator_gap(const UnitaryFamily& family,
                              const LimitMaps& maps, const TestFunction& f,
                              const std::vector<std::int64_t>& n_values,
                              int state_sample, std::uint64_t seed,
                              Real slope_threshold) {
    if (n_values.size() < 2)
        throw DimensionError("generator_gap needs at least two n values");
    Rng rng(seed);
    std::vector<Matrix> states;
    states.reserve(state_sample);
    for (int s = 0; s < state_sample; ++s)
        states.push_back(random_state(family.system_dim(), rng));

    std::vector<Real> limits;
    limits.reserve(states.size());
    for (const auto& rho : states)
        limits.push_back(evaluate_limit_generator(maps, f, rho));

    GeneratorReport report;
    report.n_values = n_values;
    report.threshold = slope_threshold;
    const Statistic stat = f.as_statistic();
    for (std::int64_t n : n_values) {
        TransitionKernel kernel(family, maps.observable(), n, 0,
                                maps.tolerances());
        Real gap = 0;
        for (std::size_t s = 0; s < states.size(); ++s)
            gap = std::max(gap,
                           std::abs(kernel.generator(states[s], stat) -
                                    limits[s]));
        report.sup_gaps.push_back(gap);
    }

    // Least-squares slope of log(gap) against log(n).
    const auto m = static_cast<Real>(n_values.size());
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool all_tiny = true;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const Real x = std::log(static_cast<Real>(n_values[i]));
        const Real y = std::log(std::max(report.sup_gaps[i], 1e-300));
        if (report.sup_gaps[i] >= 1e-9) all_tiny = false;
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    report.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    report.pass = all_tiny || report.slope <= slope_threshold;
    return report;
}

Matrix master_solution(const LimitCoefficients& coeffs, const Matrix& rho0,
                       Real t) {
    if (t < 0) throw DimensionError("master_solution: t must be nonnegative");
    const int d = coeffs.dim();
    if (rho0.rows() != d || rho0.cols() != d)
        throw DimensionError("master_solution: dimension mismatch");
    const int dd = d * d;
    const int p = 2 * dd;

    auto lindblad = [&](const Matrix& m) {
        Matrix out = coeffs.l00() * m + m * coeffs.l00().adjoint();
        for (int k = 1; k <= coeffs.noise_count(); ++k)
            out += coeffs.l(k) * m * coeffs.l(k).adjoint();
        return out;
    };

    auto to_coords = [&](const Matrix& m) {
        Eigen::VectorXd x(p);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                x(i * d + j) = m(i, j).real();
                x(dd + i * d + j) = m(i, j).imag();
            }
        return x;
    };
    auto from_coords = [&](const Eigen::VectorXd& x) {
        Matrix m(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                m(i, j) = Complex(x(i * d + j), x(dd + i * d + j));
        return m;
    };

    Eigen::MatrixXd superop(p, p);
    for (int col = 0; col < p; ++col) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(p);
        e(col) = 1.0;
        superop.col(col) = to_coords(lindblad(from_coords(e)));
    }
    const Eigen::MatrixXd propagator = (t * superop).exp();
    return from_coords(propagator * to_coords(rho0));
}

Real ks_distance(std::vector<Real> a, std::vector<Real> b) {
    if (a.empty() || b.empty())
        throw DimensionError("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const Real na = static_cast<Real>(a.size());
    const Real nb = static_cast<Real>(b.size());
    std::size_t ia = 0, ib = 0;
    Real d = 0;
    while (ia < a.size() || ib < b.size()) {
        // Consume every copy of the smallest outstanding value on both
        // sides before comparing the empirical CDFs (tie handling).
        Real x;
        if (ib == b.size() || (ia < a.size() && a[ia] <= b[ib]))
            x = a[ia];
        else
            x = b[ib];
        while (ia < a.size() && a[ia] == x) ++ia;
        while (ib < b.size() && b[ib] == x) ++ib;
        d = std::max(d, std::abs(static_cast<Real>(ia) / na -
                                 static_cast<Real>(ib) / nb));
    }
    return d;
}

Real levy_distance(std::vector<Real> a, std::vector<Real> b) {
    if (a.empty() || b.empty())
        throw DimensionError("levy_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto cdf = [](const std::vector<Real>& s, Real x) {
        const auto it = std::upper_bound(s.begin(), s.end(), x);
        return static_cast<Real>(it - s.begin()) /
               static_cast<Real>(s.size());
    };
    // F1 and F2 are within Levy distance eps iff for every x,
    // F1(x - eps) - eps <= F2(x) <= F1(x + eps) + eps; checking at the
    // sample points of each side suffices for step functions.
    const auto fits = [&](Real eps) {
        for (Real x : a)
            if (cdf(a, x) > cdf(b, x + eps) + eps ||
                cdf(b, x - eps) - eps > cdf(a, x))
                return false;
        for (Real x : b)
            if (cdf(b, x) > cdf(a, x + eps) + eps ||
                cdf(a, x - eps) - eps > cdf(b, x))
                return false;
        return true;
    };
    if (fits(0)) return 0;
    Real lo = 0, hi = std::max(std::abs(a.front() - b.back()),
                               std::abs(b.front() - a.back())) +
                      1.0;
    for (int iter = 0; iter < 60 && hi - lo > 1e-12; ++iter) {
        const Real mid = 0.5 * (lo + hi);
        (fits(mid) ? hi : lo) = mid;
    }
    return hi;
}

Real distribution_bootstrap_threshold(const std::vector<Real>& sample,
                                      std::size_t m1, std::size_t m2,
                                      int reshuffles, std::uint64_t seed,
                                      DistributionDistance metric) {
    if (sample.size() < 4)
        throw DimensionError("bootstrap needs at least four points");
    Rng rng(seed);
    std::vector<std::size_t> order(sample.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t half = sample.size() / 2;
    Real worst = 0;
    for (int r = 0; r < reshuffles; ++r) {
        // Fisher-Yates with our own uniform source for reproducibility.
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(
                rng.uniform(static_cast<Real>(i + 1)));
            std::swap(order[i], order[std::min(j, i)]);
        }
        std::vector<Real> x, y;
        x.reserve(half);
        y.reserve(sample.size() - half);
        for (std::size_t i = 0; i < sample.size(); ++i)
            (i < half ? x : y).push_back(sample[order[i]]);
        worst = std::max(worst, metric(std::move(x), std::move(y)));
    }
    // The 1.1 factor covers the gap between the max of finitely many
    // resampled splits and the tail of the true same-law null.
    worst *= 1.1;
    // Rescale from the split-half effective size to the (m1, m2) comparison.
    const Real half_eff =
        static_cast<Real>(half) * static_cast<Real>(sample.size() - half) /
        static_cast<Real>(sample.size());
    const Real target_eff = static_cast<Real>(m1) * static_cast<Real>(m2) /
                            static_cast<Real>(m1 + m2);
    return worst * std::sqrt(half_eff / target_eff);
}

ConvergenceReport convergence_test(
    const std::vector<TrajectoryEnsemble>& discrete_by_n,
    const TrajectoryEnsemble& sde, const std::vector<Real>& times,
    const std::vector<std::pair<std::string, Statistic>>& statistics,
    Real bias_budget, std::uint64_t bootstrap_seed) {
    if (discrete_by_n.empty())
        throw DimensionError("convergence_test: no discrete ensembles");
    for (std::size_t i = 1; i < discrete_by_n.size(); ++i)
        if (discrete_by_n[i].n <= discrete_by_n[i - 1].n)
            throw DimensionError("discrete ensembles must have increasing n");

    ConvergenceReport report;
    report.pass = true;
    std::uint64_t boot_index = 0;
    for (Real t : times) {
        for (const auto& [name, stat] : statistics) {
            ConvergenceCheck check;
            check.statistic = name;
            check.time = t;
            const StatSummary target = empirical_law(sde, t, stat);
            check.sde_std_error = target.std_error;
            std::vector<Real> means;
            for (const auto& ensemble : discrete_by_n) {
                const StatSummary s = empirical_law(ensemble, t, stat);
                means.push_back(s.mean);
                check.gaps.push_back(std::abs(s.mean - target.mean));
                check.std_errors.push_back(s.std_error);
            }
            // Richardson-style residual bias at the largest n: the change
            // over the last refinement bounds what is left, up to the
            // contraction factor of the scheme order.
            if (means.size() >= 2)
                check.measured_mean_bias =
                    std::abs(means[means.size() - 1] - means[means.size() - 2]);
            check.monotone = true;
            for (std::size_t i = 1; i < check.gaps.size(); ++i) {
                const Real slack = 0.5 * (check.std_errors[i - 1] +
                                          check.std_errors[i]) +
                                   check.sde_std_error;
                if (check.gaps[i] > check.gaps[i - 1] + slack)
                    check.monotone = false;
            }
            const Real se_last = check.std_errors.back();
            check.budget = 4.0 * std::sqrt(se_last * se_last +
                                           target.std_error *
                                               target.std_error) +
                           check.measured_mean_bias + bias_budget;
            check.within_budget = check.gaps.back() <= check.budget;

            const auto sde_sample = statistic_sample(sde, t, stat);
            const auto discrete_sample =
                statistic_sample(discrete_by_n.back(), t, stat);
            check.dist = levy_distance(discrete_sample, sde_sample);
            if (discrete_by_n.size() >= 2)
                check.measured_dist_bias = levy_distance(
                    statistic_sample(discrete_by_n[discrete_by_n.size() - 2],
                                     t, stat),
                    discrete_sample);
            // Deterministic scheme bias shifts values horizontally, which
            // the Levy metric absorbs additively; the 1e-9 floor covers the
            // bisection resolution on degenerate (point-mass) laws.
            check.dist_threshold =
                std::max(distribution_bootstrap_threshold(
                             sde_sample, discrete_sample.size(),
                             sde_sample.size(), 40,
                             bootstrap_seed + boot_index++, &levy_distance),
                         1e-9) +
                check.measured_dist_bias + bias_budget;
            check.dist_pass = check.dist <= check.dist_threshold;
            check.pass =
                check.monotone && check.within_budget && check.dist_pass;
            report.pass = report.pass && check.pass;
            report.checks.push_back(std::move(check));
        }
    }
    return report;
}

DerivativeCheck finite_difference_check(
    const TestFunction& f, const Matrix& rho,
    const std::vector<Matrix>& directions) {
    DerivativeCheck out;
    const Real scale = std::max(1.0, std::abs(f(rho)));
    for (const Real step : {1e-4, 1e-5}) {
        for (const auto& mu : directions) {
            const Real central =
                (f(rho + step * mu) - f(rho - step * mu)) / (2.0 * step);
            out.max_d1_error =
                std::max(out.max_d1_error,
                         std::abs(central - f.d1(rho, mu)) / scale);
            for (const auto& nu : directions) {
                const Real second =
                    (f(rho + step * mu + step * nu) -
                     f(rho + step * mu - step * nu) -
                     f(rho - step * mu + step * nu) +
                     f(rho - step * mu - step * nu)) /
                    (4.0 * step * step);
                out.max_d2_error =
                    std::max(out.max_d2_error,
                             std::abs(second - f.d2(mu, nu)) / scale);
            }
        }
    }
    out.pass = out.max_d1_error <= 1e-6 && out.max_d2_error <= 1e-6;
    return out;
}

Real moment_bound_constant(const TrajectoryEnsemble& ensemble) {
    if (ensemble.paths.empty() || ensemble.time_grid.size() < 2)
        throw DimensionError("moment_bound_constant: need a recorded grid");
    const std::size_t g = ensemble.time_grid.size();
    Real worst = 0;
    for (std::size_t r = 0; r < g; ++r)
        for (std::size_t l = r + 1; l < g; ++l) {
            const Real dt = ensemble.time_grid[l] - ensemble.time_grid[r];
            if (dt <= 0) continue;
            Real acc = 0;
            for (const auto& path : ensemble.paths)
                acc += (path.states.at(l) - path.states.at(r)).squaredNorm();
            acc /= static_cast<Real>(ensemble.paths.size());
            worst = std::max(worst, acc / dt);
        }
    return worst;
}

}  // namespace qtraj
