#include "qtraj/trajectory.hpp"

#include <cmath>

namespace qtraj {

std::size_t TrajectoryEnsemble::grid_index(Real t) const {
    if (time_grid.empty())
        throw ValidationError("ensemble has an empty time grid");
    if (t < time_grid.front() - 1e-12)
        throw DimensionError("query time precedes the recorded grid");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < time_grid.size(); ++j)
        if (time_grid[j] <= t + 1e-12) idx = j;
    return idx;
}

StatSummary empirical_law(const TrajectoryEnsemble& ensemble, Real t,
                          const Statistic& statistic) {
    if (ensemble.paths.empty())
        throw ValidationError("empirical_law: empty ensemble");
    const std::size_t idx = ensemble.grid_index(t);
    Real sum = 0, sumsq = 0;
    for (const auto& path : ensemble.paths) {
        const Real x = statistic(path.states.at(idx));
        sum += x;
        sumsq += x * x;
    }
    const auto m = static_cast<Real>(ensemble.paths.size());
    StatSummary out;
    out.count = ensemble.paths.size();
    out.mean = sum / m;
    const Real var = std::max(0.0, sumsq / m - out.mean * out.mean);
    out.std_error = m > 1 ? std::sqrt(var / (m - 1)) : 0.0;
    return out;
}

MomentSummary ensemble_moments(const TrajectoryEnsemble& ensemble, Real t) {
    if (ensemble.paths.empty())
        throw ValidationError("ensemble_moments: empty ensemble");
    const std::size_t idx = ensemble.grid_index(t);
    const auto& first = ensemble.paths.front().states.at(idx);
    const auto rows = first.rows(), cols = first.cols();
    Matrix sum = Matrix::Zero(rows, cols);
    RealMatrix sq_re = RealMatrix::Zero(rows, cols);
    RealMatrix sq_im = RealMatrix::Zero(rows, cols);
    for (const auto& path : ensemble.paths) {
        const Matrix& s = path.states.at(idx);
        sum += s;
        sq_re += s.real().cwiseProduct(s.real());
        sq_im += s.imag().cwiseProduct(s.imag());
    }
    const auto m = static_cast<Real>(ensemble.paths.size());
    MomentSummary out;
    out.mean = sum / m;
    auto std_err = [m](const RealMatrix& sq, const RealMatrix& mean) {
        RealMatrix var = (sq / m - mean.cwiseProduct(mean)).cwiseMax(0.0);
        return m > 1 ? RealMatrix((var / (m - 1)).cwiseSqrt())
                     : RealMatrix(RealMatrix::Zero(mean.rows(), mean.cols()));
    };
    out.std_error_re = std_err(sq_re, out.mean.real());
    out.std_error_im = std_err(sq_im, out.mean.imag());
    return out;
}

std::vector<Real> statistic_sample(const TrajectoryEnsemble& ensemble, Real t,
                                   const Statistic& statistic) {
    const std::size_t idx = ensemble.grid_index(t);
    std::vector<Real> out;
    out.reserve(ensemble.paths.size());
    for (const auto& path : ensemble.paths)
        out.push_back(statistic(path.states.at(idx)));
    return out;
}

}  // namespace qtraj
