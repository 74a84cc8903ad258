#include "qtraj/discrete.hpp"

#include <cmath>
#include <string>
#include <thread>

namespace qtraj {

namespace {

struct StepInputs {
    const Matrix& rho;
    const std::vector<Matrix>& column_blocks;    // U_{k, beta}
    const std::vector<Matrix>& field_projectors; // I (x) P_i
    const Matrix& column;                        // compound-to-system map
    const SpectralObservable& obs;
    const ToleranceProfile& tol;
    int system_dim;
};

std::vector<DiscreteStep> transition_impl(const StepInputs& in) {
    DensityMatrix::validate(in.rho, in.tol);

    // W = U (rho (x) |X_b><X_b|) U* = A rho A* with A the b-th block column.
    const Matrix w = in.column * in.rho * in.column.adjoint();

    const int p = in.obs.outcome_count();
    std::vector<DiscreteStep> steps;
    steps.reserve(p);
    Real prob_sum = 0;
    for (int i = 0; i < p; ++i) {
        const Matrix s = in.field_projectors[i] * w * in.field_projectors[i];
        const Matrix numer = partial_trace_h0(s, in.system_dim);

        // Block form of the same non-normalized state (first-column formula).
        const int nb = in.obs.field_dim();
        Matrix block_numer = Matrix::Zero(in.system_dim, in.system_dim);
        for (int k = 0; k < nb; ++k)
            for (int l = 0; l < nb; ++l) {
                const Complex weight = in.obs.p(i, l, k);
                if (weight != Complex(0, 0))
                    block_numer += weight * (in.column_blocks[k] * in.rho *
                                             in.column_blocks[l].adjoint());
            }
        if (max_abs(numer - block_numer) > in.tol.dual_path)
            throw ValidationError(
                "transition: partial-trace and block forms disagree");

        DiscreteStep step;
        step.outcome_index = i;
        step.probability = numer.trace().real();
        prob_sum += step.probability;
        if (step.probability <= in.tol.probability_floor) {
            step.reachable = false;
            step.post_state = in.rho;
        } else {
            Matrix post = numer / step.probability;
            Matrix repaired = 0.5 * (post + post.adjoint());
            repaired /= repaired.trace().real();
            const Real correction = max_abs(repaired - post);
            if (correction >= 1e-8)
                throw ValidationError(
                    "transition: post-state repair exceeded 1e-8 (" +
                    std::to_string(correction) + ")");
            step.post_state = std::move(repaired);
        }
        steps.push_back(std::move(step));
    }
    if (std::abs(prob_sum - 1.0) > in.tol.probability_sum)
        throw ValidationError("transition: probabilities sum to " +
                              std::to_string(prob_sum));
    return steps;
}

}  // namespace

std::vector<DiscreteStep> transition(const Matrix& rho, const Matrix& u,
                                     int beta_index,
                                     const SpectralObservable& obs,
                                     const ToleranceProfile& tol) {
    const int system_dim = static_cast<int>(rho.rows());
    const int nb = block_count(u, system_dim);
    if (nb != obs.field_dim())
        throw DimensionError("unitary and observable field dimensions disagree");
    if (beta_index < 0 || beta_index >= nb)
        throw DimensionError("field preparation index out of range");
    if (!is_unitary(u, tol.unitarity))
        throw ValidationError("transition: operator is not unitary");

    std::vector<Matrix> blocks = extract_blocks(u, system_dim, beta_index);
    std::vector<Matrix> projectors;
    projectors.reserve(obs.outcome_count());
    for (int i = 0; i < obs.outcome_count(); ++i)
        projectors.push_back(
            tensor_product(identity(system_dim), obs.projector(i)));
    const Matrix column =
        u.block(0, beta_index * system_dim, u.rows(), system_dim);
    return transition_impl({rho, blocks, projectors, column, obs, tol,
                            system_dim});
}

TransitionKernel::TransitionKernel(const UnitaryFamily& family,
                                   SpectralObservable obs, std::int64_t n,
                                   int beta_index, const ToleranceProfile& tol)
    : obs_(std::move(obs)), n_(n), beta_index_(beta_index),
      system_dim_(family.system_dim()), tol_(tol), u_(family(n)) {
    if (family.field_dim() != obs_.field_dim())
        throw DimensionError("family and observable field dimensions disagree");
    if (beta_index_ < 0 || beta_index_ >= obs_.field_dim())
        throw DimensionError("field preparation index out of range");
    column_blocks_ = extract_blocks(u_, system_dim_, beta_index_);
    for (int i = 0; i < obs_.outcome_count(); ++i)
        field_projectors_.push_back(
            tensor_product(identity(system_dim_), obs_.projector(i)));
}

std::vector<DiscreteStep> TransitionKernel::transition(const Matrix& rho) const {
    const Matrix column =
        u_.block(0, beta_index_ * system_dim_, u_.rows(), system_dim_);
    return transition_impl({rho, column_blocks_, field_projectors_, column,
                            obs_, tol_, system_dim_});
}

Real TransitionKernel::generator(const Matrix& rho, const Statistic& f) const {
    const auto steps = transition(rho);
    const Real f_rho = f(rho);
    Real acc = 0;
    for (const auto& step : steps)
        if (step.reachable)
            acc += (f(step.post_state) - f_rho) * step.probability;
    return static_cast<Real>(n_) * acc;
}

RecordedPath sample_path(const Matrix& rho0, const TransitionKernel& kernel,
                         Real horizon, Rng& rng, std::int64_t record_stride) {
    const auto steps =
        static_cast<std::int64_t>(std::floor(horizon * static_cast<Real>(kernel.n())));
    if (steps < 1)
        throw DimensionError("horizon shorter than one step");
    if (record_stride < 1) record_stride = 1;

    RecordedPath path;
    path.outcomes.reserve(steps);
    Matrix rho = rho0;
    path.states.push_back(rho);
    for (std::int64_t k = 0; k < steps; ++k) {
        const auto branches = kernel.transition(rho);
        const Real draw = rng.uniform01();
        Real cdf = 0;
        int chosen = -1;
        for (const auto& b : branches) {
            cdf += b.probability;
            if (draw < cdf && b.reachable) {
                chosen = b.outcome_index;
                break;
            }
        }
        if (chosen < 0) {
            // round-off tail: fall back to the last reachable branch
            for (auto it = branches.rbegin(); it != branches.rend(); ++it)
                if (it->reachable) { chosen = it->outcome_index; break; }
        }
        const auto& b = branches[chosen];
        rho = b.post_state;
        path.outcomes.push_back(static_cast<std::uint8_t>(chosen));
        if ((k + 1) % record_stride == 0 || k + 1 == steps)
            path.states.push_back(rho);
    }
    return path;
}

TrajectoryEnsemble sample_ensemble(const Matrix& rho0,
                                   const TransitionKernel& kernel,
                                   Real horizon, int path_count,
                                   std::uint64_t master_seed,
                                   std::int64_t record_stride, int threads) {
    if (path_count < 1)
        throw DimensionError("ensemble needs at least one path");
    if (record_stride < 1) record_stride = 1;
    const auto steps =
        static_cast<std::int64_t>(std::floor(horizon * static_cast<Real>(kernel.n())));
    if (steps < 1)
        throw DimensionError("horizon shorter than one step");

    TrajectoryEnsemble ensemble;
    ensemble.kind = TrajectoryKind::discrete;
    ensemble.n = kernel.n();
    ensemble.time_grid.push_back(0.0);
    for (std::int64_t k = 0; k < steps; ++k)
        if ((k + 1) % record_stride == 0 || k + 1 == steps)
            ensemble.time_grid.push_back(static_cast<Real>(k + 1) /
                                         static_cast<Real>(kernel.n()));
    ensemble.paths.resize(path_count);

    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            Rng rng = Rng::substream(master_seed, static_cast<std::uint64_t>(i));
            ensemble.paths[i] =
                sample_path(rho0, kernel, horizon, rng, record_stride);
            ensemble.paths[i].path_index = static_cast<std::uint64_t>(i);
        }
    };
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, path_count));
    if (threads == 1) {
        worker(0, path_count);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (path_count + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(path_count, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return ensemble;
}

}  // namespace qtraj
