#include "qtraj/sde.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace qtraj {

Real certified_intensity_bound(const LimitMaps& maps) {
    const auto& coeffs = maps.coefficients();
    const auto& obs = maps.observable();
    const int d = coeffs.dim();
    Real worst = 0;
    for (int i : obs.jump_channels()) {
        Matrix m = Matrix::Zero(d, d);
        for (int k = 1; k <= coeffs.noise_count(); ++k)
            for (int l = 1; l <= coeffs.noise_count(); ++l) {
                const Complex weight = obs.p(i, l, k);
                if (weight != Complex(0, 0))
                    m += weight * (coeffs.l(l).adjoint() * coeffs.l(k));
            }
        worst = std::max(worst, m.norm());
    }
    return worst * maps.truncation_level() * static_cast<Real>(d) *
           std::sqrt(2.0);
}

Matrix drift(const LimitMaps& maps, const Matrix& rho) {
    const Matrix phi = maps.truncated(rho);
    Matrix out = maps.lindblad(phi);
    for (int i : maps.observable().jump_channels())
        out -= maps.jump_numerator(i, phi) - maps.v(i, phi) * phi;
    return out;
}

Matrix euler_step(const LimitMaps& maps, const Matrix& rho, Real dt,
                  const std::vector<Real>& normals) {
    const auto& diffusive = maps.observable().diffusive_channels();
    if (normals.size() != diffusive.size() + 1)
        throw DimensionError("euler_step: one normal per diffusive direction");
    const Matrix phi = maps.truncated(rho);
    Matrix next = rho + dt * drift(maps, rho);
    const Real root_dt = std::sqrt(dt);
    next += root_dt * normals[0] * maps.h(0, phi);
    for (std::size_t j = 0; j < diffusive.size(); ++j)
        next += root_dt * normals[j + 1] * maps.h(diffusive[j], phi);
    return next;
}

namespace {

struct Candidate {
    Real time;
    int channel;
};

}  // namespace

RecordedPath integrate_path(const Matrix& rho0, const LimitMaps& maps,
                            const SdeConfig& config, Rng& rng) {
    if (config.horizon <= 0) throw DimensionError("horizon must be positive");
    if (config.steps_per_unit < 1)
        throw DimensionError("steps_per_unit must be positive");
    const std::int64_t stride = std::max<std::int64_t>(1, config.record_stride);
    const Real bound = config.intensity_bound > 0
                           ? config.intensity_bound
                           : certified_intensity_bound(maps);

    const auto& obs = maps.observable();
    const auto& jump = obs.jump_channels();
    const std::size_t gauss_count = obs.diffusive_channels().size() + 1;
    const int channel_count = obs.outcome_count();

    // 1. Candidate arrival clocks, one rate-`bound` Poisson stream per jump
    //    channel, drawn up front in channel order.
    std::vector<Candidate> candidates;
    for (int i : jump) {
        Real t = 0;
        while (bound > 0) {
            t += rng.exponential(bound);
            if (t > config.horizon) break;
            candidates.push_back({t, i});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                         return a.time < b.time;
                     });

    const Real dt = 1.0 / static_cast<Real>(config.steps_per_unit);
    const auto grid_steps = static_cast<std::int64_t>(
        std::floor(config.horizon * static_cast<Real>(config.steps_per_unit)));
    if (grid_steps < 1)
        throw DimensionError("horizon shorter than one Euler step");

    RecordedPath path;
    path.jump_counts.assign(channel_count, 0);
    path.integrated_intensity.assign(channel_count, 0.0);
    Matrix rho = rho0;
    path.states.push_back(rho);
    path.max_coordinate = max_abs(rho);

    std::vector<Real> normals(gauss_count);
    std::size_t next_candidate = 0;
    Real t = 0;

    auto advance_to = [&](Real target) {
        const Real step = target - t;
        if (step <= 0) return;
        const Matrix phi = maps.truncated(rho);
        for (int i : jump)
            path.integrated_intensity[i] += std::max(0.0, maps.v(i, phi)) * step;
        for (auto& z : normals) z = rng.gaussian();
        rho = euler_step(maps, rho, step, normals);
        path.max_coordinate = std::max(path.max_coordinate, max_abs(rho));
        t = target;
    };

    for (std::int64_t k = 1; k <= grid_steps; ++k) {
        const Real t_grid = static_cast<Real>(k) * dt;
        while (next_candidate < candidates.size() &&
               candidates[next_candidate].time <= t_grid) {
            const Candidate& c = candidates[next_candidate++];
            advance_to(c.time);
            const Matrix pre = rho;
            const Matrix phi = maps.truncated(rho);
            const Real xi = rng.uniform(bound);
            const Real intensity = maps.v(c.channel, phi);
            JumpEvent event;
            event.time = c.time;
            event.channel = c.channel;
            event.acceptance_uniform = xi;
            event.pre_state = pre;
            if (xi <= intensity) {
                event.accepted = true;
                rho = maps.g_tilde(c.channel, phi);
                ++path.jump_counts[c.channel];
                path.max_coordinate =
                    std::max(path.max_coordinate, max_abs(rho));
            } else {
                event.accepted = false;
            }
            event.post_state = rho;
            path.jumps.push_back(std::move(event));
        }
        advance_to(t_grid);
        if (k % stride == 0 || k == grid_steps) path.states.push_back(rho);
    }
    return path;
}

TrajectoryEnsemble integrate_ensemble(const Matrix& rho0,
                                      const LimitMaps& maps,
                                      const SdeConfig& config, int path_count,
                                      std::uint64_t master_seed) {
    if (path_count < 1)
        throw DimensionError("ensemble needs at least one path");
    const std::int64_t stride = std::max<std::int64_t>(1, config.record_stride);
    const auto grid_steps = static_cast<std::int64_t>(
        std::floor(config.horizon * static_cast<Real>(config.steps_per_unit)));
    if (grid_steps < 1)
        throw DimensionError("horizon shorter than one Euler step");

    TrajectoryEnsemble ensemble;
    ensemble.kind = TrajectoryKind::continuous;
    const Real dt = 1.0 / static_cast<Real>(config.steps_per_unit);
    ensemble.time_grid.push_back(0.0);
    for (std::int64_t k = 1; k <= grid_steps; ++k)
        if (k % stride == 0 || k == grid_steps)
            ensemble.time_grid.push_back(static_cast<Real>(k) * dt);
    ensemble.paths.resize(path_count);

    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            Rng rng = Rng::substream(master_seed, static_cast<std::uint64_t>(i));
            ensemble.paths[i] = integrate_path(rho0, maps, config, rng);
            ensemble.paths[i].path_index = static_cast<std::uint64_t>(i);
        }
    };
    int threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, path_count));
    if (threads == 1) {
        worker(0, path_count);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (path_count + threads - 1) / threads;
        for (int th = 0; th < threads; ++th) {
            const int begin = th * chunk;
            const int end = std::min(path_count, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return ensemble;
}

}  // namespace qtraj
