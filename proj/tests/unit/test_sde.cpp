#include <doctest.h>

#include "qtraj/sde.hpp"
#include "qtraj/verify.hpp"

using namespace qtraj;

namespace {

LimitCoefficients damping_coeffs() {
    Matrix l00 = Matrix::Zero(2, 2);
    l00(1, 1) = -0.5;
    return LimitCoefficients(l00, {sigma_minus()});
}

SpectralObservable jump_obs() {
    return SpectralObservable({0.0, 1.0},
                              {basis_projector(2, 0), basis_projector(2, 1)});
}

SpectralObservable silent_obs() {
    // single outcome: no measurement information, no noise channels
    return SpectralObservable({1.0}, {identity(2)});
}

}  // namespace

TEST_CASE("the certified intensity bound dominates on the truncation window") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    const Real bound = certified_intensity_bound(maps);
    CHECK(bound > 0);
    Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        // arbitrary truncated points, not just states
        Matrix m(2, 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                m(r, c) = Complex(4.0 * rng.uniform01() - 2.0,
                                  4.0 * rng.uniform01() - 2.0);
        CHECK(std::abs(maps.v(1, maps.truncated(m))) <= bound);
    }
}

TEST_CASE("drift is trace-free on states") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
        const Matrix rho = random_state(2, rng);
        CHECK(std::abs(drift(maps, rho).trace()) < 1e-12);
    }
}

TEST_CASE("euler_step demands one normal per diffusive direction") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    const Matrix rho = basis_projector(2, 1);
    CHECK_NOTHROW(euler_step(maps, rho, 1e-3, {0.5}));
    CHECK_THROWS_AS(euler_step(maps, rho, 1e-3, {0.5, 0.5}), DimensionError);
}

TEST_CASE("with a silent observable the path solves the mean evolution") {
    LimitMaps maps(damping_coeffs(), silent_obs());
    SdeConfig config;
    config.horizon = 1.0;
    config.steps_per_unit = 2000;
    Rng rng(4);
    const Matrix rho0 = basis_projector(2, 1);
    const auto path = integrate_path(rho0, maps, config, rng);
    CHECK(path.jumps.empty());
    const Matrix expected = master_solution(damping_coeffs(), rho0, 1.0);
    CHECK(max_abs(path.states.back() - expected) < 2.0 / 2000.0);
}

TEST_CASE("jumps replace the state by the ground state and are logged") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    SdeConfig config;
    config.horizon = 2.0;
    config.steps_per_unit = 1000;
    const Matrix rho0 = basis_projector(2, 1);
    int accepted_total = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng = Rng::substream(404, seed);
        const auto path = integrate_path(rho0, maps, config, rng);
        for (const auto& e : path.jumps) {
            CHECK(e.channel == 1);
            CHECK(e.acceptance_uniform >= 0);
            if (e.accepted) {
                ++accepted_total;
                CHECK(max_abs(e.post_state - basis_projector(2, 0)) < 1e-9);
            } else {
                CHECK(max_abs(e.post_state - e.pre_state) == 0.0);
            }
        }
        CHECK(path.jump_counts[1] <= 1);  // absorbed after the first jump
        CHECK(path.integrated_intensity[1] > 0);
    }
    CHECK(accepted_total > 10);  // P(jump by t=2) = 1 - e^{-2} = 0.86
}

TEST_CASE("sde ensembles are deterministic and thread-count independent") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    SdeConfig serial_config;
    serial_config.horizon = 0.5;
    serial_config.steps_per_unit = 200;
    serial_config.threads = 1;
    SdeConfig parallel_config = serial_config;
    parallel_config.threads = 4;
    const Matrix rho0 = basis_projector(2, 1);
    const auto a = integrate_ensemble(rho0, maps, serial_config, 12, 777);
    const auto b = integrate_ensemble(rho0, maps, parallel_config, 12, 777);
    REQUIRE(a.paths.size() == b.paths.size());
    CHECK(a.kind == TrajectoryKind::continuous);
    for (std::size_t p = 0; p < a.paths.size(); ++p) {
        REQUIRE(a.paths[p].states.size() == b.paths[p].states.size());
        for (std::size_t i = 0; i < a.paths[p].states.size(); ++i)
            CHECK(max_abs(a.paths[p].states[i] - b.paths[p].states[i]) == 0.0);
        CHECK(a.paths[p].jumps.size() == b.paths[p].jumps.size());
    }
}

TEST_CASE("recording stride thins the grid but keeps endpoints") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    SdeConfig config;
    config.horizon = 1.0;
    config.steps_per_unit = 100;
    config.record_stride = 25;
    Rng rng(6);
    const auto path = integrate_path(basis_projector(2, 1), maps, config, rng);
    CHECK(path.states.size() == 5);  // 0, 25, 50, 75, 100

    const auto ensemble = integrate_ensemble(basis_projector(2, 1), maps,
                                             config, 3, 11);
    REQUIRE(ensemble.time_grid.size() == 5);
    CHECK(ensemble.time_grid.back() == doctest::Approx(1.0));
}

TEST_CASE("degenerate configurations are rejected") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    SdeConfig config;
    config.horizon = -1.0;
    Rng rng(1);
    CHECK_THROWS_AS(integrate_path(basis_projector(2, 0), maps, config, rng),
                    DimensionError);
    config.horizon = 1.0;
    CHECK_THROWS_AS(integrate_ensemble(basis_projector(2, 0), maps, config, 0,
                                       1),
                    DimensionError);
}
