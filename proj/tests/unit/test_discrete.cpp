#include <doctest.h>

#include "qtraj/discrete.hpp"
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

UnitaryFamily damping_family() {
    return build_from_coefficients(damping_coeffs());
}

}  // namespace

TEST_CASE("transition probabilities sum to one and post states are valid") {
    const auto family = damping_family();
    const Matrix u = family(1000);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const Matrix rho = random_state(2, rng);
        const auto steps = transition(rho, u, 0, jump_obs());
        Real total = 0;
        for (const auto& s : steps) {
            total += s.probability;
            if (s.reachable) CHECK_NOTHROW(DensityMatrix::validate(s.post_state));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("jump outcome probability scales like intensity over n") {
    const auto family = damping_family();
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.25;
    rho(1, 1) = 0.75;
    for (std::int64_t n : {1000, 10000}) {
        const auto steps = transition(rho, family(n), 0, jump_obs());
        // channel 1 fires with probability ~ rho_11 / n
        CHECK(steps[1].probability ==
              doctest::Approx(0.75 / static_cast<Real>(n)).epsilon(0.01));
        // and lands on the ground state
        CHECK(max_abs(steps[1].post_state - basis_projector(2, 0)) < 1e-9);
    }
}

TEST_CASE("unreachable outcomes carry the input state") {
    const auto family = damping_family();
    const Matrix ground = basis_projector(2, 0);
    const auto steps = transition(ground, family(1000), 0, jump_obs());
    CHECK_FALSE(steps[1].reachable);
    CHECK(max_abs(steps[1].post_state - ground) == 0.0);
    CHECK(steps[0].probability == doctest::Approx(1.0));
}

TEST_CASE("transition rejects non-unitary input and bad dimensions") {
    CHECK_THROWS_AS(
        transition(basis_projector(2, 0), Matrix::Zero(4, 4), 0, jump_obs()),
        ValidationError);
    const Matrix u = damping_family()(100);
    CHECK_THROWS_AS(transition(basis_projector(2, 0), u, 5, jump_obs()),
                    DimensionError);
    CHECK_THROWS_AS(transition(Matrix::Zero(3, 3), u, 0, jump_obs()),
                    DimensionError);
}

TEST_CASE("kernel transitions agree with the free function") {
    const auto family = damping_family();
    TransitionKernel kernel(family, jump_obs(), 500);
    const Matrix u = family(500);
    Rng rng(17);
    for (int i = 0; i < 5; ++i) {
        const Matrix rho = random_state(2, rng);
        const auto a = kernel.transition(rho);
        const auto b = transition(rho, u, 0, jump_obs());
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].probability == doctest::Approx(b[k].probability));
            CHECK(max_abs(a[k].post_state - b[k].post_state) < 1e-14);
        }
    }
}

TEST_CASE("the scaled generator converges to the limit on a linear statistic") {
    const auto family = damping_family();
    LimitMaps maps(damping_coeffs(), jump_obs());
    const Matrix excited = basis_projector(2, 1);
    const Statistic f = [](const Matrix& rho) {
        return (sigma_z() * rho).trace().real();
    };
    // d/dt Tr[sigma_z rho] at the excited state is +2
    const Real limit = (sigma_z() * maps.lindblad(excited)).trace().real();
    CHECK(limit == doctest::Approx(2.0));
    Real previous_error = 1e9;
    for (std::int64_t n : {100, 1000, 10000}) {
        TransitionKernel kernel(family, jump_obs(), n);
        const Real error = std::abs(kernel.generator(excited, f) - limit);
        CHECK(error < previous_error + 1e-12);
        previous_error = error;
    }
    CHECK(previous_error < 1e-3);
}

TEST_CASE("paths are reproducible and strides align with the grid") {
    const auto family = damping_family();
    TransitionKernel kernel(family, jump_obs(), 200);
    const Matrix rho0 = basis_projector(2, 1);

    Rng r1(5), r2(5);
    const auto p1 = sample_path(rho0, kernel, 1.0, r1);
    const auto p2 = sample_path(rho0, kernel, 1.0, r2);
    REQUIRE(p1.states.size() == p2.states.size());
    CHECK(p1.states.size() == 201);
    CHECK(p1.outcomes.size() == 200);
    for (std::size_t i = 0; i < p1.states.size(); ++i)
        CHECK(max_abs(p1.states[i] - p2.states[i]) == 0.0);

    Rng r3(5);
    const auto strided = sample_path(rho0, kernel, 1.0, r3, 50);
    CHECK(strided.states.size() == 5);  // 0, 50, 100, 150, 200
    CHECK(max_abs(strided.states.back() - p1.states.back()) == 0.0);
}

TEST_CASE("ensembles are deterministic and thread-count independent") {
    const auto family = damping_family();
    TransitionKernel kernel(family, jump_obs(), 100);
    const Matrix rho0 = basis_projector(2, 1);
    const auto serial = sample_ensemble(rho0, kernel, 1.0, 16, 99, 1, 1);
    const auto parallel = sample_ensemble(rho0, kernel, 1.0, 16, 99, 1, 4);
    REQUIRE(serial.paths.size() == parallel.paths.size());
    CHECK(serial.time_grid.size() == 101);
    for (std::size_t p = 0; p < serial.paths.size(); ++p) {
        CHECK(serial.paths[p].path_index == p);
        for (std::size_t i = 0; i < serial.time_grid.size(); ++i)
            CHECK(max_abs(serial.paths[p].states[i] -
                          parallel.paths[p].states[i]) == 0.0);
    }
}

TEST_CASE("degenerate horizons and path counts are rejected") {
    const auto family = damping_family();
    TransitionKernel kernel(family, jump_obs(), 10);
    Rng rng(1);
    CHECK_THROWS_AS(sample_path(basis_projector(2, 0), kernel, 0.05, rng),
                    DimensionError);
    CHECK_THROWS_AS(
        sample_ensemble(basis_projector(2, 0), kernel, 1.0, 0, 1),
        DimensionError);
}
