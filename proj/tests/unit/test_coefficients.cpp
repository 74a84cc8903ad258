#include <doctest.h>

#include "qtraj/coefficients.hpp"
#include "qtraj/rng.hpp"
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

SpectralObservable diffusive_obs() {
    Matrix plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    return SpectralObservable({1.0, -1.0}, {plus, minus});
}

}  // namespace

TEST_CASE("damping coefficients recover a zero Hamiltonian") {
    const auto c = damping_coeffs();
    CHECK(max_abs(c.hamiltonian()) < 1e-14);
    CHECK(c.structure_residual() < 1e-14);
    CHECK(c.noise_count() == 1);
}

TEST_CASE("hamiltonian part round-trips through the drift block") {
    const Matrix h = 0.3 * sigma_z() + 0.1 * sigma_x();
    const auto c = LimitCoefficients::from_hamiltonian_part(h, {sigma_minus()});
    CHECK(max_abs(c.hamiltonian() - h) < 1e-14);
    CHECK(c.structure_residual() < 1e-14);
    // L00 = -(iH + 1/2 L* L)
    const Matrix expected =
        -(Complex(0, 1) * h + 0.5 * sigma_plus() * sigma_minus());
    CHECK(max_abs(c.l00() - expected) < 1e-14);
}

TEST_CASE("a drift block violating the decomposition is rejected") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(1, 1) = 0.5;  // wrong sign: anti-Hermitian part cannot absorb it
    CHECK_THROWS_AS(LimitCoefficients(bad, {sigma_minus()}), ValidationError);
}

TEST_CASE("truncation clamps coordinates and fixes states") {
    Matrix m(2, 2);
    m << Complex(5, -3), Complex(0.5, 0.5), Complex(-4, 0), Complex(1, 1);
    const Matrix t = truncate(m, 2.0);
    CHECK(t(0, 0) == Complex(2, -2));
    CHECK(t(1, 0) == Complex(-2, 0));
    CHECK(t(0, 1) == Complex(0.5, 0.5));

    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const Matrix rho = random_state(2, rng);
        CHECK(max_abs(truncate(rho, 2.0) - rho) == 0.0);
    }
}

TEST_CASE("the Lindblad-type map is trace-free on random states") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const Matrix rho = random_state(2, rng);
        CHECK(std::abs(maps.lindblad(rho).trace()) < 1e-9);
    }
}

TEST_CASE("jump channel maps for the damping model") {
    LimitMaps maps(damping_coeffs(), jump_obs());
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.3;
    rho(1, 1) = 0.7;

    // numerator = L rho L*, intensity = excited population
    CHECK(max_abs(maps.jump_numerator(1, rho) -
                  sigma_minus() * rho * sigma_plus()) < 1e-14);
    CHECK(maps.v(1, rho) == doctest::Approx(0.7));
    CHECK(std::abs(maps.v_complex(1, rho).imag()) < 1e-14);

    // the jump replaces the state by the ground state
    CHECK(max_abs(maps.g_tilde(1, rho) - basis_projector(2, 0)) < 1e-14);
    CHECK(max_abs(maps.g(1, rho) - (basis_projector(2, 0) - rho)) < 1e-14);

    // g~ - rho agrees with g on states
    CHECK(max_abs((maps.g_tilde(1, rho) - rho) - maps.g(1, rho)) < 1e-14);

    // undefined at vanishing intensity
    CHECK_THROWS_AS(maps.g(1, basis_projector(2, 0)), JumpUndefinedError);
    CHECK_THROWS_AS(maps.g_tilde(1, basis_projector(2, 0)),
                    JumpUndefinedError);

    // h is reserved for diffusive channels
    CHECK_THROWS_AS(maps.h(1, rho), JumpUndefinedError);
    CHECK(max_abs(maps.h(0, rho)) < 1e-14);  // basis channel 0 is silent
}

TEST_CASE("diffusive directions match the hand formula") {
    LimitMaps maps(damping_coeffs(), diffusive_obs());
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Matrix rho = random_state(2, rng);
        // channel 0 is P_+ with entries 1/2: num = (L rho + rho L*)/2
        const Matrix num0 =
            0.5 * (sigma_minus() * rho + rho * sigma_plus());
        const Matrix expected0 =
            (num0 - num0.trace() * rho) / std::sqrt(0.5);
        CHECK(max_abs(maps.h(0, rho) - expected0) < 1e-12);
        // channel 1 is P_- whose off-diagonal entries are -1/2
        const Matrix num1 =
            -0.5 * (sigma_minus() * rho + rho * sigma_plus());
        const Matrix expected1 =
            (num1 - num1.trace() * rho) / std::sqrt(0.5);
        CHECK(max_abs(maps.h(1, rho) - expected1) < 1e-12);
    }
}

TEST_CASE("limit maps validate dimensions and truncation level") {
    CHECK_THROWS_AS(LimitMaps(damping_coeffs(), jump_obs(), 1.0),
                    ValidationError);
    SpectralObservable wide(
        {0.0, 1.0, 2.0},
        {basis_projector(3, 0), basis_projector(3, 1), basis_projector(3, 2)});
    CHECK_THROWS_AS(LimitMaps(damping_coeffs(), wide), DimensionError);
}
