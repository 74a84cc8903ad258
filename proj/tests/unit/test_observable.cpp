#include <doctest.h>

#include "qtraj/observable.hpp"

using namespace qtraj;

namespace {

Matrix plus_projector() {
    Matrix p(2, 2);
    p << 0.5, 0.5, 0.5, 0.5;
    return p;
}

Matrix minus_projector() {
    Matrix p(2, 2);
    p << 0.5, -0.5, -0.5, 0.5;
    return p;
}

}  // namespace

TEST_CASE("basis observable classifies the excited channel as a jump") {
    SpectralObservable obs({0.0, 1.0},
                           {basis_projector(2, 0), basis_projector(2, 1)});
    CHECK(obs.outcome_count() == 2);
    CHECK(obs.jump_channels() == std::vector<int>{1});
    CHECK(obs.diffusive_channels().empty());
    CHECK(obs.is_jump(1));
    CHECK_FALSE(obs.is_jump(0));
}

TEST_CASE("plus/minus observable is purely diffusive") {
    SpectralObservable obs({1.0, -1.0}, {plus_projector(), minus_projector()});
    CHECK(obs.jump_channels().empty());
    CHECK(obs.diffusive_channels() == std::vector<int>{1});
}

TEST_CASE("slot zero is permuted onto a channel with nonzero (0,0) entry") {
    SpectralObservable obs({1.0, 0.0},
                           {basis_projector(2, 1), basis_projector(2, 0)});
    CHECK(std::abs(obs.p(0, 0, 0)) > 0.5);
    CHECK(obs.eigenvalue(0) == doctest::Approx(0.0));
    CHECK(obs.jump_channels() == std::vector<int>{1});
}

TEST_CASE("three-outcome observable separates jump and diffusive channels") {
    Matrix p1 = basis_projector(3, 1);
    Matrix p2 = Matrix::Zero(3, 3);
    p2(0, 0) = p2(2, 2) = 0.5;
    p2(0, 2) = p2(2, 0) = 0.5;
    Matrix p0 = identity(3) - p1 - p2;
    SpectralObservable obs({0.0, 1.0, 2.0}, {p0, p1, p2});
    CHECK(obs.jump_channels() == std::vector<int>{1});
    CHECK(obs.diffusive_channels() == std::vector<int>{2});
}

TEST_CASE("projector axioms are enforced") {
    const Matrix p0 = basis_projector(2, 0);
    const Matrix p1 = basis_projector(2, 1);

    SUBCASE("repeated projector fails orthogonality") {
        CHECK_THROWS_AS(SpectralObservable({0.0, 1.0}, {p0, p0}),
                        ValidationError);
    }
    SUBCASE("incomplete family fails") {
        CHECK_THROWS_AS(SpectralObservable({0.0}, {p0}), ValidationError);
    }
    SUBCASE("non-idempotent matrix fails") {
        CHECK_THROWS_AS(SpectralObservable({0.0, 1.0}, {0.5 * p0, p1}),
                        ValidationError);
    }
    SUBCASE("non-Hermitian matrix fails") {
        Matrix skew = p0;
        skew(0, 1) = 0.5;
        CHECK_THROWS_AS(SpectralObservable({0.0, 1.0}, {skew, p1}),
                        ValidationError);
    }
    SUBCASE("count mismatch fails") {
        CHECK_THROWS_AS(SpectralObservable({0.0}, {p0, p1}), DimensionError);
    }
}
