#include <doctest.h>

#include "qtraj/core.hpp"

using namespace qtraj;

TEST_CASE("tensor product uses the block layout with the system index fastest") {
    const Matrix a = sigma_x();
    Matrix b(2, 2);
    b << Complex(1, 0), Complex(0, 2), Complex(3, 0), Complex(0, -1);
    const Matrix t = tensor_product(a, b);
    REQUIRE(t.rows() == 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(max_abs(block(t, 2, i, j) - b(i, j) * a) == 0.0);
}

TEST_CASE("tensor product of identities is the identity") {
    CHECK(max_abs(tensor_product(identity(3), identity(2)) - identity(6)) ==
          0.0);
}

TEST_CASE("partial trace undoes the tensor product") {
    Matrix rho(2, 2);
    rho << 0.75, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.25;
    Matrix beta(3, 3);
    beta.setZero();
    beta(0, 0) = 0.5;
    beta(1, 1) = 0.3;
    beta(2, 2) = 0.2;
    const Matrix w = tensor_product(rho, beta);
    CHECK(max_abs(partial_trace_h0(w, 2) - rho) < 1e-14);
}

TEST_CASE("block extraction rejects bad shapes and indices") {
    CHECK_THROWS_AS(block(Matrix::Zero(4, 3), 2, 0, 0), DimensionError);
    CHECK_THROWS_AS(block(Matrix::Zero(4, 4), 2, 2, 0), DimensionError);
    CHECK_THROWS_AS(block_count(Matrix::Zero(5, 5), 2), DimensionError);
    CHECK(block_count(Matrix::Zero(6, 6), 2) == 3);
}

TEST_CASE("matrix exponential matches the closed form for i theta sigma_x") {
    const Real theta = 0.37;
    const Matrix u = matrix_exponential(Complex(0, 1) * sigma_x(), theta);
    const Matrix expected = std::cos(theta) * identity(2) +
                            Complex(0, 1) * std::sin(theta) * sigma_x();
    CHECK(max_abs(u - expected) < 1e-14);
    CHECK(is_unitary(u, 1e-12));
    CHECK(max_abs(matrix_exponential(Matrix::Zero(3, 3)) - identity(3)) == 0.0);
}

TEST_CASE("hermitian eigenvalues are sorted and validated") {
    const auto ev = hermitian_eigenvalues(sigma_z());
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(hermitian_eigenvalues(sigma_plus()), ValidationError);
}

TEST_CASE("density matrix validation enforces the state axioms") {
    Matrix good(2, 2);
    good << 0.5, Complex(0, 0.25), Complex(0, -0.25), 0.5;
    CHECK_NOTHROW(DensityMatrix::validate(good));

    Matrix not_hermitian(2, 2);
    not_hermitian << 0.5, 0.4, 0.0, 0.5;
    CHECK_THROWS_AS(DensityMatrix::validate(not_hermitian), ValidationError);

    Matrix bad_trace = 0.9 * good;
    CHECK_THROWS_AS(DensityMatrix::validate(bad_trace), ValidationError);

    Matrix not_psd(2, 2);
    not_psd << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityMatrix::validate(not_psd), ValidationError);

    CHECK_THROWS_AS(DensityMatrix::validate(Matrix::Zero(2, 3)),
                    DimensionError);
}

TEST_CASE("fixed operators") {
    CHECK(max_abs(sigma_plus() - sigma_minus().adjoint()) == 0.0);
    CHECK(max_abs(sigma_x() * sigma_x() - identity(2)) == 0.0);
    CHECK(max_abs(basis_projector(3, 1) * basis_projector(3, 1) -
                  basis_projector(3, 1)) == 0.0);
    CHECK_THROWS_AS(basis_projector(2, 2), DimensionError);
}
