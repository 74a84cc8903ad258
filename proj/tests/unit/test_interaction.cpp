#include <doctest.h>

#include "qtraj/interaction.hpp"

using namespace qtraj;

namespace {

HamiltonianModel spin_spin_model() {
    HamiltonianModel m;
    m.h0 = 0.5 * sigma_z();
    m.h_field = 0.25 * sigma_z();
    m.interaction_ops.emplace_back(sigma_x(), sigma_x());
    return m;
}

LimitCoefficients damping_coeffs() {
    Matrix l00 = Matrix::Zero(2, 2);
    l00(1, 1) = -0.5;
    return LimitCoefficients(l00, {sigma_minus()});
}

}  // namespace

TEST_CASE("hamiltonian models validate hermiticity and dimensions") {
    CHECK_NOTHROW(spin_spin_model().validate());

    HamiltonianModel bad = spin_spin_model();
    bad.h0 = sigma_plus();
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    HamiltonianModel mismatched = spin_spin_model();
    mismatched.interaction_ops[0].second = identity(3);
    CHECK_THROWS_AS(mismatched.validate(), DimensionError);
}

TEST_CASE("built unitaries are unitary across n") {
    const auto model = spin_spin_model();
    for (std::int64_t n : {1, 10, 1000, 1000000}) {
        const Matrix u = build_unitary(model, n);
        CHECK(is_unitary(u, 1e-9));
        CHECK(u.rows() == 4);
    }
}

TEST_CASE("family call validates the step count and unitarity") {
    const auto family = family_from_hamiltonian(spin_spin_model());
    CHECK_THROWS_AS(family(0), DimensionError);
    CHECK_NOTHROW(family(128));

    UnitaryFamily broken([](std::int64_t) { return Matrix::Zero(4, 4); },
                         FamilySource::hamiltonian, 2, 2);
    CHECK_THROWS_AS(broken(3), ValidationError);
}

TEST_CASE("coefficient-built families reproduce their coefficients") {
    const auto coeffs = damping_coeffs();
    const auto family = build_from_coefficients(coeffs);
    CHECK(family.source() == FamilySource::direct_coefficients);

    const auto extracted =
        extract_limit_coefficients(family, {250000, 500000, 1000000});
    CHECK(max_abs(extracted.l00() - coeffs.l00()) < 1e-4);
    CHECK(max_abs(extracted.l(1) - coeffs.l(1)) < 1e-4);
    CHECK(extracted.extraction_residuals().size() == 2);
    for (Real r : extracted.extraction_residuals()) CHECK(r < 1e-3);
}

TEST_CASE("extraction from a physical model satisfies the decomposition") {
    const auto family = family_from_hamiltonian(spin_spin_model());
    const auto coeffs =
        extract_limit_coefficients(family, {500000, 1000000});
    // the anti-Hermitian split is consistent by construction of the check
    CHECK(coeffs.structure_residual() < 1e-4);
    CHECK(coeffs.dim() == 2);
    CHECK(coeffs.noise_count() == 1);
}

TEST_CASE("families violating the block normalization are rejected") {
    // a fixed entangling unitary has no 1/n drift scaling
    const Matrix fixed =
        matrix_exponential(Complex(0, 1) * tensor_product(sigma_x(), sigma_x()));
    UnitaryFamily family([fixed](std::int64_t) { return fixed; },
                         FamilySource::hamiltonian, 2, 2);
    CHECK_THROWS_AS(extract_limit_coefficients(family, {1000, 2000}),
                    ValidationError);
}

TEST_CASE("extract_blocks returns the requested block column") {
    const Matrix u = build_unitary(spin_spin_model(), 100);
    const auto blocks = extract_blocks(u, 2, 0);
    REQUIRE(blocks.size() == 2);
    CHECK(max_abs(blocks[0] - block(u, 2, 0, 0)) == 0.0);
    CHECK(max_abs(blocks[1] - block(u, 2, 1, 0)) == 0.0);
    CHECK_THROWS_AS(extract_blocks(u, 2, 5), DimensionError);
}

TEST_CASE("probe lists must be increasing and long enough") {
    const auto family = build_from_coefficients(damping_coeffs());
    CHECK_THROWS_AS(extract_limit_coefficients(family, {1000}),
                    DimensionError);
    CHECK_THROWS_AS(extract_limit_coefficients(family, {2000, 1000}),
                    DimensionError);
}
