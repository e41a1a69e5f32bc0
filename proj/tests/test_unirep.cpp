#include "unidiag/unirep.hpp"
#include "unidiag/word.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace unidiag;

TEST_CASE("jordan blocks") {
    const FieldSpec& Q = FieldSpec::rationals();
    CHECK(jordan_block(2, Q) == Matrix::from_ints(2, 2, Q, {1, 1, 0, 1}));
    const FieldSpec& F3 = FieldSpec::prime(3);
    CHECK(jordan_block(1, F3) == Matrix::identity(1, F3));
    CHECK(jordan_block(3, F3).at(1, 2) == Scalar::one(F3));
    CHECK_THROWS_AS(jordan_block(4, F3), DimTooLargeForCharP);
}

TEST_CASE("action matrices") {
    const FieldSpec& Q = FieldSpec::rationals();
    CHECK(action_matrix(2, 3, 1, Q) == Matrix::from_ints(2, 2, Q, {1, 3, 0, 1}));
    CHECK(action_matrix(2, 0, 1, Q) == Matrix::identity(2, Q));
    CHECK(action_matrix(2, -1, 1, Q) == Matrix::from_ints(2, 2, Q, {1, -1, 0, 1}));
    const FieldSpec& F2 = FieldSpec::prime(2);
    Matrix j = jordan_block(2, F2);
    CHECK(action_matrix(2, 1, 2, F2) == j.kron(j));
}

TEST_CASE("action is a homomorphism") {
    const FieldSpec& F7 = FieldSpec::prime(7);
    for (long long x : {0, 1, 3, 5})
        for (long long y : {1, 2, 6})
            CHECK(action_matrix(4, x, 1, F7) * action_matrix(4, y, 1, F7) ==
                  action_matrix(4, x + y, 1, F7));
    const FieldSpec& F4 = FieldSpec::extension(2, 2);
    auto elems = field_elements(F4);
    for (const Scalar& x : elems)
        for (const Scalar& y : elems)
            CHECK(action_matrix_v2(x, 2) * action_matrix_v2(y, 2) == action_matrix_v2(x + y, 2));
}

TEST_CASE("hom basis dimensions and the printed matrices") {
    const FieldSpec& Q = FieldSpec::rationals();
    auto b34 = hom_basis(3, 4, Q);
    REQUIRE(b34.size() == 3);
    CHECK(b34[0] == Matrix::from_ints(4, 3, Q, {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0}));
    CHECK(b34[1] == Matrix::from_ints(4, 3, Q, {0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0}));
    CHECK(b34[2] == Matrix::from_ints(4, 3, Q, {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
    auto b43 = hom_basis(4, 3, Q);
    REQUIRE(b43.size() == 3);
    CHECK(b43[0] == Matrix::from_ints(3, 4, Q, {0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1}));
    CHECK(b43[1] == Matrix::from_ints(3, 4, Q, {0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0}));
    CHECK(b43[2] == Matrix::from_ints(3, 4, Q, {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}));
    auto b15 = hom_basis(1, 5, Q);
    REQUIRE(b15.size() == 1);
    Matrix e(5, 1, Q);
    e.at(0, 0) = Scalar::one(Q);
    CHECK(b15[0] == e);

    for (uint32_t n = 1; n <= 8; ++n)
        for (uint32_t m = 1; m <= 8; ++m) CHECK(hom_basis(n, m, Q).size() == std::min(n, m));
    for (uint32_t p : {2u, 3u, 5u, 7u}) {
        const FieldSpec& f = FieldSpec::prime(p);
        for (uint32_t n = 1; n <= p; ++n)
            for (uint32_t m = 1; m <= p; ++m) CHECK(hom_basis(n, m, f).size() == std::min(n, m));
    }
}

TEST_CASE("jordan types") {
    const FieldSpec& Q = FieldSpec::rationals();
    CHECK(jordan_type(Matrix::identity(3, Q)) == std::vector<uint32_t>{1, 1, 1});
    CHECK(jordan_type(jordan_block(4, Q)) == std::vector<uint32_t>{4});
    Matrix j2 = jordan_block(2, Q);
    CHECK(jordan_type(j2.kron(j2)) == std::vector<uint32_t>{1, 3});
    Matrix notuni = Matrix::from_ints(2, 2, Q, {2, 0, 0, 1});
    CHECK_THROWS_AS(jordan_type(notuni), NotUnipotent);
}

TEST_CASE("fusion rules") {
    const FieldSpec& Q = FieldSpec::rationals();
    CHECK(fusion_decompose(1, Q) == std::vector<uint32_t>{2});
    for (uint32_t i = 2; i <= 8; ++i)
        CHECK(fusion_decompose(i, Q) == std::vector<uint32_t>{i - 1, i + 1});
    for (uint32_t p : {2u, 3u, 5u, 7u}) {
        const FieldSpec& f = FieldSpec::prime(p);
        CHECK(fusion_decompose(p, f) == std::vector<uint32_t>{p, p});
        for (uint32_t i = 2; i < p; ++i)
            CHECK(fusion_decompose(i, f) == std::vector<uint32_t>{i - 1, i + 1});
    }
    CHECK(fusion_decompose(3, FieldSpec::prime(3)) == std::vector<uint32_t>{3, 3});
    CHECK(fusion_decompose(2, FieldSpec::prime(5)) == std::vector<uint32_t>{1, 3});
}

TEST_CASE("jelly vector support") {
    Matrix j35 = jelly_vector(3, 5);
    size_t ones = 0;
    for (size_t i = 0; i < j35.cols(); ++i)
        if (!j35.at(0, i).is_zero()) ++ones;
    CHECK(ones == 15); // C(5,2) + C(5,4)
    Matrix j23 = jelly_vector(2, 3);
    ones = 0;
    for (size_t i = 0; i < j23.cols(); ++i)
        if (!j23.at(0, i).is_zero()) ++ones;
    CHECK(ones == 6);
    CHECK(j35.at(0, 0).is_zero()); // all-zeros index excluded
    CHECK(j23.at(0, (1 << 3) - 1).is_zero()); // all-ones index excluded (length n)
}

TEST_CASE("jelly vector is equivariant, v0* is not") {
    for (uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull}) {
        const FieldSpec& f = FieldSpec::of_order(q);
        for (uint32_t n = 1; n <= 9; ++n) {
            Matrix jv = jelly_vector(f, n);
            for (const Scalar& x : field_elements(f)) {
                Matrix acted = apply_kron2_row(jv, action_matrix_v2(x, 1), n);
                CHECK(acted == jv);
            }
        }
    }
    // row [1,0] = v_0^* fails equivariance at x=1 over F_2
    const FieldSpec& F2 = FieldSpec::prime(2);
    Matrix v0 = Matrix::from_ints(1, 2, F2, {1, 0});
    Matrix acted = apply_kron2_row(v0, action_matrix_v2(Scalar::one(F2), 1), 1);
    CHECK(acted != v0);
}

TEST_CASE("binomial sums vanish") {
    CHECK(binomial_sum_zero(3, 4));
    CHECK(binomial_sum_zero(2, 3));
    CHECK(binomial_sum_zero(5, 4)); // empty sum
    for (uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull})
        for (uint64_t l = 1; l <= 40; ++l) CHECK(binomial_sum_zero(q, l));
}
