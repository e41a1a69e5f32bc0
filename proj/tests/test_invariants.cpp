#include "unidiag/skein.hpp"
#include "unidiag/textio.hpp"
#include "unidiag/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace unidiag;

namespace {
const FieldSpec& Q = FieldSpec::rationals();
}

TEST_CASE("equivariance_check on the jelly vector and on v0*") {
    const FieldSpec& F3 = FieldSpec::prime(3);
    Matrix jv = jelly_vector(3, 5);
    Matrix triv = Matrix::identity(1, F3);
    for (const Scalar& x : field_elements(F3))
        CHECK(equivariance_check(jv, action_matrix_v2(x, 5), triv));
    const FieldSpec& F4 = FieldSpec::extension(2, 2);
    Matrix jv4 = jelly_vector(F4, 6);
    Matrix triv4 = Matrix::identity(1, F4);
    for (const Scalar& x : field_elements(F4))
        CHECK(equivariance_check(jv4, action_matrix_v2(x, 6), triv4));
    const FieldSpec& F2 = FieldSpec::prime(2);
    Matrix v0 = Matrix::from_ints(1, 2, F2, {1, 0});
    CHECK_FALSE(equivariance_check(v0, action_matrix_v2(Scalar::one(F2), 1),
                                   Matrix::identity(1, F2)));
}

TEST_CASE("generator images are equivariant") {
    for (const std::string& name : {"0", "2", "3", "5"}) {
        const FieldSpec& f = FieldSpec::parse(name);
        std::vector<Scalar> xs;
        if (f.kind() == FieldSpec::Kind::Char0) xs = {Scalar::one(f)};
        else xs = field_elements(f);
        for (const Scalar& x : xs) {
            Matrix rho = action_matrix_v2(x, 1);
            Matrix rho2 = action_matrix_v2(x, 2);
            // dual action on V*: inverse transpose
            Matrix rho_dual = rho.inverse().transpose();
            Matrix one = Matrix::identity(1, f);
            // dot: V -> 1
            CHECK(equivariance_check(generator_matrix(Generator::Dot, f), rho, one));
            // phi: V -> V*
            CHECK(equivariance_check(generator_matrix(Generator::Phi, f), rho, rho_dual));
            // eps: V* (x) V -> 1
            CHECK(equivariance_check(generator_matrix(Generator::Cap, f), rho_dual.kron(rho), one));
            // eta: 1 -> V (x) V*
            CHECK(equivariance_check(generator_matrix(Generator::Cup, f), one, rho.kron(rho_dual)));
            // swap is natural
            CHECK(equivariance_check(generator_matrix(Generator::SwapMap, f), rho2, rho.kron(rho)));
        }
    }
    for (uint32_t p : {2u, 3u, 5u}) {
        const FieldSpec& f = FieldSpec::prime(p);
        Matrix jelly = generator_matrix(Generator::Jelly, f, p);
        Matrix one = Matrix::identity(1, f);
        for (const Scalar& x : field_elements(f))
            CHECK(equivariance_check(jelly, action_matrix_v2(x, 2 * p - 1), one));
    }
}

TEST_CASE("circuit files round-trip") {
    CircuitSpec spec;
    spec.p = 3;
    spec.input_signs = {1, 1, 1, 1, 1};
    spec.slices = {{Gate::Swap, Gate::IdP, Gate::IdP, Gate::IdP},
                   {Gate::Jelly}};
    std::string text = serialize_circuit(FieldSpec::prime(3), spec);
    std::istringstream in(text);
    ParsedCircuit back = parse_circuit(in);
    CHECK(back.field->to_string() == "3");
    CHECK(back.spec.p == 3);
    CHECK(back.spec.input_signs == spec.input_signs);
    REQUIRE(back.spec.slices.size() == spec.slices.size());
    for (size_t s = 0; s < spec.slices.size(); ++s) CHECK(back.spec.slices[s] == spec.slices[s]);
    CHECK(serialize_circuit(*back.field, back.spec) == text);
    // and the parsed circuit builds the same diagram
    CHECK(canonical_key(from_circuit(spec)) == canonical_key(from_circuit(back.spec)));
}

TEST_CASE("recognition round-trips up to n = 10") {
    for (uint32_t p : {2u, 3u, 5u}) {
        for (size_t n = 9; n <= 10; ++n) {
            for (const Word& w : enumerate_words(AutomatonId::Np, p, n)) {
                auto back = recognize_basis_word(jellyleaf(w), p);
                REQUIRE(back.has_value());
                CHECK(back->letters == w.letters);
            }
        }
    }
    for (size_t n = 9; n <= 10; ++n)
        for (const Word& w : enumerate_words(AutomatonId::N0, 0, n)) {
            auto back = recognize_basis_word(jellyleaf(w), 0);
            REQUIRE(back.has_value());
            CHECK(back->letters == w.letters);
        }
}

TEST_CASE("X/Y change of basis invertible up to n = 8") {
    for (size_t n = 7; n <= 8; ++n) {
        CHECK(basis_data(Q, 0, n).y_in_x.inverse().rows() > 0);
        CHECK(basis_data(FieldSpec::prime(3), 3, n).y_in_x.inverse().rows() > 0);
    }
}

TEST_CASE("E6 sides agree entrywise with the jellyfish marginal") {
    // The dotted jellyfish evaluates (after removing the copairing sign) to
    // the indicator of lengths p-1 and 2(p-1); value 1 on all of Z_{p-1}.
    for (uint32_t p : {2u, 3u, 5u}) {
        const FieldSpec& f = FieldSpec::prime(p);
        uint32_t m = 2 * p - 2;
        Diagram lhsD;
        lhsD.n_in = m;
        lhsD.signs.assign(m, 1);
        int J = lhsD.add_vertex(VertexKind::Jelly, p);
        for (uint32_t k = 0; k < m; ++k)
            lhsD.edges.push_back(Edge{Port{-1, (int)k}, Port{J, (int)k}});
        int inv = lhsD.add_vertex(VertexKind::InvBracket);
        int dot = lhsD.add_vertex(VertexKind::Dot);
        lhsD.edges.push_back(Edge{Port{inv, 0}, Port{J, (int)(2 * p - 2)}});
        lhsD.edges.push_back(Edge{Port{inv, 1}, Port{dot, 0}});
        Matrix v = evaluate(lhsD, f).scale(-Scalar::one(f));
        for (size_t z = 0; z < v.cols(); ++z) {
            uint32_t l = (uint32_t)__builtin_popcountll(z);
            Scalar want = (l == p - 1 || l == 2 * (p - 1)) ? Scalar::one(f) : Scalar::zero(f);
            CHECK(v.at(0, z) == want);
        }
    }
}

TEST_CASE("Reidemeister moves as connectivity") {
    // R2: two successive swaps are the identity connectivity
    CircuitSpec r2;
    r2.input_signs = {1, 1};
    r2.slices = {{Gate::Swap}, {Gate::Swap}};
    CHECK(canonical_key(from_circuit(r2)) == canonical_key(Diagram::identity(2)));
    // R3: the braid relation holds on the nose
    CircuitSpec a, b;
    a.input_signs = b.input_signs = {1, 1, 1};
    a.slices = {{Gate::Swap, Gate::IdP}, {Gate::IdP, Gate::Swap}, {Gate::Swap, Gate::IdP}};
    b.slices = {{Gate::IdP, Gate::Swap}, {Gate::Swap, Gate::IdP}, {Gate::IdP, Gate::Swap}};
    CHECK(canonical_key(from_circuit(a)) == canonical_key(from_circuit(b)));
    for (const std::string& name : {"0", "3"}) {
        const FieldSpec& f = FieldSpec::parse(name);
        CHECK(evaluate(flatten(from_circuit(a)), f) == evaluate(flatten(from_circuit(b)), f));
    }
}

TEST_CASE("paranoid normalization spot-checks every step") {
    const FieldSpec& F2 = FieldSpec::prime(2);
    SkeinEngine eng(F2, 2);
    Rng rng(5150);
    for (int t = 0; t < 10; ++t) {
        Diagram d = random_circuit(rng, 5, 2);
        auto res = eng.normalize(d, false, 0, /*paranoid=*/true);
        for (const Word& w : res.words) CHECK(accepts(w));
    }
    SkeinEngine engq(Q, 0);
    Rng rngq(5151);
    for (int t = 0; t < 10; ++t) {
        Diagram d = random_circuit(rngq, 5, 0);
        auto res = engq.normalize(d, false, 0, /*paranoid=*/true);
        CHECK(res.steps < 2000);
    }
}

TEST_CASE("flatten bends dual outputs with plain wiring") {
    // the name of phi: one bracket from the gate, none added by flatten
    CircuitSpec spec;
    spec.input_signs = {1};
    spec.slices = {{Gate::Bracket}};
    Diagram phi = from_circuit(spec); // V -> V*, output sign '-'
    Diagram flat = flatten(phi);
    size_t brackets = 0;
    for (const Vertex& v : flat.verts)
        if (v.kind == VertexKind::Bracket) ++brackets;
    CHECK(brackets == 1);
    CHECK(evaluate(flat, Q) == Matrix::from_ints(1, 4, Q, {0, 1, -1, 0}));
    // a mixed map: cup () -> (+,-) flattens to the 2-point identity name
    CircuitSpec cup;
    cup.slices = {{Gate::Cup}};
    Diagram fcup = flatten(from_circuit(cup));
    CHECK(evaluate(fcup, Q) == Matrix::from_ints(1, 4, Q, {0, 1, -1, 0}));
}

TEST_CASE("evaluation over an extension field") {
    const FieldSpec& F4 = FieldSpec::extension(2, 2);
    Diagram cap = jellyleaf(parse_word(AutomatonId::N0, 0, "<>"));
    Matrix v = evaluate(cap, F4);
    CHECK(v.at(0, 1) == Scalar::one(F4));
    CHECK(v.at(0, 2) == -Scalar::one(F4));
    Diagram circle;
    circle.loops = 1;
    CHECK(evaluate(circle, F4).at(0, 0).is_zero()); // 2 = 0 in characteristic 2
}

TEST_CASE("verify_presentation at reference depths") {
    // (F2, 2, 8) with a small corpus; the wider runs live in the acceptance suite
    Report rep = verify_presentation(FieldSpec::prime(2), 2, 8, 6);
    for (const auto& item : rep.items) {
        INFO(item.name << ": " << item.detail);
        CHECK(item.pass);
    }
    CHECK(rep.all_pass());
}
