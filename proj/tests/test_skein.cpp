#include "unidiag/skein.hpp"
#include "unidiag/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace unidiag;

namespace {
const FieldSpec& Q = FieldSpec::rationals();

size_t word_index(const std::vector<Word>& words, const std::string& letters) {
    for (size_t i = 0; i < words.size(); ++i)
        if (words[i].letters == letters) return i;
    throw std::runtime_error("word not found: " + letters);
}
} // namespace

TEST_CASE("strand reduction cancels bracket chains with signs") {
    // bracket then invbracket on one strand reduces to a plain edge, +1
    CircuitSpec spec;
    spec.input_signs = {1};
    spec.slices = {{Gate::Bracket}, {Gate::InvBracket}, {Gate::Dot}};
    Diagram d = from_circuit(spec);
    Reduced r = canonicalize_term(d, Q);
    CHECK(r.coeff == Scalar::one(Q));
    CHECK(r.d.verts.size() == 1);
    CHECK(r.d.verts[0].kind == VertexKind::Dot);
    // E4 squared: flipping a bracket twice is the identity operation
    Diagram cap = jellyleaf(parse_word(AutomatonId::N0, 0, "<>"));
    Reduced r2 = canonicalize_term(cap, Q);
    CHECK(r2.coeff == Scalar::one(Q));
    CHECK(canonical_key(r2.d) == canonical_key(cap));
}

TEST_CASE("reduction folds loops and closed chains") {
    Diagram d;
    d.loops = 2;
    Reduced r = reduce_strands(d, Q);
    CHECK(r.coeff == Scalar::from_int(Q, 4));
    // a circle through one bracket and one inverse bracket
    CircuitSpec spec;
    spec.input_signs = {};
    spec.slices = {{Gate::Cup}, {Gate::IdP, Gate::InvBracket}, {Gate::IdP, Gate::Bracket},
                   {Gate::CapP}};
    Diagram loop = from_circuit(spec);
    Reduced r2 = reduce_strands(loop, Q);
    CHECK(r2.coeff == Scalar::from_int(Q, 2));
    CHECK(r2.d.verts.empty());
}

TEST_CASE("builtin rules verify over Q and small prime fields") {
    auto rules0 = builtin_rules(Q, 0);
    CHECK(rules0.size() >= 8);
    for (const auto& r : rules0) CHECK(r.verified);
    for (uint32_t p : {2u, 3u}) {
        auto rules = builtin_rules(FieldSpec::prime(p), p);
        bool has_e6 = false, has_e10 = false;
        for (const auto& r : rules) {
            CHECK(r.verified);
            if (r.name == "E6") has_e6 = true;
            if (r.name == "E10") has_e10 = true;
        }
        CHECK(has_e6);
        CHECK(has_e10);
    }
}

TEST_CASE("symmetrizer") {
    LinComb one_strand = djw(1, Q);
    CHECK(one_strand.size() == 1);
    // idempotent under evaluation for n <= 3 over Q
    for (uint32_t n : {2u, 3u}) {
        LinComb s = djw(n, Q);
        Matrix m(size_t(1) << n, size_t(1) << n, Q);
        for (auto& [d, c] : s.items()) m = m + as_map_matrix(d, Q).scale(c);
        CHECK(m * m == m);
    }
    const FieldSpec& F5 = FieldSpec::prime(5);
    LinComb s4 = djw(4, F5);
    Matrix m4(16, 16, F5);
    for (auto& [d, c] : s4.items()) m4 = m4 + as_map_matrix(d, F5).scale(c);
    CHECK(m4 * m4 == m4);
    CHECK_THROWS_AS(djw(5, F5), FactorialNotInvertible);
    // right partial trace of djw(p-1) vanishes in characteristic p
    for (uint32_t p : {3u, 5u}) {
        const FieldSpec& f = FieldSpec::prime(p);
        LinComb s = djw(p - 1, f);
        Matrix tr(size_t(1) << (p - 2), size_t(1) << (p - 2), f);
        for (auto& [d, c] : s.items()) tr = tr + as_map_matrix(partial_trace_right(d), f).scale(c);
        CHECK(tr.is_zero());
    }
}

TEST_CASE("normalize a basis diagram is the indicator") {
    SkeinEngine eng(Q, 0);
    for (const std::string& w : {"..", "<>", "<><>.", "<<>>."}) {
        Diagram g = jellyleaf(parse_word(AutomatonId::N0, 0, w));
        auto res = eng.normalize(g);
        for (size_t i = 0; i < res.words.size(); ++i) {
            if (res.words[i].letters == w) CHECK(res.coeffs[i] == Scalar::one(Q));
            else CHECK(res.coeffs[i].is_zero());
        }
        CHECK(res.steps <= 2);
    }
    const FieldSpec& F3 = FieldSpec::prime(3);
    SkeinEngine eng3(F3, 3);
    for (const std::string& w : {"<<*>>", "<<**>>", ".<>", "<<>>.."}) {
        Diagram g = jellyleaf(parse_word(AutomatonId::Np, 3, w));
        auto res = eng3.normalize(g);
        for (size_t i = 0; i < res.words.size(); ++i) {
            if (res.words[i].letters == w) CHECK(res.coeffs[i] == Scalar::one(F3));
            else CHECK(res.coeffs[i].is_zero());
        }
    }
}

TEST_CASE("normalize the trapped-dot diagram: <.> = .<> + <>.") {
    Diagram mid;
    mid.n_in = 3;
    mid.signs.assign(3, 1);
    int br = mid.add_vertex(VertexKind::Bracket);
    int dt = mid.add_vertex(VertexKind::Dot);
    mid.edges.push_back(Edge{Port{-1, 0}, Port{br, 0}});
    mid.edges.push_back(Edge{Port{-1, 2}, Port{br, 1}});
    mid.edges.push_back(Edge{Port{-1, 1}, Port{dt, 0}});
    SkeinEngine eng(Q, 0);
    auto res = eng.normalize(mid, true);
    CHECK(res.coeffs[word_index(res.words, ".<>")] == Scalar::one(Q));
    CHECK(res.coeffs[word_index(res.words, "<>.")] == Scalar::one(Q));
    CHECK(res.coeffs[word_index(res.words, "...")].is_zero());
    CHECK(res.trace.find("E5") != std::string::npos);
    CHECK(res.fallbacks == 0);
}

TEST_CASE("normalize the flattened crossing") {
    Diagram fl = flatten(Diagram::permutation({1, 0}));
    SkeinEngine eng(Q, 0);
    auto res = eng.normalize(fl);
    CHECK(res.coeffs[word_index(res.words, "<<>>")] == Scalar::one(Q));
    CHECK(res.coeffs[word_index(res.words, "<><>")] == Scalar::one(Q));
    size_t nonzero = 0;
    for (const Scalar& c : res.coeffs)
        if (!c.is_zero()) ++nonzero;
    CHECK(nonzero == 2);
    CHECK(res.fallbacks == 0);
}

TEST_CASE("normalize kills vanishing configurations") {
    SkeinEngine eng(Q, 0);
    // double dot tensored with a normal strand
    Diagram dd = jellyleaf(parse_word(AutomatonId::N0, 0, "."));
    int inv = dd.add_vertex(VertexKind::InvBracket);
    int d1 = dd.add_vertex(VertexKind::Dot);
    int d2 = dd.add_vertex(VertexKind::Dot);
    dd.edges.push_back(Edge{Port{inv, 0}, Port{d1, 0}});
    dd.edges.push_back(Edge{Port{inv, 1}, Port{d2, 0}});
    auto res = eng.normalize(dd, true);
    for (const Scalar& c : res.coeffs) CHECK(c.is_zero());
    CHECK(res.trace.find("E2") != std::string::npos);
    // capped jellyfish over F3 (remaining legs dotted)
    const FieldSpec& F3 = FieldSpec::prime(3);
    SkeinEngine eng3(F3, 3);
    Diagram capped;
    capped.n_in = 3;
    capped.signs.assign(3, 1);
    int dA = capped.add_vertex(VertexKind::Dot);
    int dB = capped.add_vertex(VertexKind::Dot);
    int dC = capped.add_vertex(VertexKind::Dot);
    capped.edges.push_back(Edge{Port{-1, 0}, Port{dA, 0}});
    capped.edges.push_back(Edge{Port{-1, 1}, Port{dB, 0}});
    capped.edges.push_back(Edge{Port{-1, 2}, Port{dC, 0}});
    int J = capped.add_vertex(VertexKind::Jelly, 3);
    int iv = capped.add_vertex(VertexKind::InvBracket);
    capped.edges.push_back(Edge{Port{iv, 0}, Port{J, 0}});
    capped.edges.push_back(Edge{Port{iv, 1}, Port{J, 1}});
    for (int k = 2; k < 5; ++k) {
        int iv2 = capped.add_vertex(VertexKind::InvBracket);
        int dk = capped.add_vertex(VertexKind::Dot);
        capped.edges.push_back(Edge{Port{iv2, 0}, Port{J, k}});
        capped.edges.push_back(Edge{Port{iv2, 1}, Port{dk, 0}});
    }
    auto res3 = eng3.normalize(capped, true);
    for (const Scalar& c : res3.coeffs) CHECK(c.is_zero());
}

TEST_CASE("normalize a free loop scales by two") {
    SkeinEngine eng(Q, 0);
    Diagram d = jellyleaf(parse_word(AutomatonId::N0, 0, ".."));
    d.loops = 1;
    auto res = eng.normalize(d);
    CHECK(res.coeffs[word_index(res.words, "..")] == Scalar::from_int(Q, 2));
}

TEST_CASE("normalize deep nesting in characteristic two") {
    // <<>> exceeds the depth bound for p = 2 and must expand through E7
    const FieldSpec& F2 = FieldSpec::prime(2);
    SkeinEngine eng(F2, 2);
    Diagram deep;
    deep.n_in = 4;
    deep.signs.assign(4, 1);
    int b1 = deep.add_vertex(VertexKind::Bracket);
    int b2 = deep.add_vertex(VertexKind::Bracket);
    deep.edges.push_back(Edge{Port{-1, 0}, Port{b1, 0}});
    deep.edges.push_back(Edge{Port{-1, 3}, Port{b1, 1}});
    deep.edges.push_back(Edge{Port{-1, 1}, Port{b2, 0}});
    deep.edges.push_back(Edge{Port{-1, 2}, Port{b2, 1}});
    auto res = eng.normalize(deep, true);
    CHECK(res.trace.find("E7") != std::string::npos);
    Matrix v = evaluate(deep, F2);
    auto cy = extract_y_coefficients(v, 4, F2, 2);
    for (size_t i = 0; i < cy.size(); ++i) CHECK(res.coeffs[i] == cy[i]);
}

TEST_CASE("normalize two jellyfish sharing p legs (snip)") {
    const FieldSpec& F2 = FieldSpec::prime(2);
    SkeinEngine eng(F2, 2);
    Diagram d;
    d.n_in = 2;
    d.signs.assign(2, 1);
    int j1 = d.add_vertex(VertexKind::Jelly, 2);
    int j2 = d.add_vertex(VertexKind::Jelly, 2);
    d.edges.push_back(Edge{Port{-1, 0}, Port{j1, 0}});
    d.edges.push_back(Edge{Port{-1, 1}, Port{j2, 0}});
    for (int k = 1; k <= 2; ++k) {
        int iv = d.add_vertex(VertexKind::InvBracket);
        d.edges.push_back(Edge{Port{iv, 0}, Port{j1, k}});
        d.edges.push_back(Edge{Port{iv, 1}, Port{j2, k}});
    }
    auto res = eng.normalize(d, true);
    CHECK(res.trace.find("E10") != std::string::npos);
    Matrix v = evaluate(d, F2);
    auto cy = extract_y_coefficients(v, 2, F2, 2);
    for (size_t i = 0; i < cy.size(); ++i) CHECK(res.coeffs[i] == cy[i]);
    // for p = 2 the snipped pair is just the bracketed cap
    CHECK(res.coeffs[word_index(res.words, "<>")] == Scalar::one(F2));
    CHECK(res.coeffs[word_index(res.words, "..")].is_zero());
}

TEST_CASE("normalize a nested jellyfish pair") {
    // two jellyfish joined by p-1 connectors with one pair of boundary legs
    // bracketing the other: correct adjacency, wrong chain arrangement
    const FieldSpec& F2 = FieldSpec::prime(2);
    SkeinEngine eng(F2, 2);
    Diagram d;
    d.n_in = 5;
    d.signs.assign(5, 1);
    int dt = d.add_vertex(VertexKind::Dot);
    int j1 = d.add_vertex(VertexKind::Jelly, 2);
    int j2 = d.add_vertex(VertexKind::Jelly, 2);
    int iv = d.add_vertex(VertexKind::InvBracket);
    d.edges.push_back(Edge{Port{-1, 0}, Port{dt, 0}});
    d.edges.push_back(Edge{Port{-1, 1}, Port{j1, 0}});
    d.edges.push_back(Edge{Port{-1, 4}, Port{j1, 1}});
    d.edges.push_back(Edge{Port{-1, 2}, Port{j2, 0}});
    d.edges.push_back(Edge{Port{-1, 3}, Port{j2, 1}});
    d.edges.push_back(Edge{Port{iv, 0}, Port{j1, 2}});
    d.edges.push_back(Edge{Port{iv, 1}, Port{j2, 2}});
    auto res = eng.normalize(d, true);
    CHECK(res.fallbacks == 0);
    CHECK(res.trace.find("cluster") != std::string::npos);
    auto cy = extract_y_coefficients(evaluate(d, F2), 5, F2, 2);
    for (size_t i = 0; i < cy.size(); ++i) CHECK(res.coeffs[i] == cy[i]);
}

TEST_CASE("normalize a dotted jellyfish (E6)") {
    const FieldSpec& F3 = FieldSpec::prime(3);
    SkeinEngine eng(F3, 3);
    Diagram d;
    d.n_in = 4;
    d.signs.assign(4, 1);
    int J = d.add_vertex(VertexKind::Jelly, 3);
    for (int k = 0; k < 4; ++k) d.edges.push_back(Edge{Port{-1, k}, Port{J, k}});
    int iv = d.add_vertex(VertexKind::InvBracket);
    int dt = d.add_vertex(VertexKind::Dot);
    d.edges.push_back(Edge{Port{iv, 0}, Port{J, 4}});
    d.edges.push_back(Edge{Port{iv, 1}, Port{dt, 0}});
    auto res = eng.normalize(d, true);
    CHECK(res.trace.find("E6") != std::string::npos);
    Matrix v = evaluate(d, F3);
    auto cy = extract_y_coefficients(v, 4, F3, 3);
    for (size_t i = 0; i < cy.size(); ++i) CHECK(res.coeffs[i] == cy[i]);
    CHECK(res.fallbacks == 0);
}

TEST_CASE("random circuit corpus normalizes soundly") {
    struct Cfg {
        const char* field;
        uint32_t p;
    } cfgs[] = {{"0", 0}, {"2", 2}, {"3", 3}};
    for (const auto& cfg : cfgs) {
        const FieldSpec& f = FieldSpec::parse(cfg.field);
        SkeinEngine eng(f, cfg.p);
        Rng rng(42);
        size_t fallbacks = 0;
        for (size_t n = 2; n <= 6; ++n) {
            for (int t = 0; t < 30; ++t) {
                Diagram d = random_circuit(rng, n, cfg.p);
                auto res = eng.normalize(d); // oracle check inside
                fallbacks += res.fallbacks;
                for (const Word& w : res.words) CHECK(accepts(w));
            }
        }
        INFO("field " << cfg.field << " fallbacks " << fallbacks);
        CHECK(true);
    }
}

TEST_CASE("verify_presentation aggregates pass") {
    Report rep = verify_presentation(Q, 0, 4, 5);
    for (const auto& item : rep.items) {
        INFO(item.name << ": " << item.detail);
        CHECK(item.pass);
    }
    Report rep3 = verify_presentation(FieldSpec::prime(3), 3, 4, 5);
    for (const auto& item : rep3.items) {
        INFO(item.name << ": " << item.detail);
        CHECK(item.pass);
    }
}
