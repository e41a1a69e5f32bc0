#pragma once

// Seeded random-circuit corpus and the aggregated verification suites.

#include "unidiag/skein.hpp"
#include "unidiag/tables.hpp"

namespace unidiag {

// Deterministic across platforms: all draws go through explicit modulo.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    uint64_t next() {
        // xorshift64*
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }
    size_t below(size_t n) { return n ? next() % n : 0; }

  private:
    uint64_t state_;
};

// A random all-'+' form on n boundary points: random slices over the gate
// set, then everything left open is closed with dots and bracketed caps.
// Swap gates produce crossings, cups produce loops and nesting, jellyfish
// appear in characteristic p.
inline Diagram random_circuit(Rng& rng, size_t n, uint32_t p, size_t extra_slices = 6) {
    CircuitSpec spec;
    spec.p = p;
    spec.input_signs.assign(n, 1);
    size_t width = n;
    std::vector<int8_t> signs(n, 1);
    for (size_t s = 0; s < extra_slices; ++s) {
        std::vector<Gate> slice;
        std::vector<int8_t> next;
        size_t pos = 0;
        bool acted = false;
        while (pos < width) {
            size_t roll = rng.below(100);
            if (!acted && roll < 18 && pos + 1 < width) {
                slice.push_back(Gate::Swap);
                next.push_back(signs[pos + 1]);
                next.push_back(signs[pos]);
                pos += 2;
                acted = true;
            } else if (roll < 26 && signs[pos] == 1) {
                slice.push_back(Gate::Dot);
                pos += 1;
                acted = true;
            } else if (roll < 34 && signs[pos] == 1) {
                slice.push_back(Gate::Bracket);
                next.push_back(-1);
                pos += 1;
                acted = true;
            } else if (roll < 42 && signs[pos] == -1) {
                slice.push_back(Gate::InvBracket);
                next.push_back(1);
                pos += 1;
                acted = true;
            } else if (roll < 50 && pos + 1 < width && signs[pos] == -1 && signs[pos + 1] == 1) {
                slice.push_back(Gate::Cap);
                pos += 2;
                acted = true;
            } else if (roll < 54 && pos + 1 < width && signs[pos] == 1 && signs[pos + 1] == -1) {
                slice.push_back(Gate::CapP);
                pos += 2;
                acted = true;
            } else if (roll < 60 && width + 2 < n + 5) {
                slice.push_back(rng.below(2) ? Gate::Cup : Gate::CupP);
                if (slice.back() == Gate::Cup) {
                    next.push_back(1);
                    next.push_back(-1);
                } else {
                    next.push_back(-1);
                    next.push_back(1);
                }
                slice.push_back(signs[pos] == 1 ? Gate::IdP : Gate::IdM);
                next.push_back(signs[pos]);
                pos += 1;
                acted = true;
            } else if (p >= 2 && roll < 64) {
                // jellyfish when enough '+' wires sit side by side
                uint32_t legs = 2 * p - 1;
                bool ok = pos + legs <= width;
                for (size_t k = 0; ok && k < legs; ++k)
                    if (signs[pos + k] != 1) ok = false;
                if (ok) {
                    slice.push_back(Gate::Jelly);
                    pos += legs;
                    acted = true;
                } else {
                    slice.push_back(signs[pos] == 1 ? Gate::IdP : Gate::IdM);
                    next.push_back(signs[pos]);
                    pos += 1;
                }
            } else {
                slice.push_back(signs[pos] == 1 ? Gate::IdP : Gate::IdM);
                next.push_back(signs[pos]);
                pos += 1;
            }
        }
        spec.slices.push_back(slice);
        signs = next;
        width = signs.size();
        if (width == 0) break;
    }
    // close whatever is left: invert '-' wires, then dot or cap the '+' ones
    while (width > 0) {
        std::vector<Gate> slice;
        std::vector<int8_t> next;
        size_t pos = 0;
        while (pos < width) {
            if (signs[pos] == -1) {
                slice.push_back(Gate::InvBracket);
                next.push_back(1);
                pos += 1;
            } else if (pos + 1 < width && signs[pos + 1] == 1 && rng.below(2)) {
                slice.push_back(Gate::Bracket);
                next.push_back(-1);
                slice.push_back(Gate::IdP);
                next.push_back(1);
                pos += 2;
            } else if (pos + 1 < width && signs[pos + 1] == -1) {
                slice.push_back(Gate::CapP);
                pos += 2;
            } else {
                slice.push_back(Gate::Dot);
                pos += 1;
            }
        }
        spec.slices.push_back(slice);
        signs = next;
        width = signs.size();
        // a '-' then '+' pair coming out of Bracket+IdP caps next round
        if (width >= 2) {
            std::vector<Gate> cap_slice;
            std::vector<int8_t> nn;
            size_t q = 0;
            while (q < width) {
                if (q + 1 < width && signs[q] == -1 && signs[q + 1] == 1) {
                    cap_slice.push_back(Gate::Cap);
                    q += 2;
                } else {
                    cap_slice.push_back(signs[q] == 1 ? Gate::IdP : Gate::IdM);
                    nn.push_back(signs[q]);
                    q += 1;
                }
            }
            spec.slices.push_back(cap_slice);
            signs = nn;
            width = signs.size();
        }
    }
    Diagram d = from_circuit(spec);
    if (d.n_out != 0) throw SignatureMismatch("random circuit failed to close");
    return d;
}

// ---------------------------------------------------------------------------
// Aggregated verification report

struct ReportItem {
    std::string name;
    bool pass;
    std::string detail;
};

struct Report {
    std::vector<ReportItem> items;
    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

inline void report_add(Report& rep, const std::string& name, bool pass,
                       const std::string& detail = "") {
    rep.items.push_back(ReportItem{name, pass, detail});
}

// -- individual suites -------------------------------------------------------

inline Report suite_relations(const FieldSpec& f, uint32_t p) {
    Report rep;
    try {
        auto rules = builtin_rules(f, p);
        for (const auto& r : rules)
            report_add(rep, "relation " + r.name, r.verified, r.field_constraint);
    } catch (const std::exception& e) {
        report_add(rep, "relations", false, e.what());
    }
    return rep;
}

inline Report suite_bases(const FieldSpec& f, uint32_t p, size_t maxN) {
    Report rep;
    for (size_t n = 0; n <= maxN; ++n) {
        try {
            const BasisData& bd = basis_data(f, p, n);
            bool tri = bd.cert.triangular;
            bool unit = true;
            for (const Scalar& s : bd.cert.diagonal)
                if (!(s == Scalar::one(f))) unit = false;
            report_add(rep, "pairing triangular n=" + std::to_string(n), tri);
            report_add(rep, "pairing diagonal +1 n=" + std::to_string(n), unit);
            size_t m = bd.mwords.size();
            Matrix rows(m, size_t(1) << n, f);
            for (size_t i = 0; i < m; ++i)
                for (size_t c = 0; c < rows.cols(); ++c) rows.at(i, c) = bd.delta_eval[i].at(0, c);
            BigInt cnt = count_words(p ? AutomatonId::Mp : AutomatonId::M0, p, n);
            report_add(rep, "rank=count n=" + std::to_string(n),
                       rows.rank() == m && BigInt(m) == cnt, cnt.convert_to<std::string>());
            bd.y_in_x.inverse();
            report_add(rep, "X/Y change of basis invertible n=" + std::to_string(n), true);
        } catch (const std::exception& e) {
            report_add(rep, "bases n=" + std::to_string(n), false, e.what());
        }
    }
    return rep;
}

inline Report suite_jelly(size_t maxN) {
    Report rep;
    for (uint64_t q : {2ull, 3ull, 4ull, 5ull, 7ull, 8ull, 9ull}) {
        const FieldSpec& f = FieldSpec::of_order(q);
        bool equi = true;
        for (uint32_t n = 1; n <= std::min<size_t>(maxN, 9); ++n) {
            Matrix jv = jelly_vector(f, n);
            for (const Scalar& x : field_elements(f))
                if (apply_kron2_row(jv, action_matrix_v2(x, 1), n) != jv) equi = false;
        }
        report_add(rep, "jelly equivariance q=" + std::to_string(q), equi);
        bool sums = true;
        for (uint64_t l = 1; l <= 40; ++l)
            if (!binomial_sum_zero(q, l)) sums = false;
        report_add(rep, "binomial sums q=" + std::to_string(q), sums);
    }
    return rep;
}

inline Report suite_bijections(size_t maxN) {
    Report rep;
    size_t lim = std::min<size_t>(maxN, 12);
    bool ok0 = true;
    for (size_t n = 0; n <= lim && ok0; ++n) {
        std::set<std::string> seen;
        for (const Word& w : enumerate_words(AutomatonId::M0, 0, n)) {
            Word img = m0_to_n0(w);
            if (!accepts(img) || img.letters.size() != n || n0_to_m0(img).letters != w.letters)
                ok0 = false;
            seen.insert(img.letters);
        }
        if (seen.size() != enumerate_words(AutomatonId::M0, 0, n).size()) ok0 = false;
    }
    report_add(rep, "bijection m0<->n0 (n<=" + std::to_string(lim) + ")", ok0);
    for (uint32_t p : {2u, 3u, 4u, 5u}) {
        bool ok = true;
        for (size_t n = 0; n <= lim && ok; ++n) {
            std::set<std::string> seen;
            auto ms = enumerate_words(AutomatonId::Mp, p, n);
            for (const Word& w : ms) {
                Word img = mp_to_np(w);
                if (!accepts(img) || img.letters.size() != n ||
                    np_to_mp(img).letters != w.letters)
                    ok = false;
                seen.insert(img.letters);
            }
            if (seen.size() != ms.size()) ok = false;
        }
        report_add(rep, "bijection mp<->np height " + std::to_string(p - 1), ok);
    }
    Word mountain{AutomatonId::Mp, 5, "RLRRRLRRBBAAABAAAAABAABBBBAAB"};
    std::string plateau = "<>..<><<<<**><**>>><>>..<<>>.";
    report_add(rep, "figure mountain <-> plateau",
               mp_to_np(mountain).letters == plateau &&
                   np_to_mp(Word{AutomatonId::Np, 5, plateau}).letters == mountain.letters);
    return rep;
}

// The reference entries of the two small value tables.
inline Report suite_tables() {
    Report rep;
    const FieldSpec& Q = FieldSpec::rationals();
    static const long long ref2[4][2] = {{0, 0}, {0, 1}, {0, -1}, {1, 0}};
    static const long long ref3[8][4] = {{0, 0, 0, 0}, {0, 0, 0, 0},  {0, 0, 0, 0}, {0, 0, 0, 0},
                                         {0, -1, -1, 0}, {0, 1, 0, -1}, {0, 0, 1, 1}, {1, 0, 0, 0}};
    ValueTable t2 = value_table(2, Q);
    bool ok2 = true;
    for (size_t r = 0; r < 4; ++r)
        for (size_t c = 0; c < 2; ++c)
            if (t2.cells[r][c] != Scalar::from_int(Q, ref2[r][c])) ok2 = false;
    report_add(rep, "table n=2", ok2);
    ValueTable t3 = value_table(3, Q);
    bool ok3 = true;
    for (size_t r = 0; r < 8; ++r)
        for (size_t c = 0; c < 4; ++c)
            if (t3.cells[r][c] != Scalar::from_int(Q, ref3[r][c])) ok3 = false;
    report_add(rep, "table n=3", ok3);
    // the crossing identity <.> = .<> + <>. via coefficient extraction
    bool cross = true;
    for (size_t r = 0; r < 8; ++r)
        if (t3.cells[r][2] != t3.cells[r][1] + t3.cells[r][3]) cross = false;
    Diagram mid;
    mid.n_in = 3;
    mid.signs.assign(3, 1);
    int br = mid.add_vertex(VertexKind::Bracket);
    int dt = mid.add_vertex(VertexKind::Dot);
    mid.edges.push_back(Edge{Port{-1, 0}, Port{br, 0}});
    mid.edges.push_back(Edge{Port{-1, 2}, Port{br, 1}});
    mid.edges.push_back(Edge{Port{-1, 1}, Port{dt, 0}});
    auto cy = extract_y_coefficients(evaluate(mid, Q), 3, Q, 0);
    const BasisData& bd = basis_data(Q, 0, 3);
    for (size_t i = 0; i < cy.size(); ++i) {
        Scalar want = bd.nwords[i].letters == "..." ? Scalar::zero(Q) : Scalar::one(Q);
        if (cy[i] != want) cross = false;
    }
    report_add(rep, "crossing identity <.> = .<> + <>.", cross);
    return rep;
}

// Normalization soundness on a seeded corpus: the engine's own oracle check
// plus output-word acceptance and agreement with coefficient extraction.
inline Report suite_normalize(const FieldSpec& f, uint32_t p, size_t maxN, size_t circuits_per_n,
                              uint64_t seed) {
    Report rep;
    try {
        SkeinEngine engine(f, p, seed);
        Rng rng(seed);
        size_t done = 0, fallbacks = 0;
        for (size_t n = 2; n <= std::min<size_t>(maxN, 8); ++n) {
            for (size_t t = 0; t < circuits_per_n; ++t) {
                Diagram d = random_circuit(rng, n, p);
                auto res = engine.normalize(d);
                for (const Word& w : res.words)
                    if (!accepts(w)) throw field_error("unaccepted output word");
                auto cy = extract_y_coefficients(evaluate(d, f), n, f, p);
                for (size_t i = 0; i < cy.size(); ++i)
                    if (cy[i] != res.coeffs[i])
                        throw field_error("normalize disagrees with extraction");
                fallbacks += res.fallbacks;
                ++done;
            }
        }
        report_add(rep, "normalize corpus", true,
                   std::to_string(done) + " circuits, " + std::to_string(fallbacks) +
                       " basis-expansion fallbacks");
    } catch (const std::exception& e) {
        report_add(rep, "normalize corpus", false, e.what());
    }
    return rep;
}

// (i) rule verifications, (ii) pairing certificates, (iii) rank-equals-count,
// (iv) normalize-vs-oracle on a random circuit corpus.
inline Report verify_presentation(const FieldSpec& f, uint32_t p, size_t maxN,
                                  size_t circuits_per_n = 25, uint64_t seed = 20240501) {
    Report rep;
    for (Report part : {suite_relations(f, p), suite_bases(f, p, maxN),
                        suite_normalize(f, p, maxN, circuits_per_n, seed)})
        rep.items.insert(rep.items.end(), part.items.begin(), part.items.end());
    return rep;
}

} // namespace unidiag
