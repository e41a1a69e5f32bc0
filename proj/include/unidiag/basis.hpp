#pragma once

// Light-leaf basis delta (X family), jellyfish basis gamma (Y family),
// pairing vectors, triangularity certificates and coefficient extraction
// (normalization by evaluation).

#include "unidiag/evaluate.hpp"
#include "unidiag/word.hpp"

#include <mutex>
#include <optional>

namespace unidiag {

struct TriangularityViolated : field_error {
    explicit TriangularityViolated(const std::string& w)
        : field_error("TriangularityViolated: " + w) {}
};
struct NotInSpan : field_error {
    NotInSpan() : field_error("NotInSpan: nonzero residual in extract_coefficients") {}
};
struct OddBoundary : field_error {
    OddBoundary() : field_error("OddBoundary") {}
};

// ---------------------------------------------------------------------------
// Light-leaf map delta

// Image of a word under delta: R pushes a wire, L caps the innermost open
// wire through a bracket, A places a jellyfish eating all open wires plus
// the bottom input and re-emits p-1 wires through inverse brackets, B dots
// the outermost wire and appends the bottom input, and the terminal box
// dots the leftovers left to right.
//
// The caps are oriented so that the pairing of Lemma "indep" has diagonal
// +1 in both characteristics (bracket value +1 on the (1,0) assignment).
inline Diagram lightleaf(const Word& w) {
    if (w.automaton != AutomatonId::M0 && w.automaton != AutomatonId::Mp)
        throw NotAccepted(w.letters);
    if (!accepts(w)) throw NotAccepted(w.letters);
    uint32_t p = w.p;
    size_t n = w.letters.size();
    Diagram d;
    d.n_in = n;
    d.n_out = 0;
    d.signs.assign(n, 1);

    std::vector<Port> wires; // outermost first; R pushes at the back (innermost)
    bool inAB = false;
    for (size_t i = 0; i < n; ++i) {
        char c = w.letters[i];
        Port here{-1, (int)i};
        switch (c) {
            case 'R':
                wires.push_back(here);
                break;
            case 'L': {
                Port s = wires.back();
                wires.pop_back();
                int br = d.add_vertex(VertexKind::Bracket);
                // right-facing cap: leg0 = the closing (right) end
                d.edges.push_back(Edge{here, Port{br, 0}});
                d.edges.push_back(Edge{s, Port{br, 1}});
                break;
            }
            case 'A': {
                inAB = true;
                int J = d.add_vertex(VertexKind::Jelly, p);
                for (uint32_t k = 0; k + 1 < p; ++k)
                    d.edges.push_back(Edge{wires[k], Port{J, (int)k}});
                d.edges.push_back(Edge{here, Port{J, (int)(p - 1)}});
                std::vector<Port> next(p - 1);
                for (uint32_t j = 0; j + 1 < p; ++j) {
                    int inv = d.add_vertex(VertexKind::InvBracket);
                    d.edges.push_back(Edge{Port{inv, 0}, Port{J, (int)(2 * p - 2 - j)}});
                    next[j] = Port{inv, 1};
                }
                wires = next;
                break;
            }
            case 'B': {
                inAB = true;
                int dot = d.add_vertex(VertexKind::Dot);
                d.edges.push_back(Edge{wires[0], Port{dot, 0}});
                std::vector<Port> next(wires.begin() + 1, wires.end());
                next.push_back(here);
                wires = next;
                break;
            }
        }
    }
    (void)inAB;
    for (Port s : wires) {
        int dot = d.add_vertex(VertexKind::Dot);
        d.edges.push_back(Edge{s, Port{dot, 0}});
    }
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// Jellyfish map gamma

// Image of an N-word: dots on depth-0 strands, one left-facing bracket per
// matched cap, a jellyfish per star whose left legs eat the open strands,
// whose middle leg is the star's boundary point, and whose right legs are
// reserved for the closing strands; consecutive jellyfish in a plateau run
// are linked by p-1 inverse-bracket connectors.
inline Diagram jellyleaf(const Word& w) {
    if (w.automaton != AutomatonId::N0 && w.automaton != AutomatonId::Np)
        throw NotAccepted(w.letters);
    if (!accepts(w)) throw NotAccepted(w.letters);
    uint32_t p = w.p;
    size_t n = w.letters.size();
    Diagram d;
    d.n_in = n;
    d.n_out = 0;
    d.signs.assign(n, 1);

    struct Open {
        bool is_bend;
        Port port; // boundary point for '<', or the reserved jelly leg
    };
    std::vector<Open> stack;
    for (size_t i = 0; i < n; ++i) {
        char c = w.letters[i];
        Port here{-1, (int)i};
        switch (c) {
            case '.': {
                int dot = d.add_vertex(VertexKind::Dot);
                d.edges.push_back(Edge{here, Port{dot, 0}});
                break;
            }
            case '<':
                stack.push_back(Open{false, here});
                break;
            case '>': {
                Open o = stack.back();
                stack.pop_back();
                if (!o.is_bend) {
                    int br = d.add_vertex(VertexKind::Bracket);
                    // left-facing cap: leg0 = the opening (left) end
                    d.edges.push_back(Edge{o.port, Port{br, 0}});
                    d.edges.push_back(Edge{here, Port{br, 1}});
                } else {
                    d.edges.push_back(Edge{here, o.port});
                }
                break;
            }
            case '*': {
                int J = d.add_vertex(VertexKind::Jelly, p);
                for (uint32_t k = 0; k + 1 < p; ++k) {
                    const Open& o = stack[k];
                    if (!o.is_bend) {
                        d.edges.push_back(Edge{o.port, Port{J, (int)k}});
                    } else {
                        int inv = d.add_vertex(VertexKind::InvBracket);
                        d.edges.push_back(Edge{Port{inv, 0}, o.port});
                        d.edges.push_back(Edge{Port{inv, 1}, Port{J, (int)k}});
                    }
                }
                d.edges.push_back(Edge{here, Port{J, (int)(p - 1)}});
                for (uint32_t k = 0; k + 1 < p; ++k)
                    stack[k] = Open{true, Port{J, (int)(2 * p - 2 - k)}};
                break;
            }
        }
    }
    if (!stack.empty()) throw NotAccepted(w.letters);
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// Recognition of normal-form diagrams

// Returns the N-word of a diagram in jellyfish normal form, or nullopt.
// The scan classifies each boundary strand (dot, bracket cap, or jellyfish
// leg by its position relative to the middle leg), then the candidate word
// is rebuilt through gamma and compared structurally.
inline std::optional<Word> recognize_basis_word(const Diagram& d, uint32_t p_hint = 0) {
    if (!d.all_plus_form() || d.loops != 0) return std::nullopt;
    uint32_t p = p_hint;
    for (const Vertex& v : d.verts)
        if (v.kind == VertexKind::Jelly) {
            if (p != 0 && p != v.p) return std::nullopt;
            p = v.p;
        }
    std::map<Port, Port> adj;
    for (const Edge& e : d.edges) {
        adj[e.src] = e.dst;
        adj[e.dst] = e.src;
    }
    std::string word;
    for (size_t i = 0; i < d.n_in; ++i) {
        auto it = adj.find(Port{-1, (int)i});
        if (it == adj.end()) return std::nullopt;
        Port q = it->second;
        if (q.v < 0) return std::nullopt;
        const Vertex& v = d.verts[q.v];
        switch (v.kind) {
            case VertexKind::Dot: word += '.'; break;
            case VertexKind::Bracket: {
                Port other = adj.count(Port{q.v, 1 - q.leg}) ? adj.at(Port{q.v, 1 - q.leg}) : Port{-2, 0};
                if (other.v != -1) return std::nullopt;
                if (q.leg == 0 && other.leg > (int)i) word += '<';
                else if (q.leg == 1 && other.leg < (int)i) word += '>';
                else return std::nullopt; // wrong orientation for a normal cap
                break;
            }
            case VertexKind::Jelly: {
                if (q.leg < (int)(p - 1)) word += '<';
                else if (q.leg == (int)(p - 1)) word += '*';
                else word += '>';
                break;
            }
            case VertexKind::InvBracket: return std::nullopt;
        }
    }
    Word cand{p ? AutomatonId::Np : AutomatonId::N0, p, word};
    if (!accepts(cand)) return std::nullopt;
    Diagram rebuilt = jellyleaf(cand);
    if (canonical_key(rebuilt) != canonical_key(d)) return std::nullopt;
    return cand;
}

// ---------------------------------------------------------------------------
// Pairing

struct BasisVectorIndex {
    size_t n = 0;
    size_t bits = 0; // leftmost factor is the most significant bit
    uint32_t length() const { return static_cast<uint32_t>(__builtin_popcountll(bits)); }
};

// bit i = 1 iff letter i is R or B.
inline BasisVectorIndex pairing_vec(const Word& w) {
    if (w.automaton != AutomatonId::M0 && w.automaton != AutomatonId::Mp)
        throw NotAccepted(w.letters);
    if (!accepts(w)) throw NotAccepted(w.letters);
    BasisVectorIndex z;
    z.n = w.letters.size();
    for (char c : w.letters) z.bits = (z.bits << 1) | ((c == 'R' || c == 'B') ? 1 : 0);
    return z;
}

struct PairingCertificate {
    std::vector<Word> words;       // canonical ascending order
    Matrix matrix;                 // A[i][j] = T(delta(words[i])) at f(words[j])
    std::vector<Scalar> diagonal;
    bool triangular = false;       // A[i][j] = 0 whenever words[i] < words[j]
};

// ---------------------------------------------------------------------------
// Cached basis data per (field, p, n)

struct BasisData {
    std::vector<Word> mwords, nwords;
    std::vector<Diagram> delta_diagrams, gamma_diagrams;
    std::vector<Matrix> delta_eval, gamma_eval; // 1 x 2^n rows
    PairingCertificate cert;
    Matrix y_in_x; // column y = X-coefficients of evaluate(gamma(y))
};

namespace detail {
inline std::vector<Scalar> solve_pairing(const PairingCertificate& cert,
                                         const std::vector<Scalar>& w) {
    // A is zero above the diagonal (A[i][j] = 0 for i < j); solve c^T A = w^T
    // by back-substitution from the last column.
    size_t m = cert.words.size();
    std::vector<Scalar> c(m, Scalar::zero(cert.matrix.field()));
    for (size_t j = m; j-- > 0;) {
        Scalar acc = w[j];
        for (size_t i = j + 1; i < m; ++i) acc -= c[i] * cert.matrix.at(i, j);
        c[j] = acc / cert.matrix.at(j, j);
    }
    return c;
}
} // namespace detail

inline const BasisData& basis_data(const FieldSpec& f, uint32_t p, size_t n) {
    static std::mutex mtx;
    static std::map<std::tuple<std::string, uint32_t, size_t>, std::unique_ptr<BasisData>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(f.to_string(), p, n);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto bd = std::make_unique<BasisData>();
    bool charp = p != 0;
    if (charp && f.characteristic() != p)
        throw CharMismatch("basis_data: field characteristic does not match p");
    bd->mwords = enumerate_words(charp ? AutomatonId::Mp : AutomatonId::M0, p, n);
    bd->nwords = enumerate_words(charp ? AutomatonId::Np : AutomatonId::N0, p, n);
    for (const Word& w : bd->mwords) {
        bd->delta_diagrams.push_back(lightleaf(w));
        bd->delta_eval.push_back(evaluate(bd->delta_diagrams.back(), f));
    }
    for (const Word& w : bd->nwords) {
        bd->gamma_diagrams.push_back(jellyleaf(w));
        bd->gamma_eval.push_back(evaluate(bd->gamma_diagrams.back(), f));
    }
    size_t m = bd->mwords.size();
    bd->cert.words = bd->mwords;
    bd->cert.matrix = Matrix(m, m, f);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j)
            bd->cert.matrix.at(i, j) = bd->delta_eval[i].at(0, pairing_vec(bd->mwords[j]).bits);
    bd->cert.triangular = true;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            if (!bd->cert.matrix.at(i, j).is_zero()) bd->cert.triangular = false;
    for (size_t i = 0; i < m; ++i) bd->cert.diagonal.push_back(bd->cert.matrix.at(i, i));
    if (!bd->cert.triangular)
        throw TriangularityViolated("pairing not triangular at n=" + std::to_string(n));
    for (const Scalar& s : bd->cert.diagonal)
        if (s.is_zero()) throw TriangularityViolated("zero diagonal at n=" + std::to_string(n));

    // change of basis: X-coefficients of each gamma image
    bd->y_in_x = Matrix(m, m, f);
    for (size_t y = 0; y < m; ++y) {
        std::vector<Scalar> w(m, Scalar::zero(f));
        for (size_t j = 0; j < m; ++j)
            w[j] = bd->gamma_eval[y].at(0, pairing_vec(bd->mwords[j]).bits);
        std::vector<Scalar> c = detail::solve_pairing(bd->cert, w);
        for (size_t x = 0; x < m; ++x) bd->y_in_x.at(x, y) = c[x];
    }

    cache.emplace(key, std::move(bd));
    return *cache.at(key);
}

inline PairingCertificate pairing_matrix(size_t n, const FieldSpec& f, uint32_t p = 0) {
    return basis_data(f, p, n).cert;
}

// X-basis coefficients of a 1 x 2^n row vector, by back-substitution against
// the triangular pairing; the residual must vanish exactly.
inline std::vector<Scalar> extract_coefficients(const Matrix& v, size_t n, const FieldSpec& f,
                                                uint32_t p = 0) {
    const BasisData& bd = basis_data(f, p, n);
    if (v.rows() != 1 || v.cols() != (size_t(1) << n)) throw ShapeMismatch();
    size_t m = bd.mwords.size();
    std::vector<Scalar> w(m, Scalar::zero(f));
    for (size_t j = 0; j < m; ++j) w[j] = v.at(0, pairing_vec(bd.mwords[j]).bits);
    std::vector<Scalar> c = detail::solve_pairing(bd.cert, w);
    Matrix residual = v;
    for (size_t i = 0; i < m; ++i) residual = residual - bd.delta_eval[i].scale(c[i]);
    if (!residual.is_zero()) throw NotInSpan();
    return c;
}

// Y-basis coefficients of a row vector, through the X <-> Y change of basis.
inline std::vector<Scalar> extract_y_coefficients(const Matrix& v, size_t n, const FieldSpec& f,
                                                  uint32_t p = 0) {
    const BasisData& bd = basis_data(f, p, n);
    std::vector<Scalar> cx = extract_coefficients(v, n, f, p);
    Matrix rhs(cx.size(), 1, f);
    for (size_t i = 0; i < cx.size(); ++i) rhs.at(i, 0) = cx[i];
    Matrix cy = bd.y_in_x.inverse() * rhs;
    std::vector<Scalar> out;
    for (size_t i = 0; i < cx.size(); ++i) out.push_back(cy.at(i, 0));
    return out;
}

// ---------------------------------------------------------------------------
// Temperley-Lieb matchings

// All noncrossing perfect matchings of m boundary points, one left-facing
// bracket per cap. |result| is the Catalan number C_{m/2}.
inline std::vector<Diagram> tl_matchings(size_t m) {
    if (m % 2 != 0) throw OddBoundary();
    using Pairs = std::vector<std::pair<size_t, size_t>>;
    // pair the first point of a segment with an odd-distance partner and
    // recurse on the inside and outside independently
    auto rec = [](auto&& self, const std::vector<size_t>& pts) -> std::vector<Pairs> {
        if (pts.empty()) return {Pairs{}};
        std::vector<Pairs> out;
        for (size_t k = 1; k < pts.size(); k += 2) {
            std::vector<size_t> inside(pts.begin() + 1, pts.begin() + k);
            std::vector<size_t> outside(pts.begin() + k + 1, pts.end());
            for (const Pairs& ins : self(self, inside))
                for (const Pairs& outs : self(self, outside)) {
                    Pairs full{{pts[0], pts[k]}};
                    full.insert(full.end(), ins.begin(), ins.end());
                    full.insert(full.end(), outs.begin(), outs.end());
                    out.push_back(full);
                }
        }
        return out;
    };
    std::vector<size_t> pts(m);
    for (size_t i = 0; i < m; ++i) pts[i] = i;
    std::vector<Pairs> all = rec(rec, pts);
    std::vector<Diagram> out;
    for (const auto& matching : all) {
        Diagram d;
        d.n_in = m;
        d.n_out = 0;
        d.signs.assign(m, 1);
        for (auto [a, b] : matching) {
            int br = d.add_vertex(VertexKind::Bracket);
            d.edges.push_back(Edge{Port{-1, (int)a}, Port{br, 0}});
            d.edges.push_back(Edge{Port{-1, (int)b}, Port{br, 1}});
        }
        d.validate();
        out.push_back(d);
    }
    return out;
}

} // namespace unidiag
