#pragma once

// The tensor-evaluation functor T: diagrams -> exact matrices.
//
// Vertices carry fixed tensors (dot = v1*, bracket = the pairing
// eps(phi(x) (x) y), inverse bracket = its copairing, jellyfish = j_p) and
// every edge contracts a source index against a sink index. Free loops
// contribute a factor 2. Evaluation is a multilinear contraction and is
// independent of contraction order.

#include "unidiag/diagram.hpp"
#include "unidiag/matrix.hpp"
#include "unidiag/unirep.hpp"

#include <algorithm>
#include <random>

namespace unidiag {

struct CharMismatch : field_error {
    explicit CharMismatch(const std::string& what) : field_error("CharMismatch: " + what) {}
};

// ---------------------------------------------------------------------------
// Generator images as matrices (maps, not vertex tensors)

enum class Generator { Id, Cap, Cup, Dot, Phi, PhiInv, SwapMap, Jelly };

inline Matrix generator_matrix(Generator g, const FieldSpec& f, uint32_t p = 0) {
    switch (g) {
        case Generator::Id: return Matrix::identity(2, f);
        case Generator::Cap: return Matrix::from_ints(1, 4, f, {1, 0, 0, 1});
        case Generator::Cup: return Matrix::from_ints(4, 1, f, {1, 0, 0, 1});
        case Generator::Dot: return Matrix::from_ints(1, 2, f, {0, 1});
        case Generator::Phi: return Matrix::from_ints(2, 2, f, {0, -1, 1, 0});
        case Generator::PhiInv: return Matrix::from_ints(2, 2, f, {0, 1, -1, 0});
        case Generator::SwapMap:
            return Matrix::from_ints(4, 4, f, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1});
        case Generator::Jelly:
            if (f.characteristic() == 0 || f.characteristic() != p)
                throw CharMismatch("jelly requires characteristic p");
            return jelly_vector(f, 2 * p - 1);
    }
    throw field_error("unknown generator");
}

// Vertex tensors used by the contraction. B is the bilinear form of the
// bracket, C the copairing of the inverse bracket; B*C = I realises E_1 and
// C is exactly the non-identity term of the crossing relation E_5.
inline const std::array<long long, 4>& bracket_tensor() {
    static const std::array<long long, 4> b{0, 1, -1, 0};
    return b;
}
inline const std::array<long long, 4>& invbracket_tensor() {
    static const std::array<long long, 4> c{0, -1, 1, 0};
    return c;
}

// ---------------------------------------------------------------------------
// Contraction

namespace detail {

struct Tensor {
    std::vector<long long> labels; // >=0 edge ids, <0 boundary pins (-(i+1))
    std::vector<Scalar> data;      // leg 0 most significant

    size_t size() const { return data.size(); }
};

inline Tensor self_contract(const Tensor& t, const FieldSpec& f) {
    // find a repeated label
    for (size_t a = 0; a < t.labels.size(); ++a)
        for (size_t b = a + 1; b < t.labels.size(); ++b) {
            if (t.labels[a] != t.labels[b]) continue;
            Tensor out;
            for (size_t i = 0; i < t.labels.size(); ++i)
                if (i != a && i != b) out.labels.push_back(t.labels[i]);
            out.data.assign(size_t(1) << out.labels.size(), Scalar::zero(f));
            size_t n = t.labels.size();
            for (size_t idx = 0; idx < t.data.size(); ++idx) {
                size_t ba = (idx >> (n - 1 - a)) & 1, bb = (idx >> (n - 1 - b)) & 1;
                if (ba != bb) continue;
                if (t.data[idx].is_zero()) continue;
                size_t oidx = 0;
                for (size_t i = 0; i < n; ++i) {
                    if (i == a || i == b) continue;
                    oidx = (oidx << 1) | ((idx >> (n - 1 - i)) & 1);
                }
                out.data[oidx] += t.data[idx];
            }
            return self_contract(out, f);
        }
    return t;
}

inline Tensor contract(const Tensor& x, const Tensor& y, const FieldSpec& f) {
    std::vector<size_t> xs, ys; // shared leg positions
    std::vector<bool> yused(y.labels.size(), false);
    for (size_t i = 0; i < x.labels.size(); ++i)
        for (size_t j = 0; j < y.labels.size(); ++j)
            if (!yused[j] && x.labels[i] >= 0 && x.labels[i] == y.labels[j]) {
                xs.push_back(i);
                ys.push_back(j);
                yused[j] = true;
                break;
            }
    std::vector<bool> xshared(x.labels.size(), false);
    for (size_t i : xs) xshared[i] = true;
    Tensor out;
    for (size_t i = 0; i < x.labels.size(); ++i)
        if (!xshared[i]) out.labels.push_back(x.labels[i]);
    for (size_t j = 0; j < y.labels.size(); ++j)
        if (!yused[j]) out.labels.push_back(y.labels[j]);
    out.data.assign(size_t(1) << out.labels.size(), Scalar::zero(f));

    size_t nx = x.labels.size(), ny = y.labels.size(), ns = xs.size();
    for (size_t xi = 0; xi < x.data.size(); ++xi) {
        if (x.data[xi].is_zero()) continue;
        for (size_t yi = 0; yi < y.data.size(); ++yi) {
            if (y.data[yi].is_zero()) continue;
            bool ok = true;
            for (size_t k = 0; k < ns; ++k) {
                size_t bx = (xi >> (nx - 1 - xs[k])) & 1;
                size_t by = (yi >> (ny - 1 - ys[k])) & 1;
                if (bx != by) { ok = false; break; }
            }
            if (!ok) continue;
            size_t oidx = 0;
            for (size_t i = 0; i < nx; ++i) {
                if (xshared[i]) continue;
                oidx = (oidx << 1) | ((xi >> (nx - 1 - i)) & 1);
            }
            for (size_t j = 0; j < ny; ++j) {
                if (yused[j]) continue;
                oidx = (oidx << 1) | ((yi >> (ny - 1 - j)) & 1);
            }
            out.data[oidx] += x.data[xi] * y.data[yi];
        }
    }
    return out;
}

inline Tensor vertex_tensor(const Vertex& v, const FieldSpec& f) {
    Tensor t;
    switch (v.kind) {
        case VertexKind::Dot:
            t.data = {Scalar::zero(f), Scalar::one(f)};
            break;
        case VertexKind::Bracket: {
            for (long long x : bracket_tensor()) t.data.push_back(Scalar::from_int(f, x));
            break;
        }
        case VertexKind::InvBracket: {
            for (long long x : invbracket_tensor()) t.data.push_back(Scalar::from_int(f, x));
            break;
        }
        case VertexKind::Jelly: {
            if (f.characteristic() != v.p) throw CharMismatch("jelly in wrong characteristic");
            uint32_t n = 2 * v.p - 1;
            Matrix row = jelly_vector(f, n);
            for (size_t i = 0; i < row.cols(); ++i) t.data.push_back(row.at(0, i));
            break;
        }
    }
    return t;
}

} // namespace detail

// Row vector of length 2^{boundary size}; entry at index b is the value of
// the diagram on the basis assignment with the leftmost boundary point as
// the most significant bit.
inline Matrix evaluate(const Diagram& d, const FieldSpec& f) {
    d.validate();
    for (const Vertex& v : d.verts)
        if (v.kind == VertexKind::Jelly && f.characteristic() != v.p)
            throw CharMismatch("jelly in wrong characteristic");

    using detail::Tensor;
    std::map<Port, long long> edge_label;
    long long next = 0;
    for (const Edge& e : d.edges) {
        long long id = next++;
        edge_label[e.src] = id;
        edge_label[e.dst] = id;
    }
    std::vector<Tensor> pool;
    for (size_t vi = 0; vi < d.verts.size(); ++vi) {
        Tensor t = detail::vertex_tensor(d.verts[vi], f);
        for (uint32_t leg = 0; leg < d.verts[vi].legs(); ++leg)
            t.labels.push_back(edge_label.at(Port{(int)vi, (int)leg}));
        pool.push_back(detail::self_contract(t, f));
    }
    // boundary pins: unit tensors delta(pin, edge)
    for (size_t i = 0; i < d.boundary_size(); ++i) {
        auto it = edge_label.find(Port{-1, (int)i});
        if (it == edge_label.end()) throw UnboundPort();
        Tensor t;
        t.labels = {-(long long)(i + 1), it->second};
        t.data = {Scalar::one(f), Scalar::zero(f), Scalar::zero(f), Scalar::one(f)};
        pool.push_back(t);
    }

    // greedy pairwise contraction: smallest resulting tensor first
    while (pool.size() > 1) {
        size_t bi = 0, bj = 1;
        long long best = -1;
        bool found_shared = false;
        for (size_t i = 0; i < pool.size(); ++i)
            for (size_t j = i + 1; j < pool.size(); ++j) {
                bool share = false;
                size_t shared = 0;
                for (long long a : pool[i].labels)
                    if (a >= 0)
                        for (long long b : pool[j].labels)
                            if (a == b) { share = true; ++shared; }
                if (!share) continue;
                long long cost =
                    (long long)(pool[i].labels.size() + pool[j].labels.size() - 2 * shared);
                if (!found_shared || cost < best) {
                    best = cost;
                    bi = i;
                    bj = j;
                    found_shared = true;
                }
            }
        if (!found_shared) {
            // disconnected: outer product of the first two
            bi = 0; bj = 1;
        }
        Tensor merged = detail::contract(pool[bi], pool[bj], f);
        merged = detail::self_contract(merged, f);
        pool.erase(pool.begin() + bj);
        pool.erase(pool.begin() + bi);
        pool.push_back(merged);
    }

    Tensor result = pool.empty() ? Tensor{{}, {Scalar::one(f)}} : pool[0];
    // order the free legs by boundary position
    size_t n = d.boundary_size();
    if (result.labels.size() != n) throw UnboundPort();
    std::vector<size_t> pos_of(n);
    for (size_t i = 0; i < n; ++i) {
        long long want = -(long long)(i + 1);
        auto it = std::find(result.labels.begin(), result.labels.end(), want);
        if (it == result.labels.end()) throw UnboundPort();
        pos_of[i] = static_cast<size_t>(it - result.labels.begin());
    }
    Matrix row(1, size_t(1) << n, f);
    for (size_t idx = 0; idx < result.data.size(); ++idx) {
        if (result.data[idx].is_zero()) continue;
        size_t out = 0;
        for (size_t i = 0; i < n; ++i) out = (out << 1) | ((idx >> (n - 1 - pos_of[i])) & 1);
        row.at(0, out) = result.data[idx];
    }
    if (d.loops) {
        Scalar two = Scalar::from_int(f, 2), mul = Scalar::one(f);
        for (long l = 0; l < d.loops; ++l) mul *= two;
        row = row.scale(mul);
    }
    return row;
}

inline Matrix evaluate(const LinComb& lc, const FieldSpec& f) {
    Matrix acc;
    bool first = true;
    for (const auto& [d, c] : lc.items()) {
        Matrix m = evaluate(d, f).scale(c);
        if (first) { acc = m; first = false; }
        else acc = acc + m;
    }
    if (first) throw field_error("evaluate of empty linear combination needs a boundary size");
    return acc;
}

// Matrix of a map diagram: M[out][in] = row[in ++ out].
inline Matrix as_map_matrix(const Diagram& d, const FieldSpec& f) {
    Matrix row = evaluate(d, f);
    size_t ro = size_t(1) << d.n_out, ri = size_t(1) << d.n_in;
    Matrix m(ro, ri, f);
    for (size_t i = 0; i < ri; ++i)
        for (size_t o = 0; o < ro; ++o) m.at(o, i) = row.at(0, i * ro + o);
    return m;
}

// ---------------------------------------------------------------------------
// Relation oracle

// Exact equality of evaluations, rechecked after tensoring with identity
// strands on each side and under random boundary-permutation contexts.
inline bool relation_holds(const LinComb& lhs, const LinComb& rhs, const FieldSpec& f,
                           uint64_t seed = 12345, int probes = 3) {
    auto items = lhs.items();
    if (items.empty()) return rhs.empty();
    size_t nin = items[0].first.n_in, nout = items[0].first.n_out;
    for (auto* side : {&lhs, &rhs})
        for (const auto& [d, c] : side->items())
            if (d.n_in != nin || d.n_out != nout)
                throw SignatureMismatch("relation sides have mixed boundary signatures");

    auto flat = [&](const LinComb& lc) {
        LinComb out(f);
        for (const auto& [d, c] : lc.items()) out.add(flatten(d), c);
        return out;
    };
    LinComb l = flat(lhs), r = flat(rhs);
    Matrix ml = evaluate(l, f);
    Matrix mr = r.empty() ? Matrix(1, ml.cols(), f) : evaluate(r, f);
    if (ml != mr) return false;

    size_t n = nin + nout;
    // identity strands on each side
    {
        LinComb lt = tensor(tensor(LinComb(Diagram::identity(1), Scalar::one(f)), l),
                            LinComb(Diagram::identity(1), Scalar::one(f)));
        LinComb rt = tensor(tensor(LinComb(Diagram::identity(1), Scalar::one(f)), r),
                            LinComb(Diagram::identity(1), Scalar::one(f)));
        Matrix a = evaluate(flat(lt), f);
        Matrix b = rt.empty() ? Matrix(1, a.cols(), f) : evaluate(flat(rt), f);
        if (a != b) return false;
    }
    // random permutation contexts (naturality probe)
    std::mt19937_64 rng(seed);
    for (int t = 0; t < probes && n > 1; ++t) {
        std::vector<size_t> perm(n);
        for (size_t i = 0; i < n; ++i) perm[i] = i;
        for (size_t i = n; i-- > 1;) std::swap(perm[i], perm[rng() % (i + 1)]);
        Diagram pd = Diagram::permutation(perm);
        Matrix a = evaluate(compose(l, LinComb(pd, Scalar::one(f))), f);
        LinComb rc = compose(r, LinComb(pd, Scalar::one(f)));
        Matrix b = rc.empty() ? Matrix(1, a.cols(), f) : evaluate(rc, f);
        if (a != b) return false;
    }
    return true;
}

} // namespace unidiag
