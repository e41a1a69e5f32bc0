#pragma once

// Strand canonicalization: every maximal chain of brackets and inverse
// brackets along a strand collapses to at most one net vertex (E_1 with E_4
// sign bookkeeping), closed chains and free loops fold into the coefficient
// (E_3), and bracket/invbracket orientations plus jellyfish leg orders are
// normalized so structurally equal terms share a canonical key.

#include "unidiag/diagram.hpp"
#include "unidiag/field.hpp"

#include <array>
#include <map>

namespace unidiag {

namespace detail {

// 2x2 integer transfer matrices; entries stay in {-1,0,1}.
using M2 = std::array<int, 4>; // row-major
inline M2 m2_id() { return {1, 0, 0, 1}; }
inline M2 m2_mul(const M2& a, const M2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline M2 m2_bracket() { return {0, 1, -1, 0}; }     // B
inline M2 m2_invbracket() { return {0, -1, 1, 0}; }  // C
inline M2 m2_neg(const M2& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

} // namespace detail

struct Reduced {
    Diagram d;
    Scalar coeff;
};

// Collapse bracket/invbracket chains. Terminal ports are boundary points,
// dot legs and jellyfish legs; the result contains a bracket only between
// two boundary points and an inverse bracket only between two sink-type
// terminals. Orientation canonicalization happens in canonicalize_term.
inline Reduced reduce_strands(const Diagram& d0, const FieldSpec& f) {
    d0.validate();
    using detail::M2;
    std::map<Port, Port> adj;
    for (const Edge& e : d0.edges) {
        adj[e.src] = e.dst;
        adj[e.dst] = e.src;
    }
    Scalar coeff = Scalar::one(f);
    // pre-existing free loops contribute a factor 2 each
    for (long l = 0; l < d0.loops; ++l) coeff *= Scalar::from_int(f, 2);

    Diagram out;
    out.n_in = d0.n_in;
    out.n_out = d0.n_out;
    out.signs = d0.signs;

    std::map<int, int> vmap; // old terminal vertex -> new index
    auto map_terminal = [&](Port p) -> Port {
        if (p.v < 0) return p;
        auto it = vmap.find(p.v);
        if (it == vmap.end()) {
            int nv = out.add_vertex(d0.verts[p.v].kind, d0.verts[p.v].p);
            it = vmap.emplace(p.v, nv).first;
        }
        return Port{it->second, p.leg};
    };
    auto is_chain = [&](Port p) {
        return p.v >= 0 && (d0.verts[p.v].kind == VertexKind::Bracket ||
                            d0.verts[p.v].kind == VertexKind::InvBracket);
    };

    std::map<Port, bool> visited; // chain legs and terminal ports seen
    // enumerate terminal ports in a fixed order
    std::vector<Port> terminals;
    for (size_t i = 0; i < d0.boundary_size(); ++i) terminals.push_back(Port{-1, (int)i});
    for (size_t v = 0; v < d0.verts.size(); ++v) {
        if (d0.verts[v].kind == VertexKind::Dot || d0.verts[v].kind == VertexKind::Jelly)
            for (uint32_t leg = 0; leg < d0.verts[v].legs(); ++leg)
                terminals.push_back(Port{(int)v, (int)leg});
    }

    for (Port start : terminals) {
        if (visited.count(start)) continue;
        visited[start] = true;
        // walk to the other terminal, accumulating the transfer matrix
        M2 t = detail::m2_id();
        int net = 0; // brackets minus invbrackets
        Port cur = adj.at(start);
        while (is_chain(cur)) {
            visited[Port{cur.v, 0}] = true;
            visited[Port{cur.v, 1}] = true;
            bool bracket = d0.verts[cur.v].kind == VertexKind::Bracket;
            M2 m = bracket ? detail::m2_bracket() : detail::m2_invbracket();
            if (cur.leg == 1) m = detail::m2_neg(m); // transpose of an antisymmetric matrix
            t = detail::m2_mul(t, m);
            net += bracket ? 1 : -1;
            cur = adj.at(Port{cur.v, 1 - cur.leg});
        }
        visited[cur] = true;
        Port a = map_terminal(start), b = map_terminal(cur);
        if (net == 0) {
            // t must be +-identity
            int s = t[0];
            if (t != detail::m2_id() && t != detail::m2_neg(detail::m2_id()))
                throw UnboundPort();
            if (s < 0) coeff = -coeff;
            out.connect(a, b);
        } else if (net == 1) {
            int s = t[1]; // coefficient of B
            M2 base = detail::m2_bracket();
            if (t != base && t != detail::m2_neg(base)) throw UnboundPort();
            if (s < 0) coeff = -coeff;
            int br = out.add_vertex(VertexKind::Bracket);
            out.connect(a, Port{br, 0});
            out.connect(b, Port{br, 1});
        } else if (net == -1) {
            int s = -t[1]; // coefficient of C (C[0][1] = -1)
            M2 base = detail::m2_invbracket();
            if (t != base && t != detail::m2_neg(base)) throw UnboundPort();
            if (s < 0) coeff = -coeff;
            int inv = out.add_vertex(VertexKind::InvBracket);
            out.connect(Port{inv, 0}, a);
            out.connect(Port{inv, 1}, b);
        } else {
            throw UnboundPort();
        }
    }

    // closed chains: trace of the transfer matrix, always +-2
    for (size_t v = 0; v < d0.verts.size(); ++v) {
        Port p0{(int)v, 0};
        if (visited.count(p0) || !is_chain(p0)) continue;
        M2 t = detail::m2_id();
        Port cur = p0;
        do {
            visited[Port{cur.v, 0}] = true;
            visited[Port{cur.v, 1}] = true;
            bool bracket = d0.verts[cur.v].kind == VertexKind::Bracket;
            M2 m = bracket ? detail::m2_bracket() : detail::m2_invbracket();
            if (cur.leg == 1) m = detail::m2_neg(m);
            t = detail::m2_mul(t, m);
            cur = adj.at(Port{cur.v, 1 - cur.leg});
        } while (is_chain(cur) && !(cur.v == (int)v && cur.leg == 0));
        coeff *= Scalar::from_int(f, t[0] + t[3]);
    }

    out.validate();
    return Reduced{out, coeff};
}

// Canonical vertex numbering: BFS from the boundary in order, walking legs
// in order; floating components afterwards in vertex-index order.
inline std::vector<int> bfs_numbering(const Diagram& d) {
    std::map<Port, Port> adj;
    for (const Edge& e : d.edges) {
        adj[e.src] = e.dst;
        adj[e.dst] = e.src;
    }
    std::vector<int> number(d.verts.size(), -1);
    int next = 0;
    std::vector<int> queue;
    auto touch = [&](int v) {
        if (v >= 0 && number[v] < 0) {
            number[v] = next++;
            queue.push_back(v);
        }
    };
    for (size_t i = 0; i < d.boundary_size(); ++i) {
        auto it = adj.find(Port{-1, (int)i});
        if (it != adj.end()) touch(it->second.v);
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (uint32_t leg = 0; leg < d.verts[v].legs(); ++leg) {
            auto it = adj.find(Port{v, (int)leg});
            if (it != adj.end()) touch(it->second.v);
        }
    }
    for (size_t v = 0; v < d.verts.size(); ++v) touch((int)v);
    return number;
}

// Full term canonicalization: strand reduction, canonical bracket and
// inverse-bracket orientations (each flip is an E_4 sign), and jellyfish
// legs sorted by partner (a free permutation by E_{s1}/E_{s2}).
inline Reduced canonicalize_term(const Diagram& d0, const FieldSpec& f) {
    Reduced r = reduce_strands(d0, f);
    Diagram& d = r.d;

    for (int pass = 0; pass < 3; ++pass) {
        std::vector<int> num = bfs_numbering(d);
        std::map<Port, Port> adj;
        for (const Edge& e : d.edges) {
            adj[e.src] = e.dst;
            adj[e.dst] = e.src;
        }
        // partner sort key for a port
        auto port_key = [&](Port q) -> std::tuple<int, int, int> {
            if (q.v < 0) return {0, q.leg, 0};
            return {1, num[q.v], q.leg};
        };
        bool changed = false;
        // bracket orientation: leg0 toward the smaller boundary point
        for (size_t v = 0; v < d.verts.size(); ++v) {
            if (d.verts[v].kind == VertexKind::Bracket) {
                Port p0 = adj.at(Port{(int)v, 0}), p1 = adj.at(Port{(int)v, 1});
                if (port_key(p1) < port_key(p0)) {
                    for (Edge& e : d.edges)
                        for (Port* p : {&e.src, &e.dst})
                            if (p->v == (int)v) p->leg = 1 - p->leg;
                    r.coeff = -r.coeff;
                    changed = true;
                }
            } else if (d.verts[v].kind == VertexKind::InvBracket) {
                Port p0 = adj.at(Port{(int)v, 0}), p1 = adj.at(Port{(int)v, 1});
                // jelly partners come before dot partners, then BFS order
                auto inv_key = [&](Port q) -> std::tuple<int, int, int> {
                    if (q.v < 0) return {-1, q.leg, 0};
                    int kind = (d.verts[q.v].kind == VertexKind::Dot) ? 1 : 0;
                    return {kind, num[q.v], q.leg};
                };
                if (inv_key(p1) < inv_key(p0)) {
                    for (Edge& e : d.edges)
                        for (Port* p : {&e.src, &e.dst})
                            if (p->v == (int)v) p->leg = 1 - p->leg;
                    r.coeff = -r.coeff;
                    changed = true;
                }
            } else if (d.verts[v].kind == VertexKind::Jelly) {
                // sort legs by partner key (stable; no sign)
                uint32_t legs = d.verts[v].legs();
                std::vector<std::pair<std::tuple<int, int, int>, int>> order;
                for (uint32_t leg = 0; leg < legs; ++leg)
                    order.push_back({port_key(adj.at(Port{(int)v, (int)leg})), (int)leg});
                std::stable_sort(order.begin(), order.end(),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
                std::vector<int> newleg(legs);
                bool moved = false;
                for (uint32_t k = 0; k < legs; ++k) {
                    newleg[order[k].second] = (int)k;
                    if (order[k].second != (int)k) moved = true;
                }
                if (moved) {
                    for (Edge& e : d.edges)
                        for (Port* p : {&e.src, &e.dst})
                            if (p->v == (int)v) p->leg = newleg[p->leg];
                    changed = true;
                }
            }
        }
        if (!changed) break;
        // refresh adjacency implicitly on next pass
    }
    return r;
}

} // namespace unidiag
