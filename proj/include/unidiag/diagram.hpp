#pragma once

// Decorated open graphs for the box spaces of Diag_0 / Diag_p.
//
// A diagram is a boundary (input points then output points, each signed),
// a list of vertices (dot, bracket, inverse bracket, jellyfish), a perfect
// pairing of all ports into oriented edges, and a count of free loops.
// Crossings are connectivity only: in a symmetric planar algebra the
// abstract decorated graph is a complete invariant of a tangle.
//
// Port roles. Sources: '+' input point, '-' output point, either leg of an
// inverse bracket. Sinks: '-' input point, '+' output point, dot legs,
// bracket legs, jellyfish legs. Every edge runs source -> sink.

#include "unidiag/field.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace unidiag {

struct SignatureMismatch : field_error {
    explicit SignatureMismatch(const std::string& what) : field_error("SignatureMismatch: " + what) {}
};
struct UnboundPort : field_error {
    UnboundPort() : field_error("UnboundPort: malformed diagram") {}
};

enum class VertexKind { Dot, Bracket, InvBracket, Jelly };

struct Vertex {
    VertexKind kind;
    uint32_t p = 0; // jellyfish parameter; legs = 2p-1
    uint32_t legs() const {
        switch (kind) {
            case VertexKind::Dot: return 1;
            case VertexKind::Jelly: return 2 * p - 1;
            default: return 2;
        }
    }
};

struct Port {
    int v;   // vertex index, or -1 for a boundary point
    int leg; // leg index, or the boundary position
    bool operator==(const Port& o) const { return v == o.v && leg == o.leg; }
    bool operator<(const Port& o) const { return v != o.v ? v < o.v : leg < o.leg; }
};

struct Edge {
    Port src, dst;
};

class Diagram {
  public:
    size_t n_in = 0, n_out = 0;
    std::vector<int8_t> signs; // per boundary point, inputs then outputs
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    long loops = 0;

    size_t boundary_size() const { return n_in + n_out; }
    bool all_plus_form() const {
        if (n_out != 0) return false;
        for (int8_t s : signs)
            if (s != 1) return false;
        return true;
    }

    bool is_source(Port p) const {
        if (p.v < 0) {
            bool input = static_cast<size_t>(p.leg) < n_in;
            return input ? signs[p.leg] == 1 : signs[p.leg] == -1;
        }
        return verts[p.v].kind == VertexKind::InvBracket;
    }

    int add_vertex(VertexKind k, uint32_t p = 0) {
        verts.push_back(Vertex{k, p});
        return static_cast<int>(verts.size()) - 1;
    }

    void connect(Port a, Port b) {
        // stores (source, sink) regardless of argument order
        bool asrc = is_source(a), bsrc = is_source(b);
        if (asrc == bsrc) throw UnboundPort();
        edges.push_back(asrc ? Edge{a, b} : Edge{b, a});
    }

    void validate() const {
        std::set<Port> seen;
        for (const Edge& e : edges) {
            if (!is_source(e.src) || is_source(e.dst)) throw UnboundPort();
            if (!seen.insert(e.src).second || !seen.insert(e.dst).second) throw UnboundPort();
        }
        size_t want = boundary_size();
        for (const Vertex& v : verts) want += v.legs();
        if (seen.size() != want) throw UnboundPort();
    }

    // -- construction helpers ------------------------------------------------

    static Diagram empty() { return Diagram{}; }

    // Identity on n upward strands: n '+' inputs wired to n '+' outputs.
    static Diagram identity(size_t n) {
        Diagram d;
        d.n_in = d.n_out = n;
        d.signs.assign(2 * n, 1);
        for (size_t i = 0; i < n; ++i)
            d.edges.push_back(Edge{Port{-1, (int)i}, Port{-1, (int)(n + i)}});
        return d;
    }

    // Permutation connectivity: input i feeds output perm[i].
    static Diagram permutation(const std::vector<size_t>& perm) {
        size_t n = perm.size();
        Diagram d;
        d.n_in = d.n_out = n;
        d.signs.assign(2 * n, 1);
        for (size_t i = 0; i < n; ++i)
            d.edges.push_back(Edge{Port{-1, (int)i}, Port{-1, (int)(n + perm[i])}});
        return d;
    }

    Diagram shifted(int vertex_offset, int boundary_offset_in, int boundary_offset_out,
                    size_t new_nin) const {
        Diagram d(*this);
        for (Edge& e : d.edges) {
            for (Port* p : {&e.src, &e.dst}) {
                if (p->v >= 0) p->v += vertex_offset;
                else {
                    bool input = static_cast<size_t>(p->leg) < n_in;
                    p->leg += input ? boundary_offset_in
                                    : boundary_offset_out + (int)new_nin - (int)n_in;
                }
            }
        }
        return d;
    }
};

// ---------------------------------------------------------------------------
// tensor / compose

inline Diagram tensor(const Diagram& a, const Diagram& b) {
    Diagram d;
    d.n_in = a.n_in + b.n_in;
    d.n_out = a.n_out + b.n_out;
    d.signs.resize(d.boundary_size());
    for (size_t i = 0; i < a.n_in; ++i) d.signs[i] = a.signs[i];
    for (size_t i = 0; i < b.n_in; ++i) d.signs[a.n_in + i] = b.signs[i];
    for (size_t i = 0; i < a.n_out; ++i) d.signs[d.n_in + i] = a.signs[a.n_in + i];
    for (size_t i = 0; i < b.n_out; ++i) d.signs[d.n_in + a.n_out + i] = b.signs[b.n_in + i];
    d.verts = a.verts;
    d.verts.insert(d.verts.end(), b.verts.begin(), b.verts.end());
    d.loops = a.loops + b.loops;
    auto remap = [&](Port p, bool from_a) {
        if (p.v >= 0) return Port{p.v + (from_a ? 0 : (int)a.verts.size()), p.leg};
        if (from_a) {
            if (static_cast<size_t>(p.leg) < a.n_in) return p;
            return Port{-1, (int)(d.n_in + (p.leg - a.n_in))};
        }
        if (static_cast<size_t>(p.leg) < b.n_in) return Port{-1, (int)(a.n_in + p.leg)};
        return Port{-1, (int)(d.n_in + a.n_out + (p.leg - b.n_in))};
    };
    for (const Edge& e : a.edges) d.edges.push_back(Edge{remap(e.src, true), remap(e.dst, true)});
    for (const Edge& e : b.edges) d.edges.push_back(Edge{remap(e.src, false), remap(e.dst, false)});
    return d;
}

// Glue bottom's outputs onto top's inputs (signatures must agree).
inline Diagram compose(const Diagram& top, const Diagram& bottom) {
    if (bottom.n_out != top.n_in) throw SignatureMismatch("wire counts differ");
    for (size_t j = 0; j < top.n_in; ++j)
        if (bottom.signs[bottom.n_in + j] != top.signs[j])
            throw SignatureMismatch("wire orientations differ");

    Diagram d;
    d.n_in = bottom.n_in;
    d.n_out = top.n_out;
    d.signs.resize(d.boundary_size());
    for (size_t i = 0; i < bottom.n_in; ++i) d.signs[i] = bottom.signs[i];
    for (size_t i = 0; i < top.n_out; ++i) d.signs[d.n_in + i] = top.signs[top.n_in + i];
    d.verts = bottom.verts;
    d.verts.insert(d.verts.end(), top.verts.begin(), top.verts.end());
    d.loops = bottom.loops + top.loops;

    int vb = 0, vt = static_cast<int>(bottom.verts.size());
    size_t iface = top.n_in;
    // ports: real ports keep ids; interface j is a temporary node
    struct Half { bool is_iface; Port port; size_t j; };
    auto map_bottom = [&](Port p) -> Half {
        if (p.v >= 0) return {false, Port{p.v + vb, p.leg}, 0};
        if (static_cast<size_t>(p.leg) < bottom.n_in) return {false, Port{-1, p.leg}, 0};
        return {true, {}, static_cast<size_t>(p.leg) - bottom.n_in};
    };
    auto map_top = [&](Port p) -> Half {
        if (p.v >= 0) return {false, Port{p.v + vt, p.leg}, 0};
        if (static_cast<size_t>(p.leg) < top.n_in) return {true, {}, static_cast<size_t>(p.leg)};
        return {false, Port{-1, (int)(d.n_in + (p.leg - top.n_in))}, 0};
    };

    // Each interface node has exactly one incoming and one outgoing half-edge;
    // contract them, counting pure interface cycles as free loops.
    std::vector<std::optional<Half>> in_of(iface), out_of(iface);
    auto add = [&](Half s, Half t) {
        if (!s.is_iface && !t.is_iface) {
            d.edges.push_back(Edge{s.port, t.port});
            return;
        }
        if (s.is_iface) in_of[s.j] = t; // edge leaves interface s.j
        if (t.is_iface) out_of[t.j] = s; // edge enters interface t.j
        // note: both may be interfaces
        if (s.is_iface && t.is_iface) { in_of[s.j] = t; out_of[t.j] = s; }
    };
    std::vector<std::pair<Half, Half>> raw;
    for (const Edge& e : bottom.edges) raw.push_back({map_bottom(e.src), map_bottom(e.dst)});
    for (const Edge& e : top.edges) raw.push_back({map_top(e.src), map_top(e.dst)});
    for (auto& [s, t] : raw) add(s, t);

    std::vector<bool> done(iface, false);
    for (size_t j = 0; j < iface; ++j) {
        if (done[j]) continue;
        if (!in_of[j] || !out_of[j]) throw SignatureMismatch("unglued interface wire");
        // walk backwards to the source
        Half src = *out_of[j];
        size_t guard = 0;
        std::vector<size_t> visited{j};
        bool loop = false;
        while (src.is_iface) {
            done[src.j] = true;
            visited.push_back(src.j);
            if (src.j == j) { loop = true; break; }
            src = *out_of[src.j];
            if (++guard > iface + 1) throw SignatureMismatch("interface cycle error");
        }
        if (loop) { ++d.loops; for (size_t k : visited) done[k] = true; continue; }
        Half dst = *in_of[j];
        guard = 0;
        while (dst.is_iface) {
            done[dst.j] = true;
            dst = *in_of[dst.j];
            if (++guard > iface + 1) throw SignatureMismatch("interface cycle error");
        }
        done[j] = true;
        d.edges.push_back(Edge{src.port, dst.port});
    }
    return d;
}

// ---------------------------------------------------------------------------
// Circuit construction

enum class Gate { IdP, IdM, Cap, CapP, Cup, CupP, Dot, Bracket, InvBracket, Swap, Jelly };

inline const char* gate_name(Gate g) {
    switch (g) {
        case Gate::IdP: return "id+";
        case Gate::IdM: return "id-";
        case Gate::Cap: return "cap";
        case Gate::CapP: return "cap'";
        case Gate::Cup: return "cup";
        case Gate::CupP: return "cup'";
        case Gate::Dot: return "dot";
        case Gate::Bracket: return "bracket";
        case Gate::InvBracket: return "invbracket";
        case Gate::Swap: return "swap";
        case Gate::Jelly: return "jelly";
    }
    return "?";
}

inline std::optional<Gate> gate_from_name(const std::string& s) {
    for (Gate g : {Gate::IdP, Gate::IdM, Gate::Cap, Gate::CapP, Gate::Cup, Gate::CupP, Gate::Dot,
                   Gate::Bracket, Gate::InvBracket, Gate::Swap, Gate::Jelly})
        if (s == gate_name(g)) return g;
    return std::nullopt;
}

struct CircuitSpec {
    std::vector<int8_t> input_signs;          // bottom boundary
    std::vector<std::vector<Gate>> slices;    // bottom to top
    uint32_t p = 0;                           // jellyfish parameter, if used
};

// Threads wires through gate slices. Caps, cups, ids and swaps are pure
// wiring; dot/bracket/invbracket/jelly become vertices.
inline Diagram from_circuit(const CircuitSpec& spec) {
    Diagram d;
    d.n_in = spec.input_signs.size();
    d.signs.assign(spec.input_signs.begin(), spec.input_signs.end());

    // Each live strand tracks its (optional) source and sink ports plus the
    // number of open wire ends it still has. Strands merge (caps), so wires
    // reference them through a union-find.
    struct Strand {
        std::optional<Port> src, dst;
        int open = 0;
        size_t parent = SIZE_MAX;
    };
    std::vector<Strand> strands;
    struct Wire {
        int8_t sign; // +1 up-flowing, -1 down-flowing
        size_t strand;
    };
    std::vector<Wire> wires;

    auto find = [&](size_t sid) {
        while (strands[sid].parent != SIZE_MAX) sid = strands[sid].parent;
        return sid;
    };
    auto settle = [&](size_t sid) {
        Strand& s = strands[find(sid)];
        if (s.open) return;
        if (s.src && s.dst) d.edges.push_back(Edge{*s.src, *s.dst});
        else if (!s.src && !s.dst) ++d.loops;
        else throw UnboundPort();
    };
    auto set_port = [&](size_t sid, Port p, bool as_source) {
        Strand& s = strands[find(sid)];
        auto& slot = as_source ? s.src : s.dst;
        if (slot) throw UnboundPort();
        slot = p;
        --s.open;
    };
    auto merge = [&](size_t a0, size_t b0) {
        size_t a = find(a0), b = find(b0);
        if (a == b) { strands[a].open -= 2; settle(a); return a; }
        Strand& sa = strands[a];
        Strand& sb = strands[b];
        if ((sa.src && sb.src) || (sa.dst && sb.dst)) throw UnboundPort();
        if (sb.src) sa.src = sb.src;
        if (sb.dst) sa.dst = sb.dst;
        sa.open += sb.open - 2;
        sb = Strand{std::nullopt, std::nullopt, 0, a};
        settle(a);
        return a;
    };
    auto fresh_from_port = [&](Port p, bool as_source, int8_t wire_sign) {
        strands.push_back(Strand{std::nullopt, std::nullopt, 1, SIZE_MAX});
        size_t sid = strands.size() - 1;
        if (as_source) strands[sid].src = p;
        else strands[sid].dst = p;
        return Wire{wire_sign, sid};
    };

    for (size_t i = 0; i < d.n_in; ++i) {
        // '+' input point is a source of an up-flowing wire; '-' is a sink of
        // a down-flowing one.
        bool plus = spec.input_signs[i] == 1;
        wires.push_back(fresh_from_port(Port{-1, (int)i}, plus, plus ? 1 : -1));
    }

    for (const auto& slice : spec.slices) {
        std::vector<Wire> next;
        size_t pos = 0;
        auto need = [&](size_t k) {
            if (pos + k > wires.size()) throw SignatureMismatch("slice consumes too many wires");
        };
        auto want_sign = [&](size_t at, int8_t s, Gate g) {
            if (wires[at].sign != s)
                throw SignatureMismatch(std::string("gate ") + gate_name(g) + " on wrong orientation");
        };
        for (Gate g : slice) {
            switch (g) {
                case Gate::IdP:
                case Gate::IdM: {
                    need(1);
                    want_sign(pos, g == Gate::IdP ? 1 : -1, g);
                    next.push_back(wires[pos++]);
                    break;
                }
                case Gate::Swap: {
                    need(2);
                    next.push_back(wires[pos + 1]);
                    next.push_back(wires[pos]);
                    pos += 2;
                    break;
                }
                case Gate::Cap: // (-,+) -> ()
                case Gate::CapP: { // (+,-) -> ()
                    need(2);
                    int8_t l = g == Gate::Cap ? -1 : 1;
                    want_sign(pos, l, g);
                    want_sign(pos + 1, (int8_t)-l, g);
                    merge(wires[pos].strand, wires[pos + 1].strand);
                    pos += 2;
                    break;
                }
                case Gate::Cup: // () -> (+,-)
                case Gate::CupP: { // () -> (-,+)
                    strands.push_back(Strand{std::nullopt, std::nullopt, 2});
                    size_t sid = strands.size() - 1;
                    int8_t l = g == Gate::Cup ? 1 : -1;
                    next.push_back(Wire{l, sid});
                    next.push_back(Wire{(int8_t)-l, sid});
                    break;
                }
                case Gate::Dot: {
                    need(1);
                    want_sign(pos, 1, g);
                    int v = d.add_vertex(VertexKind::Dot);
                    size_t sid = wires[pos].strand;
                    set_port(sid, Port{v, 0}, false);
                    settle(sid);
                    ++pos;
                    break;
                }
                case Gate::Bracket: { // (+) -> (-)
                    need(1);
                    want_sign(pos, 1, g);
                    int v = d.add_vertex(VertexKind::Bracket);
                    size_t sid = wires[pos].strand;
                    set_port(sid, Port{v, 0}, false);
                    settle(sid);
                    next.push_back(fresh_from_port(Port{v, 1}, false, -1));
                    ++pos;
                    break;
                }
                case Gate::InvBracket: { // (-) -> (+)
                    need(1);
                    want_sign(pos, -1, g);
                    int v = d.add_vertex(VertexKind::InvBracket);
                    size_t sid = wires[pos].strand;
                    set_port(sid, Port{v, 0}, true);
                    settle(sid);
                    next.push_back(fresh_from_port(Port{v, 1}, true, 1));
                    ++pos;
                    break;
                }
                case Gate::Jelly: {
                    if (spec.p < 2) throw SignatureMismatch("jelly gate requires p >= 2");
                    uint32_t legs = 2 * spec.p - 1;
                    need(legs);
                    int v = d.add_vertex(VertexKind::Jelly, spec.p);
                    for (uint32_t k = 0; k < legs; ++k) {
                        want_sign(pos + k, 1, g);
                        size_t sid = wires[pos + k].strand;
                        set_port(sid, Port{v, (int)k}, false);
                        settle(sid);
                    }
                    pos += legs;
                    break;
                }
            }
        }
        while (pos < wires.size()) next.push_back(wires[pos++]); // implicit ids
        wires.swap(next);
    }

    // leftover wires become output boundary points
    d.n_out = wires.size();
    for (size_t j = 0; j < wires.size(); ++j) {
        d.signs.push_back(wires[j].sign);
        bool plus = wires[j].sign == 1;
        size_t sid = wires[j].strand;
        // '+' output point is a sink; '-' output point is a source.
        set_port(sid, Port{-1, (int)(d.n_in + j)}, !plus);
        settle(sid);
    }
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// flatten / partial trace

// Bend outputs down, last output first, so a map V^n -> V^m becomes a form
// on n+m '+' points. A '+' output bends through a fresh bracket (the
// self-duality), a '-' output bends with plain wiring. flatten(id_V)
// evaluates to the single-bracket cap.
inline Diagram flatten(const Diagram& d0) {
    Diagram d(d0);
    if (d.n_out == 0) return d;
    size_t n = d.n_in, m = d.n_out;
    for (size_t i = 0; i < n; ++i)
        if (d.signs[i] != 1) throw SignatureMismatch("flatten expects all-'+' inputs");
    // output j (0-based) becomes boundary n + (m-1-j)
    std::vector<int> bracket_of(m, -1);
    for (size_t j = 0; j < m; ++j)
        if (d.signs[n + j] == 1) bracket_of[j] = d.add_vertex(VertexKind::Bracket);
    for (Edge& e : d.edges) {
        if (e.dst.v == -1 && static_cast<size_t>(e.dst.leg) >= n) {
            size_t j = e.dst.leg - n; // '+' output: a sink
            e.dst = Port{bracket_of[j], 0};
        }
        if (e.src.v == -1 && static_cast<size_t>(e.src.leg) >= n) {
            size_t j = e.src.leg - n; // '-' output: a source; becomes the new '+' point
            e.src = Port{-1, (int)(n + (m - 1 - j))};
        }
    }
    for (size_t j = 0; j < m; ++j)
        if (bracket_of[j] >= 0)
            d.edges.push_back(Edge{Port{-1, (int)(n + (m - 1 - j))}, Port{bracket_of[j], 1}});
    d.n_in = n + m;
    d.n_out = 0;
    d.signs.assign(n + m, 1);
    d.validate();
    return d;
}

// Join the last output strand to the last input strand.
inline Diagram partial_trace_right(const Diagram& d0) {
    Diagram d(d0);
    if (d.n_in == 0 || d.n_out == 0) throw SignatureMismatch("partial trace needs in and out");
    size_t in_last = d.n_in - 1, out_last = d.boundary_size() - 1;
    if (d.signs[in_last] != 1 || d.signs[out_last] != 1)
        throw SignatureMismatch("partial trace expects '+' strands");
    Port in_port{-1, (int)in_last}, out_port{-1, (int)out_last};
    std::optional<Port> from, to;
    size_t ei = SIZE_MAX, eo = SIZE_MAX;
    for (size_t k = 0; k < d.edges.size(); ++k) {
        if (d.edges[k].src == in_port) { to = d.edges[k].dst; ei = k; }
        if (d.edges[k].dst == out_port) { from = d.edges[k].src; eo = k; }
    }
    if (!from || !to) throw UnboundPort();
    if (ei == eo) {
        ++d.loops; // the strand ran straight from the traced input to the traced output
        d.edges.erase(d.edges.begin() + ei);
    } else {
        d.edges[eo].dst = *to;
        d.edges.erase(d.edges.begin() + ei);
    }
    // drop the two boundary points (out_last is the global last; in_last needs a shift)
    d.signs.erase(d.signs.begin() + out_last);
    d.signs.erase(d.signs.begin() + in_last);
    for (Edge& e : d.edges)
        for (Port* p : {&e.src, &e.dst})
            if (p->v == -1 && p->leg > (int)in_last) --p->leg;
    d.n_in -= 1;
    d.n_out -= 1;
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// Canonical key (structural equality up to vertex re-indexing)

inline std::string canonical_key(const Diagram& d) {
    // adjacency: port -> partner port
    std::map<Port, Port> adj;
    for (const Edge& e : d.edges) {
        adj[e.src] = e.dst;
        adj[e.dst] = e.src;
    }
    std::map<int, int> number; // vertex -> canonical id
    std::vector<int> order;
    auto visit = [&](int v) {
        if (v < 0 || number.count(v)) return;
        int id = static_cast<int>(number.size());
        number[v] = id;
        order.push_back(v);
    };
    // BFS from boundary in order, walking vertex legs in order
    std::vector<int> queue;
    for (size_t i = 0; i < d.boundary_size(); ++i) {
        auto it = adj.find(Port{-1, (int)i});
        if (it == adj.end()) throw UnboundPort();
        if (it->second.v >= 0) {
            if (!number.count(it->second.v)) queue.push_back(it->second.v);
            visit(it->second.v);
        }
    }
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (uint32_t leg = 0; leg < d.verts[v].legs(); ++leg) {
            auto it = adj.find(Port{v, (int)leg});
            if (it == adj.end()) throw UnboundPort();
            int w = it->second.v;
            if (w >= 0 && !number.count(w)) {
                visit(w);
                queue.push_back(w);
            }
        }
    }
    // floating components: canonical root = lexicographically least serialization
    std::vector<std::string> floaters;
    for (size_t root = 0; root < d.verts.size(); ++root) {
        if (number.count((int)root)) continue;
        // collect component
        std::vector<int> comp{(int)root};
        std::set<int> in_comp{(int)root};
        for (size_t ci = 0; ci < comp.size(); ++ci) {
            int v = comp[ci];
            for (uint32_t leg = 0; leg < d.verts[v].legs(); ++leg) {
                Port q = adj.at(Port{v, (int)leg});
                if (q.v >= 0 && !in_comp.count(q.v)) {
                    in_comp.insert(q.v);
                    comp.push_back(q.v);
                }
            }
        }
        std::string best;
        for (int start : comp) {
            std::map<int, int> num;
            std::vector<int> ord{start};
            num[start] = 0;
            for (size_t ci = 0; ci < ord.size(); ++ci) {
                int v = ord[ci];
                for (uint32_t leg = 0; leg < d.verts[v].legs(); ++leg) {
                    Port q = adj.at(Port{v, (int)leg});
                    if (q.v >= 0 && !num.count(q.v)) {
                        num[q.v] = static_cast<int>(num.size());
                        ord.push_back(q.v);
                    }
                }
            }
            std::ostringstream os;
            for (int v : ord) {
                os << static_cast<int>(d.verts[v].kind) << "p" << d.verts[v].p << ":";
                for (uint32_t leg = 0; leg < d.verts[v].legs(); ++leg) {
                    Port q = adj.at(Port{v, (int)leg});
                    os << num[q.v] << "." << q.leg << ",";
                }
                os << ";";
            }
            std::string s = os.str();
            if (best.empty() || s < best) best = s;
        }
        floaters.push_back(best);
        for (int v : comp) visit(v); // mark handled (ids unused in key below)
    }
    std::sort(floaters.begin(), floaters.end());

    std::ostringstream os;
    os << "B" << d.n_in << "/" << d.n_out << "[";
    for (int8_t s : d.signs) os << (s == 1 ? '+' : '-');
    os << "]L" << d.loops << "|";
    for (size_t i = 0; i < d.boundary_size(); ++i) {
        Port q = adj.at(Port{-1, (int)i});
        if (q.v < 0) os << "b" << q.leg;
        else os << "v" << number[q.v] << "." << q.leg;
        os << ",";
    }
    os << "|";
    for (int v : order) {
        os << static_cast<int>(d.verts[v].kind) << "p" << d.verts[v].p << ":";
        for (uint32_t leg = 0; leg < d.verts[v].legs(); ++leg) {
            Port q = adj.at(Port{v, (int)leg});
            if (q.v < 0) os << "b" << q.leg;
            else os << "v" << number[q.v] << "." << q.leg;
            os << ",";
        }
        os << ";";
    }
    os << "|F";
    for (auto& s : floaters) os << s << "#";
    return os.str();
}

// Formal sums of diagrams with Scalar coefficients, keyed by canonical form.
class LinComb {
  public:
    explicit LinComb(const FieldSpec& f) : f_(&f) {}
    LinComb(const Diagram& d, const Scalar& c) : f_(&c.field()) { add(d, c); }

    const FieldSpec& field() const { return *f_; }

    void add(const Diagram& d, const Scalar& c) {
        if (c.is_zero()) return;
        std::string key = canonical_key(d);
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, std::make_pair(d, c));
        } else {
            it->second.second += c;
            if (it->second.second.is_zero()) terms_.erase(it);
        }
    }

    void add(const LinComb& o, const Scalar& scale) {
        for (const auto& [k, v] : o.terms_) add(v.first, v.second * scale);
    }

    size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    std::vector<std::pair<Diagram, Scalar>> items() const {
        std::vector<std::pair<Diagram, Scalar>> out;
        out.reserve(terms_.size());
        for (const auto& [k, v] : terms_) out.push_back(v);
        return out;
    }

  private:
    const FieldSpec* f_;
    std::map<std::string, std::pair<Diagram, Scalar>> terms_;
};

inline LinComb tensor(const LinComb& a, const LinComb& b) {
    LinComb out(a.field());
    for (const auto& [da, ca] : a.items())
        for (const auto& [db, cb] : b.items()) out.add(tensor(da, db), ca * cb);
    return out;
}

inline LinComb compose(const LinComb& top, const LinComb& bottom) {
    LinComb out(top.field());
    for (const auto& [dt, ct] : top.items())
        for (const auto& [db, cb] : bottom.items()) out.add(compose(dt, db), ct * cb);
    return out;
}

} // namespace unidiag
