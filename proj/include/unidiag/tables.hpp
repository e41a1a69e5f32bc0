#pragma once

// The value tables for the small box spaces: maps evaluated on the basis
// Z_n, printed row by row in the reference order.

#include "unidiag/basis.hpp"

namespace unidiag {

struct ValueTable {
    std::vector<std::string> row_labels;    // basis bit strings
    std::vector<std::string> col_labels;    // map names in ASCII word encoding
    std::vector<std::vector<Scalar>> cells; // [row][col]
};

// n = 2: the maps .. and <>; n = 3: ..., .<>, <.>, <>. (the third column is
// the crossing-completed diagram, not a basis word).
inline ValueTable value_table(size_t n, const FieldSpec& f) {
    if (n != 2 && n != 3) throw field_error("value tables exist for n = 2 and n = 3");
    ValueTable t;
    std::vector<Matrix> cols;
    if (n == 2) {
        t.row_labels = {"00", "01", "10", "11"};
        t.col_labels = {"..", "<>"};
        cols.push_back(evaluate(jellyleaf(parse_word(AutomatonId::N0, 0, "..")), f));
        cols.push_back(evaluate(jellyleaf(parse_word(AutomatonId::N0, 0, "<>")), f));
    } else {
        t.row_labels = {"000", "001", "010", "100", "110", "101", "011", "111"};
        t.col_labels = {"...", ".<>", "<.>", "<>."};
        cols.push_back(evaluate(jellyleaf(parse_word(AutomatonId::N0, 0, "...")), f));
        cols.push_back(evaluate(jellyleaf(parse_word(AutomatonId::N0, 0, ".<>")), f));
        Diagram mid;
        mid.n_in = 3;
        mid.signs.assign(3, 1);
        int br = mid.add_vertex(VertexKind::Bracket);
        int dt = mid.add_vertex(VertexKind::Dot);
        mid.edges.push_back(Edge{Port{-1, 0}, Port{br, 0}});
        mid.edges.push_back(Edge{Port{-1, 2}, Port{br, 1}});
        mid.edges.push_back(Edge{Port{-1, 1}, Port{dt, 0}});
        cols.push_back(evaluate(mid, f));
        cols.push_back(evaluate(jellyleaf(parse_word(AutomatonId::N0, 0, "<>.")), f));
    }
    for (const std::string& row : t.row_labels) {
        size_t idx = 0;
        for (char c : row) idx = (idx << 1) | (c == '1');
        std::vector<Scalar> line;
        for (const Matrix& col : cols) line.push_back(col.at(0, idx));
        t.cells.push_back(line);
    }
    return t;
}

// Signed integers in characteristic 0 (so -1 prints as -1), canonical
// residues in characteristic p.
inline std::string render_table(const ValueTable& t) {
    std::ostringstream os;
    for (const auto& c : t.col_labels) os << "\t" << c;
    os << "\n";
    for (size_t r = 0; r < t.row_labels.size(); ++r) {
        os << t.row_labels[r];
        for (const Scalar& s : t.cells[r]) os << "\t" << s.to_string();
        os << "\n";
    }
    return os.str();
}

} // namespace unidiag
