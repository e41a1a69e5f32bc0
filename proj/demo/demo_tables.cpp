// Prints the small value tables and recovers the crossing identity by
// coefficient extraction.

#include "unidiag/tables.hpp"

#include <iostream>

using namespace unidiag;

int main() {
    const FieldSpec& Q = FieldSpec::rationals();
    std::cout << "values for the length-2 words on Z_2:\n" << render_table(value_table(2, Q));
    std::cout << "\nvalues for the length-3 maps on Z_3:\n" << render_table(value_table(3, Q));

    // <.> is not in normal form; extract its Y coefficients
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
    std::cout << "\n<.> expands as:";
    for (size_t i = 0; i < cy.size(); ++i)
        if (!cy[i].is_zero())
            std::cout << " + " << cy[i].to_string() << " * " << bd.nwords[i].letters;
    std::cout << "\n";
    return 0;
}
