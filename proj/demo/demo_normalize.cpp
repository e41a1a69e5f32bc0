// Builds a random circuit over F_3, rewrites it into the jellyfish basis
// with a trace, and cross-checks the coefficients against direct
// normalization by evaluation.

#include "unidiag/verify.hpp"

#include <iostream>

using namespace unidiag;

int main(int argc, char** argv) {
    uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2;
    const FieldSpec& f = FieldSpec::prime(3);
    SkeinEngine engine(f, 3);
    Rng rng(seed);
    Diagram d = random_circuit(rng, 6, 3);
    std::cout << "random form on 6 points: " << d.verts.size() << " vertices, " << d.edges.size()
              << " edges, " << d.loops << " free loops\n\n";
    auto res = engine.normalize(d, true);
    std::cout << "rewrite trace (step, rule, measure):\n" << res.trace << "\n";
    std::cout << "coefficients over the jellyfish basis:\n";
    for (size_t i = 0; i < res.words.size(); ++i)
        if (!res.coeffs[i].is_zero())
            std::cout << "  " << res.words[i].letters << "  " << res.coeffs[i].to_string() << "\n";
    auto cy = extract_y_coefficients(evaluate(d, f), 6, f, 3);
    bool agree = true;
    for (size_t i = 0; i < cy.size(); ++i) agree = agree && cy[i] == res.coeffs[i];
    std::cout << "\nagrees with normalization by evaluation: " << (agree ? "yes" : "NO") << "\n";
    return agree ? 0 : 1;
}
