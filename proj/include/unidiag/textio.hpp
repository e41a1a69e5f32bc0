#pragma once

// The diagram file format consumed by the CLI:
//
//   field 3
//   p 3
//   boundary +++++
//   slices
//   jelly
//   end
//
// `field` uses the scalar field grammar ("0", "5", "2^2"), `p` is optional,
// `boundary` is the bottom signature over +/-, and each line after `slices`
// is one gate slice, gate names exactly as in from_circuit. Serialization
// round-trips canonically.

#include "unidiag/diagram.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace unidiag {

struct ParsedCircuit {
    const FieldSpec* field = nullptr;
    CircuitSpec spec;
};

inline ParsedCircuit parse_circuit(std::istream& in) {
    ParsedCircuit out;
    std::string line;
    bool in_slices = false;
    while (std::getline(in, line)) {
        // strip comments and whitespace
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (!in_slices) {
            if (head == "field") {
                std::string v;
                ls >> v;
                out.field = &FieldSpec::parse(v);
            } else if (head == "p") {
                ls >> out.spec.p;
            } else if (head == "boundary") {
                std::string sig;
                ls >> sig;
                for (char c : sig) {
                    if (c == '+') out.spec.input_signs.push_back(1);
                    else if (c == '-') out.spec.input_signs.push_back(-1);
                    else throw SignatureMismatch("bad boundary sign");
                }
            } else if (head == "slices") {
                in_slices = true;
            } else {
                throw field_error("unknown field in diagram file: " + head);
            }
        } else {
            if (head == "end") break;
            std::vector<Gate> slice;
            std::string tok = head;
            do {
                auto g = gate_from_name(tok);
                if (!g) throw field_error("unknown gate: " + tok);
                slice.push_back(*g);
            } while (ls >> tok);
            out.spec.slices.push_back(slice);
        }
    }
    if (!out.field) throw field_error("diagram file missing 'field'");
    return out;
}

inline std::string serialize_circuit(const FieldSpec& f, const CircuitSpec& spec) {
    std::ostringstream os;
    os << "field " << f.to_string() << "\n";
    if (spec.p) os << "p " << spec.p << "\n";
    os << "boundary ";
    for (int8_t s : spec.input_signs) os << (s == 1 ? '+' : '-');
    os << "\nslices\n";
    for (const auto& slice : spec.slices) {
        for (size_t i = 0; i < slice.size(); ++i) os << (i ? " " : "") << gate_name(slice[i]);
        os << "\n";
    }
    os << "end\n";
    return os.str();
}

inline const char* gate_help_text() {
    return "gate        in        out\n"
           "id+         (+)       (+)\n"
           "id-         (-)       (-)\n"
           "cap         (-,+)     ()\n"
           "cap'        (+,-)     ()\n"
           "cup         ()        (+,-)\n"
           "cup'        ()        (-,+)\n"
           "dot         (+)       ()\n"
           "bracket     (+)       (-)\n"
           "invbracket  (-)       (+)\n"
           "swap        (a,b)     (b,a)\n"
           "jelly       (+^{2p-1}) ()   [needs p]\n";
}

} // namespace unidiag
