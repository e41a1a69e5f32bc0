// Command-line surface: enumeration, bijections, hom spaces, fusion,
// evaluation, normalization, basis dumps, verification suites and the
// small value tables.
//
// Exit codes: 0 success, 1 verification failure, 2 malformed input.

#include "unidiag/textio.hpp"
#include "unidiag/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace unidiag;

namespace {

AutomatonId automaton_from(const std::string& s) {
    if (s == "m0") return AutomatonId::M0;
    if (s == "n0") return AutomatonId::N0;
    if (s == "mp") return AutomatonId::Mp;
    if (s == "np") return AutomatonId::Np;
    throw field_error("unknown automaton: " + s);
}

void print_report(const Report& rep) {
    for (const auto& item : rep.items) {
        std::cout << (item.pass ? "[PASS] " : "[FAIL] ") << item.name;
        if (!item.detail.empty()) std::cout << "  (" << item.detail << ")";
        std::cout << "\n";
    }
}

Diagram load_diagram(const std::string& path, const FieldSpec** field_out, uint32_t* p_out) {
    std::ifstream in(path);
    if (!in) throw field_error("cannot open " + path);
    ParsedCircuit pc = parse_circuit(in);
    *field_out = pc.field;
    *p_out = pc.spec.p;
    return from_circuit(pc.spec);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"diagrammatic planar algebras of unipotent representations"};
    app.require_subcommand(0, 1);

    bool gate_help = false;
    app.add_flag("--gate-help", gate_help, "print the circuit gate signature table");

    // enumerate
    auto* enumerate_cmd = app.add_subcommand("enumerate", "list accepted words in canonical order");
    std::string en_aut = "m0", en_format = "text";
    uint32_t en_p = 0;
    size_t en_len = 0;
    enumerate_cmd->add_option("--automaton", en_aut, "m0|n0|mp|np")->required();
    enumerate_cmd->add_option("--p", en_p, "height parameter for mp/np");
    enumerate_cmd->add_option("--length", en_len, "word length")->required();
    enumerate_cmd->add_option("--format", en_format, "text|machine");

    // bijection
    auto* bij_cmd = app.add_subcommand("bijection", "apply the length-preserving bijections");
    std::string bj_dir, bj_word;
    uint32_t bj_p = 0;
    bij_cmd->add_option("--direction", bj_dir, "m2n|n2m")->required();
    bij_cmd->add_option("--p", bj_p, "height parameter (0 for the infinite automata)");
    bij_cmd->add_option("--word", bj_word, "input word")->required();

    // homdim
    auto* hom_cmd = app.add_subcommand("homdim", "dimension and basis of Hom(V_n, V_m)");
    uint32_t hd_n = 0, hd_m = 0;
    std::string hd_field = "0";
    hom_cmd->add_option("--n", hd_n)->required();
    hom_cmd->add_option("--m", hd_m)->required();
    hom_cmd->add_option("--field", hd_field);

    // fusion
    auto* fus_cmd = app.add_subcommand("fusion", "Jordan type of V (x) V_i");
    uint32_t fu_i = 0;
    std::string fu_field = "0";
    fus_cmd->add_option("--i", fu_i)->required();
    fus_cmd->add_option("--field", fu_field);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a diagram file to a row vector");
    std::string ev_input;
    eval_cmd->add_option("--input", ev_input)->required();

    // normalize
    auto* norm_cmd = app.add_subcommand("normalize", "rewrite a diagram into the Y basis");
    std::string no_input;
    bool no_trace = false;
    norm_cmd->add_option("--input", no_input)->required();
    norm_cmd->add_flag("--trace", no_trace, "print the rewrite trace to stderr");

    // basis
    auto* basis_cmd = app.add_subcommand("basis", "dump a basis family");
    std::string bs_family = "x", bs_field = "0";
    size_t bs_n = 0;
    uint32_t bs_p = 0;
    bool bs_cert = false;
    basis_cmd->add_option("--family", bs_family, "x|y")->required();
    basis_cmd->add_option("--n", bs_n)->required();
    basis_cmd->add_option("--field", bs_field);
    basis_cmd->add_option("--p", bs_p);
    basis_cmd->add_flag("--with-certificate", bs_cert);

    // verify
    auto* ver_cmd = app.add_subcommand("verify", "run a verification suite");
    std::string vf_suite = "all", vf_field = "0";
    size_t vf_maxn = 6;
    uint32_t vf_p = 0;
    size_t vf_count = 25;
    uint64_t vf_seed = 20240501;
    ver_cmd->add_option("--suite", vf_suite, "relations|bases|jelly|bijections|tables|all");
    ver_cmd->add_option("--field", vf_field);
    ver_cmd->add_option("--p", vf_p);
    ver_cmd->add_option("--max-n", vf_maxn);
    ver_cmd->add_option("--count", vf_count, "random circuits per size");
    ver_cmd->add_option("--seed", vf_seed, "corpus seed");

    // tables
    auto* tab_cmd = app.add_subcommand("tables", "print the small value tables");
    size_t tb_n = 3;
    std::string tb_field = "0";
    tab_cmd->add_option("--n", tb_n, "2 or 3")->required();
    tab_cmd->add_option("--field", tb_field);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gate_help) {
            std::cout << gate_help_text();
            return 0;
        }
        if (*enumerate_cmd) {
            AutomatonId id = automaton_from(en_aut);
            if ((id == AutomatonId::Mp || id == AutomatonId::Np) && en_p < 2)
                throw field_error("mp/np need --p >= 2");
            for (const Word& w : enumerate_words(id, en_p, en_len))
                std::cout << (w.letters.empty() ? "(empty)" : w.letters) << "\n";
            if (en_format == "machine")
                std::cout << "# count "
                          << count_words(id, en_p, en_len).convert_to<std::string>() << "\n";
            return 0;
        }
        if (*bij_cmd) {
            Word out;
            if (bj_dir == "m2n") {
                out = (bj_p >= 2) ? mp_to_np(parse_word(AutomatonId::Mp, bj_p, bj_word))
                                  : m0_to_n0(parse_word(AutomatonId::M0, 0, bj_word));
            } else if (bj_dir == "n2m") {
                out = (bj_p >= 2) ? np_to_mp(parse_word(AutomatonId::Np, bj_p, bj_word))
                                  : n0_to_m0(parse_word(AutomatonId::N0, 0, bj_word));
            } else {
                throw field_error("direction must be m2n or n2m");
            }
            std::cout << out.letters << "\n";
            return 0;
        }
        if (*hom_cmd) {
            const FieldSpec& f = FieldSpec::parse(hd_field);
            auto basis = hom_basis(hd_n, hd_m, f);
            std::cout << "dim " << basis.size() << "\n";
            for (size_t i = 0; i < basis.size(); ++i)
                std::cout << "T_" << i << ":\n" << basis[i].to_string();
            return 0;
        }
        if (*fus_cmd) {
            const FieldSpec& f = FieldSpec::parse(fu_field);
            auto parts = fusion_decompose(fu_i, f);
            std::cout << "{";
            for (size_t i = 0; i < parts.size(); ++i) std::cout << (i ? "," : "") << parts[i];
            std::cout << "}\n";
            return 0;
        }
        if (*eval_cmd) {
            const FieldSpec* f = nullptr;
            uint32_t p = 0;
            Diagram d = load_diagram(ev_input, &f, &p);
            if (d.n_out != 0) d = flatten(d);
            Matrix v = evaluate(d, *f);
            for (size_t i = 0; i < v.cols(); ++i)
                std::cout << (i ? " " : "") << v.at(0, i).to_string();
            std::cout << "\n";
            return 0;
        }
        if (*norm_cmd) {
            const FieldSpec* f = nullptr;
            uint32_t p = 0;
            Diagram d = load_diagram(no_input, &f, &p);
            if (d.n_out != 0) d = flatten(d);
            SkeinEngine engine(*f, p);
            auto res = engine.normalize(d, no_trace);
            if (no_trace) std::cerr << res.trace;
            for (size_t i = 0; i < res.words.size(); ++i)
                std::cout << (res.words[i].letters.empty() ? "(empty)" : res.words[i].letters)
                          << "\t" << res.coeffs[i].to_string() << "\n";
            return 0;
        }
        if (*basis_cmd) {
            const FieldSpec& f = FieldSpec::parse(bs_field);
            uint32_t p = bs_p ? bs_p : f.characteristic();
            const BasisData& bd = basis_data(f, p, bs_n);
            bool x = bs_family == "x";
            const auto& words = x ? bd.mwords : bd.nwords;
            const auto& evals = x ? bd.delta_eval : bd.gamma_eval;
            for (size_t i = 0; i < words.size(); ++i) {
                std::cout << (words[i].letters.empty() ? "(empty)" : words[i].letters) << "\t";
                for (size_t c = 0; c < evals[i].cols(); ++c)
                    std::cout << (c ? " " : "") << evals[i].at(0, c).to_string();
                std::cout << "\n";
            }
            if (bs_cert) {
                std::cout << "# pairing certificate: triangular="
                          << (bd.cert.triangular ? "yes" : "no") << " diagonal=";
                for (size_t i = 0; i < bd.cert.diagonal.size(); ++i)
                    std::cout << (i ? "," : "") << bd.cert.diagonal[i].to_string();
                std::cout << "\n";
                for (size_t i = 0; i < bd.cert.words.size(); ++i) {
                    std::cout << "#";
                    for (size_t j = 0; j < bd.cert.words.size(); ++j)
                        std::cout << " " << bd.cert.matrix.at(i, j).to_string();
                    std::cout << "\n";
                }
            }
            return 0;
        }
        if (*ver_cmd) {
            const FieldSpec& f = FieldSpec::parse(vf_field);
            uint32_t p = vf_p ? vf_p : f.characteristic();
            if (p != 0 && f.characteristic() != p) throw field_error("--p must match --field");
            Report rep;
            auto append = [&rep](const Report& part) {
                rep.items.insert(rep.items.end(), part.items.begin(), part.items.end());
            };
            if (vf_suite == "relations") append(suite_relations(f, p));
            else if (vf_suite == "bases") append(suite_bases(f, p, vf_maxn));
            else if (vf_suite == "jelly") append(suite_jelly(vf_maxn));
            else if (vf_suite == "bijections") append(suite_bijections(vf_maxn));
            else if (vf_suite == "tables") append(suite_tables());
            else if (vf_suite == "all") {
                append(suite_relations(f, p));
                append(suite_bases(f, p, vf_maxn));
                append(suite_jelly(vf_maxn));
                append(suite_bijections(vf_maxn));
                append(suite_tables());
                append(suite_normalize(f, p, vf_maxn, vf_count, vf_seed));
            } else {
                throw field_error("unknown suite: " + vf_suite);
            }
            print_report(rep);
            return rep.all_pass() ? 0 : 1;
        }
        if (*tab_cmd) {
            const FieldSpec& f = FieldSpec::parse(tb_field);
            std::cout << render_table(value_table(tb_n, f));
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
