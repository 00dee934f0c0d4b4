// Command-line front end: checking, translating, comparing, rewriting and
// sequentialising MALL proofs and proof nets, plus the generation and
// verification harnesses.
//
// Exit codes: 0 success / affirmative, 1 negative result, 2 usage or input
// error, 3 budget exhausted (unknown).

#include <iostream>

#include <CLI11.hpp>

#include "mallnet/abstract.hpp"
#include "mallnet/corpus.hpp"
#include "mallnet/cutlink.hpp"
#include "mallnet/formats.hpp"
#include "mallnet/lift.hpp"
#include "mallnet/matrix.hpp"
#include "mallnet/netgraph.hpp"

using namespace mallnet;

namespace {

struct GlobalOpts {
    std::string system = "mall-minus";
    bool mix = false;
    std::string superimpose = "free";
    int max_nodes = 8;
    int max_cuts = 2;
    std::string format = "text";

    SystemCfg cfg() const {
        SystemCfg c;
        if (system == "mall-minus") c.system = System::MallMinus;
        else if (system == "mall") c.system = System::Mall;
        else if (system == "mall-star") c.system = System::MallStar;
        else throw CLI::ValidationError("--system must be mall-minus, mall or mall-star");
        c.mix = mix;
        c.superimpose_cuts = superimpose == "free";
        return c;
    }
    EnumOptions enum_opts(const Sequent& goal) const {
        EnumOptions o;
        o.cfg = cfg();
        o.max_cuts = max_cuts;
        if (o.cfg.system == System::Mall) {
            std::set<std::string> atoms;
            for (auto& [addr, f] : leaves(goal)) {
                (void)addr;
                atoms.insert(f.atom_name());
            }
            for (const std::string& a : atoms) o.cut_pool.push_back(Formula::atom(a));
        }
        return o;
    }
};

int cmd_check(const GlobalOpts& g, const std::string& path) {
    Proof p = proof_from_text(read_file(path));
    auto violations = check_proof(p, g.cfg());
    if (violations.empty()) {
        std::cout << "ok: " << p.node_count() << " rule applications, conclusion "
                  << p.conclusion().to_string() << "\n";
        return 0;
    }
    for (const Violation& v : violations)
        std::cout << "violation at node [" << (v.node.empty() ? "root" : v.node) << "]: " << v.reason
                  << "\n";
    return 1;
}

int cmd_translate(const GlobalOpts& g, const std::string& path, const std::string& out,
                  const std::string& route) {
    Proof p = proof_from_text(read_file(path));
    LinkingSet t = route == "resolution" ? translate_resolution(p) : translate_inductive(p);
    std::string text = net_to_text(t);
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    (void)g;
    return 0;
}

int cmd_net_eq(const std::string& a, const std::string& b) {
    LinkingSet x = net_from_text(read_file(a));
    LinkingSet y = net_from_text(read_file(b));
    if (x.sequent != y.sequent) {
        std::cout << "error: nets live on different sequents\n";
        return 2;
    }
    bool eq = net_eq(x, y);
    std::cout << (eq ? "equal" : "different") << "\n";
    return eq ? 0 : 1;
}

int cmd_moves(const GlobalOpts& g, const std::string& path) {
    Proof p = proof_from_text(read_file(path));
    MoveEngine eng(g.cfg().superimpose_cuts);
    auto moves = eng.applicable(p);
    if (g.format == "structured") {
        json arr = json::array();
        for (const Move& m : moves) {
            auto out = eng.try_move(p, m);
            json mj;
            mj["position"] = m.pos;
            mj["target"] = m.bare ? "premise" : "root";
            if (m.bare) mj["premise"] = m.premise;
            else mj["root"] = m.root;
            if (m.join) mj["join"] = m.join;
            mj["comm"] = out->id.to_string();
            arr.push_back(mj);
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const Move& m : moves) {
            auto out = eng.try_move(p, m);
            std::cout << m.to_string() << "  (" << out->id.to_string() << ")\n";
        }
        std::cout << moves.size() << " applicable moves\n";
    }
    return 0;
}

int cmd_apply(const GlobalOpts& g, const std::string& proof_path, const std::string& trace_path,
              const std::string& out) {
    Proof p = proof_from_text(read_file(proof_path));
    Sequent concl;
    Trace t = trace_from_text(read_file(trace_path), &concl);
    if (concl != p.conclusion()) {
        std::cout << "error: trace was recorded for a different conclusion\n";
        return 2;
    }
    MoveEngine eng(g.cfg().superimpose_cuts);
    Proof q = replay(p, t, eng);
    std::string text = proof_to_text(q);
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    return 0;
}

int cmd_convert(const GlobalOpts& g, const std::string& a, const std::string& b,
                const std::string& out) {
    Proof p = proof_from_text(read_file(a));
    Proof q = proof_from_text(read_file(b));
    Rewriter rw(g.cfg().superimpose_cuts);
    if (p.conclusion() != q.conclusion()) {
        std::cout << "error: different conclusions\n";
        return 2;
    }
    if (!net_eq(translate(p), translate(q))) {
        std::cout << "nets differ: no conversion exists\n";
        return 1;
    }
    Trace t = rw.convert(p, q);
    std::string text = trace_to_text(p.conclusion(), t);
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    std::cout << "converted in " << t.size() << " moves\n";
    return 0;
}

int cmd_equiv(const GlobalOpts& g, const std::string& a, const std::string& b,
              const std::string& out) {
    Proof p = proof_from_text(read_file(a));
    Proof q = proof_from_text(read_file(b));
    EquivBudget budget;
    budget.max_nodes = std::max({g.max_nodes, p.node_count(), q.node_count()});
    auto res = decide_equiv_mall(p, q, g.enum_opts(p.conclusion()), budget);
    if (std::holds_alternative<Equivalent>(res)) {
        const Trace& t = std::get<Equivalent>(res).trace;
        std::cout << "equivalent (" << t.size() << " moves)\n";
        if (!out.empty()) write_file(out, trace_to_text(p.conclusion(), t));
        return 0;
    }
    if (std::holds_alternative<NotEquivalent>(res)) {
        std::cout << "not equivalent: " << std::get<NotEquivalent>(res).detail << "\n";
        return 1;
    }
    std::cout << "unknown: " << std::get<Unknown>(res).reason << "\n";
    return 3;
}

int cmd_sequentialize(const GlobalOpts& g, const std::string& path, const std::string& out) {
    LinkingSet t = net_from_text(read_file(path));
    auto res = sequentialize(t, g.cfg());
    if (std::holds_alternative<NotANet>(res)) {
        std::cout << "not a proof net: " << std::get<NotANet>(res).reason << "\n";
        return 1;
    }
    std::string text = proof_to_text(std::get<Proof>(res));
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    return 0;
}

int cmd_graph(const std::string& path, const std::string& out) {
    LinkingSet t = net_from_text(read_file(path));
    std::string dot = to_dot(build_graph(t));
    if (out.empty()) std::cout << dot;
    else write_file(out, dot);
    return 0;
}

int cmd_gen_comms(const GlobalOpts& g, const std::string& out, bool diff) {
    SystemCfg cfg = g.cfg();
    System sys = cfg.system == System::Mall ? System::MallStar : cfg.system;
    if (diff) {
        auto d = abstract::validate_against_tables(sys, cfg.mix);
        std::cout << d.to_string() << "\n";
        return d.empty() ? 0 : 1;
    }
    std::string text;
    for (const auto& c : abstract::generate_catalogue(sys, cfg.mix)) {
        text += abstract::family_key(c) + (c.local() ? "" : "  [duplicates]") + "\n";
        text += "  rule: " + c.rule.to_string() + "\n";
        text += "  side one: " + c.ab.to_string() + "\n";
        text += "  side two: " + c.ba.to_string() + "\n";
    }
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    return 0;
}

int cmd_conjecture(const GlobalOpts& g, const std::vector<std::string>& sequents,
                   const std::string& out) {
    std::vector<Sequent> seqs;
    for (const std::string& s : sequents) seqs.push_back(parse_sequent(s));
    if (seqs.empty()) {
        // default corpus: small two-atom sequents
        for (const char* s : {"~P, P", "~P, P & P", "~P, P + P", "P & P, ~P + ~P",
                              "~P, P * Q, ~Q", "P | ~P, Q, ~Q"})
            seqs.push_back(parse_sequent(s));
    }
    GlobalOpts gm = g;
    gm.system = "mall";
    EnumOptions opt = gm.enum_opts(seqs.empty() ? parse_sequent("P, ~P") : seqs[0]);
    opt.cut_pool = {Formula::atom("P"), Formula::atom("Q")};
    ConjectureReport rep = conjecture_harness(seqs, opt, g.max_nodes);
    std::string text;
    for (const auto& row : rep.rows) {
        text += "[" + row.sequent.to_string() + "] proofs=" + std::to_string(row.proofs) +
                " commutation-classes=" + std::to_string(row.comm_classes) +
                " cut-linking-classes=" + std::to_string(row.cutlink_classes) + "\n";
        for (auto& [x, y] : row.direction_a_violations)
            text += "  direction-a violation:\n    " + x + "\n    " + y + "\n";
        for (auto& [x, y] : row.candidates)
            text += "  candidate counterexample (bounded search may simply be too small):\n    " +
                    x + "\n    " + y + "\n";
    }
    text += rep.summary_line() + "\n";
    if (out.empty()) std::cout << text;
    else write_file(out, text);
    return rep.direction_a_clean() ? 0 : 1;
}

int cmd_enumerate(const GlobalOpts& g, const std::string& sequent_or_path, bool count_only) {
    std::string text = sequent_or_path;
    if (text.size() > 4 && text.substr(text.size() - 4) == ".seq") text = read_file(text);
    while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
    Sequent goal = parse_sequent(text, g.cfg().system == System::MallStar);
    auto proofs = enumerate_proofs(goal, g.enum_opts(goal), g.max_nodes);
    if (count_only) {
        std::cout << proofs.size() << "\n";
        return 0;
    }
    for (const Proof& p : proofs) std::cout << p.serialize() << "\n";
    std::cout << proofs.size() << " proofs with at most " << g.max_nodes << " rule applications\n";
    return 0;
}

int cmd_matrix(const GlobalOpts& g) {
    SystemCfg cfg = g.cfg();
    System sys = cfg.system;
    CommMatrix m = commutation_matrix(sys, standard_matrix_corpus(sys), cfg.superimpose_cuts);
    std::cout << m.to_string();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MALL proof nets: translation, rule commutation, sequentialisation"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--system", g.system, "mall-minus | mall | mall-star")
        ->envname("")
        ->capture_default_str();
    app.add_flag("--mix", g.mix, "enable the mix rule");
    app.add_option("--superimpose-cuts", g.superimpose, "free | none (mall-star with-rule)")
        ->capture_default_str();
    app.add_option("--max-nodes", g.max_nodes, "proof enumeration bound")->capture_default_str();
    app.add_option("--max-cuts", g.max_cuts, "cut rule budget for enumeration")
        ->capture_default_str();
    app.add_option("--format", g.format, "text | structured")->capture_default_str();

    std::string in1, in2, out, route = "inductive";
    bool diff = false, count_only = false;
    std::vector<std::string> seq_args;

    auto* check = app.add_subcommand("check", "validate a proof file");
    check->add_option("proof", in1)->required();

    auto* translate = app.add_subcommand("translate", "proof -> linking set");
    translate->add_option("proof", in1)->required();
    translate->add_option("-o,--out", out);
    translate->add_option("--route", route, "inductive | resolution")->capture_default_str();

    auto* neteq = app.add_subcommand("net-eq", "compare two nets exactly");
    neteq->add_option("a", in1)->required();
    neteq->add_option("b", in2)->required();

    auto* moves = app.add_subcommand("moves", "list applicable rule commutations");
    moves->add_option("proof", in1)->required();

    auto* apply = app.add_subcommand("apply", "replay a trace on a proof");
    apply->add_option("proof", in1)->required();
    apply->add_option("trace", in2)->required();
    apply->add_option("-o,--out", out);

    auto* convert = app.add_subcommand("convert", "find a commutation trace between equal-net proofs");
    convert->add_option("a", in1)->required();
    convert->add_option("b", in2)->required();
    convert->add_option("-o,--out", out);

    auto* equiv = app.add_subcommand("equiv", "decide proof-net equivalence of MALL proofs");
    equiv->add_option("a", in1)->required();
    equiv->add_option("b", in2)->required();
    equiv->add_option("-o,--out", out);

    auto* seq = app.add_subcommand("sequentialize", "net -> proof, or a reason it is not a net");
    seq->add_option("net", in1)->required();
    seq->add_option("-o,--out", out);

    auto* graph = app.add_subcommand("graph", "net -> DOT rendering of its jump graph");
    graph->add_option("net", in1)->required();
    graph->add_option("-o,--out", out);

    auto* gen = app.add_subcommand("gen-comms", "generate the rule commutation catalogue");
    gen->add_option("-o,--out", out);
    gen->add_flag("--diff", diff, "diff the generated catalogue against the tables");

    auto* conj = app.add_subcommand("conjecture", "cut-linking vs commutation harness");
    conj->add_option("--sequent", seq_args, "sequents to test (repeatable)");
    conj->add_option("-o,--out", out);

    auto* enumer = app.add_subcommand("enumerate", "all proofs of a sequent within the bound");
    enumer->add_option("sequent", in1, "a sequent or a .seq file")->required();
    enumer->add_flag("--count-only", count_only);

    auto* matrix = app.add_subcommand("matrix", "commutation classification matrix");
    (void)matrix;

    for (CLI::App* sc : app.get_subcommands({})) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(g, in1);
        if (translate->parsed()) return cmd_translate(g, in1, out, route);
        if (neteq->parsed()) return cmd_net_eq(in1, in2);
        if (moves->parsed()) return cmd_moves(g, in1);
        if (apply->parsed()) return cmd_apply(g, in1, in2, out);
        if (convert->parsed()) return cmd_convert(g, in1, in2, out);
        if (equiv->parsed()) return cmd_equiv(g, in1, in2, out);
        if (seq->parsed()) return cmd_sequentialize(g, in1, out);
        if (graph->parsed()) return cmd_graph(in1, out);
        if (gen->parsed()) return cmd_gen_comms(g, out, diff);
        if (conj->parsed()) return cmd_conjecture(g, seq_args, out);
        if (enumer->parsed()) return cmd_enumerate(g, in1, count_only);
        if (matrix->parsed()) return cmd_matrix(g);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const mall_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
