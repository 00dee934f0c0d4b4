#pragma once

// The commutation classification matrix: for every ordered pair of rules,
// whether a lower beta-rule always commutes over an adjacent alpha-rule,
// only under syntactic restrictions, or only under restrictions and with
// duplication/identification of subproofs.  Computed empirically from an
// exhaustive move analysis over a proof corpus.

#include "commute.hpp"
#include "enumerate.hpp"

namespace mallnet {

enum class CommCell : uint8_t { Empty, Always, Conditional, ConditionalNonLocal };

inline const char* cell_symbol(CommCell c) {
    switch (c) {
        case CommCell::Empty: return "?";
        case CommCell::Always: return "v";             // check mark
        case CommCell::Conditional: return "o";        // restricted
        case CommCell::ConditionalNonLocal: return "*";  // restricted, duplicating
    }
    return "?";
}

inline std::vector<Rule> matrix_rules(System system) {
    switch (system) {
        case System::MallStar:
            return {Rule::StarCut, Rule::Mix, Rule::Tensor, Rule::Plus1, Rule::Plus2, Rule::Parr,
                    Rule::With};
        case System::Mall:
            return {Rule::Cut, Rule::Mix, Rule::Tensor, Rule::Plus1, Rule::Plus2, Rule::Parr,
                    Rule::With};
        case System::MallMinus:
            return {Rule::Mix, Rule::Tensor, Rule::Plus1, Rule::Plus2, Rule::Parr, Rule::With};
    }
    return {};
}

struct CommMatrix {
    std::vector<Rule> rules;
    std::map<std::pair<Rule, Rule>, CommCell> cells;                    // (beta, alpha)
    std::map<std::pair<Rule, Rule>, std::pair<size_t, size_t>> counts;  // admitted / total

    CommCell at(Rule beta, Rule alpha) const {
        auto it = cells.find({beta, alpha});
        return it == cells.end() ? CommCell::Empty : it->second;
    }

    std::string to_string() const {
        std::string s = "beta\\alpha";
        for (Rule a : rules) s += std::string("\t") + rule_name(a);
        s += "\n";
        for (Rule b : rules) {
            s += rule_name(b);
            for (Rule a : rules) s += std::string("\t") + cell_symbol(at(b, a));
            s += "\n";
        }
        return s;
    }
};

// An adjacency: a node whose rule is beta with an alpha-rule immediately
// above one premise, such that nothing generated by the alpha-rule sits
// inside the beta-principal.  `admitted` records whether some move hoists
// that alpha instance.
inline CommMatrix commutation_matrix(System system, const std::vector<Proof>& corpus,
                                     bool allow_superimpose = true) {
    CommMatrix m;
    m.rules = matrix_rules(system);
    MoveEngine eng(allow_superimpose);

    std::function<void(const Proof&)> scan = [&](const Proof& q) {
        const RuleApp& beta = q.rule();
        if (beta.rule != Rule::Ax) {
            std::vector<Move> moves;
            for (Move cand : eng.applicable(q))
                if (cand.pos.empty()) moves.push_back(cand);
            for (int d = 0; d < premise_count(beta.rule); ++d) {
                const RuleApp& alpha = q.premise(d).rule();
                if (alpha.rule == Rule::Ax) continue;
                bool admitted = false;
                bool eligible = false;
                if (alpha.principal < 0) {
                    eligible = true;  // bare rules generate nothing
                    for (const Move& mv : moves)
                        if (mv.bare &&
                            (beta.rule == Rule::With || premise_count(beta.rule) == 1 ||
                             mv.premise == d))
                            admitted = true;
                } else {
                    // condition (i): the generated formula must track to a root
                    auto origins = premise_of(q.conclusion(), beta, d).second;
                    const RootOrigin& o = origins.at(static_cast<size_t>(alpha.principal));
                    if (o.kind == RootOrigin::Ctx) {
                        eligible = true;
                        int j = o.concl_root;
                        for (const Move& mv : moves)
                            if (!mv.bare && mv.root == j) admitted = true;
                    }
                }
                if (eligible) {
                    auto& cnt = m.counts[{beta.rule, alpha.rule}];
                    ++cnt.second;
                    if (admitted) ++cnt.first;
                }
            }
        }
        for (const Proof& sub : q.premises()) scan(sub);
    };
    for (const Proof& p : corpus) scan(p);

    for (Rule b : m.rules)
        for (Rule a : m.rules) {
            auto it = m.counts.find({b, a});
            if (it == m.counts.end() || it->second.second == 0) {
                m.cells[{b, a}] = CommCell::Empty;
                continue;
            }
            auto [adm, tot] = it->second;
            if (adm == tot) {
                m.cells[{b, a}] = CommCell::Always;
            } else {
                bool nonlocal = (b == Rule::With &&
                                 (a == Rule::Tensor || a == Rule::Mix || a == Rule::Cut ||
                                  a == Rule::StarCut));
                m.cells[{b, a}] = nonlocal ? CommCell::ConditionalNonLocal : CommCell::Conditional;
            }
        }
    return m;
}

// Deterministic seed corpus giving every matrix cell both witnesses and,
// where commutation is conditional, blocked instances.
inline std::vector<Proof> standard_matrix_corpus(System system, int max_nodes = 9) {
    std::vector<std::string> seqs;
    bool star = system == System::MallStar;
    seqs = {
        "~P, P * Q, R + ~Q",
        "~P, (P + R) * ~Q, Q & Q",
        "(P * P) | ~P, ~P & (~P + Q)",
        "P | ~P, Q | ~Q",
        "P, ~P, Q, ~Q",
        "P, ~P, Q, ~Q, R, ~R",
        "P * Q, ~P | ~Q",
        "P * Q, ~P, ~Q, R, ~R",
        "P * (Q | ~Q), ~P",
        "P * P, ~P, ~P * Q, ~Q",
        "P * Q, ~P, ~Q, R | ~R",
        "P & P, ~P + ~P",
        "P & P, ~P & ~P",
        "(P + P) | ~P, Q, ~Q",
        "P + P, ~P, Q + Q, ~Q",
        "(P | ~P) + Q, (P | ~P) + Q",
        "P | ~P, R + (Q | ~Q)",
        "P & P, ~P, Q, ~Q",
        "P & P, ~P | Q, ~Q",
        "~P | Q, P, ~Q",
        "(P & P) | (~P + ~P)",
    };
    if (star) {
        seqs.push_back("P # ~P, ~P, P");
        seqs.push_back("~P, P # ~P, P # ~P, P");
        seqs.push_back("P # ~P, ~P, (P + Q) & P");
        seqs.push_back("P # ~P, ~P | P");
        seqs.push_back("P # ~P, ~P, P & P");
        seqs.push_back("~P, P # ~P, P + Q");
        seqs.push_back("~P, P # ~P, Q + P");
        seqs.push_back("~P, P # ~P, Q | ~Q, P");
        seqs.push_back("Q | ~Q, P # ~P, ~P, P");
        seqs.push_back("P # ~P, ~P, P, Q, ~Q");
        seqs.push_back("P # ~P, ~P * Q, ~Q, P");
    }
    EnumOptions opt;
    opt.cfg.system = star ? System::MallStar : system;
    opt.cfg.mix = true;
    if (system == System::Mall) {
        opt.max_cuts = 1;
        opt.cut_pool = {Formula::atom("P"), Formula::atom("Q")};
    }
    ProofEnumerator en(opt);
    std::vector<Proof> out;
    for (const std::string& s : seqs) {
        Sequent q = parse_sequent(s, star);
        for (Proof& p : en.proofs(q, max_nodes)) out.push_back(std::move(p));
    }

    // Hand-built witnesses too large for the enumeration bound: with-rules
    // whose premises are topped by non-matching rules, blocking the
    // with-commutation.
    auto axp = [] { return build::ax("P"); };
    auto axq = [] { return build::ax("Q"); };
    {
        // premise 1 topped by an inner with, premise 2 topped by a mix
        Sequent ps = parse_sequent("P, ~P & ~P, Q, ~Q");
        Proof mixpq = build::mix(parse_sequent("P, ~P, Q, ~Q"), {2, 3}, axp(), axq());
        Proof p1 = build::with(ps, 1, mixpq, mixpq);
        Proof inner = build::with(parse_sequent("P, ~P & ~P"), 1, axp(), axp());
        Proof p2 = build::mix(ps, {2, 3}, inner, axq());
        out.push_back(build::with(parse_sequent("P & P, ~P & ~P, Q, ~Q"), 0, p1, p2));
    }
    {
        // premise 1 topped by a mix, premise 2 topped by an inner with;
        // and a fully mix-topped variant that does commute
        Sequent ps = parse_sequent("P, ~P, Q & Q, ~Q");
        Proof innerq = build::with(parse_sequent("Q & Q, ~Q"), 0, axq(), axq());
        Proof mixtop = build::mix(ps, {2, 3}, axp(), innerq);
        Proof mixpq = build::mix(parse_sequent("P, ~P, Q, ~Q"), {2, 3}, axp(), axq());
        Proof withtop = build::with(ps, 2, mixpq, mixpq);
        out.push_back(build::with(parse_sequent("P & P, ~P, Q & Q, ~Q"), 0, mixtop, withtop));
        out.push_back(build::with(parse_sequent("P & P, ~P, Q & Q, ~Q"), 0, mixtop, mixtop));
        out.push_back(build::with(parse_sequent("P & P, ~P, Q & Q, ~Q"), 0, withtop, withtop));
    }
    {
        // premise 1 topped by a parr, premise 2 topped by a mix
        Sequent ps = parse_sequent("P, ~P | Q, ~Q, R, ~R");
        Proof axr = build::ax("R");
        Proof mix3 = build::mix(parse_sequent("P, ~P, Q, ~Q"), {2, 3}, axp(), axq());
        Proof mix4 = build::mix(parse_sequent("P, ~P, Q, ~Q, R, ~R"), {4, 5}, mix3, axr);
        Proof parrtop = build::parr(ps, 1, mix4);
        Proof parr_small = build::parr(parse_sequent("P, ~P | Q, ~Q"), 1, mix3);
        Proof mixtop = build::mix(ps, {3, 4}, parr_small, axr);
        out.push_back(build::with(parse_sequent("P & P, ~P | Q, ~Q, R, ~R"), 0, parrtop, mixtop));
        out.push_back(build::with(parse_sequent("P & P, ~P | Q, ~Q, R, ~R"), 0, parrtop, parrtop));
    }
    return out;
}

}  // namespace mallnet
