#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "mallnet/corpus.hpp"
#include "mallnet/enumerate.hpp"
#include "mallnet/net.hpp"

using namespace mallnet;

namespace {

// Independent brute-force enumerator used as a counting oracle: plain
// recursion, no memoisation, every mask including non-canonical ones,
// deduplicated by serialization.
std::vector<Proof> brute_proofs(const Sequent& goal, int max_nodes, const EnumOptions& opt) {
    std::vector<Proof> out;
    if (max_nodes < 1 || goal.size() == 0) return out;
    const int roots = goal.size();
    if (roots == 2 && goal.root(0).is_literal() && goal.root(1).is_literal() &&
        goal.root(0).atom_name() == goal.root(1).atom_name() &&
        goal.root(0).negated() != goal.root(1).negated())
        out.push_back(build::ax(goal.root(0), goal.root(1)));

    auto two = [&](RuleApp app) {
        auto p1 = premise_of(goal, app, 0).first;
        auto p2 = premise_of(goal, app, 1).first;
        for (const Proof& a : brute_proofs(p1, max_nodes - 2, opt))
            for (const Proof& b : brute_proofs(p2, max_nodes - 1 - a.node_count(), opt)) {
                Proof q = Proof::make(goal, app, {a, b});
                if (q.cut_count() <= opt.max_cuts || opt.cfg.system != System::Mall)
                    out.push_back(q);
            }
    };

    for (int r = 0; r < roots; ++r) {
        const Formula& f = goal.root(r);
        switch (f.conn()) {
            case Conn::Atom: break;
            case Conn::Parr: {
                RuleApp app = build::single(Rule::Parr, goal, r);
                for (const Proof& a : brute_proofs(premise_of(goal, app, 0).first, max_nodes - 1, opt))
                    out.push_back(Proof::make(goal, app, {a}));
                break;
            }
            case Conn::Plus:
                for (Rule pr : {Rule::Plus1, Rule::Plus2}) {
                    RuleApp app = build::single(pr, goal, r);
                    for (const Proof& a : brute_proofs(premise_of(goal, app, 0).first, max_nodes - 1, opt))
                        out.push_back(Proof::make(goal, app, {a}));
                }
                break;
            case Conn::Tensor:
            case Conn::Cut: {
                if (f.conn() == Conn::Cut && opt.cfg.system != System::MallStar) break;
                std::vector<int> others;
                for (int j = 0; j < roots; ++j)
                    if (j != r) others.push_back(j);
                for (uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
                    RuleApp app;
                    app.rule = f.conn() == Conn::Tensor ? Rule::Tensor : Rule::StarCut;
                    app.principal = r;
                    app.tags.assign(static_cast<size_t>(roots), RootTag::Left);
                    app.tags[static_cast<size_t>(r)] = RootTag::Principal;
                    for (size_t i = 0; i < others.size(); ++i)
                        if (mask & (1u << i)) app.tags[static_cast<size_t>(others[i])] = RootTag::Right;
                    two(app);
                }
                break;
            }
            case Conn::With: {
                RuleApp app;
                app.rule = Rule::With;
                app.principal = r;
                app.tags.assign(static_cast<size_t>(roots), RootTag::Shared);
                app.tags[static_cast<size_t>(r)] = RootTag::Principal;
                two(app);
                break;
            }
        }
    }
    if (opt.cfg.mix && roots >= 2) {
        // all masks, both orientations; make() renormalises, dedup collapses
        for (uint32_t mask = 1; mask + 1 < (1u << roots); ++mask) {
            RuleApp app;
            app.rule = Rule::Mix;
            app.tags.assign(static_cast<size_t>(roots), RootTag::Left);
            for (int j = 0; j < roots; ++j)
                if (mask & (1u << j)) app.tags[static_cast<size_t>(j)] = RootTag::Right;
            if (app.tags[0] == RootTag::Right) {
                for (auto& t : app.tags) t = t == RootTag::Left ? RootTag::Right : RootTag::Left;
                RuleApp flipped = app;
                auto p1 = premise_of(goal, flipped, 0).first;
                auto p2 = premise_of(goal, flipped, 1).first;
                for (const Proof& a : brute_proofs(p1, max_nodes - 2, opt))
                    for (const Proof& b : brute_proofs(p2, max_nodes - 1 - a.node_count(), opt))
                        out.push_back(Proof::make(goal, flipped, {a, b}));
            } else {
                two(app);
            }
        }
    }
    if (opt.cfg.system == System::Mall && opt.max_cuts > 0) {
        for (const Formula& raw : opt.cut_pool) {
            Formula a = negate(raw) < raw ? negate(raw) : raw;
            for (uint32_t mask = 0; mask < (1u << roots); ++mask) {
                RuleApp app;
                app.rule = Rule::Cut;
                app.cut_formula = a;
                app.tags.assign(static_cast<size_t>(roots), RootTag::Left);
                for (int j = 0; j < roots; ++j)
                    if (mask & (1u << j)) app.tags[static_cast<size_t>(j)] = RootTag::Right;
                two(app);
            }
        }
    }
    return out;
}

size_t brute_count(const Sequent& goal, int max_nodes, const EnumOptions& opt) {
    std::set<std::string> seen;
    for (const Proof& p : brute_proofs(goal, max_nodes, opt)) seen.insert(p.serialize());
    return seen.size();
}

}  // namespace

TEST(Enumerate, AxOnly) {
    EnumOptions opt;
    auto ps = enumerate_proofs(parse_sequent("P, ~P"), opt, 1);
    ASSERT_EQ(ps.size(), 1u);
    EXPECT_EQ(ps[0].rule().rule, Rule::Ax);
}

TEST(Enumerate, FindsBothIntroExampleProofs) {
    EnumOptions opt;
    auto ps = enumerate_proofs(parse_sequent("~P, P * Q, R + ~Q"), opt, 8);
    bool l = false, r = false;
    for (const Proof& p : ps) {
        if (p == fixtures::intro_example1_left()) l = true;
        if (p == fixtures::intro_example1_right()) r = true;
    }
    EXPECT_TRUE(l);
    EXPECT_TRUE(r);
}

TEST(Enumerate, NoDuplicates) {
    EnumOptions opt;
    opt.cfg.mix = true;
    for (const char* s : {"P, ~P, Q, ~Q", "~P, P * Q, R + ~Q", "(P * P) | ~P, ~P & (~P + Q)"}) {
        auto ps = enumerate_proofs(parse_sequent(s), opt, 7);
        std::set<std::string> seen;
        for (const Proof& p : ps) EXPECT_TRUE(seen.insert(p.serialize()).second) << s;
    }
}

TEST(Enumerate, EveryOutputChecks) {
    EnumOptions opt;
    opt.cfg.mix = true;
    for (const char* s : {"P, ~P, Q, ~Q", "~P, P * Q, R + ~Q", "P & Q, ~P + ~Q"}) {
        for (const Proof& p : enumerate_proofs(parse_sequent(s), opt, 7))
            EXPECT_TRUE(check_proof(p, opt.cfg).empty()) << s;
    }
}

TEST(Enumerate, MixCountCrossChecked) {
    EnumOptions opt;
    opt.cfg.mix = true;
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    ProofEnumerator en(opt);
    EXPECT_EQ(en.count(s, 4), brute_count(s, 4, opt));
    EXPECT_EQ(en.count(s, 4), 1u);  // the single mix-of-axioms proof
}

TEST(Enumerate, CountsCrossCheckedOnSmallFamily) {
    EnumOptions plain;
    EnumOptions mixed;
    mixed.cfg.mix = true;
    for (const char* s : {"P, ~P", "P | ~P", "P * Q, ~P, ~Q", "P & Q, ~P + ~Q", "(P + Q) | ~P",
                          "~P, P + P, Q, ~Q"}) {
        Sequent q = parse_sequent(s);
        ProofEnumerator e1(plain), e2(mixed);
        EXPECT_EQ(e1.count(q, 6), brute_count(q, 6, plain)) << s;
        EXPECT_EQ(e2.count(q, 6), brute_count(q, 6, mixed)) << s;
    }
}

TEST(Enumerate, MallCutProofs) {
    EnumOptions opt;
    opt.cfg.system = System::Mall;
    opt.max_cuts = 1;
    opt.cut_pool = {Formula::atom("P")};
    auto ps = enumerate_proofs(parse_sequent("~P, P"), opt, 3);
    ASSERT_EQ(ps.size(), 2u);  // the axiom and one cut-of-axioms
    EXPECT_EQ(ps[0].rule().rule, Rule::Ax);
    EXPECT_EQ(ps[1].rule().rule, Rule::Cut);
    EXPECT_TRUE(check_proof(ps[1], opt.cfg).empty());
}

TEST(Enumerate, MallStarSuperimpositionChoices) {
    // with over a shared cut: the cut may be shared or kept on one side
    EnumOptions opt;
    opt.cfg.system = System::MallStar;
    Sequent s = parse_sequent("~P, P # ~P, P & P", true);
    auto ps = enumerate_proofs(s, opt, 8);
    EXPECT_FALSE(ps.empty());
    bool shared = false, left_only = false;
    for (const Proof& p : ps) {
        if (p.rule().rule != Rule::With) continue;
        for (int j = 0; j < s.size(); ++j) {
            if (!s.root(j).is_cut()) continue;
            if (p.rule().tags[static_cast<size_t>(j)] == RootTag::Shared) shared = true;
            if (p.rule().tags[static_cast<size_t>(j)] == RootTag::Left) left_only = true;
        }
    }
    EXPECT_TRUE(shared);
    // a premise-one-only cut cannot happen here: the with premises must
    // still prove their sequents, and the cut is needed on both sides
    (void)left_only;
}

TEST(Enumerate, SepModeForbidsSharedCuts) {
    EnumOptions opt;
    opt.cfg.system = System::MallStar;
    opt.cfg.superimpose_cuts = false;
    Sequent s = parse_sequent("~P, P # ~P, P & P", true);
    for (const Proof& p : enumerate_proofs(s, opt, 8)) {
        if (p.rule().rule != Rule::With) continue;
        for (int j = 0; j < s.size(); ++j)
            if (s.root(j).is_cut())
                EXPECT_NE(p.rule().tags[static_cast<size_t>(j)], RootTag::Shared);
    }
}

TEST(Enumerate, TranslationsAgreeOnSmallCorpus) {
    CorpusSpec spec;
    spec.max_formula_leaves = 2;
    spec.max_total_leaves = 4;
    spec.max_roots = 2;
    spec.max_nodes = 6;
    EnumOptions opt;
    size_t total = for_each_corpus_proofset(spec, opt, [&](const Sequent& s, const std::vector<Proof>& ps) {
        (void)s;
        for (const Proof& p : ps)
            EXPECT_TRUE(net_eq(translate_resolution(p), translate_inductive(p)));
    });
    EXPECT_GT(total, 50u);
}

TEST(Corpus, SequentFamilyIsDeterministic) {
    CorpusSpec spec;
    spec.max_formula_leaves = 2;
    spec.max_total_leaves = 4;
    spec.max_roots = 2;
    auto a = corpus_sequents(spec);
    auto b = corpus_sequents(spec);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
    EXPECT_FALSE(a.empty());
}
