#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mallnet/corpus.hpp"
#include "mallnet/rewrite.hpp"

using namespace mallnet;

namespace {

void check_trace(const Proof& start, const Trace& t, const Proof& expect_end,
                 const Rewriter& rw) {
    Proof end = replay(start, t, rw.engine());
    EXPECT_TRUE(end == expect_end);
    // every intermediate preserves conclusion and net
    Proof cur = start;
    LinkingSet theta = translate(start);
    for (const Move& m : t.moves) {
        auto res = rw.engine().try_move(cur, m);
        ASSERT_TRUE(res.has_value());
        cur = res->result;
        EXPECT_EQ(cur.conclusion(), start.conclusion());
        EXPECT_TRUE(net_eq(translate(cur), theta));
    }
}

}  // namespace

TEST(MakeLast, AlreadyLastIsEmptyTrace) {
    Rewriter rw;
    Proof fig = fixtures::figure_one();
    auto [q, t] = rw.make_last_generate(fig, 0);  // the parr root is already last
    EXPECT_TRUE(q == fig);
    EXPECT_EQ(t.size(), 0u);
}

TEST(MakeLast, FigureOneWithRoot) {
    Rewriter rw;
    Proof fig = fixtures::figure_one();
    auto [q, t] = rw.make_last_generate(fig, 1);
    EXPECT_EQ(q.rule().rule, Rule::With);
    EXPECT_EQ(q.rule().principal, 1);
    EXPECT_TRUE(net_eq(translate(q), translate(fig)));
    check_trace(fig, t, q, rw);
}

TEST(MakeLast, SplitOnIntroExample) {
    Rewriter rw;
    Proof l = fixtures::intro_example1_right();  // ends with the plus rule
    // force the tensor (root 1) last with the partition it uses
    std::vector<RootTag> part = {RootTag::Left, RootTag::Principal, RootTag::Right};
    auto [q, t] = rw.make_last_split(l, 1, part);
    EXPECT_EQ(q.rule().rule, Rule::Tensor);
    EXPECT_EQ(q.rule().principal, 1);
    EXPECT_TRUE(q == fixtures::intro_example1_left());
    check_trace(l, t, q, rw);
}

TEST(MakeLast, MixPartition) {
    // parr-last proof of a disconnected net: force the mix last
    Sequent inner_s = parse_sequent("P, ~P, Q, ~Q");
    Proof m = build::mix(inner_s, {2, 3}, build::ax("P"), build::ax("Q"));
    Proof p = build::parr(parse_sequent("P | ~P, Q, ~Q"), 0, m);
    // wait: parr premise must be (P, ~P, Q, ~Q): ok
    Rewriter rw;
    std::vector<RootTag> part = {RootTag::Left, RootTag::Right, RootTag::Right};
    auto [q, t] = rw.make_last_mix(p, part);
    EXPECT_EQ(q.rule().rule, Rule::Mix);
    check_trace(p, t, q, rw);
    // partition as requested (up to stored orientation)
    EXPECT_EQ(q.rule().tags[0], RootTag::Left);
    EXPECT_EQ(q.rule().tags[1], RootTag::Right);
    EXPECT_EQ(q.rule().tags[2], RootTag::Right);
}

TEST(Convert, IdenticalProofsGiveEmptyTrace) {
    Rewriter rw;
    EXPECT_EQ(rw.convert(fixtures::figure_one(), fixtures::figure_one()).size(), 0u);
}

TEST(Convert, IntroExampleOneIsOneMove) {
    Rewriter rw;
    Proof l = fixtures::intro_example1_left();
    Proof r = fixtures::intro_example1_right();
    Trace t = rw.convert(l, r);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_TRUE(replay(l, t, rw.engine()) == r);
}

TEST(Convert, IntroExampleTwoBothWays) {
    Rewriter rw;
    Proof l = fixtures::intro_example2_left();
    Proof r = fixtures::intro_example2_right();
    Trace t1 = rw.convert(l, r);
    EXPECT_TRUE(replay(l, t1, rw.engine()) == r);
    Trace t2 = rw.convert(r, l);
    EXPECT_TRUE(replay(r, t2, rw.engine()) == l);
}

TEST(Convert, DifferentNetsAreAnError) {
    Rewriter rw;
    // two proofs of P+P, ~P with different nets
    Proof a = build::plus1(parse_sequent("P + P, ~P"), 0, build::ax("P"));
    Proof b = build::plus2(parse_sequent("P + P, ~P"), 0, build::ax("P"));
    EXPECT_THROW(rw.convert(a, b), rewrite_error);
}

TEST(Convert, ExhaustiveOnASequent) {
    // all proofs of the intro example sequent: same-net pairs convert
    EnumOptions opt;
    auto ps = enumerate_proofs(parse_sequent("~P, P * Q, R + ~Q"), opt, 8);
    ASSERT_GE(ps.size(), 2u);
    Rewriter rw;
    std::map<std::string, std::vector<const Proof*>> classes;
    for (const Proof& p : ps) classes[translate(p).to_string()].push_back(&p);
    for (auto& [net, members] : classes) {
        (void)net;
        for (size_t i = 1; i < members.size(); ++i) {
            Trace t = rw.convert(*members[i], *members[0]);
            EXPECT_TRUE(replay(*members[i], t, rw.engine()) == *members[0]);
        }
    }
}

TEST(Convert, DisconnectedCase) {
    // two mix proofs with different association orders
    EnumOptions opt;
    opt.cfg.mix = true;
    Sequent s = parse_sequent("P, ~P, Q, ~Q, R, ~R");
    auto ps = enumerate_proofs(s, opt, 8);
    Rewriter rw;
    std::vector<Proof> same_net;
    LinkingSet first = translate(ps[0]);
    for (const Proof& p : ps)
        if (net_eq(translate(p), first)) same_net.push_back(p);
    ASSERT_GE(same_net.size(), 2u);
    for (size_t i = 1; i < same_net.size() && i < 6; ++i) {
        Trace t = rw.convert(same_net[i], same_net[0]);
        EXPECT_TRUE(replay(same_net[i], t, rw.engine()) == same_net[0]);
    }
}

TEST(Sequentialize, AxNet) {
    LinkingSet t = translate(build::ax("P"));
    auto res = sequentialize(t, {System::MallMinus, false, true});
    ASSERT_TRUE(std::holds_alternative<Proof>(res));
    EXPECT_TRUE(std::get<Proof>(res) == build::ax("P"));
}

TEST(Sequentialize, FigureOneRoundTrip) {
    LinkingSet t = translate(fixtures::figure_one());
    auto res = sequentialize(t, {System::MallMinus, false, true});
    ASSERT_TRUE(std::holds_alternative<Proof>(res));
    EXPECT_TRUE(net_eq(translate(std::get<Proof>(res)), t));
}

TEST(Sequentialize, MutatedFigureOneRejected) {
    LinkingSet t = translate(fixtures::figure_one());
    // retarget one link at the Q leaf: no proof of this sequent produces it
    std::vector<Linking> ls = t.linkings;
    std::vector<Link> links = ls[0].links;
    links[0] = Link(links[0].a, OccAddr::parse("1:RR"));
    ls[0] = Linking(links);
    LinkingSet mutated(t.sequent, ls);
    auto res = sequentialize(mutated, {System::MallMinus, false, true});
    EXPECT_TRUE(std::holds_alternative<NotANet>(res));
}

TEST(Sequentialize, DisconnectedNeedsMix) {
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    Proof m = build::mix(s, {2, 3}, build::ax("P"), build::ax("Q"));
    LinkingSet t = translate(m);
    auto no = sequentialize(t, {System::MallMinus, false, true});
    EXPECT_TRUE(std::holds_alternative<NotANet>(no));
    auto yes = sequentialize(t, {System::MallMinus, true, true});
    ASSERT_TRUE(std::holds_alternative<Proof>(yes));
    EXPECT_TRUE(net_eq(translate(std::get<Proof>(yes)), t));
}

TEST(Sequentialize, MallStarNet) {
    Proof ax1 = build::ax(Formula::atom("P", true), Formula::atom("P"));
    Proof w = build::with(parse_sequent("~P, (P + Q) & P"), 1,
                          build::plus1(parse_sequent("~P, P + Q"), 1,
                                       build::ax(Formula::atom("P", true), Formula::atom("P"))),
                          build::ax(Formula::atom("P", true), Formula::atom("P")));
    Sequent s = parse_sequent("~P, P # ~P, (P + Q) & P", true);
    Proof p = build::starcut(s, 1, {2}, ax1, w);
    LinkingSet t = translate(p);
    auto res = sequentialize(t, {System::MallStar, false, true});
    ASSERT_TRUE(std::holds_alternative<Proof>(res));
    EXPECT_TRUE(net_eq(translate(std::get<Proof>(res)), t));
}

TEST(Sequentialize, CorpusRoundTrip) {
    CorpusSpec spec;
    spec.max_formula_leaves = 2;
    spec.max_total_leaves = 4;
    spec.max_roots = 2;
    spec.max_nodes = 6;
    EnumOptions opt;
    SystemCfg cfg{System::MallMinus, false, true};
    size_t nets = 0;
    for_each_corpus_proofset(spec, opt, [&](const Sequent& s, const std::vector<Proof>& ps) {
        (void)s;
        std::set<std::string> seen;
        for (const Proof& p : ps) {
            LinkingSet t = translate(p);
            if (!seen.insert(t.to_string()).second) continue;
            ++nets;
            auto res = sequentialize(t, cfg);
            ASSERT_TRUE(std::holds_alternative<Proof>(res)) << t.to_string() << " -> "
                << std::get<NotANet>(res).reason;
            EXPECT_TRUE(net_eq(translate(std::get<Proof>(res)), t));
        }
    });
    EXPECT_GT(nets, 20u);
}

TEST(MakeLast, EveryCorpusSeparatingRoot) {
    CorpusSpec spec;
    spec.max_formula_leaves = 2;
    spec.max_total_leaves = 4;
    spec.max_roots = 2;
    spec.max_nodes = 6;
    EnumOptions opt;
    Rewriter rw;
    for_each_corpus_proofset(spec, opt, [&](const Sequent& s, const std::vector<Proof>& ps) {
        for (const Proof& p : ps) {
            LinkingSet theta = translate(p);
            JumpGraph g = build_graph(theta);
            for (int r = 0; r < s.size(); ++r) {
                if (s.root(r).is_literal()) continue;
                if (!separates(s, r, theta, &g)) continue;
                auto [q, t] = rw.make_last_generate(p, r);
                EXPECT_EQ(q.rule().principal, r);
                EXPECT_TRUE(net_eq(translate(q), theta));
                EXPECT_TRUE(replay(p, t, rw.engine()) == q);
            }
        }
    });
}
