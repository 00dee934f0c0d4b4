#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mallnet/net.hpp"

using namespace mallnet;

namespace {
Link mk(const char* a, const char* b) { return Link(OccAddr::parse(a), OccAddr::parse(b)); }
}  // namespace

TEST(Translate, AxIsSingleLink) {
    LinkingSet t = translate_resolution(build::ax("P"));
    ASSERT_EQ(t.size(), 1u);
    ASSERT_EQ(t.linkings[0].links.size(), 1u);
    EXPECT_EQ(t.linkings[0].links[0], mk("0:-", "1:-"));
}

TEST(Translate, FigureOneCaptionFacts) {
    LinkingSet t = translate_resolution(fixtures::figure_one());
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.linkings[0].links.size(), 2u);
    EXPECT_EQ(t.linkings[1].links.size(), 2u);
    // the Q leaf is linked in neither
    LeafAddr q = OccAddr::parse("1:RR");
    for (const Linking& lk : t.linkings)
        for (const Link& l : lk.links) EXPECT_FALSE(l.touches(q));
}

TEST(Translate, FigureOneExactNet) {
    // Frozen from composing the tracking maps down the transcribed
    // derivation by hand.
    LinkingSet t = translate_resolution(fixtures::figure_one());
    LinkingSet expect(parse_sequent("(P * P) | ~P, ~P & (~P + Q)"),
                      {Linking({mk("0:LL", "0:R"), mk("0:LR", "1:L")}),
                       Linking({mk("0:LL", "1:RL"), mk("0:LR", "0:R")})});
    EXPECT_TRUE(net_eq(t, expect));
}

TEST(Translate, InductiveAgreesOnFixtures) {
    for (const Proof& p : {fixtures::figure_one(), fixtures::intro_example1_left(),
                           fixtures::intro_example1_right(), fixtures::intro_example2_left(),
                           fixtures::intro_example2_right(), fixtures::nested_with()}) {
        EXPECT_TRUE(net_eq(translate_resolution(p), translate_inductive(p)));
    }
}

TEST(Translate, TensorOfTwoAxesIsOneLinkingTwoLinks) {
    Proof t = build::tensor(parse_sequent("P * Q, ~P, ~Q"), 0, {2},
                            build::ax("P"),
                            build::ax(Formula::atom("Q"), Formula::atom("Q", true)));
    LinkingSet s = translate_inductive(t);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s.linkings[0].links.size(), 2u);
}

TEST(Translate, WithOfSingleLinkingProofsHasTwo) {
    Proof w = build::with(parse_sequent("P, ~P & ~P"), 1, build::ax("P"), build::ax("P"));
    EXPECT_EQ(translate_inductive(w).size(), 2u);
}

TEST(Translate, CountingLaws) {
    // tensor/mix multiply, with adds, on every node of the fixtures
    std::vector<Proof> stack = {fixtures::figure_one(), fixtures::intro_example2_left(),
                                fixtures::intro_example2_right(), fixtures::nested_with()};
    while (!stack.empty()) {
        Proof p = stack.back();
        stack.pop_back();
        Rule r = p.rule().rule;
        if (r == Rule::Tensor || r == Rule::Mix || r == Rule::StarCut) {
            EXPECT_EQ(translate_inductive(p).size(),
                      translate_inductive(p.premise(0)).size() * translate_inductive(p.premise(1)).size());
        } else if (r == Rule::With) {
            EXPECT_EQ(translate_inductive(p).size(),
                      translate_inductive(p.premise(0)).size() + translate_inductive(p.premise(1)).size());
        }
        for (const Proof& q : p.premises()) stack.push_back(q);
    }
}

TEST(Translate, EveryLinkingTouchesEveryRoot) {
    for (const Proof& p : {fixtures::figure_one(), fixtures::intro_example1_left(),
                           fixtures::intro_example2_right()}) {
        LinkingSet t = translate_inductive(p);
        for (const Linking& lk : t.linkings)
            for (int r = 0; r < t.sequent.size(); ++r)
                EXPECT_TRUE(lk.touches_root(r));
    }
}

TEST(Translate, IntroExamplePairTranslatesEqually) {
    EXPECT_TRUE(net_eq(translate(fixtures::intro_example1_left()),
                       translate(fixtures::intro_example1_right())));
    EXPECT_TRUE(net_eq(translate(fixtures::intro_example2_left()),
                       translate(fixtures::intro_example2_right())));
}

TEST(Translate, MallStarProofWithCut) {
    // starcut over two axioms: net on "~P, P # ~P, P" has one linking with
    // two links, both ending inside the cut formula
    Sequent s = parse_sequent("~P, P # ~P, P", true);
    Proof p = build::starcut(s, 1, {2},
                             build::ax(Formula::atom("P", true), Formula::atom("P")),
                             build::ax(Formula::atom("P", true), Formula::atom("P")));
    LinkingSet t = translate_resolution(p);
    ASSERT_EQ(t.size(), 1u);
    ASSERT_EQ(t.linkings[0].links.size(), 2u);
    EXPECT_TRUE(net_eq(t, translate_inductive(p)));
    bool touches_cut = false;
    for (const Link& l : t.linkings[0].links)
        if (l.a.root == 1 || l.b.root == 1) touches_cut = true;
    EXPECT_TRUE(touches_cut);
}

TEST(Translate, MallCutRejected) {
    Proof p = build::cut(parse_sequent("~P, P"), Formula::atom("P"), {1},
                         build::ax(Formula::atom("P", true), Formula::atom("P")),
                         build::ax(Formula::atom("P", true), Formula::atom("P")));
    EXPECT_THROW(translate_resolution(p), mall_error);
    EXPECT_THROW(translate_inductive(p), mall_error);
}

TEST(NetEq, MutatedLinkDiffers) {
    LinkingSet t = translate(fixtures::figure_one());
    LinkingSet mutated = t;
    // retarget one link at the Q leaf
    std::vector<Link> links = mutated.linkings[0].links;
    links[0] = Link(links[0].a, OccAddr::parse("1:RR"));
    std::vector<Linking> ls = mutated.linkings;
    ls[0] = Linking(links);
    mutated = LinkingSet(mutated.sequent, ls);
    EXPECT_FALSE(net_eq(t, mutated));
}

TEST(NetEq, DifferentSequentsAreAnError) {
    LinkingSet a = translate(build::ax("P"));
    LinkingSet b = translate(build::ax("Q"));
    EXPECT_THROW(net_eq(a, b), mall_error);
}
