#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mallnet/netgraph.hpp"

using namespace mallnet;

namespace {
Link mk(const char* a, const char* b) { return Link(OccAddr::parse(a), OccAddr::parse(b)); }

LinkingSet fig1_net() { return translate(fixtures::figure_one()); }

// linkings of the worked example, top = left with-branch
Linking lambda_top() { return Linking({mk("0:LL", "0:R"), mk("0:LR", "1:L")}); }
Linking lambda_bot() { return Linking({mk("0:LL", "1:RL"), mk("0:LR", "0:R")}); }
}  // namespace

TEST(Restrict, FullNetKeepsAllButQ) {
    LinkingSet t = fig1_net();
    RestrictedForest rf = restrict_forest(t.sequent, t.linkings);
    for (auto& [addr, f] : vertices(t.sequent)) {
        (void)f;
        if (addr == OccAddr::parse("1:RR"))
            EXPECT_FALSE(rf.contains(addr));
        else
            EXPECT_TRUE(rf.contains(addr)) << addr.to_string();
    }
}

TEST(Restrict, SingleLinkingDropsPlusSubtree) {
    LinkingSet t = fig1_net();
    RestrictedForest rf = restrict_forest(t.sequent, {lambda_top()});
    EXPECT_FALSE(rf.contains(OccAddr::parse("1:R")));
    EXPECT_FALSE(rf.contains(OccAddr::parse("1:RL")));
    EXPECT_FALSE(rf.contains(OccAddr::parse("1:RR")));
    EXPECT_TRUE(rf.contains(OccAddr::parse("1:L")));
    EXPECT_TRUE(rf.contains(OccAddr::parse("1:-")));
}

TEST(Restrict, CoveringEveryLeafIsIdentity) {
    Sequent s = parse_sequent("P * Q, ~P, ~Q");
    Linking lk({mk("0:L", "1:-"), mk("0:R", "2:-")});
    RestrictedForest rf = restrict_forest(s, {lk});
    EXPECT_EQ(rf.kept.size(), vertices(s).size());
}

TEST(Restrict, ForeignLeafIsAnError) {
    Sequent s = parse_sequent("P, ~P");
    Linking bad({mk("0:L", "1:-")});
    EXPECT_THROW(restrict_forest(s, {bad}), mall_error);
}

TEST(Toggled, FigureOnePairTogglesTheWith) {
    LinkingSet t = fig1_net();
    auto w = toggled(t.sequent, {lambda_top(), lambda_bot()});
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w.begin()->to_string(), "1:-");
}

TEST(Toggled, SingletonTogglesNothing) {
    LinkingSet t = fig1_net();
    EXPECT_TRUE(toggled(t.sequent, {lambda_top()}).empty());
}

TEST(Toggled, ParallelWithsCanToggleTwo) {
    // with(with-net) on  P & P, ~P & ~P : the pair differing at both
    // with-roots toggles both
    Sequent s = parse_sequent("P & P, ~P & ~P");
    Linking ll({mk("0:L", "1:L")}), rr({mk("0:R", "1:R")});
    auto w = toggled(s, {ll, rr});
    EXPECT_EQ(w.size(), 2u);
}

TEST(Depends, FigureOneLinkDependsOnWith) {
    LinkingSet t = fig1_net();
    EXPECT_TRUE(depends(t.sequent, mk("0:LR", "1:L"), OccAddr::parse("1:-"), t.linkings));
    EXPECT_TRUE(depends(t.sequent, mk("0:LL", "1:RL"), OccAddr::parse("1:-"), t.linkings));
}

TEST(Depends, SingleLinkingNetHasNoDependency) {
    LinkingSet t = translate(fixtures::intro_example1_left());
    for (const Link& l : t.linkings[0].links)
        for (auto& [addr, f] : vertices(t.sequent)) {
            if (f.conn() != Conn::With) continue;
            EXPECT_FALSE(depends(t.sequent, l, addr, t.linkings));
        }
}

TEST(Graph, FigureOneConnectedWithJumpIntoWith) {
    JumpGraph g = build_graph(fig1_net());
    EXPECT_TRUE(g.connected());
    int jumps_into_with = 0;
    for (auto& [a, b, k] : g.edges)
        if (k == EdgeKind::Jump && (a == OccAddr::parse("1:-") || b == OccAddr::parse("1:-")))
            ++jumps_into_with;
    EXPECT_GE(jumps_into_with, 1);
}

TEST(Graph, MixNetHasTwoComponents) {
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    Proof m = build::mix(s, {2, 3}, build::ax("P"), build::ax("Q"));
    JumpGraph g = build_graph(translate(m));
    EXPECT_FALSE(g.connected());
    EXPECT_FALSE(g.path_between(OccAddr::parse("0:-"), OccAddr::parse("2:-")));
    EXPECT_TRUE(g.path_between(OccAddr::parse("0:-"), OccAddr::parse("1:-")));
}

TEST(Graph, AxNetIsALinkedPair) {
    JumpGraph g = build_graph(translate(build::ax("P")));
    EXPECT_EQ(g.forest.kept.size(), 2u);
    ASSERT_EQ(g.edges.size(), 1u);
    EXPECT_EQ(std::get<2>(g.edges[0]), EdgeKind::Link);
    EXPECT_TRUE(g.connected());
}

TEST(Properties, HoldOnFixtureNets) {
    for (const Proof& p : {fixtures::figure_one(), fixtures::intro_example1_left(),
                           fixtures::intro_example2_right(), fixtures::nested_with()}) {
        NetPropertyReport rep = check_net_properties(translate(p));
        EXPECT_TRUE(rep.all()) << (rep.witnesses.empty() ? "" : rep.witnesses[0]);
    }
}

TEST(Properties, ToggleFreePairFailsP1) {
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    LinkingSet bogus(s, {Linking({mk("0:-", "1:-")}), Linking({mk("2:-", "3:-")})});
    NetPropertyReport rep = check_net_properties(bogus);
    EXPECT_FALSE(rep.p1_toggle);
}

TEST(Properties, SingletonVacuousButP2CanFail) {
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    LinkingSet partial(s, {Linking({mk("0:-", "1:-")})});
    NetPropertyReport rep = check_net_properties(partial);
    EXPECT_TRUE(rep.p1_toggle);
    EXPECT_TRUE(rep.p3_root_with);
    EXPECT_FALSE(rep.p2_roots);
}

TEST(Separates, ParrAndWithAlways) {
    LinkingSet t = fig1_net();
    EXPECT_TRUE(separates(t.sequent, 0, t));  // the parr root
    EXPECT_TRUE(separates(t.sequent, 1, t));  // the with root
}

TEST(Separates, PlusWithAbsentSide) {
    Proof p = build::plus1(parse_sequent("~P, P + Q"), 1, build::ax(Formula::atom("P", true), Formula::atom("P")));
    LinkingSet t = translate(p);
    EXPECT_TRUE(separates(t.sequent, 1, t));
}

TEST(Separates, TensorAcyclicVsCyclic) {
    Proof t = build::tensor(parse_sequent("P * Q, ~P, ~Q"), 0, {2},
                            build::ax("P"),
                            build::ax(Formula::atom("Q"), Formula::atom("Q", true)));
    LinkingSet a = translate(t);
    EXPECT_TRUE(separates(a.sequent, 0, a));

    // P * Q, ~P | ~Q : the single linking closes a cycle through the tensor
    Proof inner = build::tensor(parse_sequent("P * Q, ~P, ~Q"), 0, {2},
                                build::ax("P"),
                                build::ax(Formula::atom("Q"), Formula::atom("Q", true)));
    Proof q = build::parr(parse_sequent("P * Q, ~P | ~Q"), 1, inner);
    LinkingSet b = translate(q);
    EXPECT_FALSE(separates(b.sequent, 0, b));
    EXPECT_TRUE(separates(b.sequent, 1, b));
}

TEST(Separates, LastGeneratedRootSeparatesOnFixtures) {
    for (const Proof& p : {fixtures::figure_one(), fixtures::intro_example1_left(),
                           fixtures::intro_example1_right(), fixtures::intro_example2_left(),
                           fixtures::intro_example2_right(), fixtures::nested_with()}) {
        if (p.rule().principal < 0) continue;
        LinkingSet t = translate(p);
        EXPECT_TRUE(separates(t.sequent, p.rule().principal, t)) << p.serialize();
    }
}

TEST(Dot, DeterministicAndStyled) {
    std::string d1 = to_dot(build_graph(fig1_net()));
    std::string d2 = to_dot(build_graph(fig1_net()));
    EXPECT_EQ(d1, d2);
    EXPECT_NE(d1.find("style=dashed"), std::string::npos);
    EXPECT_NE(d1.find("style=dotted"), std::string::npos);
    EXPECT_NE(d1.find("\"0:-\" -- \"0:L\""), std::string::npos);
}
