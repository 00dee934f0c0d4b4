#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "mallnet/proof.hpp"

using namespace mallnet;

TEST(CheckProof, AxOk) {
    Proof p = build::ax("P");
    EXPECT_TRUE(check_proof(p, {System::MallMinus, false, true}).empty());
}

TEST(CheckProof, FigureOneOk) {
    Proof p = fixtures::figure_one();
    EXPECT_TRUE(check_proof(p, {System::MallMinus, false, true}).empty());
    EXPECT_EQ(p.node_count(), 9);
}

TEST(CheckProof, MalformedSplitReported) {
    // A tensor whose premise subproofs do not prove the recomputed premises.
    Sequent concl = parse_sequent("~P, P * Q, ~Q");
    RuleApp app;
    app.rule = Rule::Tensor;
    app.principal = 1;
    app.tags = {RootTag::Left, RootTag::Principal, RootTag::Left};  // ~Q wrongly on the left
    Proof bad = Proof::make_unchecked(concl, app,
                                      {build::ax(Formula::atom("P", true), Formula::atom("P")),
                                       build::ax("Q")});
    auto violations = check_proof(bad, {System::MallMinus, false, true});
    ASSERT_FALSE(violations.empty());
    EXPECT_NE(violations[0].reason.find("premise"), std::string::npos);
}

TEST(CheckProof, MixRequiresFlag) {
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    Proof m = build::mix(s, {2, 3}, build::ax("P"), build::ax("Q"));
    EXPECT_TRUE(check_proof(m, {System::MallMinus, true, true}).empty());
    EXPECT_FALSE(check_proof(m, {System::MallMinus, false, true}).empty());
}

TEST(CheckProof, StarCutOnlyInMallStar) {
    Sequent s = parse_sequent("~P, P # ~P, P", true);
    Proof p = build::starcut(s, 1, {2},
                             build::ax(Formula::atom("P", true), Formula::atom("P")),
                             build::ax(Formula::atom("P", true), Formula::atom("P")));
    EXPECT_TRUE(check_proof(p, {System::MallStar, false, true}).empty());
    EXPECT_FALSE(check_proof(p, {System::Mall, false, true}).empty());
}

TEST(CheckProof, CutOnlyInMall) {
    // cut on P: premise1 = Gamma, P; premise2 = ~P, Delta
    Sequent s = parse_sequent("~P, P");
    Proof p = build::cut(s, Formula::atom("P"), {1},
                         build::ax(Formula::atom("P", true), Formula::atom("P")),
                         build::ax(Formula::atom("P", true), Formula::atom("P")));
    EXPECT_TRUE(check_proof(p, {System::Mall, false, true}).empty());
    EXPECT_FALSE(check_proof(p, {System::MallMinus, false, true}).empty());
}

TEST(Premises, TensorSlots) {
    Sequent s = parse_sequent("A, B * C, D");
    RuleApp app;
    app.rule = Rule::Tensor;
    app.principal = 1;
    app.tags = {RootTag::Left, RootTag::Principal, RootTag::Right};
    EXPECT_EQ(premise_of(s, app, 0).first.to_string(), "A, B");
    EXPECT_EQ(premise_of(s, app, 1).first.to_string(), "C, D");
}

TEST(Premises, CutEnds) {
    Sequent s = parse_sequent("A, B");
    RuleApp app;
    app.rule = Rule::Cut;
    app.cut_formula = Formula::atom("P");
    app.tags = {RootTag::Left, RootTag::Right};
    EXPECT_EQ(premise_of(s, app, 0).first.to_string(), "A, P");
    EXPECT_EQ(premise_of(s, app, 1).first.to_string(), "~P, B");
}

TEST(Tracking, ParrGraftsUnderNewConnective) {
    // parr node Gamma, A, B -> Gamma, A | B: a leaf of A at path p maps to L.p
    Proof fig = fixtures::figure_one();
    ASSERT_EQ(fig.rule().rule, Rule::Parr);
    auto got = track_leaf(fig, 0, LeafAddr{0, "L"});
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(got->to_string(), "0:LL");
}

TEST(Tracking, PlusMapsUnderLeftChild) {
    Proof plus = fixtures::figure_one().premise(0).premise(1).premise(0);
    ASSERT_EQ(plus.rule().rule, Rule::Plus1);
    auto got = track_leaf(plus, 0, LeafAddr{1, ""});
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(got->to_string(), "1:L");
}

TEST(Tracking, BrownAxiomTracksToLeftmostLeaf) {
    // Composing tracking maps down the transcribed derivation sends the
    // first axiom's positive leaf to the leftmost leaf of (P * P) | ~P.
    Proof fig = fixtures::figure_one();
    std::vector<int> path = {0, 0, 0};  // parr -> with -> tensor-left -> brown ax
    LeafAddr addr{0, ""};
    for (size_t k = path.size(); k-- > 0;) {
        const Proof* node = &fig;
        for (size_t j = 0; j < k; ++j) node = &node->premise(path[j]);
        auto m = track_leaf(*node, path[k], addr);
        ASSERT_TRUE(m.has_value());
        addr = *m;
    }
    EXPECT_EQ(addr.to_string(), "0:LL");
}

TEST(Tracking, InjectiveAndComplementIsPrincipal) {
    // Per node: images of premise vertices are injective per premise and
    // jointly cover everything except the vertices the rule generated.
    std::vector<Proof> stack = {fixtures::figure_one(), fixtures::intro_example2_left()};
    while (!stack.empty()) {
        Proof p = stack.back();
        stack.pop_back();
        const Sequent& c = p.conclusion();
        std::set<std::string> covered;
        for (int k = 0; k < premise_count(p.rule().rule); ++k) {
            auto [prem, origins] = premise_of(c, p.rule(), k);
            std::set<std::string> images;
            for (auto& [addr, f] : vertices(prem)) {
                (void)f;
                auto m = track_down(p.rule(), origins, addr);
                if (m) {
                    EXPECT_TRUE(images.insert(m->to_string()).second) << "not injective";
                    covered.insert(m->to_string());
                }
            }
        }
        std::set<std::string> generated;
        for (auto& [addr, f] : vertices(c)) {
            (void)f;
            if (!covered.count(addr.to_string())) generated.insert(addr.to_string());
        }
        std::set<std::string> expect;
        switch (p.rule().rule) {
            case Rule::Ax:
                expect = {"0:-", "1:-"};
                break;
            case Rule::Mix:
            case Rule::Cut:
                break;
            case Rule::Plus1:
            case Rule::Plus2: {
                // the plus vertex plus the absent side's subtree
                OccAddr pr{p.rule().principal, ""};
                char absent = p.rule().rule == Rule::Plus1 ? 'R' : 'L';
                for (auto& [addr, f] : vertices(c)) {
                    (void)f;
                    if (addr == pr) expect.insert(addr.to_string());
                    OccAddr side{pr.root, std::string(1, absent)};
                    if (side.is_prefix_of(addr)) expect.insert(addr.to_string());
                }
                break;
            }
            default:
                expect = {OccAddr{p.rule().principal, ""}.to_string()};
                break;
        }
        EXPECT_EQ(generated, expect) << rule_name(p.rule().rule);
        for (const Proof& q : p.premises()) stack.push_back(q);
    }
}

TEST(Resolutions, WithFreeProofHasExactlyOne) {
    EXPECT_EQ(and_resolutions(fixtures::intro_example1_left()).size(), 1u);
}

TEST(Resolutions, FigureOneHasTwo) {
    auto rs = and_resolutions(fixtures::figure_one());
    ASSERT_EQ(rs.size(), 2u);
    // each resolution keeps exactly two axioms
    EXPECT_EQ(rs[0].second.size(), 2u);
    EXPECT_EQ(rs[1].second.size(), 2u);
}

TEST(Resolutions, NestedWithHasThree) {
    EXPECT_EQ(and_resolutions(fixtures::nested_with()).size(), 3u);
}

TEST(Resolutions, DuplicatingUnderFreshWithDoubles) {
    Proof base = fixtures::intro_example1_left();
    size_t n = and_resolutions(base).size();
    // graft two copies of the proof under a fresh with-rule
    Sequent wc = parse_sequent("(~P) & ~P, P * Q, R + ~Q");
    Proof w = build::with(wc, 0, base, fixtures::intro_example1_left());
    EXPECT_EQ(and_resolutions(w).size(), 2 * n);
}

TEST(Serialize, DistinctProofsDiffer) {
    EXPECT_NE(fixtures::intro_example1_left().serialize(), fixtures::intro_example1_right().serialize());
    EXPECT_EQ(fixtures::figure_one().serialize(), fixtures::figure_one().serialize());
    EXPECT_TRUE(fixtures::figure_one() == fixtures::figure_one());
    EXPECT_FALSE(fixtures::intro_example1_left() == fixtures::intro_example1_right());
}

TEST(Builders, MixNormalisesOrientation) {
    Sequent s = parse_sequent("P, ~P, Q, ~Q");
    Proof a = build::mix(s, {2, 3}, build::ax("P"), build::ax("Q"));
    // building with the complementary split and swapped premises gives the
    // same stored proof
    Proof b = build::mix(s, {0, 1}, build::ax("Q"), build::ax("P"));
    EXPECT_TRUE(a == b);
}
