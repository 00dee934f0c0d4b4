#include <gtest/gtest.h>

#include "mallnet/abstract.hpp"
#include "mallnet/commute.hpp"

using namespace mallnet;
using namespace mallnet::abstract;

namespace {
const ARule* rule_named(const std::vector<ARule>& rs, const std::string& n) {
    for (const ARule& r : rs)
        if (r.name == n) return &r;
    return nullptr;
}
}  // namespace

TEST(Substitute, IdentityAndHomomorphic) {
    SExpr e = sexpr({SVar{"G", SVarType::General}}, {fvar("A")});
    Subst id;
    EXPECT_EQ(subst(id, e).to_string(), e.to_string());

    // negated variables substitute through the dual
    Subst s;
    s.f["A"] = fbin(Conn::Tensor, flit("P", false), flit("Q", false));
    FExprP neg = fnegvar("A");
    EXPECT_EQ(fexpr_str(subst(s, neg)), "(~P!|~Q!)");
}

TEST(Substitute, GammaSplitsIntoContextPlusFormula) {
    // instantiating a context variable with "context plus one formula"
    Subst s;
    s.s["G"] = sexpr({SVar{"G2", SVarType::General}}, {fvar("A1")});
    SExpr e = sexpr({SVar{"G", SVarType::General}}, {fvar("B")});
    SExpr r = subst(s, e);
    EXPECT_EQ(r.vars.size(), 1u);
    EXPECT_EQ(r.formulas.size(), 2u);
}

TEST(Collapse, IdempotentAndMergesDuplicates) {
    ARule r;
    r.concl = sexpr({SVar{"G", SVarType::General}}, {});
    r.premises = {sexpr({SVar{"G", SVarType::General}}, {fvar("A")}),
                  sexpr({SVar{"G", SVarType::General}}, {fvar("A")})};
    ARule c = collapse(r);
    EXPECT_EQ(c.premises.size(), 1u);
    ARule cc = collapse(c);
    EXPECT_EQ(cc.premises.size(), 1u);

    ARule distinct;
    distinct.concl = r.concl;
    distinct.premises = {sexpr({}, {fvar("A")}), sexpr({}, {fvar("B")})};
    EXPECT_EQ(collapse(distinct).premises.size(), 2u);
}

TEST(Purity, RulesOfTheSystems) {
    auto rules = system_rules(System::MallStar, true);
    for (const ARule& r : rules) EXPECT_TRUE(is_pure(r)) << r.name;

    // an axiom-like rule with literals in the premise is not pure
    ARule ax;
    ax.concl = sexpr({}, {flit("P", false), flit("P", true)});
    ax.premises = {sexpr({}, {flit("P", false)})};
    EXPECT_FALSE(is_pure(ax));

    // a conclusion repeating a premise variable twice is not pure
    ARule twice;
    twice.premises = {sexpr({SVar{"G", SVarType::General}}, {})};
    twice.concl = sexpr({SVar{"G", SVarType::General}, SVar{"G", SVarType::General}}, {});
    EXPECT_FALSE(is_pure(twice));

    // the MALL cut rule (conclusion omits the cut formula) is not pure
    ARule cut;
    cut.premises = {sexpr({SVar{"G", SVarType::General}}, {fvar("A")}),
                    sexpr({SVar{"D", SVarType::General}}, {fnegvar("A")})};
    cut.concl = sexpr({SVar{"G", SVarType::General}, SVar{"D", SVarType::General}}, {});
    EXPECT_FALSE(is_pure(cut));
}

TEST(Generate, PlusOverTensorHasSymmetricVariants) {
    auto rules = system_rules(System::MallMinus, false);
    auto cs = generate_commutations(*rule_named(rules, "plus1"), *rule_named(rules, "tensor"));
    EXPECT_EQ(cs.size(), 2u);  // the entry and its tensor-side variant
    for (auto& c : cs) EXPECT_TRUE(c.local());
}

TEST(Generate, WithOverTensorDuplicates) {
    auto rules = system_rules(System::MallMinus, false);
    auto cs = generate_commutations(*rule_named(rules, "with"), *rule_named(rules, "tensor"));
    ASSERT_EQ(cs.size(), 2u);
    for (auto& c : cs) {
        EXPECT_FALSE(c.local());  // a subproof repeats on the with-rooted side
        ARule d = collapse(c.rule);
        EXPECT_EQ(d.premises.size(), 3u);
    }
}

TEST(Generate, MallStarWithWithBindsFourteenOmegas) {
    auto rules = system_rules(System::MallStar, false);
    auto cs = generate_commutations(*rule_named(rules, "with"), *rule_named(rules, "with"));
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cutonly_var_count(cs[0]), 14);
    EXPECT_TRUE(cs[0].local());
}

TEST(Generate, MallMinusMatchesTables) {
    auto diff = validate_against_tables(System::MallMinus, false);
    EXPECT_TRUE(diff.empty()) << diff.to_string();
}

TEST(Generate, MallMinusWithMixMatchesTables) {
    auto diff = validate_against_tables(System::MallMinus, true);
    EXPECT_TRUE(diff.empty()) << diff.to_string();
}

TEST(Generate, MallStarMatchesTables) {
    auto diff = validate_against_tables(System::MallStar, true);
    EXPECT_TRUE(diff.empty()) << diff.to_string();
}

TEST(Generate, LocalityAgreesWithMoveClassifier) {
    // the generated pairs repeat a hypothesis exactly in the four
    // with-over-{tensor, mix, starcut} families (and cut projects from
    // starcut), matching the move engine's classification
    for (const Commutation& c : generate_catalogue(System::MallStar, true)) {
        std::string fam = family_key(c);
        bool expect_nonlocal = fam == "tensor/with" || fam == "mix/with" || fam == "starcut/with";
        EXPECT_EQ(!c.local(), expect_nonlocal) << fam;
    }
}

TEST(Generate, DeterministicOutput) {
    auto a = generate_catalogue(System::MallMinus, true);
    auto b = generate_catalogue(System::MallMinus, true);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].canon, b[i].canon);
}
