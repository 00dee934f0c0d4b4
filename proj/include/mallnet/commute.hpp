#pragma once

// Rule commutations as executable moves.
//
// A move names a node of the proof and a target: either a conclusion root
// that the rule(s) immediately above the node generate (the move makes it
// generated last), or, for mix and cut, which yield no conclusion
// occurrence, the premise whose topmost rule is hoisted.  Applying a move
// transposes the bottom two rule levels of the subproof, preserving the
// subproofs immediately above, duplicating or identifying them where the
// with-rule demands it.
//
// The transposition works on tokens: every root of an intermediate sequent
// is either a conclusion root, a subformula of one of the two principal
// formulas involved, or a side of one of the two cut formulas involved.
// All index bookkeeping reduces to locating tokens in recomputed premises.
//
// When a mix is the lower rule and the hoisted rule splits its context,
// the non-participating premise may join either hypothesis of the hoisted
// rule; such moves carry an explicit join side and come in two variants.

#include <array>

#include "proof.hpp"

namespace mallnet {

// ---------------------------------------------------------------------------
// Root permutation (re-addressing a proof after reordering its conclusion)

inline Proof permute_roots(const Proof& p, const std::vector<int>& perm) {
    const Sequent& c = p.conclusion();
    const int n = c.size();
    bool identity = true;
    for (int i = 0; i < n; ++i)
        if (perm[static_cast<size_t>(i)] != i) identity = false;
    if (identity) return p;

    std::vector<Formula> roots;
    RuleApp app = p.rule();
    app.tags.resize(static_cast<size_t>(n));
    std::vector<int> inv(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int old = perm[static_cast<size_t>(i)];
        roots.push_back(c.root(old));
        app.tags[static_cast<size_t>(i)] = p.rule().tags[static_cast<size_t>(old)];
        inv[static_cast<size_t>(old)] = i;
    }
    if (p.rule().principal >= 0) app.principal = inv[static_cast<size_t>(p.rule().principal)];
    Sequent nc{std::move(roots)};

    // mix orientation may flip under the permutation
    bool swap_prems = false;
    if (app.rule == Rule::Mix && app.tags[0] == RootTag::Right) {
        for (auto& t : app.tags) t = t == RootTag::Left ? RootTag::Right : RootTag::Left;
        swap_prems = true;
    }

    std::vector<Proof> prems;
    for (int k = 0; k < premise_count(app.rule); ++k) {
        int old_k = swap_prems ? 1 - k : k;
        auto [nseq, norig] = premise_of(nc, app, k);
        (void)nseq;
        auto [oseq, oorig] = premise_of(c, p.rule(), old_k);
        (void)oseq;
        // map each new premise root to the old premise root with the same origin
        std::vector<int> sub_perm;
        for (const RootOrigin& no : norig) {
            int found = -1;
            for (size_t b = 0; b < oorig.size(); ++b) {
                const RootOrigin& oo = oorig[b];
                if (no.kind != oo.kind) continue;
                if (no.kind == RootOrigin::Ctx) {
                    if (perm[static_cast<size_t>(no.concl_root)] == oo.concl_root) {
                        found = static_cast<int>(b);
                        break;
                    }
                } else if (no.side == oo.side) {
                    found = static_cast<int>(b);
                    break;
                }
            }
            if (found < 0) throw mall_error("permute_roots: origin mismatch");
            sub_perm.push_back(found);
        }
        prems.push_back(permute_roots(p.premise(old_k), sub_perm));
    }
    return Proof::make(std::move(nc), std::move(app), std::move(prems));
}

// ---------------------------------------------------------------------------
// Moves

struct Move {
    std::vector<int> pos;  // premise indices from the root to the node
    bool bare = false;     // false: make root `root` generated last; true: hoist a mix/cut
    int root = -1;         // target conclusion root (bare = false)
    int premise = 0;       // which premise carries the hoisted rule (bare = true)
    int join = 0;          // 1|2 when the lower mix's remainder may join either hypothesis

    std::string to_string() const {
        std::string s = "[";
        for (size_t i = 0; i < pos.size(); ++i) {
            if (i) s += ".";
            s += std::to_string(pos[i]);
        }
        s += "] ";
        s += bare ? ("hoist premise " + std::to_string(premise)) : ("generate root " + std::to_string(root));
        if (join) s += " join " + std::to_string(join);
        return s;
    }
    friend bool operator==(const Move& a, const Move& b) {
        return a.pos == b.pos && a.bare == b.bare && a.root == b.root && a.premise == b.premise &&
               a.join == b.join;
    }
};

// Which table family a move instance belongss to.
struct CommId {
    Rule alpha = Rule::Ax;  // the rule hoisted to the bottom
    Rule beta = Rule::Ax;   // the rule pushed up
    bool duplicates = false;
    bool identifies = false;

    std::string to_string() const {
        std::string s = std::string(rule_name(alpha)) + "/" + rule_name(beta);
        if (duplicates) s += " (duplicating)";
        if (identifies) s += " (identifying)";
        return s;
    }
};

// Local commutations neither duplicate nor identify subproofs; the
// non-local families are exactly with over tensor, mix, cut and '#'.
inline bool is_local(const CommId& id) { return !id.duplicates && !id.identifies; }

struct MoveOutcome {
    Proof result;
    CommId id;
};

namespace detail {

enum class Cat : uint8_t { None, Single, Split, Bare, WithCat };

inline Cat cat_of(Rule r) {
    switch (r) {
        case Rule::Parr:
        case Rule::Plus1:
        case Rule::Plus2: return Cat::Single;
        case Rule::Tensor:
        case Rule::StarCut: return Cat::Split;
        case Rule::Mix:
        case Rule::Cut: return Cat::Bare;
        case Rule::With: return Cat::WithCat;
        case Rule::Ax: return Cat::None;
    }
    return Cat::None;
}

struct Token {
    enum Kind : uint8_t { CRoot, ChildA, ChildB, CutA, CutB } kind;
    int idx = -1;
    char side = 0;

    friend bool operator==(const Token& a, const Token& b) {
        return a.kind == b.kind && a.idx == b.idx && a.side == b.side;
    }
    friend bool operator<(const Token& a, const Token& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.idx != b.idx) return a.idx < b.idx;
        return a.side < b.side;
    }
};

inline Token croot(int j) { return Token{Token::CRoot, j, 0}; }

// token list of premise `k` of the node (B = the node's own rule)
inline std::vector<Token> level1_tokens(const std::vector<RootOrigin>& origins) {
    std::vector<Token> out;
    for (const RootOrigin& o : origins) {
        if (o.kind == RootOrigin::Ctx) out.push_back(croot(o.concl_root));
        else if (o.kind == RootOrigin::Child) out.push_back(Token{Token::ChildB, -1, o.side});
        else out.push_back(Token{Token::CutB, -1, o.side});
    }
    return out;
}

// token list of a grandchild (A = the hoisted upper rule)
inline std::vector<Token> level2_tokens(const std::vector<Token>& prem_tokens,
                                        const std::vector<RootOrigin>& origins) {
    std::vector<Token> out;
    for (const RootOrigin& o : origins) {
        if (o.kind == RootOrigin::Ctx) out.push_back(prem_tokens[static_cast<size_t>(o.concl_root)]);
        else if (o.kind == RootOrigin::Child) out.push_back(Token{Token::ChildA, -1, o.side});
        else out.push_back(Token{Token::CutA, -1, o.side});
    }
    return out;
}

inline int find_token(const std::vector<Token>& ts, const Token& t) {
    for (size_t i = 0; i < ts.size(); ++i)
        if (ts[i] == t) return static_cast<int>(i);
    return -1;
}

// Attach `sub` where the slot expects token order `want`; `have` is sub's
// own token order.  Re-addresses when the orders differ.
inline std::optional<Proof> attach(const Proof& sub, const std::vector<Token>& have,
                                   const std::vector<Token>& want) {
    if (have.size() != want.size()) return std::nullopt;
    std::vector<int> perm;
    for (const Token& w : want) {
        int i = find_token(have, w);
        if (i < 0) return std::nullopt;
        perm.push_back(i);
    }
    return permute_roots(sub, perm);
}

}  // namespace detail

// The transposition engine.  `allow_superimpose` mirrors the restricted
// with-rule: when false, moves that would superimpose a cut at a with-rule
// are not applicable.
class MoveEngine {
    bool allow_superimpose_ = true;

    using Token = detail::Token;
    using Cat = detail::Cat;

    // Reject results that superimpose cuts when that is disabled.
    bool with_ok(const Sequent& concl, const RuleApp& app) const {
        if (allow_superimpose_ || app.rule != Rule::With) return true;
        for (int j = 0; j < concl.size(); ++j)
            if (j != app.principal && concl.root(j).is_cut() &&
                app.tags[static_cast<size_t>(j)] == RootTag::Shared)
                return false;
        return true;
    }

    // ---- node-level transposition ------------------------------------

    std::optional<MoveOutcome> transpose(const Proof& node, const Move& m) const {
        const RuleApp& beta = node.rule();
        const Cat bc = detail::cat_of(beta.rule);
        if (bc == Cat::None) return std::nullopt;
        const Sequent& C = node.conclusion();
        const int n = C.size();

        // participating premises
        std::vector<int> parts;
        int rem_idx = -1;
        if (!m.bare) {
            if (m.root < 0 || m.root >= n || m.root == beta.principal) return std::nullopt;
            switch (bc) {
                case Cat::Single: parts = {0}; break;
                case Cat::Split:
                case Cat::Bare: {
                    RootTag t = beta.tags[static_cast<size_t>(m.root)];
                    if (t == RootTag::Left) parts = {0};
                    else if (t == RootTag::Right) parts = {1};
                    else return std::nullopt;
                    rem_idx = 1 - parts[0];
                    break;
                }
                case Cat::WithCat:
                    if (beta.tags[static_cast<size_t>(m.root)] != RootTag::Shared) return std::nullopt;
                    parts = {0, 1};
                    break;
                default: return std::nullopt;
            }
        } else {
            switch (bc) {
                case Cat::Single: parts = {0}; break;
                case Cat::Split:
                case Cat::Bare:
                    if (m.premise != 0 && m.premise != 1) return std::nullopt;
                    parts = {m.premise};
                    rem_idx = 1 - m.premise;
                    break;
                case Cat::WithCat: parts = {0, 1}; break;
                default: return std::nullopt;
            }
        }

        // premise data
        struct PremData {
            Sequent seq;
            std::vector<Token> tokens;
            const Proof* sub = nullptr;
        };
        std::vector<PremData> prem(static_cast<size_t>(premise_count(beta.rule)));
        for (int k = 0; k < premise_count(beta.rule); ++k) {
            auto [ps, porig] = premise_of(C, beta, k);
            prem[static_cast<size_t>(k)] = {std::move(ps), detail::level1_tokens(porig),
                                            &node.premise(k)};
        }

        // the hoisted rule(s)
        Rule arule = Rule::Ax;
        std::vector<const RuleApp*> alpha(parts.size());
        for (size_t pi = 0; pi < parts.size(); ++pi) {
            const Proof& sub = *prem[static_cast<size_t>(parts[pi])].sub;
            const RuleApp& a = sub.rule();
            if (!m.bare) {
                int img = detail::find_token(prem[static_cast<size_t>(parts[pi])].tokens,
                                             detail::croot(m.root));
                if (img < 0 || a.principal != img) return std::nullopt;
                if (detail::cat_of(a.rule) == Cat::Bare || detail::cat_of(a.rule) == Cat::None)
                    return std::nullopt;
            } else {
                if (a.rule != Rule::Mix && a.rule != Rule::Cut) return std::nullopt;
            }
            if (pi == 0) arule = a.rule;
            else if (a.rule != arule) return std::nullopt;
            alpha[pi] = &a;
        }
        if (parts.size() == 2 && arule == Rule::Cut &&
            alpha[0]->cut_formula != alpha[1]->cut_formula)
            return std::nullopt;
        const Cat ac = detail::cat_of(arule);

        // grandchild data per participating premise
        struct GrandData {
            Sequent seq;
            std::vector<Token> tokens;
            const Proof* sub = nullptr;
        };
        std::vector<std::vector<GrandData>> grand(parts.size());
        for (size_t pi = 0; pi < parts.size(); ++pi) {
            int k = parts[pi];
            const Proof& anode = *prem[static_cast<size_t>(k)].sub;
            for (int g = 0; g < premise_count(arule); ++g) {
                auto [gs, gorig] = premise_of(anode.conclusion(), *alpha[pi], g);
                grand[pi].push_back({std::move(gs),
                                     detail::level2_tokens(prem[static_cast<size_t>(k)].tokens, gorig),
                                     &anode.premise(g)});
            }
        }

        // alpha-side assignment of every level-1 token, per participant:
        // 0 = left hypothesis, 1 = right, 2 = shared
        auto alpha_side = [&](size_t pi, const Token& t) -> int {
            int k = parts[pi];
            int idx = detail::find_token(prem[static_cast<size_t>(k)].tokens, t);
            if (idx < 0) return -1;
            if (idx == alpha[pi]->principal) return -2;
            if (detail::cat_of(arule) == Cat::Single) return 2;
            switch (alpha[pi]->tags[static_cast<size_t>(idx)]) {
                case RootTag::Left: return 0;
                case RootTag::Right: return 1;
                case RootTag::Shared: return 2;
                default: return -2;
            }
        };

        // ---- dispatch by beta category -------------------------------

        if (bc == Cat::WithCat) {
            if (ac == Cat::Single) return with_under_single(node, m, parts, prem, alpha, grand);
            if (ac == Cat::WithCat) return with_under_with(node, m, prem, alpha, grand);
            return with_identification(node, m, prem, alpha, grand, alpha_side);
        }
        return simple_transpose(node, m, parts[0], rem_idx, prem, *alpha[0], grand[0], alpha_side);
    }

    // beta in {Single, Split, Bare}; one participating premise d.
    template <typename PremVec, typename GrandVec, typename SideFn>
    std::optional<MoveOutcome> simple_transpose(const Proof& node, const Move& m, int d, int rem_idx,
                                                const PremVec& prem, const RuleApp& alpha,
                                                const GrandVec& grand, const SideFn& alpha_side) const {
        const RuleApp& beta = node.rule();
        const Sequent& C = node.conclusion();
        const int n = C.size();
        const Cat bc = detail::cat_of(beta.rule);
        const Cat ac = detail::cat_of(alpha.rule);

        // beta's own anchor tokens in premise d
        std::vector<Token> anchors;  // ChildB / CutB tokens residing in premise d
        for (const Token& t : prem[static_cast<size_t>(d)].tokens)
            if (t.kind == Token::ChildB || t.kind == Token::CutB) anchors.push_back(t);

        // the alpha hypothesis that will receive the middle rule
        int X = -1;  // 0/1; -1 when alpha is Single or With (no split)
        if (ac == Cat::Split || ac == Cat::Bare) {
            for (const Token& a : anchors) {
                int s = alpha_side(0, a);
                if (s < 0) return std::nullopt;
                if (s == 2) return std::nullopt;  // cannot happen: alpha Split/Bare has no Shared
                if (X < 0) X = s;
                else if (X != s) return std::nullopt;  // parr arguments on both sides
            }
            if (X < 0) {
                // no anchor: beta is mix, the join side is a free parameter
                if (beta.rule != Rule::Mix || (m.join != 1 && m.join != 2)) return std::nullopt;
                X = m.join - 1;
            } else if (m.join != 0) {
                return std::nullopt;  // join parameter is meaningless when forced
            }
        } else if (m.join != 0) {
            return std::nullopt;
        }

        // ---- new bottom rule (alpha at C) ----
        RuleApp nb;
        nb.rule = alpha.rule;
        nb.principal = m.bare ? -1 : m.root;
        if (alpha.rule == Rule::Cut) nb.cut_formula = alpha.cut_formula;
        nb.tags.assign(static_cast<size_t>(n), RootTag::Shared);
        if (!m.bare) nb.tags[static_cast<size_t>(m.root)] = RootTag::Principal;
        if (ac == Cat::Split || ac == Cat::Bare) {
            for (int j = 0; j < n; ++j) {
                if (j == m.root && !m.bare) continue;
                int side;
                if (j == beta.principal) side = X;
                else if (beta.tags[static_cast<size_t>(j)] ==
                         (rem_idx == 0 ? RootTag::Left : RootTag::Right) &&
                         rem_idx >= 0)
                    side = X;  // remainder joins the middle's hypothesis
                else {
                    int s = alpha_side(0, detail::croot(j));
                    if (s < 0 || s == 2) return std::nullopt;
                    side = s;
                }
                nb.tags[static_cast<size_t>(j)] = side == 0 ? RootTag::Left : RootTag::Right;
            }
        } else if (ac == Cat::WithCat) {
            for (int j = 0; j < n; ++j) {
                if (j == m.root || j == beta.principal) continue;
                bool in_d = bc == Cat::Single ||
                            beta.tags[static_cast<size_t>(j)] ==
                                (d == 0 ? RootTag::Left : RootTag::Right);
                if (in_d) {
                    int s = alpha_side(0, detail::croot(j));
                    if (s == -1) return std::nullopt;
                    nb.tags[static_cast<size_t>(j)] =
                        s == 0 ? RootTag::Left : (s == 1 ? RootTag::Right : RootTag::Shared);
                }
                // remainder roots stay Shared: the whole remainder is duplicated
            }
        }
        if (!with_ok(C, nb)) return std::nullopt;

        // ---- build the new premises ----
        std::vector<Proof> new_prems;
        int nb_count = premise_count(nb.rule);
        for (int k = 0; k < nb_count; ++k) {
            auto [nseq, norig] = premise_of(C, nb, k);
            std::vector<Token> ntok;
            for (const RootOrigin& o : norig) {
                if (o.kind == RootOrigin::Ctx) ntok.push_back(detail::croot(o.concl_root));
                else if (o.kind == RootOrigin::Child) ntok.push_back(Token{Token::ChildA, -1, o.side});
                else ntok.push_back(Token{Token::CutA, -1, o.side});
            }
            bool carries_middle = (ac == Cat::Single) || (ac == Cat::WithCat) || (k == X);
            if (!carries_middle) {
                // this premise is a grandchild verbatim
                auto sub = detail::attach(*grand[static_cast<size_t>(k)].sub,
                                          grand[static_cast<size_t>(k)].tokens, ntok);
                if (!sub) return std::nullopt;
                new_prems.push_back(std::move(*sub));
                continue;
            }
            // middle rule: beta applied inside this premise
            RuleApp mid;
            mid.rule = beta.rule;
            mid.principal = -1;
            if (beta.rule == Rule::Cut) mid.cut_formula = beta.cut_formula;
            mid.tags.assign(ntok.size(), RootTag::Shared);
            if (beta.principal >= 0) {
                int sp = detail::find_token(ntok, detail::croot(beta.principal));
                if (sp < 0) return std::nullopt;
                mid.principal = sp;
                mid.tags[static_cast<size_t>(sp)] = RootTag::Principal;
            }
            if (bc == Cat::Split || bc == Cat::Bare) {
                for (size_t i = 0; i < ntok.size(); ++i) {
                    if (static_cast<int>(i) == mid.principal) continue;
                    const Token& t = ntok[i];
                    int orig_side;  // which original beta premise held this token
                    if (t.kind == Token::ChildA || t.kind == Token::CutA) orig_side = d;
                    else if (t.kind == Token::CRoot) {
                        RootTag bt = beta.tags[static_cast<size_t>(t.idx)];
                        orig_side = bt == RootTag::Left ? 0 : 1;
                    } else {
                        return std::nullopt;
                    }
                    mid.tags[i] = orig_side == 0 ? RootTag::Left : RootTag::Right;
                }
            }
            // normalise mix orientation before computing premises
            bool mid_flip = false;
            if (mid.rule == Rule::Mix && !mid.tags.empty() && mid.tags[0] == RootTag::Right) {
                for (auto& t : mid.tags) t = t == RootTag::Left ? RootTag::Right : RootTag::Left;
                mid_flip = true;
            }
            if (!with_ok(Sequent(nseq), mid)) return std::nullopt;

            // middle premises: slot `d` gets the alpha grandchild on side k
            // (or the only grandchild), the other slot the remainder
            std::vector<Proof> mid_prems;
            for (int g = 0; g < premise_count(mid.rule); ++g) {
                int slot = mid_flip ? 1 - g : g;
                auto [mseq, morig] = premise_of(nseq, mid, g);
                (void)mseq;
                std::vector<Token> mtok;
                for (const RootOrigin& o : morig) {
                    if (o.kind == RootOrigin::Ctx) mtok.push_back(ntok[static_cast<size_t>(o.concl_root)]);
                    else if (o.kind == RootOrigin::Child) mtok.push_back(Token{Token::ChildB, -1, o.side});
                    else mtok.push_back(Token{Token::CutB, -1, o.side});
                }
                const Proof* content;
                const std::vector<Token>* content_tok;
                bool slot_is_grand =
                    (premise_count(mid.rule) == 1) || (rem_idx < 0) || (slot == d);
                if (slot_is_grand) {
                    int gidx = (ac == Cat::Single) ? 0 : (ac == Cat::WithCat ? k : X);
                    content = grand[static_cast<size_t>(gidx)].sub;
                    content_tok = &grand[static_cast<size_t>(gidx)].tokens;
                } else {
                    content = prem[static_cast<size_t>(rem_idx)].sub;
                    content_tok = &prem[static_cast<size_t>(rem_idx)].tokens;
                }
                auto sub = detail::attach(*content, *content_tok, mtok);
                if (!sub) return std::nullopt;
                mid_prems.push_back(std::move(*sub));
            }
            new_prems.push_back(Proof::make(Sequent(nseq), mid, std::move(mid_prems)));
        }

        Proof out = Proof::make(C, nb, std::move(new_prems));
        CommId id{nb.rule, beta.rule, ac == Cat::WithCat && rem_idx >= 0, false};
        return MoveOutcome{std::move(out), id};
    }

    // beta = With, alpha Single in both premises.
    template <typename PremVec, typename AlphaVec, typename GrandVec>
    std::optional<MoveOutcome> with_under_single(const Proof& node, const Move& m,
                                                 const std::vector<int>& parts, const PremVec& prem,
                                                 const AlphaVec& alpha, const GrandVec& grand) const {
        (void)parts;
        const RuleApp& beta = node.rule();
        const Sequent& C = node.conclusion();
        if (m.join != 0 || m.bare) return std::nullopt;

        RuleApp nb = build::single(alpha[0]->rule, C, m.root);
        auto [nseq, norig] = premise_of(C, nb, 0);
        std::vector<Token> ntok;
        for (const RootOrigin& o : norig)
            ntok.push_back(o.kind == RootOrigin::Ctx ? detail::croot(o.concl_root)
                                                     : Token{Token::ChildA, -1, o.side});

        RuleApp mid;
        mid.rule = Rule::With;
        mid.tags.assign(ntok.size(), RootTag::Shared);
        int sp = detail::find_token(ntok, detail::croot(beta.principal));
        if (sp < 0) return std::nullopt;
        mid.principal = sp;
        mid.tags[static_cast<size_t>(sp)] = RootTag::Principal;
        for (size_t i = 0; i < ntok.size(); ++i) {
            const Token& t = ntok[i];
            if (t.kind == Token::CRoot && beta.tags[static_cast<size_t>(t.idx)] != RootTag::Principal)
                mid.tags[i] = beta.tags[static_cast<size_t>(t.idx)];
        }
        if (!with_ok(Sequent(nseq), mid)) return std::nullopt;

        std::vector<Proof> mid_prems;
        for (int g = 0; g < 2; ++g) {
            auto [mseq, morig] = premise_of(nseq, mid, g);
            (void)mseq;
            std::vector<Token> mtok;
            for (const RootOrigin& o : morig)
                mtok.push_back(o.kind == RootOrigin::Ctx ? ntok[static_cast<size_t>(o.concl_root)]
                                                         : Token{Token::ChildB, -1, o.side});
            auto sub = detail::attach(*grand[static_cast<size_t>(g)][0].sub,
                                      grand[static_cast<size_t>(g)][0].tokens, mtok);
            if (!sub) return std::nullopt;
            mid_prems.push_back(std::move(*sub));
        }
        (void)prem;
        Proof out = Proof::make(C, nb, {Proof::make(Sequent(nseq), mid, std::move(mid_prems))});
        return MoveOutcome{std::move(out), CommId{nb.rule, Rule::With, false, false}};
    }

    // beta = With, alpha = With in both premises (the with/with family).
    template <typename PremVec, typename AlphaVec, typename GrandVec>
    std::optional<MoveOutcome> with_under_with(const Proof& node, const Move& m, const PremVec& prem,
                                               const AlphaVec& alpha, const GrandVec& grand) const {
        const RuleApp& beta = node.rule();
        const Sequent& C = node.conclusion();
        const int n = C.size();
        if (m.join != 0 || m.bare) return std::nullopt;

        // occurrence set of each conclusion root over the four grandchildren
        // (k = with premise, g = upper-with premise)
        auto occ = [&](int j) {
            std::array<std::array<bool, 2>, 2> o{{{false, false}, {false, false}}};
            for (int k = 0; k < 2; ++k) {
                RootTag bt = beta.tags[static_cast<size_t>(j)];
                if (bt != RootTag::Shared && bt != (k == 0 ? RootTag::Left : RootTag::Right)) continue;
                int idx = detail::find_token(prem[static_cast<size_t>(k)].tokens, detail::croot(j));
                if (idx < 0) continue;
                RootTag at = alpha[static_cast<size_t>(k)]->tags[static_cast<size_t>(idx)];
                if (at == RootTag::Shared || at == RootTag::Left) o[static_cast<size_t>(k)][0] = true;
                if (at == RootTag::Shared || at == RootTag::Right) o[static_cast<size_t>(k)][1] = true;
            }
            return o;
        };

        RuleApp nb;
        nb.rule = Rule::With;
        nb.principal = m.root;
        nb.tags.assign(static_cast<size_t>(n), RootTag::Shared);
        nb.tags[static_cast<size_t>(m.root)] = RootTag::Principal;
        for (int j = 0; j < n; ++j) {
            if (j == m.root || j == beta.principal) continue;  // beta principal: in both columns
            auto o = occ(j);
            bool col0 = o[0][0] || o[1][0], col1 = o[0][1] || o[1][1];
            if (!col0 && !col1) return std::nullopt;
            nb.tags[static_cast<size_t>(j)] =
                col0 && col1 ? RootTag::Shared : (col0 ? RootTag::Left : RootTag::Right);
        }
        if (!with_ok(C, nb)) return std::nullopt;

        std::vector<Proof> new_prems;
        for (int g = 0; g < 2; ++g) {  // column: upper-with side
            auto [nseq, norig] = premise_of(C, nb, g);
            std::vector<Token> ntok;
            for (const RootOrigin& o : norig)
                ntok.push_back(o.kind == RootOrigin::Ctx ? detail::croot(o.concl_root)
                                                         : Token{Token::ChildA, -1, o.side});
            RuleApp mid;
            mid.rule = Rule::With;
            mid.tags.assign(ntok.size(), RootTag::Shared);
            int sp = detail::find_token(ntok, detail::croot(beta.principal));
            if (sp < 0) return std::nullopt;
            mid.principal = sp;
            mid.tags[static_cast<size_t>(sp)] = RootTag::Principal;
            for (size_t i = 0; i < ntok.size(); ++i) {
                const Token& t = ntok[i];
                if (t.kind != Token::CRoot || static_cast<int>(i) == sp) continue;
                auto o = occ(t.idx);
                bool in0 = o[0][static_cast<size_t>(g)], in1 = o[1][static_cast<size_t>(g)];
                if (in0 && in1) mid.tags[i] = RootTag::Shared;
                else if (in0) mid.tags[i] = RootTag::Left;
                else if (in1) mid.tags[i] = RootTag::Right;
                else return std::nullopt;
            }
            if (!with_ok(Sequent(nseq), mid)) return std::nullopt;
            std::vector<Proof> mid_prems;
            for (int k = 0; k < 2; ++k) {
                auto [mseq, morig] = premise_of(nseq, mid, k);
                (void)mseq;
                std::vector<Token> mtok;
                for (const RootOrigin& o : morig)
                    mtok.push_back(o.kind == RootOrigin::Ctx ? ntok[static_cast<size_t>(o.concl_root)]
                                                             : Token{Token::ChildB, -1, o.side});
                auto sub = detail::attach(*grand[static_cast<size_t>(k)][static_cast<size_t>(g)].sub,
                                          grand[static_cast<size_t>(k)][static_cast<size_t>(g)].tokens,
                                          mtok);
                if (!sub) return std::nullopt;
                mid_prems.push_back(std::move(*sub));
            }
            new_prems.push_back(Proof::make(Sequent(nseq), mid, std::move(mid_prems)));
        }
        Proof out = Proof::make(C, nb, std::move(new_prems));
        return MoveOutcome{std::move(out), CommId{Rule::With, Rule::With, false, false}};
    }

    // beta = With, alpha Split/Bare in both premises: identification.
    template <typename PremVec, typename AlphaVec, typename GrandVec, typename SideFn>
    std::optional<MoveOutcome> with_identification(const Proof& node, const Move& m,
                                                   const PremVec& prem, const AlphaVec& alpha,
                                                   const GrandVec& grand,
                                                   const SideFn& alpha_side) const {
        const RuleApp& beta = node.rule();
        const Sequent& C = node.conclusion();
        const int n = C.size();
        if (m.join != 0) return std::nullopt;

        // the hypothesis of each alpha containing the with argument
        int X[2];
        for (int k = 0; k < 2; ++k) {
            Token childb{Token::ChildB, -1, k == 0 ? 'L' : 'R'};
            int s = alpha_side(static_cast<size_t>(k), childb);
            if (s != 0 && s != 1) return std::nullopt;
            X[k] = s;
        }
        // the other hypotheses must carry identical subproofs
        const auto& id0 = grand[0][static_cast<size_t>(1 - X[0])];
        const auto& id1 = grand[1][static_cast<size_t>(1 - X[1])];
        if (id0.tokens != id1.tokens) return std::nullopt;
        if (!(*id0.sub == *id1.sub)) return std::nullopt;

        // new bottom: alpha over C; the identified side keeps its raw side
        RuleApp nb;
        nb.rule = alpha[0]->rule;
        nb.principal = m.bare ? -1 : m.root;
        if (nb.rule == Rule::Cut) nb.cut_formula = alpha[0]->cut_formula;
        nb.tags.assign(static_cast<size_t>(n), RootTag::Shared);
        if (!m.bare) nb.tags[static_cast<size_t>(m.root)] = RootTag::Principal;
        int id_side = 1 - X[0];  // raw side of the identified hypothesis under alpha[0]
        for (int j = 0; j < n; ++j) {
            if (j == m.root && !m.bare) continue;
            int side;
            if (j == beta.principal) side = X[0];
            else {
                bool in_identified = detail::find_token(id0.tokens, detail::croot(j)) >= 0;
                if (in_identified) side = id_side;
                else {
                    // must sit on the with side of whichever premises hold it
                    side = -1;
                    for (int k = 0; k < 2; ++k) {
                        int s = alpha_side(static_cast<size_t>(k), detail::croot(j));
                        if (s < 0) continue;
                        int mapped = (s == X[k]) ? X[0] : 1 - X[0];
                        if (side < 0) side = mapped;
                        else if (side != mapped) return std::nullopt;
                    }
                    if (side < 0) return std::nullopt;
                    if (side == id_side) return std::nullopt;  // missed the identified list
                }
            }
            nb.tags[static_cast<size_t>(j)] = side == 0 ? RootTag::Left : RootTag::Right;
        }

        std::vector<Proof> new_prems;
        for (int k = 0; k < premise_count(nb.rule); ++k) {
            auto [nseq, norig] = premise_of(C, nb, k);
            std::vector<Token> ntok;
            for (const RootOrigin& o : norig) {
                if (o.kind == RootOrigin::Ctx) ntok.push_back(detail::croot(o.concl_root));
                else if (o.kind == RootOrigin::Child) ntok.push_back(Token{Token::ChildA, -1, o.side});
                else ntok.push_back(Token{Token::CutA, -1, o.side});
            }
            if (k == id_side) {
                // identified hypothesis, kept once; its alpha-child token is
                // named relative to premise 0's alpha
                auto sub = detail::attach(*id0.sub, id0.tokens, ntok);
                if (!sub) return std::nullopt;
                new_prems.push_back(std::move(*sub));
                continue;
            }
            RuleApp mid;
            mid.rule = Rule::With;
            mid.tags.assign(ntok.size(), RootTag::Shared);
            int sp = detail::find_token(ntok, detail::croot(beta.principal));
            if (sp < 0) return std::nullopt;
            mid.principal = sp;
            mid.tags[static_cast<size_t>(sp)] = RootTag::Principal;
            for (size_t i = 0; i < ntok.size(); ++i) {
                const Token& t = ntok[i];
                if (t.kind != Token::CRoot || static_cast<int>(i) == sp) continue;
                if (beta.tags[static_cast<size_t>(t.idx)] != RootTag::Principal)
                    mid.tags[i] = beta.tags[static_cast<size_t>(t.idx)];
            }
            if (!with_ok(Sequent(nseq), mid)) return std::nullopt;
            std::vector<Proof> mid_prems;
            for (int g = 0; g < 2; ++g) {
                auto [mseq, morig] = premise_of(nseq, mid, g);
                (void)mseq;
                std::vector<Token> mtok;
                for (const RootOrigin& o : morig)
                    mtok.push_back(o.kind == RootOrigin::Ctx ? ntok[static_cast<size_t>(o.concl_root)]
                                                             : Token{Token::ChildB, -1, o.side});
                // grandchild on the with side of premise g; its tokens use
                // its own alpha's child naming, which matches X[g]
                const auto& gd = grand[static_cast<size_t>(g)][static_cast<size_t>(X[g])];
                auto sub = detail::attach(*gd.sub, gd.tokens, mtok);
                if (!sub) return std::nullopt;
                mid_prems.push_back(std::move(*sub));
            }
            new_prems.push_back(Proof::make(Sequent(nseq), mid, std::move(mid_prems)));
        }
        Proof out = Proof::make(C, nb, std::move(new_prems));
        return MoveOutcome{std::move(out), CommId{nb.rule, Rule::With, false, true}};
    }

public:
    explicit MoveEngine(bool allow_superimpose = true) : allow_superimpose_(allow_superimpose) {}

    // Apply `m` to the node at m.pos, rebuilding the spine below it.
    std::optional<MoveOutcome> try_move(const Proof& p, const Move& m) const {
        return rebuild(p, m, 0);
    }

    // All applicable moves anywhere in the proof, deterministic order.
    std::vector<Move> applicable(const Proof& p) const {
        std::vector<Move> out;
        std::vector<int> pos;
        collect(p, pos, out);
        return out;
    }

    // The move that undoes `m` (found by search at the same position).
    Move inverse_of(const Proof& before, const Move& m, const Proof& after) const {
        const Proof* sub = &after;
        for (int i : m.pos) sub = &sub->premise(i);
        const Proof* orig = &before;
        for (int i : m.pos) orig = &orig->premise(i);
        for (Move cand : node_targets(*sub)) {
            cand.pos = m.pos;
            auto res = transpose(*sub, cand);
            if (res && res->result == *orig) return cand;
        }
        throw mall_error("no inverse move found (engine bug)");
    }

private:
    std::optional<MoveOutcome> rebuild(const Proof& p, const Move& m, size_t depth) const {
        if (depth == m.pos.size()) {
            Move local = m;
            local.pos.clear();
            return transpose(p, local);
        }
        int k = m.pos[depth];
        if (k < 0 || k >= static_cast<int>(p.premises().size())) return std::nullopt;
        auto sub = rebuild(p.premise(k), m, depth + 1);
        if (!sub) return std::nullopt;
        std::vector<Proof> prems = p.premises();
        prems[static_cast<size_t>(k)] = sub->result;
        return MoveOutcome{Proof::make(p.conclusion(), p.rule(), std::move(prems)), sub->id};
    }

    std::vector<Move> node_targets(const Proof& node) const {
        std::vector<Move> out;
        const RuleApp& beta = node.rule();
        if (detail::cat_of(beta.rule) == detail::Cat::None) return out;
        const int n = node.conclusion().size();
        auto alpha_rule_for = [&](int r) -> std::optional<Rule> {
            // rule kind generating root r immediately above, if any
            RootTag t = beta.tags[static_cast<size_t>(r)];
            int d;
            switch (detail::cat_of(beta.rule)) {
                case detail::Cat::Single: d = 0; break;
                case detail::Cat::WithCat: d = 0; break;  // representative
                default: d = t == RootTag::Left ? 0 : (t == RootTag::Right ? 1 : -1);
            }
            if (d < 0) return std::nullopt;
            return node.premise(d).rule().rule;
        };
        for (int r = 0; r < n; ++r) {
            if (r == beta.principal) continue;
            auto ar = alpha_rule_for(r);
            if (!ar) continue;
            bool join_free = beta.rule == Rule::Mix &&
                             (detail::cat_of(*ar) == detail::Cat::Split || *ar == Rule::StarCut);
            if (join_free) {
                out.push_back(Move{{}, false, r, 0, 1});
                out.push_back(Move{{}, false, r, 0, 2});
            } else {
                out.push_back(Move{{}, false, r, 0, 0});
            }
        }
        int prem_n = premise_count(beta.rule);
        if (detail::cat_of(beta.rule) == detail::Cat::WithCat) {
            out.push_back(Move{{}, true, -1, 0, 0});
        } else {
            for (int d = 0; d < prem_n; ++d) {
                Rule ar = node.premise(d).rule().rule;
                if (ar != Rule::Mix && ar != Rule::Cut) continue;
                if (beta.rule == Rule::Mix) {
                    out.push_back(Move{{}, true, -1, d, 1});
                    out.push_back(Move{{}, true, -1, d, 2});
                } else {
                    out.push_back(Move{{}, true, -1, d, 0});
                }
            }
        }
        return out;
    }

    void collect(const Proof& p, std::vector<int>& pos, std::vector<Move>& out) const {
        for (Move m : node_targets(p)) {
            if (transpose(p, m)) {
                m.pos = pos;
                out.push_back(m);
            }
        }
        for (size_t k = 0; k < p.premises().size(); ++k) {
            pos.push_back(static_cast<int>(k));
            collect(p.premises()[k], pos, out);
            pos.pop_back();
        }
    }
};

// Convenience wrappers.
inline std::vector<Move> applicable_moves(const Proof& p, bool allow_superimpose = true) {
    return MoveEngine(allow_superimpose).applicable(p);
}

inline Proof apply_move(const Proof& p, const Move& m, bool allow_superimpose = true) {
    auto res = MoveEngine(allow_superimpose).try_move(p, m);
    if (!res) throw mall_error("move is not applicable: " + m.to_string());
    return res->result;
}

}  // namespace mallnet
