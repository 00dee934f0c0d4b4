#pragma once

// Exhaustive bounded proof enumeration.  Every valid proof of a goal with
// at most max_nodes rule applications is produced exactly once (proofs are
// stored canonically, so plain equality is proof identity), in a fixed
// deterministic order.  Enumeration prunes on leaf pairability: an axiom's
// dual pair must track down to leaves of the goal, so a goal without any
// dual leaf pair is hopeless, as is a cut-free goal with an undiscardable
// leaf whose dual never occurs.

#include <map>

#include "proof.hpp"

namespace mallnet {

struct EnumOptions {
    SystemCfg cfg;
    int max_cuts = 0;                  // MALL cut rule budget
    std::vector<Formula> cut_pool;     // candidate MALL cut formulas
};

class ProofEnumerator {
    EnumOptions opt_;
    std::map<std::string, std::vector<Proof>> memo_;

    static std::string key(const Sequent& s, int n, int cuts) {
        return s.to_string() + "|" + std::to_string(n) + "|" + std::to_string(cuts);
    }

    // Some atom must occur in both polarities among the goal's leaves.
    static bool has_dual_pair(const Sequent& s) {
        std::set<std::string> pos, neg;
        for (auto& [addr, f] : leaves(s)) {
            (void)addr;
            (f.negated() ? neg : pos).insert(f.atom_name());
            if (pos.count(f.atom_name()) && neg.count(f.atom_name())) return true;
        }
        return false;
    }

    // A leaf with no plus-vertex strictly below it (towards the root) can
    // never be discarded, so its dual must occur somewhere in the sequent.
    // Only valid when no cut rule can smuggle the dual in.
    static bool undiscardable_leaves_pairable(const Sequent& s) {
        std::set<std::string> present;
        for (auto& [addr, f] : leaves(s)) {
            (void)addr;
            present.insert(f.to_string());
        }
        for (int r = 0; r < s.size(); ++r) {
            bool ok = true;
            std::function<void(const Formula&)> walk = [&](const Formula& f) {
                if (f.is_literal()) {
                    if (!present.count(negate(f).to_string())) ok = false;
                    return;
                }
                if (f.conn() == Conn::Plus) return;  // everything underneath is discardable
                walk(f.left());
                walk(f.right());
            };
            walk(s.root(r));
            if (!ok) return false;
        }
        return true;
    }

    void two_premise(const Sequent& goal, const RuleApp& app, int n, int cuts,
                     std::vector<Proof>& out) {
        int self_cut = app.rule == Rule::Cut ? 1 : 0;
        auto [p1, o1] = premise_of(goal, app, 0);
        auto [p2, o2] = premise_of(goal, app, 1);
        (void)o1;
        (void)o2;
        for (int n1 = 1; n1 <= n - 2; ++n1) {
            const auto& lhs = exact(p1, n1, cuts - self_cut);
            if (lhs.empty()) continue;
            const auto& rhs = exact(p2, n - 1 - n1, cuts - self_cut);
            for (const Proof& a : lhs)
                for (const Proof& b : rhs) {
                    if (a.cut_count() + b.cut_count() + self_cut > cuts) continue;
                    out.push_back(Proof::make(goal, app, {a, b}));
                }
        }
    }

    const std::vector<Proof>& exact(const Sequent& goal, int n, int cuts) {
        std::string k = key(goal, n, cuts);
        auto it = memo_.find(k);
        if (it != memo_.end()) return it->second;

        std::vector<Proof> out;
        const int roots = goal.size();
        bool cut_possible = opt_.cfg.system == System::Mall && cuts > 0 && !opt_.cut_pool.empty();
        if (n < 1 || roots == 0 || !has_dual_pair(goal) ||
            (!cut_possible && !undiscardable_leaves_pairable(goal))) {
            return memo_.emplace(k, std::move(out)).first->second;
        }

        if (n == 1) {
            if (roots == 2 && goal.root(0).is_literal() && goal.root(1).is_literal() &&
                goal.root(0).atom_name() == goal.root(1).atom_name() &&
                goal.root(0).negated() != goal.root(1).negated()) {
                RuleApp app;
                app.rule = Rule::Ax;
                app.tags = {RootTag::Shared, RootTag::Shared};
                out.push_back(Proof::make(goal, app));
            }
            return memo_.emplace(k, std::move(out)).first->second;
        }

        for (int r = 0; r < roots; ++r) {
            const Formula& f = goal.root(r);
            switch (f.conn()) {
                case Conn::Atom:
                    break;
                case Conn::Parr: {
                    RuleApp app = build::single(Rule::Parr, goal, r);
                    for (const Proof& a : exact(premise_of(goal, app, 0).first, n - 1, cuts))
                        out.push_back(Proof::make(goal, app, {a}));
                    break;
                }
                case Conn::Plus:
                    for (Rule pr : {Rule::Plus1, Rule::Plus2}) {
                        RuleApp app = build::single(pr, goal, r);
                        for (const Proof& a : exact(premise_of(goal, app, 0).first, n - 1, cuts))
                            out.push_back(Proof::make(goal, app, {a}));
                    }
                    break;
                case Conn::Tensor:
                case Conn::Cut: {
                    if (f.conn() == Conn::Cut && opt_.cfg.system != System::MallStar) break;
                    // every assignment of the other roots to the premises
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
                        two_premise(goal, app, n, cuts, out);
                    }
                    break;
                }
                case Conn::With: {
                    // mall-star cut roots may stay on one side only
                    std::vector<int> cut_roots;
                    if (opt_.cfg.system == System::MallStar)
                        for (int j = 0; j < roots; ++j)
                            if (j != r && goal.root(j).is_cut()) cut_roots.push_back(j);
                    size_t assignments = 1;
                    for (size_t i = 0; i < cut_roots.size(); ++i) assignments *= 3;
                    for (size_t a = 0; a < assignments; ++a) {
                        RuleApp app;
                        app.rule = Rule::With;
                        app.principal = r;
                        app.tags.assign(static_cast<size_t>(roots), RootTag::Shared);
                        app.tags[static_cast<size_t>(r)] = RootTag::Principal;
                        size_t rest = a;
                        bool sep_ok = true;
                        for (int j : cut_roots) {
                            switch (rest % 3) {
                                case 0: break;  // shared
                                case 1: app.tags[static_cast<size_t>(j)] = RootTag::Left; break;
                                case 2: app.tags[static_cast<size_t>(j)] = RootTag::Right; break;
                            }
                            rest /= 3;
                        }
                        if (!opt_.cfg.superimpose_cuts)
                            for (int j : cut_roots)
                                if (app.tags[static_cast<size_t>(j)] == RootTag::Shared) sep_ok = false;
                        if (!sep_ok) continue;
                        two_premise(goal, app, n, cuts, out);
                    }
                    break;
                }
            }
        }

        if (opt_.cfg.mix && roots >= 2) {
            // canonical orientation: root 0 on the left
            for (uint32_t mask = 1; mask < (1u << (roots - 1)); ++mask) {
                RuleApp app;
                app.rule = Rule::Mix;
                app.tags.assign(static_cast<size_t>(roots), RootTag::Left);
                for (int j = 1; j < roots; ++j)
                    if (mask & (1u << (j - 1))) app.tags[static_cast<size_t>(j)] = RootTag::Right;
                two_premise(goal, app, n, cuts, out);
            }
        }

        if (cut_possible) {
            for (const Formula& a : opt_.cut_pool) {
                for (uint32_t mask = 0; mask < (1u << roots); ++mask) {
                    RuleApp app;
                    app.rule = Rule::Cut;
                    app.cut_formula = a;
                    app.tags.assign(static_cast<size_t>(roots), RootTag::Left);
                    for (int j = 0; j < roots; ++j)
                        if (mask & (1u << j)) app.tags[static_cast<size_t>(j)] = RootTag::Right;
                    two_premise(goal, app, n, cuts, out);
                }
            }
        }
        return memo_.emplace(k, std::move(out)).first->second;
    }

public:
    explicit ProofEnumerator(EnumOptions opt) : opt_(std::move(opt)) {
        // canonical orientation for pool formulas, deduplicated
        std::vector<Formula> pool;
        for (const Formula& f : opt_.cut_pool) {
            Formula n = negate(f);
            pool.push_back(n < f ? n : f);
        }
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
        opt_.cut_pool = std::move(pool);
    }

    const EnumOptions& options() const { return opt_; }

    std::vector<Proof> proofs(const Sequent& goal, int max_nodes) {
        std::vector<Proof> out;
        for (int n = 1; n <= max_nodes; ++n) {
            const auto& v = exact(goal, n, opt_.max_cuts);
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }

    size_t count(const Sequent& goal, int max_nodes) {
        size_t c = 0;
        for (int n = 1; n <= max_nodes; ++n) c += exact(goal, n, opt_.max_cuts).size();
        return c;
    }
};

inline std::vector<Proof> enumerate_proofs(const Sequent& goal, const EnumOptions& opt, int max_nodes) {
    ProofEnumerator e(opt);
    return e.proofs(goal, max_nodes);
}

}  // namespace mallnet
