#pragma once

// The passage between MALL proofs (with the cut rule) and mall-star proofs
// (cuts retained in sequents): projection erases every cut root and turns
// '#'-introductions into cut rules; lifting enumerates all mall-star
// proofs that project to a given MALL proof, choosing at every with-rule
// which cuts of its premises to superimpose and where the surviving cuts
// sit in the conclusion.  Proof-net equivalence of MALL proofs is decided
// through the lifted nets.

#include <unordered_map>

#include "enumerate.hpp"

#include "rewrite.hpp"

namespace mallnet {

// ---------------------------------------------------------------------------
// Projection

inline Proof project(const Proof& p) {
    const Sequent& C = p.conclusion();
    std::vector<Formula> roots;
    std::vector<int> newpos(static_cast<size_t>(C.size()), -1);
    for (int j = 0; j < C.size(); ++j) {
        if (C.root(j).is_cut()) continue;
        newpos[static_cast<size_t>(j)] = static_cast<int>(roots.size());
        roots.push_back(C.root(j));
    }
    const RuleApp& app = p.rule();
    RuleApp out;
    out.rule = app.rule == Rule::StarCut ? Rule::Cut : app.rule;
    out.tags.reserve(roots.size());
    for (int j = 0; j < C.size(); ++j)
        if (newpos[static_cast<size_t>(j)] >= 0) out.tags.push_back(app.tags[static_cast<size_t>(j)]);
    if (app.rule == Rule::StarCut) {
        out.principal = -1;
        out.cut_formula = C.root(app.principal).left();
    } else if (app.principal >= 0) {
        out.principal = newpos[static_cast<size_t>(app.principal)];
    }
    Sequent projC{std::move(roots)};
    std::vector<Proof> prems;
    for (const Proof& q : p.premises()) prems.push_back(project(q));

    if (app.rule == Rule::StarCut) {
        // the '#' layout keeps the cut formula at its root slot, the MALL
        // cut layout moves it to the end of premise 1 and the front of
        // premise 2: re-address the projected premises accordingly
        for (int k = 0; k < 2; ++k) {
            auto lifted_orig = premise_of(C, app, k).second;
            // projected index of each lifted premise root that survives
            std::vector<int> proj_idx(lifted_orig.size(), -1);
            int count = 0;
            for (size_t i = 0; i < lifted_orig.size(); ++i) {
                const RootOrigin& o = lifted_orig[i];
                bool survives = o.kind == RootOrigin::Child ||
                                (o.kind == RootOrigin::Ctx && !C.root(o.concl_root).is_cut());
                if (survives) proj_idx[i] = count++;
            }
            auto target_orig = premise_of(projC, out, k).second;
            std::vector<int> perm;
            for (const RootOrigin& t : target_orig) {
                int found = -1;
                for (size_t i = 0; i < lifted_orig.size(); ++i) {
                    const RootOrigin& o = lifted_orig[i];
                    if (t.kind == RootOrigin::CutSide && o.kind == RootOrigin::Child &&
                        o.side == t.side)
                        found = proj_idx[i];
                    if (t.kind == RootOrigin::Ctx && o.kind == RootOrigin::Ctx &&
                        newpos[static_cast<size_t>(o.concl_root)] == t.concl_root)
                        found = proj_idx[i];
                    if (found >= 0) break;
                }
                if (found < 0) throw mall_error("project: premise root lost");
                perm.push_back(found);
            }
            prems[static_cast<size_t>(k)] = permute_roots(prems[static_cast<size_t>(k)], perm);
        }
    }
    return Proof::make(std::move(projC), std::move(out), std::move(prems));
}

// ---------------------------------------------------------------------------
// Lifting

struct LiftResult {
    std::vector<Proof> proofs;  // deduplicated, deterministic order
    bool truncated = false;
};

namespace detail {

struct LiveCut {
    int id;
    Formula formula;  // the '#' formula
};

struct LiftPlan {
    std::vector<LiftPlan> kids;
    std::vector<std::pair<int, int>> matches;  // with only: merged (left id, right id)
    std::vector<LiveCut> live;                 // live cuts at this node, by id
};

// all partial injective matchings between equal-formula cuts
inline void matchings_rec(const std::vector<LiveCut>& l, const std::vector<LiveCut>& r, size_t li,
                          std::vector<bool>& rused, std::vector<std::pair<int, int>>& cur,
                          std::vector<std::vector<std::pair<int, int>>>& out) {
    if (li == l.size()) {
        out.push_back(cur);
        return;
    }
    matchings_rec(l, r, li + 1, rused, cur, out);  // leave l[li] unmatched
    for (size_t j = 0; j < r.size(); ++j) {
        if (rused[j] || !(l[li].formula == r[j].formula)) continue;
        rused[j] = true;
        cur.emplace_back(l[li].id, r[j].id);
        matchings_rec(l, r, li + 1, rused, cur, out);
        cur.pop_back();
        rused[j] = false;
    }
}

inline void lift_plans(const Proof& p, int& next_id, std::vector<LiftPlan>& out, size_t budget) {
    const Rule rule = p.rule().rule;
    if (p.premises().empty()) {
        out.push_back(LiftPlan{});
        return;
    }
    if (p.premises().size() == 1) {
        std::vector<LiftPlan> sub;
        lift_plans(p.premise(0), next_id, sub, budget);
        for (auto& s : sub) {
            LiftPlan plan;
            plan.live = s.live;
            plan.kids = {std::move(s)};
            out.push_back(std::move(plan));
        }
        return;
    }
    int my_id = -1;
    if (rule == Rule::Cut) my_id = next_id++;
    std::vector<LiftPlan> lhs, rhs;
    lift_plans(p.premise(0), next_id, lhs, budget);
    lift_plans(p.premise(1), next_id, rhs, budget);
    for (const LiftPlan& a : lhs)
        for (const LiftPlan& b : rhs) {
            if (rule == Rule::With) {
                std::vector<std::vector<std::pair<int, int>>> ms;
                std::vector<bool> rused(b.live.size(), false);
                std::vector<std::pair<int, int>> cur;
                matchings_rec(a.live, b.live, 0, rused, cur, ms);
                for (auto& m : ms) {
                    LiftPlan plan;
                    plan.kids = {a, b};
                    plan.matches = m;
                    std::set<int> merged_r;
                    std::map<int, int> merged_l;  // left id -> merged id
                    for (auto& [x, y] : m) {
                        merged_l[x] = std::min(x, y);
                        merged_r.insert(y);
                    }
                    for (const LiveCut& c : a.live) {
                        auto it = merged_l.find(c.id);
                        plan.live.push_back({it == merged_l.end() ? c.id : it->second, c.formula});
                    }
                    for (const LiveCut& c : b.live)
                        if (!merged_r.count(c.id)) plan.live.push_back(c);
                    std::sort(plan.live.begin(), plan.live.end(),
                              [](const LiveCut& x, const LiveCut& y) { return x.id < y.id; });
                    out.push_back(std::move(plan));
                    if (out.size() > budget) return;
                }
            } else {
                LiftPlan plan;
                plan.kids = {a, b};
                plan.live = a.live;
                for (const LiveCut& c : b.live) plan.live.push_back(c);
                if (rule == Rule::Cut) {
                    Formula f = p.rule().cut_formula;
                    plan.live.push_back({my_id, Formula::cut(f, negate(f))});
                }
                std::sort(plan.live.begin(), plan.live.end(),
                          [](const LiveCut& x, const LiveCut& y) { return x.id < y.id; });
                out.push_back(std::move(plan));
            }
            if (out.size() > budget) return;
        }
}

// materialize one plan with a fixed conclusion cut placement
inline Proof lift_build(const Proof& node, const LiftPlan& plan, const Sequent& lifted,
                        const std::map<int, int>& mall_pos, const std::map<int, int>& cut_pos) {
    const RuleApp& app = node.rule();
    RuleApp out;
    out.rule = app.rule == Rule::Cut ? Rule::StarCut : app.rule;
    out.tags.assign(static_cast<size_t>(lifted.size()), RootTag::Shared);

    int star_principal = -1;
    if (app.rule == Rule::Cut) {
        // this cut's live id is the largest id introduced here; recover it:
        // it is the one in plan.live that is absent from both kids
        int my_id = -1;
        for (const LiveCut& c : plan.live) {
            bool in_kid = false;
            for (const LiftPlan& k : plan.kids)
                for (const LiveCut& kc : k.live)
                    if (kc.id == c.id) in_kid = true;
            if (!in_kid) my_id = c.id;
        }
        if (my_id < 0) throw mall_error("lift: cut id lost");
        star_principal = cut_pos.at(my_id);
        out.principal = star_principal;
        out.tags[static_cast<size_t>(star_principal)] = RootTag::Principal;
    } else if (app.principal >= 0) {
        out.principal = mall_pos.at(app.principal);
        out.tags[static_cast<size_t>(out.principal)] = RootTag::Principal;
    }

    // context tags: original mall roots keep their tags
    for (int j = 0; j < node.conclusion().size(); ++j) {
        if (j == app.principal) continue;
        out.tags[static_cast<size_t>(mall_pos.at(j))] = app.tags[static_cast<size_t>(j)];
    }
    // cut roots: by membership of the premise live sets (with: matches shared)
    if (!plan.kids.empty()) {
        auto kid_has = [&](size_t k, int id) {
            for (const LiveCut& c : plan.kids[k].live)
                if (c.id == id) return true;
            return false;
        };
        for (const LiveCut& c : plan.live) {
            int pos = cut_pos.at(c.id);
            if (pos == star_principal) continue;
            bool shared_here = false;
            if (app.rule == Rule::With)
                for (auto& [x, y] : plan.matches)
                    if (std::min(x, y) == c.id) shared_here = true;
            if (node.premises().size() == 1 || shared_here) {
                out.tags[static_cast<size_t>(pos)] = RootTag::Shared;
            } else if (kid_has(0, c.id)) {
                out.tags[static_cast<size_t>(pos)] = RootTag::Left;
            } else if (kid_has(1, c.id)) {
                out.tags[static_cast<size_t>(pos)] = RootTag::Right;
            } else {
                throw mall_error("lift: live cut belongs to no premise");
            }
        }
    }

    // build premises
    std::vector<Proof> prems;
    for (size_t k = 0; k < node.premises().size(); ++k) {
        auto [lifted_prem, lifted_orig] = premise_of(lifted, out, static_cast<int>(k));
        auto orig_orig = premise_of(node.conclusion(), app, static_cast<int>(k)).second;

        // child maps
        std::map<int, int> child_mall, child_cut;
        // invert parent's maps
        std::map<int, int> mall_inv, cut_inv;
        for (auto& [j, pos] : mall_pos) mall_inv[pos] = j;
        for (auto& [id, pos] : cut_pos) cut_inv[pos] = id;

        // which left/right member the shared cut corresponds to in premise k
        std::map<int, int> member;  // merged id -> this premise's id
        if (app.rule == Rule::With)
            for (auto& [x, y] : plan.matches) member[std::min(x, y)] = k == 0 ? x : y;

        for (size_t i = 0; i < lifted_orig.size(); ++i) {
            const RootOrigin& o = lifted_orig[i];
            if (o.kind == RootOrigin::Ctx) {
                auto mi = mall_inv.find(o.concl_root);
                if (mi != mall_inv.end()) {
                    // locate the original premise root with origin Ctx(mi)
                    for (size_t m = 0; m < orig_orig.size(); ++m)
                        if (orig_orig[m].kind == RootOrigin::Ctx &&
                            orig_orig[m].concl_root == mi->second)
                            child_mall[static_cast<int>(m)] = static_cast<int>(i);
                } else {
                    int id = cut_inv.at(o.concl_root);
                    auto mb = member.find(id);
                    child_cut[mb == member.end() ? id : mb->second] = static_cast<int>(i);
                }
            } else if (o.kind == RootOrigin::Child) {
                if (app.rule == Rule::Cut) {
                    // '#' children correspond to the MALL cut formula sides
                    for (size_t m = 0; m < orig_orig.size(); ++m)
                        if (orig_orig[m].kind == RootOrigin::CutSide) {
                            // premise 1 holds side L (the formula), premise 2 side R;
                            // after '#' canonicalisation sides may swap
                            Formula mine = lifted_prem.root(static_cast<int>(i));
                            Formula theirs =
                                premise_of(node.conclusion(), app, static_cast<int>(k))
                                    .first.root(static_cast<int>(m));
                            if (mine == theirs) child_mall[static_cast<int>(m)] = static_cast<int>(i);
                        }
                } else {
                    for (size_t m = 0; m < orig_orig.size(); ++m)
                        if (orig_orig[m].kind == RootOrigin::Child && orig_orig[m].side == o.side)
                            child_mall[static_cast<int>(m)] = static_cast<int>(i);
                }
            }
        }

        const LiftPlan& kid = plan.kids[k];
        prems.push_back(lift_build(node.premise(static_cast<int>(k)), kid, lifted_prem, child_mall,
                                   child_cut));
    }
    return Proof::make(lifted, std::move(out), std::move(prems));
}

}  // namespace detail

// All mall-star proofs projecting to `p`, exhaustively within budget.
inline LiftResult liftings(const Proof& p, size_t budget = 4096) {
    LiftResult out;
    int next_id = 0;
    std::vector<detail::LiftPlan> plans;
    detail::lift_plans(p, next_id, plans, budget);
    if (plans.size() > budget) {
        out.truncated = true;
        plans.resize(budget);
    }

    std::set<std::string> seen;
    for (const detail::LiftPlan& plan : plans) {
        // canonical conclusion: original roots then cuts sorted by formula
        std::vector<detail::LiveCut> cuts = plan.live;
        std::sort(cuts.begin(), cuts.end(), [](const detail::LiveCut& a, const detail::LiveCut& b) {
            if (a.formula != b.formula) return a.formula < b.formula;
            return a.id < b.id;
        });
        std::vector<Formula> roots = p.conclusion().roots();
        int base = static_cast<int>(roots.size());
        for (const auto& c : cuts) roots.push_back(c.formula);
        Sequent lifted{std::move(roots)};

        std::map<int, int> mall_pos;
        for (int j = 0; j < p.conclusion().size(); ++j) mall_pos[j] = j;

        // canonical placement: cuts in sorted order; permuting equal cut
        // roots yields isomorphic liftings, so one representative suffices
        std::map<int, int> cut_pos;
        for (size_t i = 0; i < cuts.size(); ++i) cut_pos[cuts[i].id] = base + static_cast<int>(i);
        Proof lifted_proof = detail::lift_build(p, plan, lifted, mall_pos, cut_pos);
        if (seen.insert(lifted_proof.serialize()).second)
            out.proofs.push_back(std::move(lifted_proof));
        if (out.proofs.size() >= budget) {
            out.truncated = true;
            break;
        }
    }
    return out;
}

// Permutations of the conclusion roots that swap equal cut formulas only.
inline std::vector<std::vector<int>> equal_cut_permutations(const Sequent& seq) {
    std::vector<std::vector<int>> groups;
    std::map<std::string, std::vector<int>> by_formula;
    for (int j = 0; j < seq.size(); ++j)
        if (seq.root(j).is_cut()) by_formula[seq.root(j).to_string()].push_back(j);
    std::vector<std::vector<int>> out;
    std::vector<int> identity(static_cast<size_t>(seq.size()));
    for (int j = 0; j < seq.size(); ++j) identity[static_cast<size_t>(j)] = j;
    out.push_back(identity);
    for (auto& [f, g] : by_formula) {
        (void)f;
        if (g.size() < 2) continue;
        std::vector<std::vector<int>> next;
        std::vector<int> perm = g;
        std::sort(perm.begin(), perm.end());
        do {
            for (const auto& basep : out) {
                std::vector<int> q = basep;
                for (size_t k = 0; k < g.size(); ++k) q[static_cast<size_t>(g[k])] = basep[static_cast<size_t>(perm[k])];
                next.push_back(std::move(q));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        out = std::move(next);
    }
    return out;
}

// Net of a lifted proof, canonicalised over permutations of equal cut
// roots; two liftings share a net (after permuting one of them) exactly
// when their keys agree.
inline std::string canonical_lifted_net_key(const Proof& lifted) {
    std::string best;
    for (const auto& perm : equal_cut_permutations(lifted.conclusion())) {
        // perm: new index -> old index; translate then rename addresses
        std::vector<int> inv(perm.size());
        for (size_t i = 0; i < perm.size(); ++i) inv[static_cast<size_t>(perm[i])] = static_cast<int>(i);
        LinkingSet t = translate(lifted);
        std::vector<Linking> renamed;
        for (const Linking& lk : t.linkings) {
            std::vector<Link> ls;
            for (const Link& l : lk.links)
                ls.emplace_back(LeafAddr{inv[static_cast<size_t>(l.a.root)], l.a.path},
                                LeafAddr{inv[static_cast<size_t>(l.b.root)], l.b.path});
            renamed.push_back(Linking(std::move(ls)));
        }
        std::string key = LinkingSet(lifted.conclusion(), std::move(renamed)).to_string();
        if (best.empty() || key < best) best = key;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Proof-net equivalence for MALL proofs

struct Equivalent {
    Trace trace;
};
struct NotEquivalent {
    std::string detail;
};
struct Unknown {
    std::string reason;
};
using EquivResult = std::variant<Equivalent, NotEquivalent, Unknown>;

struct EquivBudget {
    int max_nodes = 8;
    size_t max_liftings = 4096;
};

// Project a mall-star trace onto the MALL projections of its endpoints.
inline Trace project_trace(const Proof& lifted_start, const Trace& t, const MoveEngine& eng) {
    Trace out;
    Proof cur = lifted_start;
    Proof cur_proj = project(cur);
    for (const Move& m : t.moves) {
        auto res = eng.try_move(cur, m);
        if (!res) throw mall_error("project_trace: replay failed");
        Proof next = res->result;
        Proof next_proj = project(next);
        if (!(next_proj == cur_proj)) {
            bool found = false;
            for (const Move& pm : eng.applicable(cur_proj)) {
                auto pr = eng.try_move(cur_proj, pm);
                if (pr && pr->result == next_proj) {
                    out.push(pm);
                    found = true;
                    break;
                }
            }
            if (!found)
                throw mall_error("project_trace: projected step is not a single commutation");
        }
        cur = next;
        cur_proj = next_proj;
    }
    return out;
}

inline EquivResult decide_equiv_mall(const Proof& a, const Proof& b, const EnumOptions& opt,
                                     const EquivBudget& budget) {
    if (a.conclusion() != b.conclusion())
        throw mall_error("decide_equiv_mall: different conclusions");
    Rewriter rw;
    if (a == b) return Equivalent{Trace{}};

    if (!a.uses_rule(Rule::Cut) && !b.uses_rule(Rule::Cut)) {
        LinkingSet ta = translate(a), tb = translate(b);
        if (!net_eq(ta, tb))
            return NotEquivalent{"nets differ: " + ta.to_string() + " vs " + tb.to_string()};
        return Equivalent{rw.convert(a, b)};
    }

    if (a.node_count() > budget.max_nodes || b.node_count() > budget.max_nodes)
        return Unknown{"input exceeds the enumeration bound"};

    ProofEnumerator en(opt);
    std::vector<Proof> all = en.proofs(a.conclusion(), budget.max_nodes);
    int ia = -1, ib = -1;
    for (size_t i = 0; i < all.size(); ++i) {
        if (all[i] == a) ia = static_cast<int>(i);
        if (all[i] == b) ib = static_cast<int>(i);
    }
    if (ia < 0 || ib < 0) return Unknown{"input not reproduced by the enumerator"};

    // union proofs sharing a lifted net
    std::vector<int> parent(all.size());
    for (size_t i = 0; i < all.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    struct Edge {
        int other;
        Proof lift_self, lift_other;
    };
    std::map<int, std::vector<std::pair<int, Edge>>> adj;  // spanning edges
    std::unordered_map<std::string, std::pair<int, Proof>> net_owner;
    bool truncated = false;
    for (size_t i = 0; i < all.size(); ++i) {
        LiftResult lr = liftings(all[i], budget.max_liftings);
        if (lr.truncated) truncated = true;
        for (const Proof& l : lr.proofs) {
            std::string key = canonical_lifted_net_key(l);
            auto it = net_owner.find(key);
            if (it == net_owner.end()) {
                net_owner.emplace(key, std::make_pair(static_cast<int>(i), l));
            } else if (find(it->second.first) != find(static_cast<int>(i))) {
                parent[static_cast<size_t>(find(static_cast<int>(i)))] = find(it->second.first);
                adj[static_cast<int>(i)].push_back(
                    {it->second.first, {it->second.first, l, it->second.second}});
                adj[it->second.first].push_back(
                    {static_cast<int>(i), {static_cast<int>(i), it->second.second, l}});
            }
        }
    }
    if (find(ia) != find(ib)) {
        if (truncated) return Unknown{"lifting budget exhausted"};
        return NotEquivalent{"no chain of common lifted nets connects the proofs"};
    }

    // path in the spanning structure
    std::map<int, std::pair<int, Edge>> from;
    std::deque<int> todo{ia};
    std::set<int> seen{ia};
    while (!todo.empty()) {
        int cur = todo.front();
        todo.pop_front();
        if (cur == ib) break;
        for (auto& [nxt, e] : adj[cur]) {
            if (!seen.insert(nxt).second) continue;
            from[nxt] = {cur, e};
            todo.push_back(nxt);
        }
    }
    std::vector<std::pair<int, Edge>> path;  // (from, edge to next)
    for (int cur = ib; cur != ia;) {
        auto [prev, e] = from.at(cur);
        path.push_back({prev, e});
        cur = prev;
    }
    std::reverse(path.begin(), path.end());

    Trace total;
    Proof state = a;
    for (auto& [src, e] : path) {
        (void)src;
        // src's lifting e.lift_self shares a net with the next proof's
        // e.lift_other, possibly after permuting equal cut roots: align,
        // convert at the mall-star level, project down
        Proof other = e.lift_other;
        LinkingSet want = translate(e.lift_self);
        bool aligned = false;
        for (const auto& perm : equal_cut_permutations(other.conclusion())) {
            Proof cand = permute_roots(other, perm);
            if (cand.conclusion() == e.lift_self.conclusion() &&
                net_eq(translate(cand), want)) {
                other = cand;
                aligned = true;
                break;
            }
        }
        if (!aligned) throw mall_error("decide_equiv_mall: net alignment failed");
        Trace star = rw.convert(e.lift_self, other);
        Trace mall = project_trace(e.lift_self, star, rw.engine());
        Proof check = replay(state, mall, rw.engine());
        state = check;
        total.append(mall);
    }
    if (!(state == b)) throw mall_error("decide_equiv_mall: assembled trace misses the target");
    return Equivalent{std::move(total)};
}

}  // namespace mallnet
