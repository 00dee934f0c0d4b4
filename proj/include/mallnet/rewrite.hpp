#pragma once

// The constructive conversion algorithms: force a given tensor/cut split,
// separating formula, or mix partition into the last rule of a proof by
// rule commutations; convert two proofs with the same net into each other;
// reconstruct a proof from a linking set.  The recursions follow the
// simultaneous induction that proves them correct; the small terminal
// rearrangements ("a few simple rule commutations") are found by a bounded
// breadth-first search over shallow moves against an explicit goal.

#include <deque>
#include <functional>
#include <unordered_set>
#include <variant>

#include "commute.hpp"
#include "net.hpp"
#include "netgraph.hpp"

namespace mallnet {

struct Trace {
    std::vector<Move> moves;

    void append(const Trace& t) { moves.insert(moves.end(), t.moves.begin(), t.moves.end()); }
    void push(Move m) { moves.push_back(std::move(m)); }
    // re-root every move below premise index k
    void prefix(int k) {
        for (Move& m : moves) m.pos.insert(m.pos.begin(), k);
    }
    size_t size() const { return moves.size(); }
};

inline Proof replay(const Proof& start, const Trace& t, const MoveEngine& eng) {
    Proof cur = start;
    for (const Move& m : t.moves) {
        auto res = eng.try_move(cur, m);
        if (!res) throw mall_error("trace replay failed at " + m.to_string());
        cur = res->result;
    }
    return cur;
}

// Reverse a trace: replay it, inverting each step.
inline Trace reversed(const Proof& start, const Trace& t, const MoveEngine& eng) {
    std::vector<Proof> states{start};
    for (const Move& m : t.moves) {
        auto res = eng.try_move(states.back(), m);
        if (!res) throw mall_error("trace replay failed while reversing");
        states.push_back(res->result);
    }
    Trace out;
    for (size_t i = t.moves.size(); i-- > 0;)
        out.push(eng.inverse_of(states[i], t.moves[i], states[i + 1]));
    return out;
}

class rewrite_error : public mall_error {
public:
    using mall_error::mall_error;
};

namespace detail {

// Bounded breadth-first search from `start` to the first proof satisfying
// `goal`, exploring moves at positions of depth <= pos_depth.  Used only
// for the bounded terminal rearrangements of the conversion lemmas.
template <typename GoalFn>
inline std::optional<Trace> bfs_to(const Proof& start, const GoalFn& goal, const MoveEngine& eng,
                                   size_t pos_depth = 3, size_t max_states = 200000) {
    if (goal(start)) return Trace{};
    struct State {
        Proof proof;
        int parent;
        Move move;
    };
    std::vector<State> states{{start, -1, Move{}}};
    std::unordered_set<std::string> seen{start.serialize()};
    std::deque<int> todo{0};
    while (!todo.empty() && states.size() < max_states) {
        int cur = todo.front();
        todo.pop_front();
        Proof p = states[static_cast<size_t>(cur)].proof;
        for (const Move& m : eng.applicable(p)) {
            if (m.pos.size() > pos_depth) continue;
            auto res = eng.try_move(p, m);
            if (!res) continue;
            if (!seen.insert(res->result.serialize()).second) continue;
            states.push_back({res->result, cur, m});
            int idx = static_cast<int>(states.size()) - 1;
            if (goal(res->result)) {
                Trace t;
                std::vector<Move> rev;
                for (int i = idx; i > 0; i = states[static_cast<size_t>(i)].parent)
                    rev.push_back(states[static_cast<size_t>(i)].move);
                for (size_t i = rev.size(); i-- > 0;) t.push(rev[i]);
                return t;
            }
            todo.push_back(idx);
        }
    }
    return std::nullopt;
}

// conclusion-root partition carried into a premise
inline std::vector<RootTag> premise_partition(const Sequent& concl, const RuleApp& app, int which,
                                              const std::vector<RootTag>& part, int principal_side) {
    auto [prem, origins] = premise_of(concl, app, which);
    (void)prem;
    std::vector<RootTag> out;
    for (const RootOrigin& o : origins) {
        if (o.kind == RootOrigin::Ctx) out.push_back(part[static_cast<size_t>(o.concl_root)]);
        else out.push_back(part[static_cast<size_t>(principal_side)]);
    }
    return out;
}

inline bool tags_are(const RuleApp& app, Rule rule, int principal, const std::vector<RootTag>& part) {
    if (app.rule != rule) return false;
    if (app.principal != principal) return false;
    for (size_t j = 0; j < app.tags.size(); ++j) {
        if (static_cast<int>(j) == principal) continue;
        if (app.tags[j] != part[j]) return false;
    }
    return true;
}

inline int image_in_premise(const Sequent& concl, const RuleApp& app, int which, int root) {
    auto origins = premise_of(concl, app, which).second;
    for (size_t i = 0; i < origins.size(); ++i)
        if (origins[i].kind == RootOrigin::Ctx && origins[i].concl_root == root)
            return static_cast<int>(i);
    return -1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lemma algorithms

class Rewriter {
    MoveEngine eng_;

    // replace premise k of p and record nothing (premise conclusions match)
    static Proof with_premise(const Proof& p, int k, Proof sub) {
        std::vector<Proof> prems = p.premises();
        prems[static_cast<size_t>(k)] = std::move(sub);
        return Proof::make(p.conclusion(), p.rule(), std::move(prems));
    }

    std::pair<Proof, Trace> finish_with_goal(const Proof& p, Trace t,
                                             const std::function<bool(const Proof&)>& goal,
                                             const char* what) const {
        auto extra = detail::bfs_to(p, goal, eng_);
        if (!extra) throw rewrite_error(std::string("terminal rearrangement not found for ") + what);
        Proof out = replay(p, *extra, eng_);
        t.append(*extra);
        return {std::move(out), std::move(t)};
    }

public:
    explicit Rewriter(bool allow_superimpose = true) : eng_(allow_superimpose) {}

    const MoveEngine& engine() const { return eng_; }

    // Convert p so that its last rule is the tensor/cut rule on root r with
    // the given context partition (Left/Right per root, r's entry ignored).
    std::pair<Proof, Trace> make_last_split(const Proof& p, int r, std::vector<RootTag> part) const {
        const Sequent& C = p.conclusion();
        const Formula& f = C.root(r);
        Rule target = f.conn() == Conn::Tensor ? Rule::Tensor : Rule::StarCut;
        if (f.conn() != Conn::Tensor && f.conn() != Conn::Cut)
            throw rewrite_error("make_last_split: root is not a tensor or cut");
        part[static_cast<size_t>(r)] = RootTag::Principal;

        if (detail::tags_are(p.rule(), target, r, part)) return {p, Trace{}};

        auto goal = [&](const Proof& q) { return detail::tags_are(q.rule(), target, r, part); };
        const RuleApp& app = p.rule();
        switch (app.rule) {
            case Rule::Ax:
                throw rewrite_error("make_last_split: axiom cannot be rearranged");
            case Rule::Parr:
            case Rule::Plus1:
            case Rule::Plus2: {
                auto sub_part = detail::premise_partition(C, app, 0, part, app.principal);
                int r0 = detail::image_in_premise(C, app, 0, r);
                auto [q, t] = make_last_split(p.premise(0), r0, sub_part);
                Trace total = t;
                total.prefix(0);
                Proof cur = with_premise(p, 0, q);
                return finish_with_goal(cur, std::move(total), goal, "split under a unary rule");
            }
            case Rule::Tensor:
            case Rule::StarCut: {
                if (app.principal == r) {
                    // same split rule, wrong partition: align each premise
                    // with a mix and reassemble; the split children stay on
                    // their own sides of the target partition
                    Trace total;
                    Proof cur = p;
                    for (int k = 0; k < 2; ++k) {
                        std::vector<RootTag> partk = part;
                        partk[static_cast<size_t>(r)] = k == 0 ? RootTag::Left : RootTag::Right;
                        auto sub_part = detail::premise_partition(C, app, k, partk, r);
                        bool left_empty = true, right_empty = true;
                        for (RootTag t : sub_part)
                            (t == RootTag::Left ? left_empty : right_empty) = false;
                        if (left_empty || right_empty) continue;
                        auto [q, t] = make_last_mix(cur.premise(k), sub_part);
                        t.prefix(k);
                        total.append(t);
                        cur = with_premise(cur, k, q);
                    }
                    return finish_with_goal(cur, std::move(total), goal, "repartitioning a split");
                }
                int d = app.tags[static_cast<size_t>(r)] == RootTag::Left ? 0 : 1;
                Trace total;
                Proof cur = p;
                {
                    auto sub_part = detail::premise_partition(C, app, d, part, app.principal);
                    int rd = detail::image_in_premise(C, app, d, r);
                    auto [q, t] = make_last_split(cur.premise(d), rd, sub_part);
                    t.prefix(d);
                    total.append(t);
                    cur = with_premise(cur, d, q);
                }
                {
                    int o = 1 - d;
                    auto sub_part = detail::premise_partition(C, app, o, part, app.principal);
                    bool left_empty = true, right_empty = true;
                    for (RootTag t : sub_part)
                        (t == RootTag::Left ? left_empty : right_empty) = false;
                    if (!left_empty && !right_empty) {
                        auto [q, t] = make_last_mix(cur.premise(o), sub_part);
                        t.prefix(o);
                        total.append(t);
                        cur = with_premise(cur, o, q);
                    }
                }
                return finish_with_goal(cur, std::move(total), goal, "split under a split rule");
            }
            case Rule::Mix: {
                int rd = detail::image_in_premise(C, app, 0, r);
                int d = rd >= 0 ? 0 : 1;
                Trace total;
                Proof cur = p;
                {
                    auto sub_part = detail::premise_partition(C, app, d, part, r);
                    int ri = detail::image_in_premise(C, app, d, r);
                    auto [q, t] = make_last_split(cur.premise(d), ri, sub_part);
                    t.prefix(d);
                    total.append(t);
                    cur = with_premise(cur, d, q);
                }
                {
                    int o = 1 - d;
                    auto sub_part = detail::premise_partition(C, app, o, part, r);
                    bool left_empty = true, right_empty = true;
                    for (RootTag t : sub_part)
                        (t == RootTag::Left ? left_empty : right_empty) = false;
                    if (!left_empty && !right_empty) {
                        auto [q, t] = make_last_mix(cur.premise(o), sub_part);
                        t.prefix(o);
                        total.append(t);
                        cur = with_premise(cur, o, q);
                    }
                }
                return finish_with_goal(cur, std::move(total), goal, "split under a mix");
            }
            case Rule::With: {
                // premise-only cuts must side with the with-formula
                for (int j = 0; j < C.size(); ++j) {
                    RootTag t = app.tags[static_cast<size_t>(j)];
                    if ((t == RootTag::Left || t == RootTag::Right) &&
                        part[static_cast<size_t>(j)] != part[static_cast<size_t>(app.principal)])
                        throw rewrite_error("make_last_split: a one-premise cut sits on the far side");
                }
                Trace total;
                Proof cur = p;
                for (int k = 0; k < 2; ++k) {
                    auto sub_part = detail::premise_partition(C, app, k, part, app.principal);
                    int ri = detail::image_in_premise(C, app, k, r);
                    auto [q, t] = make_last_split(cur.premise(k), ri, sub_part);
                    t.prefix(k);
                    total.append(t);
                    cur = with_premise(cur, k, q);
                }
                // align the split hypotheses away from the with-formula
                int far = part[static_cast<size_t>(app.principal)] == RootTag::Left ? 1 : 0;
                Proof q1 = cur.premise(0), q2 = cur.premise(1);
                Trace conv = convert(q2.premise(far), q1.premise(far));
                conv.prefix(far);
                conv.prefix(1);
                total.append(conv);
                Proof q2b = with_premise(q2, far, q1.premise(far));
                cur = with_premise(cur, 1, q2b);
                return finish_with_goal(cur, std::move(total), goal, "split under a with");
            }
            case Rule::Cut:
                throw rewrite_error("make_last_split: MALL cut proofs have no net");
        }
        throw rewrite_error("make_last_split: unreachable");
    }

    // Convert p so that its last rule is a mix with the given partition.
    std::pair<Proof, Trace> make_last_mix(const Proof& p, std::vector<RootTag> part) const {
        const Sequent& C = p.conclusion();
        auto matches = [&](const RuleApp& app) {
            if (app.rule != Rule::Mix) return false;
            bool same = true, flipped = true;
            for (size_t j = 0; j < app.tags.size(); ++j) {
                if (app.tags[j] != part[j]) same = false;
                if (app.tags[j] == part[j]) flipped = false;
            }
            return same || flipped;
        };
        if (matches(p.rule())) return {p, Trace{}};
        auto goal = [&](const Proof& q) { return matches(q.rule()); };

        const RuleApp& app = p.rule();
        switch (app.rule) {
            case Rule::Ax:
                throw rewrite_error("make_last_mix: axiom cannot be split");
            case Rule::Parr:
            case Rule::Plus1:
            case Rule::Plus2: {
                auto sub_part = detail::premise_partition(C, app, 0, part, app.principal);
                auto [q, t] = make_last_mix(p.premise(0), sub_part);
                Trace total = t;
                total.prefix(0);
                Proof cur = with_premise(p, 0, q);
                return finish_with_goal(cur, std::move(total), goal, "mix under a unary rule");
            }
            case Rule::Tensor:
            case Rule::StarCut:
            case Rule::Mix: {
                Trace total;
                Proof cur = p;
                for (int k = 0; k < 2; ++k) {
                    // the split formula's children side with its part entry;
                    // a mix has no children to worry about
                    auto sub_part = detail::premise_partition(
                        C, app, k, part, app.principal >= 0 ? app.principal : 0);
                    bool left_empty = true, right_empty = true;
                    for (RootTag t : sub_part)
                        (t == RootTag::Left ? left_empty : right_empty) = false;
                    if (left_empty || right_empty) continue;
                    auto [q, t] = make_last_mix(cur.premise(k), sub_part);
                    t.prefix(k);
                    total.append(t);
                    cur = with_premise(cur, k, q);
                }
                return finish_with_goal(cur, std::move(total), goal, "mix under a binary rule");
            }
            case Rule::With: {
                for (int j = 0; j < C.size(); ++j) {
                    RootTag t = app.tags[static_cast<size_t>(j)];
                    if ((t == RootTag::Left || t == RootTag::Right) &&
                        part[static_cast<size_t>(j)] != part[static_cast<size_t>(app.principal)])
                        throw rewrite_error("make_last_mix: a one-premise cut sits on the far side");
                }
                Trace total;
                Proof cur = p;
                for (int k = 0; k < 2; ++k) {
                    auto sub_part = detail::premise_partition(C, app, k, part, app.principal);
                    auto [q, t] = make_last_mix(cur.premise(k), sub_part);
                    t.prefix(k);
                    total.append(t);
                    cur = with_premise(cur, k, q);
                }
                int far = part[static_cast<size_t>(app.principal)] == RootTag::Left ? 1 : 0;
                Proof q1 = cur.premise(0), q2 = cur.premise(1);
                Trace conv = convert(q2.premise(far), q1.premise(far));
                conv.prefix(far);
                conv.prefix(1);
                total.append(conv);
                Proof q2b = with_premise(q2, far, q1.premise(far));
                cur = with_premise(cur, 1, q2b);
                return finish_with_goal(cur, std::move(total), goal, "mix under a with");
            }
            case Rule::Cut:
                throw rewrite_error("make_last_mix: MALL cut proofs have no net");
        }
        throw rewrite_error("make_last_mix: unreachable");
    }

    // Convert p so that its last rule generates root r (which must separate
    // p's net).  Plus sides and with-rule cut assignments are forced by the
    // net and recomputed at every recursion level.
    std::pair<Proof, Trace> make_last_generate(const Proof& p, int r) const {
        const Sequent& C = p.conclusion();
        const Formula& f = C.root(r);
        LinkingSet theta = translate(p);

        if (f.conn() == Conn::Tensor || f.conn() == Conn::Cut) {
            JumpGraph g = build_graph(theta);
            OccAddr rv{r, ""};
            if (g.cycle_through(rv))
                throw rewrite_error("make_last_generate: the root does not separate (cycle)");
            OccAddr lc{r, "L"}, rc{r, "R"};
            if (!g.has_vertex(lc) || !g.has_vertex(rc))
                throw rewrite_error("make_last_generate: split child absent from the graph");
            std::set<OccAddr> compL = g.component(lc, &rv);
            std::set<OccAddr> compR = g.component(rc, &rv);
            std::vector<RootTag> part(static_cast<size_t>(C.size()), RootTag::Left);
            for (int j = 0; j < C.size(); ++j) {
                if (j == r) continue;
                if (compR.count(OccAddr{j, ""})) part[static_cast<size_t>(j)] = RootTag::Right;
            }
            return make_last_split(p, r, std::move(part));
        }

        Rule kind;
        switch (f.conn()) {
            case Conn::Parr:
                kind = Rule::Parr;
                break;
            case Conn::Plus: {
                JumpGraph g = build_graph(theta);
                bool l = g.has_vertex(OccAddr{r, "L"});
                bool rr = g.has_vertex(OccAddr{r, "R"});
                if (l == rr)
                    throw rewrite_error("make_last_generate: plus root does not separate");
                kind = l ? Rule::Plus1 : Rule::Plus2;
                break;
            }
            case Conn::With:
                kind = Rule::With;
                break;
            default:
                throw rewrite_error("make_last_generate: root is a literal");
        }

        if (p.rule().rule == kind && p.rule().principal == r) return {p, Trace{}};
        auto goal = [&](const Proof& q) {
            return q.rule().rule == kind && q.rule().principal == r;
        };

        const RuleApp& app = p.rule();
        switch (app.rule) {
            case Rule::Ax:
                throw rewrite_error("make_last_generate: axiom cannot be rearranged");
            case Rule::Cut:
                throw rewrite_error("make_last_generate: MALL cut proofs have no net");
            case Rule::Parr:
            case Rule::Plus1:
            case Rule::Plus2: {
                int ri = detail::image_in_premise(C, app, 0, r);
                auto [q, t] = make_last_generate(p.premise(0), ri);
                Trace total = t;
                total.prefix(0);
                return finish_with_goal(with_premise(p, 0, q), std::move(total), goal,
                                        "generate under a unary rule");
            }
            case Rule::Mix:
            case Rule::Tensor:
            case Rule::StarCut: {
                int d = -1, ri = -1;
                for (int k = 0; k < 2 && d < 0; ++k) {
                    ri = detail::image_in_premise(C, app, k, r);
                    if (ri >= 0) d = k;
                }
                if (d < 0) throw rewrite_error("make_last_generate: target root vanished");
                auto [q, t] = make_last_generate(p.premise(d), ri);
                Trace total = t;
                total.prefix(d);
                return finish_with_goal(with_premise(p, d, q), std::move(total), goal,
                                        "generate under a binary rule");
            }
            case Rule::With: {
                if (app.tags[static_cast<size_t>(r)] != RootTag::Shared)
                    throw rewrite_error("make_last_generate: target root lives in one premise only");
                Trace total;
                Proof cur = p;
                for (int k = 0; k < 2; ++k) {
                    int ri = detail::image_in_premise(C, app, k, r);
                    auto [q, t] = make_last_generate(cur.premise(k), ri);
                    t.prefix(k);
                    total.append(t);
                    cur = with_premise(cur, k, q);
                }
                return finish_with_goal(cur, std::move(total), goal, "generate under a with");
            }
        }
        throw rewrite_error("make_last_generate: unreachable");
    }

    // Conversion between proofs with equal nets (same conclusion).
    Trace convert(const Proof& p, const Proof& q) const {
        if (p == q) return Trace{};
        if (p.conclusion() != q.conclusion())
            throw rewrite_error("convert: different conclusions");
        LinkingSet tp = translate(p);
        if (!net_eq(tp, translate(q))) throw rewrite_error("convert: nets differ");

        JumpGraph g = build_graph(tp);
        if (g.connected()) {
            if (q.rule().rule == Rule::Mix)
                throw rewrite_error("convert: mix-last proof of a connected net");
            Trace total;
            Proof cur = p;
            if (q.rule().rule == Rule::Tensor || q.rule().rule == Rule::StarCut) {
                std::vector<RootTag> part = q.rule().tags;
                auto [c, t] = make_last_split(p, q.rule().principal, part);
                cur = c;
                total = t;
            } else {
                auto [c, t] = make_last_generate(p, q.rule().principal);
                cur = c;
                total = t;
            }
            if (!(cur.rule() == q.rule()))
                throw rewrite_error("convert: forced last rule mismatch (engine bug)");
            for (size_t k = 0; k < q.premises().size(); ++k) {
                Trace t = convert(cur.premise(static_cast<int>(k)), q.premise(static_cast<int>(k)));
                t.prefix(static_cast<int>(k));
                total.append(t);
                cur = with_premise(cur, static_cast<int>(k), q.premise(static_cast<int>(k)));
            }
            return total;
        }

        // disconnected: align both proofs on a common mix partition
        std::set<OccAddr> comp = g.component(OccAddr{0, ""});
        std::vector<RootTag> part(static_cast<size_t>(p.conclusion().size()), RootTag::Right);
        for (int j = 0; j < p.conclusion().size(); ++j)
            if (comp.count(OccAddr{j, ""})) part[static_cast<size_t>(j)] = RootTag::Left;
        auto [cp, t1] = make_last_mix(p, part);
        auto [cq, t2] = make_last_mix(q, part);
        if (!(cp.rule() == cq.rule()))
            throw rewrite_error("convert: mix alignment mismatch (engine bug)");
        Trace total = t1;
        Proof cur = cp;
        for (size_t k = 0; k < cq.premises().size(); ++k) {
            Trace t = convert(cur.premise(static_cast<int>(k)), cq.premise(static_cast<int>(k)));
            t.prefix(static_cast<int>(k));
            total.append(t);
            cur = with_premise(cur, static_cast<int>(k), cq.premise(static_cast<int>(k)));
        }
        total.append(reversed(q, t2, eng_));
        return total;
    }

};

// ---------------------------------------------------------------------------
// Sequentialisation

struct NotANet {
    std::string reason;
};

using SequentializeResult = std::variant<Proof, NotANet>;

namespace detail {

// map a conclusion leaf into premise coordinates
inline std::optional<LeafAddr> up_into_premise(const Sequent& concl, const RuleApp& app, int which,
                                               const LeafAddr& leaf) {
    auto origins = premise_of(concl, app, which).second;
    for (size_t i = 0; i < origins.size(); ++i) {
        const RootOrigin& o = origins[i];
        if (o.kind == RootOrigin::Ctx && o.concl_root == leaf.root)
            return LeafAddr{static_cast<int>(i), leaf.path};
        if (o.kind == RootOrigin::Child && app.principal == leaf.root && !leaf.path.empty() &&
            leaf.path[0] == o.side)
            return LeafAddr{static_cast<int>(i), leaf.path.substr(1)};
    }
    return std::nullopt;
}

inline std::optional<Linking> map_linking_up(const Sequent& concl, const RuleApp& app, int which,
                                             const Linking& lk) {
    std::vector<Link> out;
    for (const Link& l : lk.links) {
        auto a = up_into_premise(concl, app, which, l.a);
        auto b = up_into_premise(concl, app, which, l.b);
        if (!a || !b) return std::nullopt;
        out.emplace_back(*a, *b);
    }
    return Linking(std::move(out));
}

}  // namespace detail

class Sequentializer {
    SystemCfg cfg_;

    SequentializeResult fail(const std::string& reason) const { return NotANet{reason}; }

    SequentializeResult go(const LinkingSet& theta) const {
        const Sequent& seq = theta.sequent;
        if (theta.linkings.empty()) return fail("empty linking set");
        for (const Linking& lk : theta.linkings)
            if (lk.links.empty()) return fail("a linking is empty");

        JumpGraph g = build_graph(theta);
        for (int j = 0; j < seq.size(); ++j)
            if (!g.has_vertex(OccAddr{j, ""})) return fail("root " + std::to_string(j) + " is untouched");

        if (!g.connected()) {
            if (!cfg_.mix) return fail("graph is disconnected and mix is disabled");
            std::set<OccAddr> comp = g.component(OccAddr{0, ""});
            RuleApp app;
            app.rule = Rule::Mix;
            app.tags.assign(static_cast<size_t>(seq.size()), RootTag::Right);
            for (int j = 0; j < seq.size(); ++j)
                if (comp.count(OccAddr{j, ""})) app.tags[static_cast<size_t>(j)] = RootTag::Left;
            return split_two(theta, app);
        }

        // axiom base
        if (seq.size() == 2 && seq.root(0).is_literal() && seq.root(1).is_literal()) {
            if (theta.linkings.size() == 1 && theta.linkings[0].links.size() == 1 &&
                negate(seq.root(0)) == seq.root(1))
                return build::ax(seq.root(0), seq.root(1));
            return fail("literal sequent is not an axiom instance");
        }

        for (int r = 0; r < seq.size(); ++r) {
            const Formula& f = seq.root(r);
            if (f.is_literal()) continue;
            if (!separates(seq, r, theta, &g)) continue;
            auto res = try_root(theta, g, r);
            if (std::holds_alternative<Proof>(res)) return res;
        }
        return fail("no separating root admits a premise split");
    }

    SequentializeResult try_root(const LinkingSet& theta, const JumpGraph& g, int r) const {
        const Sequent& seq = theta.sequent;
        const Formula& f = seq.root(r);
        switch (f.conn()) {
            case Conn::Parr: {
                RuleApp app = build::single(Rule::Parr, seq, r);
                return single_premise(theta, app);
            }
            case Conn::Plus: {
                bool l = g.has_vertex(OccAddr{r, "L"});
                RuleApp app = build::single(l ? Rule::Plus1 : Rule::Plus2, seq, r);
                return single_premise(theta, app);
            }
            case Conn::With: {
                OccAddr lsub{r, "L"}, rsub{r, "R"};
                auto touches_subtree = [&](const Linking& lk, const OccAddr& sub) {
                    for (const Link& l : lk.links)
                        if (sub.is_prefix_of(l.a) || sub.is_prefix_of(l.b)) return true;
                    return false;
                };
                RuleApp app;
                app.rule = Rule::With;
                app.principal = r;
                app.tags.assign(static_cast<size_t>(seq.size()), RootTag::Shared);
                app.tags[static_cast<size_t>(r)] = RootTag::Principal;
                std::vector<Linking> th1, th2;
                for (const Linking& lk : theta.linkings) {
                    bool t1 = touches_subtree(lk, lsub), t2 = touches_subtree(lk, rsub);
                    if (t1 == t2) return fail("a linking touches neither or both with sides");
                    (t1 ? th1 : th2).push_back(lk);
                }
                if (th1.empty() || th2.empty()) return fail("a with side has no linkings");
                for (int j = 0; j < seq.size(); ++j) {
                    if (j == r || !seq.root(j).is_cut()) continue;
                    bool t1 = false, t2 = false;
                    for (const Linking& lk : th1)
                        if (lk.touches_root(j)) t1 = true;
                    for (const Linking& lk : th2)
                        if (lk.touches_root(j)) t2 = true;
                    if (!t1 && !t2) return fail("a cut root is untouched on both with sides");
                    if (t1 && !t2) app.tags[static_cast<size_t>(j)] = RootTag::Left;
                    if (t2 && !t1) app.tags[static_cast<size_t>(j)] = RootTag::Right;
                }
                if (!cfg_.superimpose_cuts)
                    for (int j = 0; j < seq.size(); ++j)
                        if (j != r && seq.root(j).is_cut() &&
                            app.tags[static_cast<size_t>(j)] == RootTag::Shared)
                            return fail("with would superimpose a cut (disabled)");
                auto sub1 = premise_net(theta.sequent, app, 0, th1);
                auto sub2 = premise_net(theta.sequent, app, 1, th2);
                if (!sub1 || !sub2) return fail("with premise net could not be formed");
                auto p1 = go(*sub1);
                if (!std::holds_alternative<Proof>(p1)) return p1;
                auto p2 = go(*sub2);
                if (!std::holds_alternative<Proof>(p2)) return p2;
                return Proof::make(seq, app, {std::get<Proof>(p1), std::get<Proof>(p2)});
            }
            case Conn::Tensor:
            case Conn::Cut: {
                OccAddr rv{r, ""};
                OccAddr lc{r, "L"}, rc{r, "R"};
                if (!g.has_vertex(lc) || !g.has_vertex(rc)) return fail("split child untouched");
                std::set<OccAddr> compL = g.component(lc, &rv);
                if (compL.count(rc)) return fail("split root lies on a cycle");
                RuleApp app;
                app.rule = f.conn() == Conn::Tensor ? Rule::Tensor : Rule::StarCut;
                app.principal = r;
                app.tags.assign(static_cast<size_t>(seq.size()), RootTag::Right);
                app.tags[static_cast<size_t>(r)] = RootTag::Principal;
                for (int j = 0; j < seq.size(); ++j)
                    if (j != r && compL.count(OccAddr{j, ""}))
                        app.tags[static_cast<size_t>(j)] = RootTag::Left;
                return split_two(theta, app);
            }
            default:
                return fail("unexpected root");
        }
    }

    // premise linkings for context-splitting rules: each linking must split
    // cleanly along the premise leaf sets
    SequentializeResult split_two(const LinkingSet& theta, const RuleApp& app) const {
        std::vector<Linking> th[2];
        for (int k = 0; k < 2; ++k) {
            for (const Linking& lk : theta.linkings) {
                std::vector<Link> part;
                for (const Link& l : lk.links) {
                    auto a = detail::up_into_premise(theta.sequent, app, k, l.a);
                    auto b = detail::up_into_premise(theta.sequent, app, k, l.b);
                    if (a.has_value() != b.has_value()) return fail("a link crosses the split");
                    if (a) part.emplace_back(*a, *b);
                }
                if (part.empty()) return fail("a linking misses one premise of the split");
                th[k].push_back(Linking(std::move(part)));
            }
            std::sort(th[k].begin(), th[k].end());
            th[k].erase(std::unique(th[k].begin(), th[k].end()), th[k].end());
        }
        auto p1 = go(LinkingSet(premise_of(theta.sequent, app, 0).first, th[0]));
        if (!std::holds_alternative<Proof>(p1)) return p1;
        auto p2 = go(LinkingSet(premise_of(theta.sequent, app, 1).first, th[1]));
        if (!std::holds_alternative<Proof>(p2)) return p2;
        return Proof::make(theta.sequent, app, {std::get<Proof>(p1), std::get<Proof>(p2)});
    }

    SequentializeResult single_premise(const LinkingSet& theta, const RuleApp& app) const {
        std::vector<Linking> ths;
        for (const Linking& lk : theta.linkings) {
            auto up = detail::map_linking_up(theta.sequent, app, 0, lk);
            if (!up) return fail("a link targets a discarded subformula");
            ths.push_back(*up);
        }
        std::sort(ths.begin(), ths.end());
        ths.erase(std::unique(ths.begin(), ths.end()), ths.end());
        auto sub = go(LinkingSet(premise_of(theta.sequent, app, 0).first, ths));
        if (!std::holds_alternative<Proof>(sub)) return sub;
        return Proof::make(theta.sequent, app, {std::get<Proof>(sub)});
    }

    std::optional<LinkingSet> premise_net(const Sequent& concl, const RuleApp& app, int which,
                                          const std::vector<Linking>& lks) const {
        std::vector<Linking> out;
        for (const Linking& lk : lks) {
            auto up = detail::map_linking_up(concl, app, which, lk);
            if (!up) return std::nullopt;
            out.push_back(*up);
        }
        return LinkingSet(premise_of(concl, app, which).first, std::move(out));
    }

public:
    explicit Sequentializer(SystemCfg cfg) : cfg_(std::move(cfg)) {}

    SequentializeResult run(const LinkingSet& theta) const {
        // links must join dual leaves
        for (const Linking& lk : theta.linkings)
            for (const Link& l : lk.links) {
                if (!theta.sequent.contains(l.a) || !theta.sequent.contains(l.b))
                    return NotANet{"a link addresses a missing leaf"};
                Formula fa = theta.sequent.at(l.a), fb = theta.sequent.at(l.b);
                if (!fa.is_literal() || !fb.is_literal() || negate(fa) != fb)
                    return NotANet{"a link does not join dual literals"};
            }
        SequentializeResult res = go(theta);
        if (std::holds_alternative<Proof>(res)) {
            const Proof& p = std::get<Proof>(res);
            if (!net_eq(translate(p), theta))
                return NotANet{"reconstruction retranslates to a different net"};
        }
        return res;
    }
};

inline SequentializeResult sequentialize(const LinkingSet& theta, const SystemCfg& cfg) {
    return Sequentializer(cfg).run(theta);
}

}  // namespace mallnet
