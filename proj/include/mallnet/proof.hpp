#pragma once

// Proof trees for MALL- (cut-free), MALL (with the cut rule) and MALL*
// (cuts retained in sequents as '#' formulas).
//
// A proof is stored conclusion-down.  Each node records its conclusion
// sequent and a rule application; premise sequents are recomputed from
// those, never stored, so occurrence bookkeeping cannot drift.  A rule
// application names its principal root (where applicable) and tags every
// conclusion root with where it goes:
//
//   Principal  the root generated by the rule
//   Shared     appears in every premise (single-premise rules, with-rule
//              context)
//   Left/Right goes to premise 1 / premise 2 (tensor, mix, cut, star cut;
//              for the mall-star with-rule, cut roots may be tagged
//              Left/Right to keep them in one premise only)
//
// Premise root order is inherited from the conclusion: context roots keep
// their relative order, the principal's subformulas take the principal's
// slot, and a MALL cut formula is appended last to premise 1 and prepended
// to premise 2.

#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "syntax.hpp"

namespace mallnet {

enum class Rule : uint8_t { Ax, Tensor, Parr, With, Plus1, Plus2, Mix, Cut, StarCut };

inline const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Ax: return "ax";
        case Rule::Tensor: return "tensor";
        case Rule::Parr: return "parr";
        case Rule::With: return "with";
        case Rule::Plus1: return "plus1";
        case Rule::Plus2: return "plus2";
        case Rule::Mix: return "mix";
        case Rule::Cut: return "cut";
        case Rule::StarCut: return "starcut";
    }
    return "?";
}

inline std::optional<Rule> rule_from_name(const std::string& s) {
    for (Rule r : {Rule::Ax, Rule::Tensor, Rule::Parr, Rule::With, Rule::Plus1,
                   Rule::Plus2, Rule::Mix, Rule::Cut, Rule::StarCut})
        if (s == rule_name(r)) return r;
    return std::nullopt;
}

inline int premise_count(Rule r) {
    switch (r) {
        case Rule::Ax: return 0;
        case Rule::Parr:
        case Rule::Plus1:
        case Rule::Plus2: return 1;
        default: return 2;
    }
}

enum class RootTag : uint8_t { Principal, Shared, Left, Right };

struct RuleApp {
    Rule rule = Rule::Ax;
    int principal = -1;            // conclusion root index; -1 for ax, mix, cut
    Formula cut_formula;           // Rule::Cut only: the premise-1 side A
    std::vector<RootTag> tags;     // one per conclusion root

    friend bool operator==(const RuleApp& a, const RuleApp& b) {
        if (a.rule != b.rule || a.principal != b.principal || a.tags != b.tags) return false;
        if (a.rule == Rule::Cut && a.cut_formula != b.cut_formula) return false;
        return true;
    }
};

// Where a premise root comes from.
struct RootOrigin {
    enum Kind : uint8_t { Ctx, Child, CutSide } kind;
    int concl_root = -1;  // Ctx: index of the conclusion root
    char side = 0;        // Child: 'L'/'R' of the principal; CutSide: 'L' = A, 'R' = A^perp
};

class proof_error : public mall_error {
public:
    using mall_error::mall_error;
};

// Compute premise `which` (0-based) of a rule application.
inline std::pair<Sequent, std::vector<RootOrigin>> premise_of(const Sequent& concl,
                                                              const RuleApp& app, int which) {
    std::vector<Formula> roots;
    std::vector<RootOrigin> origins;
    auto push_ctx = [&](int j) {
        roots.push_back(concl.root(j));
        origins.push_back({RootOrigin::Ctx, j, 0});
    };
    auto push_child = [&](char side) {
        roots.push_back(concl.root(app.principal).child(side));
        origins.push_back({RootOrigin::Child, app.principal, side});
    };
    const int n = concl.size();
    switch (app.rule) {
        case Rule::Ax:
            throw proof_error("ax has no premises");
        case Rule::Parr:
            for (int j = 0; j < n; ++j) {
                if (j == app.principal) { push_child('L'); push_child('R'); }
                else push_ctx(j);
            }
            break;
        case Rule::Plus1:
        case Rule::Plus2:
            for (int j = 0; j < n; ++j) {
                if (j == app.principal) push_child(app.rule == Rule::Plus1 ? 'L' : 'R');
                else push_ctx(j);
            }
            break;
        case Rule::With:
            for (int j = 0; j < n; ++j) {
                if (j == app.principal) push_child(which == 0 ? 'L' : 'R');
                else if (app.tags[j] == RootTag::Shared ||
                         app.tags[j] == (which == 0 ? RootTag::Left : RootTag::Right))
                    push_ctx(j);
            }
            break;
        case Rule::Tensor:
        case Rule::StarCut:
            for (int j = 0; j < n; ++j) {
                if (j == app.principal) push_child(which == 0 ? 'L' : 'R');
                else if (app.tags[j] == (which == 0 ? RootTag::Left : RootTag::Right))
                    push_ctx(j);
            }
            break;
        case Rule::Mix:
            for (int j = 0; j < n; ++j)
                if (app.tags[j] == (which == 0 ? RootTag::Left : RootTag::Right)) push_ctx(j);
            break;
        case Rule::Cut: {
            if (which == 1) {
                roots.push_back(negate(app.cut_formula));
                origins.push_back({RootOrigin::CutSide, -1, 'R'});
            }
            for (int j = 0; j < n; ++j)
                if (app.tags[j] == (which == 0 ? RootTag::Left : RootTag::Right)) push_ctx(j);
            if (which == 0) {
                roots.push_back(app.cut_formula);
                origins.push_back({RootOrigin::CutSide, -1, 'L'});
            }
            break;
        }
    }
    return {Sequent(std::move(roots)), std::move(origins)};
}

// Downward tracking of a premise vertex to its conclusion vertex.  Returns
// nothing for vertices inside a MALL cut formula, which vanish.
inline std::optional<OccAddr> track_down(const RuleApp& app,
                                         const std::vector<RootOrigin>& origins,
                                         const OccAddr& premise_addr) {
    const RootOrigin& o = origins.at(static_cast<size_t>(premise_addr.root));
    switch (o.kind) {
        case RootOrigin::Ctx: return OccAddr{o.concl_root, premise_addr.path};
        case RootOrigin::Child: return OccAddr{app.principal, o.side + premise_addr.path};
        case RootOrigin::CutSide: return std::nullopt;
    }
    return std::nullopt;
}

class Proof {
    struct Node {
        Sequent concl;
        RuleApp app;
        std::vector<Proof> prems;
    };
    std::shared_ptr<const Node> n_;

    explicit Proof(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    static void validate_node(const Sequent& concl, const RuleApp& app,
                              const std::vector<Proof>& prems) {
        const int n = concl.size();
        if (static_cast<int>(app.tags.size()) != n)
            throw proof_error("rule tags do not cover the conclusion");
        if (static_cast<int>(prems.size()) != premise_count(app.rule))
            throw proof_error(std::string(rule_name(app.rule)) + ": wrong premise count");

        auto require_principal = [&](Conn c) {
            if (app.principal < 0 || app.principal >= n)
                throw proof_error(std::string(rule_name(app.rule)) + ": bad principal index");
            if (concl.root(app.principal).conn() != c)
                throw proof_error(std::string(rule_name(app.rule)) + ": principal root is not the right connective");
            if (app.tags[app.principal] != RootTag::Principal)
                throw proof_error("principal root must be tagged Principal");
        };
        auto forbid_principal_elsewhere = [&] {
            for (int j = 0; j < n; ++j)
                if (j != app.principal && app.tags[j] == RootTag::Principal)
                    throw proof_error("only the principal root may be tagged Principal");
        };
        forbid_principal_elsewhere();

        switch (app.rule) {
            case Rule::Ax: {
                if (n != 2) throw proof_error("ax must conclude exactly two roots");
                const Formula& a = concl.root(0);
                const Formula& b = concl.root(1);
                if (!a.is_literal() || !b.is_literal() || a.atom_name() != b.atom_name() ||
                    a.negated() == b.negated())
                    throw proof_error("ax must conclude a dual pair of literals");
                break;
            }
            case Rule::Parr: require_principal(Conn::Parr); break;
            case Rule::Plus1:
            case Rule::Plus2: require_principal(Conn::Plus); break;
            case Rule::Tensor: require_principal(Conn::Tensor); break;
            case Rule::StarCut: require_principal(Conn::Cut); break;
            case Rule::With:
                require_principal(Conn::With);
                for (int j = 0; j < n; ++j) {
                    if (j == app.principal) continue;
                    if (app.tags[j] != RootTag::Shared && !concl.root(j).is_cut())
                        throw proof_error("with: only cut roots may be kept on one side");
                }
                break;
            case Rule::Mix: {
                if (app.principal != -1) throw proof_error("mix has no principal");
                bool l = false, r = false;
                for (RootTag t : app.tags) {
                    if (t == RootTag::Left) l = true;
                    else if (t == RootTag::Right) r = true;
                    else throw proof_error("mix roots must be tagged Left or Right");
                }
                if (!l || !r) throw proof_error("mix premises must both be nonempty");
                // canonical orientation: lowest root on the left
                if (app.tags[0] != RootTag::Left) throw proof_error("mix is not in canonical orientation");
                break;
            }
            case Rule::Cut: {
                if (app.principal != -1) throw proof_error("cut has no principal");
                if (!app.cut_formula.valid()) throw proof_error("cut needs a cut formula");
                if (app.cut_formula.is_cut()) throw proof_error("cut formula must be cut-free");
                for (RootTag t : app.tags)
                    if (t != RootTag::Left && t != RootTag::Right)
                        throw proof_error("cut roots must be tagged Left or Right");
                if (negate(app.cut_formula) < app.cut_formula)
                    throw proof_error("cut is not in canonical orientation");
                break;
            }
        }
        for (int j = 0; j < n; ++j) {
            RootTag t = app.tags[j];
            if ((t == RootTag::Left || t == RootTag::Right) &&
                (app.rule == Rule::Parr || app.rule == Rule::Plus1 || app.rule == Rule::Plus2))
                throw proof_error("single-premise rules cannot split the context");
        }

        for (int k = 0; k < premise_count(app.rule); ++k) {
            Sequent want = premise_of(concl, app, k).first;
            if (want != prems[static_cast<size_t>(k)].conclusion())
                throw proof_error(std::string(rule_name(app.rule)) + ": premise " + std::to_string(k + 1) +
                                  " mismatch: expected [" + want.to_string() + "], found [" +
                                  prems[static_cast<size_t>(k)].conclusion().to_string() + "]");
        }
    }

public:
    Proof() = default;
    bool valid_handle() const { return n_ != nullptr; }

    // Builds a node, normalising mix orientation, and validates it locally.
    static Proof make(Sequent concl, RuleApp app, std::vector<Proof> prems = {}) {
        if (app.rule == Rule::Mix && !app.tags.empty() && app.tags[0] == RootTag::Right) {
            for (auto& t : app.tags) t = (t == RootTag::Left) ? RootTag::Right : RootTag::Left;
            std::swap(prems[0], prems[1]);
        }
        validate_node(concl, app, prems);
        auto n = std::make_shared<Node>();
        n->concl = std::move(concl);
        n->app = std::move(app);
        n->prems = std::move(prems);
        return Proof(std::move(n));
    }

    // For tests that need to build malformed nodes.
    static Proof make_unchecked(Sequent concl, RuleApp app, std::vector<Proof> prems = {}) {
        auto n = std::make_shared<Node>();
        n->concl = std::move(concl);
        n->app = std::move(app);
        n->prems = std::move(prems);
        return Proof(std::move(n));
    }

    const Sequent& conclusion() const { return n_->concl; }
    const RuleApp& rule() const { return n_->app; }
    const std::vector<Proof>& premises() const { return n_->prems; }
    const Proof& premise(int i) const { return n_->prems.at(static_cast<size_t>(i)); }

    int node_count() const {
        int c = 1;
        for (const auto& p : n_->prems) c += p.node_count();
        return c;
    }
    int cut_count() const {
        int c = n_->app.rule == Rule::Cut ? 1 : 0;
        for (const auto& p : n_->prems) c += p.cut_count();
        return c;
    }
    bool uses_rule(Rule r) const {
        if (n_->app.rule == r) return true;
        for (const auto& p : n_->prems)
            if (p.uses_rule(r)) return true;
        return false;
    }

    friend bool operator==(const Proof& a, const Proof& b) {
        if (a.n_ == b.n_) return true;
        if (!(a.rule() == b.rule()) || a.conclusion() != b.conclusion()) return false;
        if (a.premises().size() != b.premises().size()) return false;
        for (size_t i = 0; i < a.premises().size(); ++i)
            if (!(a.premises()[i] == b.premises()[i])) return false;
        return true;
    }
    friend bool operator!=(const Proof& a, const Proof& b) { return !(a == b); }

    void serialize_tree(std::string& out) const {
        out += rule_name(n_->app.rule);
        if (n_->app.principal >= 0) {
            out += '@';
            out += std::to_string(n_->app.principal);
        }
        if (n_->app.rule == Rule::Cut) {
            out += '{';
            out += n_->app.cut_formula.to_string();
            out += '}';
        }
        bool any = false;
        for (size_t j = 0; j < n_->app.tags.size(); ++j) {
            if (n_->app.tags[j] == RootTag::Left || n_->app.tags[j] == RootTag::Right) {
                out += any ? "," : "[";
                any = true;
                out += std::to_string(j);
                out += n_->app.tags[j] == RootTag::Left ? "=1" : "=2";
            }
        }
        if (any) out += ']';
        if (!n_->prems.empty()) {
            out += '(';
            for (size_t i = 0; i < n_->prems.size(); ++i) {
                if (i) out += ' ';
                n_->prems[i].serialize_tree(out);
            }
            out += ')';
        }
    }

    // Canonical serialization: conclusion plus the rule tree.
    std::string serialize() const {
        std::string out = n_->concl.to_string();
        out += " ; ";
        serialize_tree(out);
        return out;
    }
};

// ---------------------------------------------------------------------------
// System-level checking

enum class System : uint8_t { MallMinus, Mall, MallStar };

inline const char* system_name(System s) {
    switch (s) {
        case System::MallMinus: return "mall-minus";
        case System::Mall: return "mall";
        case System::MallStar: return "mall-star";
    }
    return "?";
}

struct SystemCfg {
    System system = System::MallMinus;
    bool mix = false;
    bool superimpose_cuts = true;  // false = the restricted with-rule (no shared cuts)
};

struct Violation {
    std::string node;    // path of premise indices from the root, e.g. "0.1"
    std::string reason;
};

namespace detail {
inline void check_rec(const Proof& p, const SystemCfg& cfg, std::string path,
                      std::vector<Violation>& out) {
    const RuleApp& app = p.rule();
    if (app.rule == Rule::Mix && !cfg.mix)
        out.push_back({path, "mix rule is disabled"});
    if (app.rule == Rule::Cut && cfg.system != System::Mall)
        out.push_back({path, "cut rule is only available in system mall"});
    if (app.rule == Rule::StarCut && cfg.system != System::MallStar)
        out.push_back({path, "'#' introduction is only available in system mall-star"});
    if (cfg.system != System::MallStar && p.conclusion().has_cut_root())
        out.push_back({path, "'#' formulas are only allowed in mall-star sequents"});
    if (app.rule == Rule::With && cfg.system == System::MallStar && !cfg.superimpose_cuts) {
        for (int j = 0; j < p.conclusion().size(); ++j)
            if (j != app.principal && p.conclusion().root(j).is_cut() &&
                app.tags[j] == RootTag::Shared)
                out.push_back({path, "with: superimposing cuts is disabled"});
    }
    // Re-validate structure (nodes built through make() always pass).
    try {
        Proof::make(p.conclusion(), p.rule(), p.premises());
    } catch (const proof_error& e) {
        out.push_back({path, e.what()});
        return;
    }
    for (size_t i = 0; i < p.premises().size(); ++i)
        check_rec(p.premises()[i], cfg, path.empty() ? std::to_string(i) : path + "." + std::to_string(i), out);
}
}  // namespace detail

inline std::vector<Violation> check_proof(const Proof& p, const SystemCfg& cfg) {
    std::vector<Violation> out;
    detail::check_rec(p, cfg, "", out);
    return out;
}

// ---------------------------------------------------------------------------
// Convenience builders (canonical parameter encodings)

namespace build {

inline Proof ax(const Formula& a, const Formula& b) {
    RuleApp app;
    app.rule = Rule::Ax;
    app.tags = {RootTag::Shared, RootTag::Shared};
    return Proof::make(Sequent({a, b}), app);
}
inline Proof ax(const std::string& atom) { return ax(Formula::atom(atom), Formula::atom(atom, true)); }

inline RuleApp single(Rule r, const Sequent& concl, int principal) {
    RuleApp app;
    app.rule = r;
    app.principal = principal;
    app.tags.assign(static_cast<size_t>(concl.size()), RootTag::Shared);
    app.tags[static_cast<size_t>(principal)] = RootTag::Principal;
    return app;
}

inline Proof parr(const Sequent& concl, int principal, Proof prem) {
    return Proof::make(concl, single(Rule::Parr, concl, principal), {std::move(prem)});
}
inline Proof plus1(const Sequent& concl, int principal, Proof prem) {
    return Proof::make(concl, single(Rule::Plus1, concl, principal), {std::move(prem)});
}
inline Proof plus2(const Sequent& concl, int principal, Proof prem) {
    return Proof::make(concl, single(Rule::Plus2, concl, principal), {std::move(prem)});
}

// `right_roots` lists the context roots that go to premise 2.
inline Proof tensor(const Sequent& concl, int principal, const std::set<int>& right_roots,
                    Proof p1, Proof p2) {
    RuleApp app;
    app.rule = Rule::Tensor;
    app.principal = principal;
    app.tags.assign(static_cast<size_t>(concl.size()), RootTag::Left);
    for (int j : right_roots) app.tags[static_cast<size_t>(j)] = RootTag::Right;
    app.tags[static_cast<size_t>(principal)] = RootTag::Principal;
    return Proof::make(concl, app, {std::move(p1), std::move(p2)});
}

inline Proof starcut(const Sequent& concl, int principal, const std::set<int>& right_roots,
                     Proof p1, Proof p2) {
    RuleApp app;
    app.rule = Rule::StarCut;
    app.principal = principal;
    app.tags.assign(static_cast<size_t>(concl.size()), RootTag::Left);
    for (int j : right_roots) app.tags[static_cast<size_t>(j)] = RootTag::Right;
    app.tags[static_cast<size_t>(principal)] = RootTag::Principal;
    return Proof::make(concl, app, {std::move(p1), std::move(p2)});
}

// `left_only`/`right_only` list cut roots kept in a single premise.
inline Proof with(const Sequent& concl, int principal, Proof p1, Proof p2,
                  const std::set<int>& left_only = {}, const std::set<int>& right_only = {}) {
    RuleApp app;
    app.rule = Rule::With;
    app.principal = principal;
    app.tags.assign(static_cast<size_t>(concl.size()), RootTag::Shared);
    for (int j : left_only) app.tags[static_cast<size_t>(j)] = RootTag::Left;
    for (int j : right_only) app.tags[static_cast<size_t>(j)] = RootTag::Right;
    app.tags[static_cast<size_t>(principal)] = RootTag::Principal;
    return Proof::make(concl, app, {std::move(p1), std::move(p2)});
}

inline Proof mix(const Sequent& concl, const std::set<int>& right_roots, Proof p1, Proof p2) {
    RuleApp app;
    app.rule = Rule::Mix;
    app.tags.assign(static_cast<size_t>(concl.size()), RootTag::Left);
    for (int j : right_roots) app.tags[static_cast<size_t>(j)] = RootTag::Right;
    return Proof::make(concl, app, {std::move(p1), std::move(p2)});
}

// Premise 1 proves Gamma, A and premise 2 proves A^perp, Delta.  The stored
// orientation is canonical (A < A^perp); callers must build it that way
// because flipping afterwards would permute the premise root order.
inline Proof cut(const Sequent& concl, const Formula& cut_formula, const std::set<int>& right_roots,
                 Proof p1, Proof p2) {
    RuleApp app;
    app.rule = Rule::Cut;
    app.cut_formula = cut_formula;
    app.tags.assign(static_cast<size_t>(concl.size()), RootTag::Left);
    for (int j : right_roots) app.tags[static_cast<size_t>(j)] = RootTag::Right;
    return Proof::make(concl, app, {std::move(p1), std::move(p2)});
}

}  // namespace build

// ---------------------------------------------------------------------------
// Leaf tracking through a whole proof

// Track a leaf of premise `which` of the root rule down to the conclusion.
inline std::optional<LeafAddr> track_leaf(const Proof& p, int which, const LeafAddr& leaf) {
    auto [prem, origins] = premise_of(p.conclusion(), p.rule(), which);
    if (!prem.contains(leaf) || !prem.at(leaf).is_literal())
        throw mall_error("track_leaf: address is not a leaf of the premise");
    return track_down(p.rule(), origins, leaf);
}

}  // namespace mallnet
