#pragma once

// Abstract rules and the general definition of rule commutation: rules
// contain formula variables, negated formula variables and sequent
// variables (general or cut-only); a rule commutation is a pair of a
// two-level proof with the lower rule beta and upper rule alpha, and a
// different two-level proof with the order reversed, deriving the same
// pure rule.  Commutations are generated by unifying rule premises with
// rule conclusions over multiset expressions; the unifier introduces one
// fresh variable per pair of sequent variables, which yields most general
// solutions directly, and purity of the derived rule prunes the
// degenerate shapes.

#include <array>
#include <map>
#include <set>

#include "proof.hpp"

namespace mallnet::abstract {

// ---------------------------------------------------------------------------
// Formula expressions

struct FExpr;
using FExprP = std::shared_ptr<const FExpr>;

struct FExpr {
    enum Kind : uint8_t { Var, NegVar, Lit, Bin } kind;
    std::string name;  // Var/NegVar: variable name; Lit: atom name
    bool neg = false;  // Lit only
    Conn conn = Conn::Atom;
    FExprP left, right;
};

inline FExprP fvar(const std::string& n) {
    auto e = std::make_shared<FExpr>();
    e->kind = FExpr::Var;
    e->name = n;
    return e;
}
inline FExprP fnegvar(const std::string& n) {
    auto e = std::make_shared<FExpr>();
    e->kind = FExpr::NegVar;
    e->name = n;
    return e;
}
inline FExprP flit(const std::string& atom, bool neg) {
    auto e = std::make_shared<FExpr>();
    e->kind = FExpr::Lit;
    e->name = atom;
    e->neg = neg;
    return e;
}

inline std::string fexpr_str(const FExprP& e);

inline FExprP fbin(Conn c, FExprP l, FExprP r) {
    auto e = std::make_shared<FExpr>();
    e->kind = FExpr::Bin;
    e->conn = c;
    if (c == Conn::Cut && fexpr_str(r) < fexpr_str(l)) std::swap(l, r);  // '#' is unordered
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

inline std::string fexpr_str(const FExprP& e) {
    switch (e->kind) {
        case FExpr::Var: return e->name;
        case FExpr::NegVar: return e->name + "^";
        case FExpr::Lit: return (e->neg ? "~" : "") + e->name + "!";
        case FExpr::Bin:
            return std::string("(") + fexpr_str(e->left) + conn_symbol(e->conn) + fexpr_str(e->right) +
                   ")";
    }
    return "?";
}

inline bool fexpr_eq(const FExprP& a, const FExprP& b) { return fexpr_str(a) == fexpr_str(b); }

// de Morgan dual of an expression
inline FExprP fdual(const FExprP& e) {
    switch (e->kind) {
        case FExpr::Var: return fnegvar(e->name);
        case FExpr::NegVar: return fvar(e->name);
        case FExpr::Lit: return flit(e->name, !e->neg);
        case FExpr::Bin:
            switch (e->conn) {
                case Conn::Tensor: return fbin(Conn::Parr, fdual(e->left), fdual(e->right));
                case Conn::Parr: return fbin(Conn::Tensor, fdual(e->left), fdual(e->right));
                case Conn::With: return fbin(Conn::Plus, fdual(e->left), fdual(e->right));
                case Conn::Plus: return fbin(Conn::With, fdual(e->left), fdual(e->right));
                default: throw mall_error("a cut expression has no dual");
            }
    }
    throw mall_error("bad expression");
}

inline bool is_cut_shaped(const FExprP& e) { return e->kind == FExpr::Bin && e->conn == Conn::Cut; }

inline void fexpr_vars(const FExprP& e, std::map<std::string, int>& pos_count,
                       std::map<std::string, int>& neg_count) {
    switch (e->kind) {
        case FExpr::Var: pos_count[e->name]++; break;
        case FExpr::NegVar: neg_count[e->name]++; break;
        case FExpr::Lit: break;
        case FExpr::Bin:
            fexpr_vars(e->left, pos_count, neg_count);
            fexpr_vars(e->right, pos_count, neg_count);
            break;
    }
}

// ---------------------------------------------------------------------------
// Sequent expressions

enum class SVarType : uint8_t { General, CutOnly };

struct SVar {
    std::string name;
    SVarType type = SVarType::General;

    friend bool operator<(const SVar& a, const SVar& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.type < b.type;
    }
    friend bool operator==(const SVar& a, const SVar& b) {
        return a.name == b.name && a.type == b.type;
    }
};

struct SExpr {
    std::vector<SVar> vars;       // multiset, kept sorted
    std::vector<FExprP> formulas;  // multiset, kept sorted by serialization

    void normalise() {
        std::sort(vars.begin(), vars.end());
        std::sort(formulas.begin(), formulas.end(),
                  [](const FExprP& a, const FExprP& b) { return fexpr_str(a) < fexpr_str(b); });
    }
    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (const SVar& v : vars) {
            if (!first) s += ",";
            first = false;
            s += v.name;
            if (v.type == SVarType::CutOnly) s += ":c";
        }
        for (const FExprP& f : formulas) {
            if (!first) s += ",";
            first = false;
            s += fexpr_str(f);
        }
        return s + "}";
    }
    friend bool operator==(const SExpr& a, const SExpr& b) {
        return a.to_string() == b.to_string();
    }
    friend bool operator<(const SExpr& a, const SExpr& b) { return a.to_string() < b.to_string(); }

    bool variable_only() const {
        for (const FExprP& f : formulas)
            if (f->kind != FExpr::Var && f->kind != FExpr::NegVar) return false;
        return true;
    }
};

inline SExpr sexpr(std::vector<SVar> vars, std::vector<FExprP> formulas) {
    SExpr e;
    e.vars = std::move(vars);
    e.formulas = std::move(formulas);
    e.normalise();
    return e;
}

// ---------------------------------------------------------------------------
// Substitutions

struct Subst {
    std::map<std::string, FExprP> f;  // formula variable -> expression
    std::map<std::string, SExpr> s;   // sequent variable -> sequent expression

    bool has_f(const std::string& n) const { return f.count(n) != 0; }
    bool has_s(const std::string& n) const { return s.count(n) != 0; }
};

inline FExprP subst(const Subst& sub, const FExprP& e) {
    switch (e->kind) {
        case FExpr::Var: {
            auto it = sub.f.find(e->name);
            if (it == sub.f.end()) return e;
            if (it->second->kind == FExpr::Var && it->second->name == e->name) return e;
            return subst(sub, it->second);
        }
        case FExpr::NegVar: {
            auto it = sub.f.find(e->name);
            if (it == sub.f.end()) return e;
            if (it->second->kind == FExpr::Var && it->second->name == e->name) return e;
            return subst(sub, fdual(it->second));
        }
        case FExpr::Lit: return e;
        case FExpr::Bin: return fbin(e->conn, subst(sub, e->left), subst(sub, e->right));
    }
    throw mall_error("bad expression");
}

inline SExpr subst(const Subst& sub, const SExpr& e) {
    SExpr out;
    for (const SVar& v : e.vars) {
        auto it = sub.s.find(v.name);
        if (it == sub.s.end() ||
            (it->second.formulas.empty() && it->second.vars.size() == 1 &&
             it->second.vars[0].name == v.name)) {
            out.vars.push_back(v);
        } else {
            SExpr inner = subst(sub, it->second);
            for (const SVar& w : inner.vars) out.vars.push_back(w);
            for (const FExprP& g : inner.formulas) out.formulas.push_back(g);
        }
    }
    for (const FExprP& g : e.formulas) out.formulas.push_back(subst(sub, g));
    out.normalise();
    return out;
}

// type legality: what may be substituted into a cut-only variable
inline bool cutonly_ok(const SExpr& e) {
    for (const SVar& v : e.vars)
        if (v.type != SVarType::CutOnly) return false;
    for (const FExprP& f : e.formulas)
        if (!is_cut_shaped(f)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Abstract rules and two-level proofs

struct ARule {
    std::string name;
    std::vector<SExpr> premises;  // multiset
    SExpr concl;

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < premises.size(); ++i) {
            if (i) s += " ";
            s += premises[i].to_string();
        }
        return s + " / " + concl.to_string();
    }
};

// collapse: premise multiset replaced by its support set
inline ARule collapse(const ARule& r) {
    ARule out = r;
    std::sort(out.premises.begin(), out.premises.end());
    out.premises.erase(std::unique(out.premises.begin(), out.premises.end()), out.premises.end());
    return out;
}

inline bool is_pure(const ARule& r) {
    std::map<std::string, int> svar_concl, fpos_concl, fneg_concl;
    for (const SVar& v : r.concl.vars) svar_concl[v.name]++;
    for (const FExprP& f : r.concl.formulas) fexpr_vars(f, fpos_concl, fneg_concl);

    std::set<std::string> seen_svars;
    std::set<std::pair<std::string, bool>> seen_fvars;  // (name, negated)
    for (const SExpr& p : r.premises) {
        if (!p.variable_only()) return false;
        for (const SVar& v : p.vars) seen_svars.insert(v.name);
        for (const FExprP& f : p.formulas) seen_fvars.insert({f->name, f->kind == FExpr::NegVar});
    }
    for (const std::string& v : seen_svars)
        if (svar_concl[v] != 1) return false;
    for (auto& [name, negd] : seen_fvars)
        if ((negd ? fneg_concl : fpos_concl)[name] != 1) return false;
    return true;
}

// A two-level proof: the root rule with, per premise, either a hypothesis
// or an application of the upper rule.
struct ABProof {
    std::string root_rule;
    SExpr concl;
    struct Child {
        bool is_hyp;
        SExpr label;               // the premise sequent expression
        std::string rule;          // upper rule name (when !is_hyp)
        std::vector<SExpr> hyps;   // upper rule premises (when !is_hyp)
    };
    std::vector<Child> children;

    // children and hypothesis lists are multisets: render them sorted
    std::string to_string() const {
        std::vector<std::string> parts;
        for (const Child& c : children) {
            if (c.is_hyp) {
                parts.push_back("hyp" + c.label.to_string());
            } else {
                std::vector<std::string> hs;
                for (const SExpr& h : c.hyps) hs.push_back("hyp" + h.to_string());
                std::sort(hs.begin(), hs.end());
                std::string t = c.rule + "[" + c.label.to_string() + "](";
                for (size_t j = 0; j < hs.size(); ++j) {
                    if (j) t += " ";
                    t += hs[j];
                }
                parts.push_back(t + ")");
            }
        }
        std::sort(parts.begin(), parts.end());
        std::string s = root_rule + "[" + concl.to_string() + "](";
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) s += " ";
            s += parts[i];
        }
        return s + ")";
    }

    ARule derived() const {
        ARule r;
        r.concl = concl;
        for (const Child& c : children) {
            if (c.is_hyp) r.premises.push_back(c.label);
            else
                for (const SExpr& h : c.hyps) r.premises.push_back(h);
        }
        return r;
    }

    bool non_repeating() const {
        std::vector<std::string> hs;
        for (const Child& c : children) {
            if (c.is_hyp) hs.push_back(c.label.to_string());
            else
                for (const SExpr& h : c.hyps) hs.push_back(h.to_string());
        }
        std::sort(hs.begin(), hs.end());
        return std::adjacent_find(hs.begin(), hs.end()) == hs.end();
    }
};

inline ABProof subst(const Subst& sub, const ABProof& p) {
    ABProof out = p;
    out.concl = subst(sub, p.concl);
    for (auto& c : out.children) {
        c.label = subst(sub, c.label);
        for (auto& h : c.hyps) h = subst(sub, h);
    }
    return out;
}

// Simultaneous variable renaming (no binding chase): used for instance
// naming and canonicalisation, where targets may collide with sources.
// A formula variable may rename to the negation of another: a variable
// occurring under '#' names an arbitrary formula, so its polarity is a
// notational choice.
struct Renaming {
    std::map<std::string, std::pair<std::string, bool>> f;  // name -> (target, flip)
    std::map<std::string, std::string> s;
};

inline FExprP ren(const Renaming& r, const FExprP& e) {
    switch (e->kind) {
        case FExpr::Var: {
            auto it = r.f.find(e->name);
            if (it == r.f.end()) return e;
            return it->second.second ? fnegvar(it->second.first) : fvar(it->second.first);
        }
        case FExpr::NegVar: {
            auto it = r.f.find(e->name);
            if (it == r.f.end()) return e;
            return it->second.second ? fvar(it->second.first) : fnegvar(it->second.first);
        }
        case FExpr::Lit: return e;
        case FExpr::Bin: return fbin(e->conn, ren(r, e->left), ren(r, e->right));
    }
    throw mall_error("bad expression");
}

inline SExpr ren(const Renaming& r, const SExpr& e) {
    SExpr out;
    for (const SVar& v : e.vars) {
        auto it = r.s.find(v.name);
        out.vars.push_back(it == r.s.end() ? v : SVar{it->second, v.type});
    }
    for (const FExprP& g : e.formulas) out.formulas.push_back(ren(r, g));
    out.normalise();
    return out;
}

inline ARule ren(const Renaming& r, const ARule& rule) {
    ARule out;
    out.name = rule.name;
    out.concl = ren(r, rule.concl);
    for (const SExpr& p : rule.premises) out.premises.push_back(ren(r, p));
    return out;
}

inline ABProof ren(const Renaming& r, const ABProof& p) {
    ABProof out = p;
    out.concl = ren(r, p.concl);
    for (auto& c : out.children) {
        c.label = ren(r, c.label);
        for (auto& h : c.hyps) h = ren(r, h);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rule schemas

inline std::vector<ARule> system_rules(System system, bool mix) {
    auto G = SVar{"G", SVarType::General};
    auto D = SVar{"D", SVarType::General};
    auto O1 = SVar{"O1", SVarType::CutOnly};
    auto O2 = SVar{"O2", SVarType::CutOnly};
    auto A = fvar("A");
    auto B = fvar("B");

    std::vector<ARule> out;
    out.push_back({"tensor",
                   {sexpr({G}, {A}), sexpr({D}, {B})},
                   sexpr({G, D}, {fbin(Conn::Tensor, A, B)})});
    out.push_back({"parr", {sexpr({G}, {A, B})}, sexpr({G}, {fbin(Conn::Parr, A, B)})});
    out.push_back({"plus1", {sexpr({G}, {A})}, sexpr({G}, {fbin(Conn::Plus, A, B)})});
    out.push_back({"plus2", {sexpr({G}, {B})}, sexpr({G}, {fbin(Conn::Plus, A, B)})});
    if (system == System::MallStar) {
        out.push_back({"with",
                       {sexpr({O1, G}, {A}), sexpr({O2, G}, {B})},
                       sexpr({O1, O2, G}, {fbin(Conn::With, A, B)})});
        out.push_back({"starcut",
                       {sexpr({G}, {A}), sexpr({D}, {fnegvar("A")})},
                       sexpr({G, D}, {fbin(Conn::Cut, A, fnegvar("A"))})});
    } else {
        out.push_back(
            {"with", {sexpr({G}, {A}), sexpr({G}, {B})}, sexpr({G}, {fbin(Conn::With, A, B)})});
    }
    if (mix) out.push_back({"mix", {sexpr({G}, {}), sexpr({D}, {})}, sexpr({G, D}, {})});
    return out;
}

// ---------------------------------------------------------------------------
// Unification of sequent expressions

namespace detail {

inline bool occurs(const std::string& var, const FExprP& e) {
    switch (e->kind) {
        case FExpr::Var:
        case FExpr::NegVar: return e->name == var;
        case FExpr::Lit: return false;
        case FExpr::Bin: return occurs(var, e->left) || occurs(var, e->right);
    }
    return false;
}

// formula unification; returns every unifier extending `base`
inline void unify_f(const FExprP& a0, const FExprP& b0, const Subst& base,
                    std::vector<Subst>& out) {
    FExprP a = subst(base, a0), b = subst(base, b0);
    if (fexpr_eq(a, b)) {
        out.push_back(base);
        return;
    }
    auto contains_cut = [](const FExprP& e) {
        std::function<bool(const FExprP&)> walk = [&](const FExprP& x) {
            if (x->kind != FExpr::Bin) return false;
            if (x->conn == Conn::Cut) return true;
            return walk(x->left) || walk(x->right);
        };
        return walk(e);
    };
    auto bind = [&](const std::string& name, FExprP e, bool negated) {
        if (contains_cut(e)) return;  // formula variables range over cut-free formulas
        if (negated) e = fdual(e);
        if (occurs(name, e)) return;
        Subst s = base;
        s.f[name] = e;
        out.push_back(std::move(s));
    };
    if (a->kind == FExpr::Var) return bind(a->name, b, false);
    if (b->kind == FExpr::Var) return bind(b->name, a, false);
    if (a->kind == FExpr::NegVar) return bind(a->name, b, true);
    if (b->kind == FExpr::NegVar) return bind(b->name, a, true);
    if (a->kind == FExpr::Lit || b->kind == FExpr::Lit) return;  // unequal literals
    if (a->conn != b->conn) return;
    std::vector<Subst> mid;
    {
        std::vector<Subst> tmp;
        unify_f(a->left, b->left, base, tmp);
        for (const Subst& s1 : tmp) unify_f(a->right, b->right, s1, mid);
    }
    if (a->conn == Conn::Cut) {
        // '#' is unordered: also try the crossed alignment
        std::vector<Subst> tmp;
        unify_f(a->left, b->right, base, tmp);
        for (const Subst& s1 : tmp) unify_f(a->right, b->left, s1, mid);
    }
    // dedup by resulting bindings
    std::set<std::string> seen;
    for (Subst& s : mid) {
        std::string key;
        for (auto& [k, v] : s.f) key += k + "=" + fexpr_str(v) + ";";
        if (seen.insert(key).second) out.push_back(std::move(s));
    }
}

struct FreshNames {
    int counter = 0;
    std::string next() { return "X" + std::to_string(counter++); }
};

// Unify two sequent expressions under `base`, enumerating formula
// matchings and assignments; variable-variable splitting uses one fresh
// variable per pair, which is most general.
inline void unify_s(const SExpr& l0, const SExpr& r0, const Subst& base, FreshNames& fresh,
                    std::vector<Subst>& out) {
    SExpr l = subst(base, l0), r = subst(base, r0);

    // multiset cancellation: common variables and syntactically equal
    // formulas drop from both sides (complete for multiset equations)
    for (size_t i = 0; i < l.vars.size();) {
        bool cancelled = false;
        for (size_t j = 0; j < r.vars.size(); ++j)
            if (l.vars[i] == r.vars[j]) {
                l.vars.erase(l.vars.begin() + static_cast<long>(i));
                r.vars.erase(r.vars.begin() + static_cast<long>(j));
                cancelled = true;
                break;
            }
        if (!cancelled) ++i;
    }
    for (size_t i = 0; i < l.formulas.size();) {
        bool cancelled = false;
        for (size_t j = 0; j < r.formulas.size(); ++j)
            if (fexpr_eq(l.formulas[i], r.formulas[j])) {
                l.formulas.erase(l.formulas.begin() + static_cast<long>(i));
                r.formulas.erase(r.formulas.begin() + static_cast<long>(j));
                cancelled = true;
                break;
            }
        if (!cancelled) ++i;
    }

    // recursive enumeration over l.formulas: match with an r formula or
    // assign to an r variable
    struct State {
        Subst sub;
        std::vector<bool> r_used;                          // matched r formulas
        std::vector<std::vector<FExprP>> into_rvar;        // per r var: swallowed l formulas
        std::vector<std::vector<FExprP>> into_lvar;        // per l var: swallowed r formulas
    };
    std::vector<State> states;
    {
        State init;
        init.sub = base;
        init.r_used.assign(r.formulas.size(), false);
        init.into_rvar.assign(r.vars.size(), {});
        init.into_lvar.assign(l.vars.size(), {});
        states.push_back(std::move(init));
    }
    for (const FExprP& lf : l.formulas) {
        std::vector<State> next;
        for (const State& st : states) {
            // match with an unused r formula
            for (size_t j = 0; j < r.formulas.size(); ++j) {
                if (st.r_used[j]) continue;
                std::vector<Subst> us;
                unify_f(lf, r.formulas[j], st.sub, us);
                for (Subst& u : us) {
                    State n = st;
                    n.sub = std::move(u);
                    n.r_used[j] = true;
                    next.push_back(std::move(n));
                }
            }
            // or assign into an r variable
            for (size_t v = 0; v < r.vars.size(); ++v) {
                State n = st;
                n.into_rvar[v].push_back(lf);
                next.push_back(std::move(n));
            }
        }
        states = std::move(next);
    }
    // unmatched r formulas go into l variables
    for (size_t j = 0; j < r.formulas.size(); ++j) {
        std::vector<State> next;
        for (const State& st : states) {
            if (st.r_used[j]) {
                next.push_back(st);
                continue;
            }
            for (size_t v = 0; v < l.vars.size(); ++v) {
                State n = st;
                n.into_lvar[v].push_back(r.formulas[j]);
                next.push_back(std::move(n));
            }
        }
        states = std::move(next);
    }

    for (const State& st : states) {
        Subst sub = st.sub;
        // fresh variable for every (l var, r var) pair
        std::vector<std::vector<SVar>> l_parts(l.vars.size()), r_parts(r.vars.size());
        for (size_t i = 0; i < l.vars.size(); ++i)
            for (size_t j = 0; j < r.vars.size(); ++j) {
                SVarType t = (l.vars[i].type == SVarType::CutOnly ||
                              r.vars[j].type == SVarType::CutOnly)
                                 ? SVarType::CutOnly
                                 : SVarType::General;
                SVar x{fresh.next(), t};
                l_parts[i].push_back(x);
                r_parts[j].push_back(x);
            }
        bool ok = true;
        for (size_t i = 0; i < l.vars.size() && ok; ++i) {
            SExpr val = sexpr(l_parts[i], st.into_lvar[i]);
            val = subst(sub, val);
            if (l.vars[i].type == SVarType::CutOnly && !cutonly_ok(val)) ok = false;
            if (sub.has_s(l.vars[i].name)) ok = false;  // cannot rebind
            sub.s[l.vars[i].name] = val;
        }
        for (size_t j = 0; j < r.vars.size() && ok; ++j) {
            SExpr val = sexpr(r_parts[j], st.into_rvar[j]);
            val = subst(sub, val);
            if (r.vars[j].type == SVarType::CutOnly && !cutonly_ok(val)) ok = false;
            if (sub.has_s(r.vars[j].name)) ok = false;
            sub.s[r.vars[j].name] = val;
        }
        if (!ok) continue;
        // final check: mapped expressions must now coincide
        if (!(subst(sub, l0) == subst(sub, r0))) continue;
        out.push_back(std::move(sub));
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commutation generation

struct Commutation {
    ABProof ab;   // root beta, uppers alpha
    ABProof ba;   // root alpha, uppers beta
    ARule rule;   // the common derived pure rule (collapsed)
    std::string canon;

    bool local() const { return ab.non_repeating() && ba.non_repeating(); }
};

namespace detail {

inline ARule rename_rule(const ARule& r, int inst) {
    // suffix every variable with the instance id
    auto sfx = [&](const std::string& n) { return n + "_" + std::to_string(inst); };
    Renaming rn;
    std::set<SVar> svars;
    std::map<std::string, int> fpos, fneg;
    auto collect = [&](const SExpr& e) {
        for (const SVar& v : e.vars) svars.insert(v);
        for (const FExprP& f : e.formulas) fexpr_vars(f, fpos, fneg);
    };
    collect(r.concl);
    for (const SExpr& p : r.premises) collect(p);
    for (const SVar& v : svars) rn.s[v.name] = sfx(v.name);
    for (auto& [n, c] : fpos) {
        (void)c;
        rn.f[n] = {sfx(n), false};
    }
    for (auto& [n, c] : fneg) {
        (void)c;
        rn.f.emplace(n, std::make_pair(sfx(n), false));
    }
    return ren(rn, r);
}

// canonicalisation: rename variables by refinement colouring, breaking
// remaining ties by trying every permutation and keeping the least string
struct CanonInput {
    const ARule* rule;
    const ABProof* p1;
    const ABProof* p2;  // may be null
};

inline std::string canon_string(const CanonInput& in, const Renaming& rn) {
    ARule r = ren(rn, *in.rule);
    r = collapse(r);
    std::string s = r.to_string();
    if (in.p1) s += " || " + ren(rn, *in.p1).to_string();
    if (in.p2) s += " || " + ren(rn, *in.p2).to_string();
    return s;
}

inline std::string canonicalise(const CanonInput& in, std::vector<Renaming>* all_best = nullptr) {
    // collect variables over the rule and the attached proofs
    std::set<SVar> svars;
    std::map<std::string, int> fpos, fneg;
    auto collect = [&](const SExpr& e) {
        for (const SVar& v : e.vars) svars.insert(v);
        for (const FExprP& f : e.formulas) fexpr_vars(f, fpos, fneg);
    };
    collect(in.rule->concl);
    for (const SExpr& p : in.rule->premises) collect(p);
    for (const ABProof* pr : {in.p1, in.p2}) {
        if (!pr) continue;
        collect(pr->concl);
        for (auto& c : pr->children) {
            collect(c.label);
            for (auto& h : c.hyps) collect(h);
        }
    }
    std::set<std::string> fvars;
    for (auto& [n, c] : fpos) {
        (void)c;
        fvars.insert(n);
    }
    for (auto& [n, c] : fneg) {
        (void)c;
        fvars.insert(n);
    }

    // phase 1: formula variables, grouped by a name-free occurrence
    // signature over the rule
    auto fsig = [&](const std::string& name) {
        auto count_in = [&](const SExpr& e) {
            std::map<std::string, int> p, n;
            for (const FExprP& f : e.formulas) fexpr_vars(f, p, n);
            return p[name] + 2 * n[name];
        };
        std::string sig = "c" + std::to_string(count_in(in.rule->concl));
        std::vector<int> prem;
        for (const SExpr& p : in.rule->premises) prem.push_back(count_in(p));
        std::sort(prem.begin(), prem.end());
        for (int k : prem) sig += "|" + std::to_string(k);
        return sig;
    };
    std::map<std::string, std::vector<std::string>> fgroups_map;
    for (const std::string& n : fvars) fgroups_map[fsig(n)].push_back(n);
    std::vector<std::vector<std::string>> fgroups;
    for (auto& [sig, g] : fgroups_map) {
        (void)sig;
        fgroups.push_back(g);
    }

    std::string best;
    std::vector<Renaming> best_subs;

    std::function<void(size_t, Renaming&)> assign_f = [&](size_t fi, Renaming& cur) {
        if (fi < fgroups.size()) {
            std::vector<std::string> perm = fgroups[fi];
            std::sort(perm.begin(), perm.end());
            int base = 0;
            for (size_t k = 0; k < fi; ++k) base += static_cast<int>(fgroups[k].size());
            do {
                for (uint32_t flips = 0; flips < (1u << perm.size()); ++flips) {
                    Renaming next = cur;
                    for (size_t k = 0; k < perm.size(); ++k)
                        next.f[perm[k]] = {"F" + std::to_string(base + static_cast<int>(k)),
                                           ((flips >> k) & 1u) != 0};
                    assign_f(fi + 1, next);
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        // phase 2: sequent variables, signatures computed with formula
        // variables already renamed, which pins each premise down
        auto premise_fingerprint = [&](const SExpr& p) {
            SExpr rp = ren(cur, p);
            std::string fp;
            for (const FExprP& f : rp.formulas) fp += fexpr_str(f) + ",";
            return fp;
        };
        auto ssig = [&](const SVar& v) {
            std::string sig = v.type == SVarType::CutOnly ? "c|" : "g|";
            int concl_count = 0;
            for (const SVar& w : in.rule->concl.vars)
                if (w.name == v.name) ++concl_count;
            sig += std::to_string(concl_count);
            std::vector<std::string> prem;
            for (const SExpr& p : in.rule->premises) {
                int k = 0;
                for (const SVar& w : p.vars)
                    if (w.name == v.name) ++k;
                if (k) prem.push_back(std::to_string(k) + "@" + premise_fingerprint(p));
            }
            std::sort(prem.begin(), prem.end());
            for (auto& t : prem) sig += "|" + t;
            return sig;
        };
        std::map<std::string, std::vector<SVar>> sgroups_map;
        for (const SVar& v : svars) sgroups_map[ssig(v)].push_back(v);
        std::vector<std::vector<SVar>> sgroups;
        for (auto& [sig, g] : sgroups_map) {
            (void)sig;
            sgroups.push_back(g);
        }
        std::function<void(size_t, Renaming&)> assign_s = [&](size_t si, Renaming& scur) {
            if (si == sgroups.size()) {
                std::string str = canon_string(in, scur);
                if (best.empty() || str < best) {
                    best = str;
                    best_subs = {scur};
                } else if (str == best && all_best) {
                    best_subs.push_back(scur);
                }
                return;
            }
            std::vector<SVar> perm = sgroups[si];
            std::sort(perm.begin(), perm.end());
            int base = 0;
            for (size_t k = 0; k < si; ++k) base += static_cast<int>(sgroups[k].size());
            do {
                Renaming next = scur;
                for (size_t k = 0; k < perm.size(); ++k)
                    next.s[perm[k].name] = "S" + std::to_string(base + static_cast<int>(k));
                assign_s(si + 1, next);
            } while (std::next_permutation(perm.begin(), perm.end()));
        };
        assign_s(0, cur);
    };
    Renaming empty;
    assign_f(0, empty);
    if (all_best) *all_best = best_subs;
    return best;
}

}  // namespace detail

namespace detail {

// Specialisations of a proof that make one pair of its hypotheses
// coincide, so that the collapse of the derived rule identifies them.
// These are what turn the duplicated-subproof commutations (with over
// tensor, mix, cut) into pairs of proofs deriving the same pure rule; no
// table entry identifies more than one pair.
inline void expand_identifications(const ABProof& p, FreshNames& fresh,
                                   std::vector<ABProof>& out) {
    out.push_back(p);
    std::vector<SExpr> hyps;
    for (const auto& c : p.children) {
        if (c.is_hyp) hyps.push_back(c.label);
        else
            for (const SExpr& h : c.hyps) hyps.push_back(h);
    }
    for (size_t i = 0; i < hyps.size(); ++i)
        for (size_t j = i + 1; j < hyps.size(); ++j) {
            if (hyps[i] == hyps[j]) continue;
            std::vector<Subst> subs;
            unify_s(hyps[i], hyps[j], Subst{}, fresh, subs);
            for (const Subst& s : subs) {
                ABProof q = subst(s, p);
                out.push_back(q);
                // identification typically leaves residual context
                // variables duplicated in the conclusion; the table
                // specialisations take them empty
                std::map<std::string, int> counts;
                for (const SVar& v : q.concl.vars) counts[v.name]++;
                Subst empty_dups;
                bool any = false;
                for (auto& [name, k] : counts)
                    if (k >= 2) {
                        empty_dups.s[name] = SExpr{};
                        any = true;
                    }
                if (any) out.push_back(subst(empty_dups, q));
            }
        }
}

}  // namespace detail

// All two-level proofs with root `beta` and uppers `alpha` over some
// nonempty subset of beta's premises, including hypothesis-identifying
// specialisations, filtered to those whose collapsed derived rule is pure.
inline std::vector<ABProof> ab_proofs(const ARule& alpha, const ARule& beta) {
    std::vector<ABProof> raw;
    detail::FreshNames fresh;
    ARule b = detail::rename_rule(beta, 0);
    const size_t m = b.premises.size();
    for (uint32_t mask = 1; mask < (1u << m); ++mask) {
        // the with-rule's shared context forces the upper rule into both
        // premises; everywhere else a commutation transposes a single
        // upper rule (larger packings compose from these)
        if (beta.name == "with") {
            if (mask != (1u << m) - 1) continue;
        } else {
            if (__builtin_popcount(mask) != 1) continue;
        }
        std::vector<Subst> subs{Subst{}};
        std::vector<ARule> alphas;
        bool dead = false;
        for (size_t i = 0; i < m && !dead; ++i) {
            if (!(mask & (1u << i))) continue;
            ARule a = detail::rename_rule(alpha, static_cast<int>(i) + 1);
            alphas.push_back(a);
            std::vector<Subst> next;
            for (const Subst& s : subs)
                detail::unify_s(b.premises[i], a.concl, s, fresh, next);
            subs = std::move(next);
            if (subs.empty()) dead = true;
        }
        if (dead) continue;
        for (const Subst& s : subs) {
            ABProof p;
            p.root_rule = b.name;
            p.concl = subst(s, b.concl);
            size_t ai = 0;
            for (size_t i = 0; i < m; ++i) {
                ABProof::Child c;
                c.label = subst(s, b.premises[i]);
                if (mask & (1u << i)) {
                    c.is_hyp = false;
                    c.rule = alphas[ai].name;
                    for (const SExpr& h : alphas[ai].premises) c.hyps.push_back(subst(s, h));
                    ++ai;
                } else {
                    c.is_hyp = true;
                }
                p.children.push_back(std::move(c));
            }
            raw.push_back(std::move(p));
        }
    }
    std::vector<ABProof> expanded;
    for (const ABProof& p : raw) detail::expand_identifications(p, fresh, expanded);
    std::vector<ABProof> out;
    std::set<std::string> seen;
    for (ABProof& p : expanded) {
        ARule d = collapse(p.derived());
        if (!is_pure(d)) continue;
        // premises are nonempty sequents in every system here
        bool empty_label = false;
        for (const auto& c : p.children) {
            if (c.label.vars.empty() && c.label.formulas.empty()) empty_label = true;
            for (const SExpr& h : c.hyps)
                if (h.vars.empty() && h.formulas.empty()) empty_label = true;
        }
        if (empty_label) continue;
        if (!seen.insert(p.to_string()).second) continue;
        out.push_back(std::move(p));
    }
    return out;
}

// Every rule commutation between alpha-rules and beta-rules: a pair of an
// alpha-beta-proof and a different beta-alpha-proof deriving the same pure
// rule, deduplicated up to variable renaming.
inline std::vector<Commutation> generate_commutations(const ARule& alpha, const ARule& beta) {
    std::vector<ABProof> abs = ab_proofs(alpha, beta);
    std::vector<ABProof> bas = ab_proofs(beta, alpha);

    std::vector<Commutation> out;
    std::set<std::string> seen;
    std::vector<std::pair<std::string, std::vector<Renaming>>> ab_canon(abs.size()),
        ba_canon(bas.size());
    std::vector<ARule> ab_rules, ba_rules;
    for (size_t i = 0; i < abs.size(); ++i) {
        ab_rules.push_back(collapse(abs[i].derived()));
        ab_canon[i].first = detail::canonicalise({&ab_rules[i], nullptr, nullptr}, &ab_canon[i].second);
    }
    for (size_t j = 0; j < bas.size(); ++j) {
        ba_rules.push_back(collapse(bas[j].derived()));
        ba_canon[j].first = detail::canonicalise({&ba_rules[j], nullptr, nullptr}, &ba_canon[j].second);
    }
    for (size_t i = 0; i < abs.size(); ++i) {
        for (size_t j = 0; j < bas.size(); ++j) {
            if (ab_canon[i].first != ba_canon[j].first) continue;
            for (const Renaming& rp : ab_canon[i].second) {
                ABProof pc = ren(rp, abs[i]);
                ARule dr = collapse(ren(rp, ab_rules[i]));
                for (const Renaming& rq : ba_canon[j].second) {
                    ABProof qc = ren(rq, bas[j]);
                    if (pc.to_string() == qc.to_string()) continue;  // same proof
                    std::string s1 = detail::canonicalise({&dr, &pc, &qc});
                    std::string s2 = detail::canonicalise({&dr, &qc, &pc});
                    std::string key = std::min(s1, s2);
                    if (!seen.insert(key).second) continue;
                    Commutation c;
                    c.ab = pc;
                    c.ba = qc;
                    c.rule = dr;
                    c.canon = key;
                    out.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

// The full catalogue for a system.
inline std::vector<Commutation> generate_catalogue(System system, bool mix) {
    std::vector<ARule> rules = system_rules(system, mix);
    std::vector<Commutation> out;
    std::set<std::string> seen;
    for (const ARule& a : rules)
        for (const ARule& b : rules)
            for (Commutation& c : generate_commutations(a, b)) {
                if (!seen.insert(c.canon).second) continue;
                out.push_back(std::move(c));
            }
    std::sort(out.begin(), out.end(),
              [](const Commutation& x, const Commutation& y) { return x.canon < y.canon; });
    return out;
}

// count of cut-only sequent variables bound by a commutation
inline int cutonly_var_count(const Commutation& c) {
    std::set<std::string> names;
    auto collect = [&](const SExpr& e) {
        for (const SVar& v : e.vars)
            if (v.type == SVarType::CutOnly) names.insert(v.name);
    };
    collect(c.ab.concl);
    for (auto& ch : c.ab.children) {
        collect(ch.label);
        for (auto& h : ch.hyps) collect(h);
    }
    return static_cast<int>(names.size());
}

// ---------------------------------------------------------------------------
// Validation against the hand catalogue

// family of a commutation: the two rule names with the plus sides folded
inline std::string family_key(const Commutation& c) {
    auto fold = [](std::string n) { return n == "plus1" || n == "plus2" ? "plus" : n; };
    std::string a = fold(c.ab.root_rule);
    std::string b;
    for (const auto& ch : c.ab.children)
        if (!ch.is_hyp) b = fold(ch.rule);
    if (b < a) std::swap(a, b);
    return a + "/" + b;
}

// The rule-commutation tables as data: per family, the number of entries
// up to variable renaming, counting the symmetric variants the captions
// declare (tensor orientation variants, plus-side variants).
inline std::map<std::string, int> expected_table_families(System system, bool mix) {
    std::map<std::string, int> out{
        {"parr/parr", 1}, {"plus/plus", 3},   {"tensor/tensor", 3}, {"with/with", 1},
        {"parr/plus", 2}, {"plus/with", 2},   {"parr/with", 1},     {"plus/tensor", 4},
        {"parr/tensor", 2}, {"tensor/with", 2},
    };
    if (mix) {
        out["mix/mix"] = 1;
        out["mix/tensor"] = 2;
        out["mix/plus"] = 2;
        out["mix/parr"] = 1;
        out["mix/with"] = 1;
    }
    if (system == System::MallStar) {
        out["starcut/starcut"] = 1;
        out["starcut/tensor"] = 2;
        out["plus/starcut"] = 2;
        out["parr/starcut"] = 1;
        out["starcut/with"] = 1;
        if (mix) out["mix/starcut"] = 1;
    }
    return out;
}

struct CatalogueDiff {
    std::vector<std::string> missing;   // families in the tables, not generated
    std::vector<std::string> extra;     // generated, not in the tables
    std::vector<std::string> mismatched;  // counts differ

    bool empty() const { return missing.empty() && extra.empty() && mismatched.empty(); }
    std::string to_string() const {
        if (empty()) return "catalogue matches the tables";
        std::string s;
        for (auto& m : missing) s += "missing: " + m + "\n";
        for (auto& e : extra) s += "extra: " + e + "\n";
        for (auto& m : mismatched) s += "count mismatch: " + m + "\n";
        return s;
    }
};

inline CatalogueDiff validate_against_tables(System system, bool mix) {
    std::map<std::string, int> got;
    for (const Commutation& c : generate_catalogue(system, mix)) got[family_key(c)]++;
    std::map<std::string, int> want = expected_table_families(system, mix);
    CatalogueDiff diff;
    for (auto& [fam, n] : want) {
        auto it = got.find(fam);
        if (it == got.end())
            diff.missing.push_back(fam);
        else if (it->second != n)
            diff.mismatched.push_back(fam + " (generated " + std::to_string(it->second) +
                                      ", tables " + std::to_string(n) + ")");
    }
    for (auto& [fam, n] : got) {
        (void)n;
        if (!want.count(fam)) diff.extra.push_back(fam);
    }
    return diff;
}

}  // namespace mallnet::abstract
