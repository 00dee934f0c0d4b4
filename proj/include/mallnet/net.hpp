#pragma once

// Linkings, linking sets, and the two equivalent translations from proofs
// to linking sets: the &-resolution route (delete one branch above each
// with-rule, track surviving axiom leaves down) and the inductive route
// (build the linking set bottom-up through the rules).  Both accept
// cut-free MALL and mall-star proofs; MALL proofs with the cut rule have
// no direct translation here (see cutlink.hpp).

#include <algorithm>
#include <map>

#include "proof.hpp"

namespace mallnet {

// A link: unordered pair of dual leaves, stored with the smaller address first.
struct Link {
    LeafAddr a, b;

    Link() = default;
    Link(LeafAddr x, LeafAddr y) {
        if (y < x) std::swap(x, y);
        a = x;
        b = y;
    }
    bool touches(const LeafAddr& l) const { return a == l || b == l; }
    LeafAddr other(const LeafAddr& l) const { return a == l ? b : a; }

    friend bool operator==(const Link& x, const Link& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Link& x, const Link& y) { return !(x == y); }
    friend bool operator<(const Link& x, const Link& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
    std::string to_string() const { return "{" + a.to_string() + ", " + b.to_string() + "}"; }
};

// A linking: canonically sorted set of links.
struct Linking {
    std::vector<Link> links;

    Linking() = default;
    explicit Linking(std::vector<Link> ls) : links(std::move(ls)) {
        std::sort(links.begin(), links.end());
        links.erase(std::unique(links.begin(), links.end()), links.end());
    }
    bool contains(const Link& l) const {
        return std::binary_search(links.begin(), links.end(), l);
    }
    bool touches_root(int root) const {
        for (const Link& l : links)
            if (l.a.root == root || l.b.root == root) return true;
        return false;
    }
    friend bool operator==(const Linking& x, const Linking& y) { return x.links == y.links; }
    friend bool operator!=(const Linking& x, const Linking& y) { return !(x == y); }
    friend bool operator<(const Linking& x, const Linking& y) { return x.links < y.links; }

    std::string to_string() const {
        std::string s = "{";
        for (size_t i = 0; i < links.size(); ++i) {
            if (i) s += ", ";
            s += links[i].to_string();
        }
        return s + "}";
    }
};

// Union of two linkings on disjoint leaf sets.
inline Linking merge(const Linking& x, const Linking& y) {
    std::vector<Link> ls = x.links;
    ls.insert(ls.end(), y.links.begin(), y.links.end());
    return Linking(std::move(ls));
}

// A candidate proof net: a set of linkings on a fixed sequent.
struct LinkingSet {
    Sequent sequent;
    std::vector<Linking> linkings;

    LinkingSet() = default;
    LinkingSet(Sequent s, std::vector<Linking> ls) : sequent(std::move(s)), linkings(std::move(ls)) {
        std::sort(linkings.begin(), linkings.end());
        linkings.erase(std::unique(linkings.begin(), linkings.end()), linkings.end());
    }
    size_t size() const { return linkings.size(); }

    std::string to_string() const {
        std::string s = "[" + sequent.to_string() + "] {";
        for (size_t i = 0; i < linkings.size(); ++i) {
            if (i) s += ", ";
            s += linkings[i].to_string();
        }
        return s + "}";
    }
};

// Exact net equality.  Asking it across different conclusions is a usage
// error, not `false`.
inline bool net_eq(const LinkingSet& a, const LinkingSet& b) {
    if (a.sequent != b.sequent)
        throw mall_error("net_eq: linking sets live on different sequents");
    return a.linkings == b.linkings;
}

// ---------------------------------------------------------------------------
// &-resolutions

// One branch choice per with-node that survives the deletions above it.
// Keys are node paths from the root ("" for the root, "0.1" for premise 1
// of premise 0 counted from zero).
struct AndResolution {
    std::map<std::string, char> choice;  // 'L' or 'R'
};

namespace detail {

inline std::string child_path(const std::string& p, int i) {
    return p.empty() ? std::to_string(i) : p + "." + std::to_string(i);
}

struct ResolutionAccum {
    AndResolution res;
    std::vector<std::string> ax_paths;
};

inline void resolutions_rec(const Proof& p, const std::string& path,
                            ResolutionAccum cur, std::vector<ResolutionAccum>& out);

// Extends each accumulator in `acc` with every resolution of premise i.
inline std::vector<ResolutionAccum> cross_with(const Proof& prem, const std::string& path,
                                               std::vector<ResolutionAccum> acc) {
    std::vector<ResolutionAccum> next;
    for (const auto& a : acc) {
        std::vector<ResolutionAccum> sub;
        resolutions_rec(prem, path, a, sub);
        for (auto& s : sub) next.push_back(std::move(s));
    }
    return next;
}

inline void resolutions_rec(const Proof& p, const std::string& path,
                            ResolutionAccum cur, std::vector<ResolutionAccum>& out) {
    switch (p.rule().rule) {
        case Rule::Ax:
            cur.ax_paths.push_back(path);
            out.push_back(std::move(cur));
            return;
        case Rule::With: {
            ResolutionAccum left = cur;
            left.res.choice[path] = 'L';
            resolutions_rec(p.premise(0), child_path(path, 0), std::move(left), out);
            ResolutionAccum right = std::move(cur);
            right.res.choice[path] = 'R';
            resolutions_rec(p.premise(1), child_path(path, 1), std::move(right), out);
            return;
        }
        default: {
            std::vector<ResolutionAccum> acc{std::move(cur)};
            for (size_t i = 0; i < p.premises().size(); ++i)
                acc = cross_with(p.premises()[i], child_path(path, static_cast<int>(i)), std::move(acc));
            for (auto& a : acc) out.push_back(std::move(a));
            return;
        }
    }
}

inline const Proof& node_at(const Proof& p, const std::vector<int>& pos) {
    const Proof* cur = &p;
    for (int i : pos) cur = &cur->premise(i);
    return *cur;
}

inline std::vector<int> parse_path(const std::string& path) {
    std::vector<int> out;
    if (path.empty()) return out;
    size_t i = 0;
    while (i < path.size()) {
        size_t j = path.find('.', i);
        if (j == std::string::npos) j = path.size();
        out.push_back(std::stoi(path.substr(i, j - i)));
        i = j + 1;
    }
    return out;
}

}  // namespace detail

// Every &-resolution together with the set of surviving axiom nodes.
inline std::vector<std::pair<AndResolution, std::vector<std::string>>> and_resolutions(const Proof& p) {
    std::vector<detail::ResolutionAccum> acc;
    detail::resolutions_rec(p, "", {}, acc);
    std::vector<std::pair<AndResolution, std::vector<std::string>>> out;
    out.reserve(acc.size());
    for (auto& a : acc) out.emplace_back(std::move(a.res), std::move(a.ax_paths));
    return out;
}

// ---------------------------------------------------------------------------
// Translation, route 1: &-resolutions plus downward leaf tracking

namespace detail {
inline void reject_mall_cut(const Proof& p) {
    if (p.uses_rule(Rule::Cut))
        throw mall_error("translation is defined for cut-free MALL and mall-star proofs only");
}
}  // namespace detail

inline LinkingSet translate_resolution(const Proof& p) {
    detail::reject_mall_cut(p);
    std::vector<Linking> linkings;
    for (const auto& [res, ax_paths] : and_resolutions(p)) {
        (void)res;
        std::vector<Link> links;
        for (const std::string& path : ax_paths) {
            std::vector<int> pos = detail::parse_path(path);
            // Track both axiom leaves down to the root conclusion.
            LeafAddr l0{0, ""}, l1{1, ""};
            for (size_t k = pos.size(); k-- > 0;) {
                std::vector<int> prefix(pos.begin(), pos.begin() + static_cast<long>(k));
                const Proof& node = detail::node_at(p, prefix);
                auto [prem, origins] = premise_of(node.conclusion(), node.rule(), pos[k]);
                (void)prem;
                auto m0 = track_down(node.rule(), origins, l0);
                auto m1 = track_down(node.rule(), origins, l1);
                if (!m0 || !m1) throw mall_error("translate: a leaf vanished while tracking down");
                l0 = *m0;
                l1 = *m1;
            }
            links.emplace_back(l0, l1);
        }
        linkings.push_back(Linking(std::move(links)));
    }
    return LinkingSet(p.conclusion(), std::move(linkings));
}

// ---------------------------------------------------------------------------
// Translation, route 2: bottom-up induction on the proof

namespace detail {

inline Linking map_linking(const Linking& lk, const RuleApp& app,
                           const std::vector<RootOrigin>& origins) {
    std::vector<Link> out;
    out.reserve(lk.links.size());
    for (const Link& l : lk.links) {
        auto a = track_down(app, origins, l.a);
        auto b = track_down(app, origins, l.b);
        if (!a || !b) throw mall_error("translate: a leaf vanished while tracking down");
        out.emplace_back(*a, *b);
    }
    return Linking(std::move(out));
}

inline std::vector<Linking> translate_rec(const Proof& p) {
    const RuleApp& app = p.rule();
    switch (app.rule) {
        case Rule::Ax:
            return {Linking({Link(LeafAddr{0, ""}, LeafAddr{1, ""})})};
        case Rule::Parr:
        case Rule::Plus1:
        case Rule::Plus2: {
            auto sub = translate_rec(p.premise(0));
            auto origins = premise_of(p.conclusion(), app, 0).second;
            for (auto& lk : sub) lk = map_linking(lk, app, origins);
            return sub;
        }
        case Rule::With: {
            auto lhs = translate_rec(p.premise(0));
            auto rhs = translate_rec(p.premise(1));
            auto o0 = premise_of(p.conclusion(), app, 0).second;
            auto o1 = premise_of(p.conclusion(), app, 1).second;
            std::vector<Linking> out;
            out.reserve(lhs.size() + rhs.size());
            for (auto& lk : lhs) out.push_back(map_linking(lk, app, o0));
            for (auto& lk : rhs) out.push_back(map_linking(lk, app, o1));
            std::sort(out.begin(), out.end());
            if (std::adjacent_find(out.begin(), out.end()) != out.end())
                throw std::logic_error("with: premises contributed a common linking");
            return out;
        }
        case Rule::Tensor:
        case Rule::StarCut:
        case Rule::Mix: {
            auto lhs = translate_rec(p.premise(0));
            auto rhs = translate_rec(p.premise(1));
            auto o0 = premise_of(p.conclusion(), app, 0).second;
            auto o1 = premise_of(p.conclusion(), app, 1).second;
            for (auto& lk : lhs) lk = map_linking(lk, app, o0);
            for (auto& lk : rhs) lk = map_linking(lk, app, o1);
            std::vector<Linking> out;
            out.reserve(lhs.size() * rhs.size());
            for (const auto& x : lhs)
                for (const auto& y : rhs) out.push_back(merge(x, y));
            return out;
        }
        case Rule::Cut:
            throw mall_error("translation is defined for cut-free MALL and mall-star proofs only");
    }
    throw mall_error("bad rule");
}

}  // namespace detail

inline LinkingSet translate_inductive(const Proof& p) {
    return LinkingSet(p.conclusion(), detail::translate_rec(p));
}

// Default translation.
inline LinkingSet translate(const Proof& p) { return translate_inductive(p); }

}  // namespace mallnet
