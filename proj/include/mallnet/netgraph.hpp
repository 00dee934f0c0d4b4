#pragma once

// The graph G_Lambda attached to a set of linkings Lambda on a sequent:
// the restriction of the sequent forest to vertices lying below a linked
// leaf, plus one edge per link, plus jump edges from the leaves of a link
// to every with-vertex the link depends on.  On top of it: toggling,
// dependency, connectivity, the three net properties checked per instance,
// and the separation predicate that licenses a root formula as a possible
// last rule.

#include <map>
#include <set>

#include "net.hpp"

namespace mallnet {

struct RestrictedForest {
    std::set<OccAddr> kept;

    bool contains(const OccAddr& a) const { return kept.count(a) != 0; }
};

// Vertices on the path from a root to each leaf that occurs in some link.
inline RestrictedForest restrict_forest(const Sequent& seq, const std::vector<Linking>& lambda) {
    RestrictedForest rf;
    auto keep_path = [&](const LeafAddr& leaf) {
        if (!seq.contains(leaf) || !seq.at(leaf).is_literal())
            throw mall_error("restrict: " + leaf.to_string() + " is not a leaf of the sequent");
        for (size_t k = 0; k <= leaf.path.size(); ++k)
            rf.kept.insert(OccAddr{leaf.root, leaf.path.substr(0, k)});
    };
    for (const Linking& lk : lambda)
        for (const Link& l : lk.links) {
            keep_path(l.a);
            keep_path(l.b);
        }
    return rf;
}

// With-vertices (any depth) both of whose argument subtrees survive the
// restriction to Lambda.
inline std::set<OccAddr> toggled(const Sequent& seq, const std::vector<Linking>& lambda) {
    RestrictedForest rf = restrict_forest(seq, lambda);
    std::set<OccAddr> out;
    for (auto& [addr, f] : vertices(seq)) {
        if (f.conn() != Conn::With) continue;
        if (rf.contains(OccAddr{addr.root, addr.path + "L"}) &&
            rf.contains(OccAddr{addr.root, addr.path + "R"}))
            out.insert(addr);
    }
    return out;
}

// A link depends on a with-vertex w if some pair of linkings in Lambda
// disagrees on the link and toggles w and nothing else.
inline bool depends(const Sequent& seq, const Link& a, const OccAddr& w,
                    const std::vector<Linking>& lambda) {
    for (size_t i = 0; i < lambda.size(); ++i) {
        if (!lambda[i].contains(a)) continue;
        for (size_t j = 0; j < lambda.size(); ++j) {
            if (lambda[j].contains(a)) continue;
            std::set<OccAddr> t = toggled(seq, {lambda[i], lambda[j]});
            if (t.size() == 1 && *t.begin() == w) return true;
        }
    }
    return false;
}

enum class EdgeKind : uint8_t { Forest, Link, Jump };

struct JumpGraph {
    Sequent sequent;
    RestrictedForest forest;
    // undirected edge list, deduplicated per kind, deterministically ordered
    std::vector<std::tuple<OccAddr, OccAddr, EdgeKind>> edges;
    std::map<OccAddr, std::vector<std::pair<OccAddr, EdgeKind>>> adj;

    bool has_vertex(const OccAddr& a) const { return forest.contains(a); }

    void add_edge(const OccAddr& a, const OccAddr& b, EdgeKind k) {
        edges.emplace_back(a, b, k);
    }
    void finish() {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (auto& [a, b, k] : edges) {
            adj[a].emplace_back(b, k);
            adj[b].emplace_back(a, k);
        }
    }

    // Connected component of `start`, optionally with one vertex removed.
    std::set<OccAddr> component(const OccAddr& start, const OccAddr* removed = nullptr) const {
        std::set<OccAddr> seen;
        if (removed && *removed == start) return seen;
        std::vector<OccAddr> todo{start};
        seen.insert(start);
        while (!todo.empty()) {
            OccAddr v = todo.back();
            todo.pop_back();
            auto it = adj.find(v);
            if (it == adj.end()) continue;
            for (auto& [w, k] : it->second) {
                (void)k;
                if (removed && *removed == w) continue;
                if (seen.insert(w).second) todo.push_back(w);
            }
        }
        return seen;
    }

    bool connected() const {
        if (forest.kept.empty()) return true;
        return component(*forest.kept.begin()).size() == forest.kept.size();
    }

    bool path_between(const OccAddr& a, const OccAddr& b) const {
        if (!has_vertex(a) || !has_vertex(b)) return false;
        return component(a).count(b) != 0;
    }

    // Is there a simple cycle through v?  Remove v; if two of its incident
    // edges lead into the same remaining component (counting parallel
    // edges separately), v closes a cycle.
    bool cycle_through(const OccAddr& v) const {
        auto it = adj.find(v);
        if (it == adj.end() || it->second.size() < 2) return false;
        std::vector<OccAddr> nbrs;
        for (auto& [w, k] : it->second) {
            (void)k;
            nbrs.push_back(w);
        }
        // parallel edges (same neighbour twice through different kinds)
        std::map<OccAddr, int> mult;
        for (const OccAddr& w : nbrs)
            if (++mult[w] >= 2) return true;
        for (size_t i = 0; i < nbrs.size(); ++i) {
            std::set<OccAddr> comp = component(nbrs[i], &v);
            for (size_t j = i + 1; j < nbrs.size(); ++j)
                if (comp.count(nbrs[j])) return true;
        }
        return false;
    }
};

inline JumpGraph build_graph(const Sequent& seq, const std::vector<Linking>& lambda) {
    JumpGraph g;
    g.sequent = seq;
    g.forest = restrict_forest(seq, lambda);

    for (const OccAddr& v : g.forest.kept)
        if (!v.path.empty()) {
            OccAddr parent{v.root, v.path.substr(0, v.path.size() - 1)};
            g.add_edge(parent, v, EdgeKind::Forest);
        }

    std::set<Link> all_links;
    for (const Linking& lk : lambda)
        for (const Link& l : lk.links) all_links.insert(l);
    for (const Link& l : all_links) g.add_edge(l.a, l.b, EdgeKind::Link);

    // jump edges; toggle reports per linking pair are shared across links
    std::vector<std::set<OccAddr>> pair_toggle;
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < lambda.size(); ++i)
        for (size_t j = i + 1; j < lambda.size(); ++j) {
            pairs.emplace_back(i, j);
            pair_toggle.push_back(toggled(seq, {lambda[i], lambda[j]}));
        }
    for (const Link& l : all_links) {
        std::set<OccAddr> targets;
        for (size_t k = 0; k < pairs.size(); ++k) {
            if (pair_toggle[k].size() != 1) continue;
            bool in_i = lambda[pairs[k].first].contains(l);
            bool in_j = lambda[pairs[k].second].contains(l);
            if (in_i != in_j) targets.insert(*pair_toggle[k].begin());
        }
        for (const OccAddr& w : targets) {
            g.add_edge(l.a, w, EdgeKind::Jump);
            g.add_edge(l.b, w, EdgeKind::Jump);
        }
    }
    g.finish();
    return g;
}

inline JumpGraph build_graph(const LinkingSet& theta) {
    return build_graph(theta.sequent, theta.linkings);
}

// ---------------------------------------------------------------------------
// The three per-instance properties of translated nets

struct NetPropertyReport {
    bool p1_toggle = true;       // any two linkings toggle some with-vertex
    bool p2_roots = true;        // every root vertex occurs in the graph
    bool p3_root_with = true;    // for every linking and root with-vertex, a
                                 // partner linking toggles exactly that vertex
    std::vector<std::string> witnesses;

    bool all() const { return p1_toggle && p2_roots && p3_root_with; }
};

inline NetPropertyReport check_net_properties(const LinkingSet& theta) {
    if (theta.linkings.empty()) throw mall_error("check_net_properties: empty linking set");
    NetPropertyReport rep;
    const Sequent& seq = theta.sequent;
    const auto& ls = theta.linkings;

    for (size_t i = 0; i < ls.size(); ++i)
        for (size_t j = i + 1; j < ls.size(); ++j)
            if (toggled(seq, {ls[i], ls[j]}).empty()) {
                rep.p1_toggle = false;
                rep.witnesses.push_back("P1: linkings " + std::to_string(i) + " and " +
                                        std::to_string(j) + " toggle nothing");
            }

    RestrictedForest rf = restrict_forest(seq, ls);
    for (int r = 0; r < seq.size(); ++r)
        if (!rf.contains(OccAddr{r, ""})) {
            rep.p2_roots = false;
            rep.witnesses.push_back("P2: root " + std::to_string(r) + " does not occur");
        }

    for (int r = 0; r < seq.size(); ++r) {
        if (seq.root(r).conn() != Conn::With) continue;
        OccAddr w{r, ""};
        for (size_t i = 0; i < ls.size(); ++i) {
            bool found = false;
            for (size_t j = 0; j < ls.size() && !found; ++j) {
                if (i == j) continue;
                std::set<OccAddr> t = toggled(seq, {ls[i], ls[j]});
                if (t.size() == 1 && *t.begin() == w) found = true;
            }
            if (!found) {
                rep.p3_root_with = false;
                rep.witnesses.push_back("P3: linking " + std::to_string(i) +
                                        " has no partner toggling only root " + std::to_string(r));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Separation

// A compound root formula A1 alpha A2 separates theta when
//   (i)   alpha is par or with,
//   (ii)  alpha is plus and one argument is absent from the graph, or
//   (iii) alpha is tensor or cut and the graph has no cycle through it.
inline bool separates(const Sequent& seq, int root, const LinkingSet& theta,
                      const JumpGraph* prebuilt = nullptr) {
    if (seq != theta.sequent) throw mall_error("separates: sequent mismatch");
    if (root < 0 || root >= seq.size()) throw mall_error("separates: not a root");
    const Formula& f = seq.root(root);
    if (f.is_literal()) return false;
    if (f.conn() == Conn::Parr || f.conn() == Conn::With) return true;

    JumpGraph local;
    if (!prebuilt) local = build_graph(theta);
    const JumpGraph& g = prebuilt ? *prebuilt : local;
    if (f.conn() == Conn::Plus) {
        bool l = g.has_vertex(OccAddr{root, "L"});
        bool r = g.has_vertex(OccAddr{root, "R"});
        return !l || !r;
    }
    return !g.cycle_through(OccAddr{root, ""});  // tensor or cut
}

// ---------------------------------------------------------------------------
// DOT export: forest edges solid, link edges dashed, jump edges dotted.

inline std::string to_dot(const JumpGraph& g) {
    std::string out = "graph net {\n  node [shape=plaintext];\n";
    for (const OccAddr& v : g.forest.kept) {
        Formula f = g.sequent.at(v);
        std::string sym = f.is_literal() ? f.to_string() : conn_symbol(f.conn());
        out += "  \"" + v.to_string() + "\" [label=\"" + sym + " " + v.to_string() + "\"];\n";
    }
    for (auto& [a, b, k] : g.edges) {
        out += "  \"" + a.to_string() + "\" -- \"" + b.to_string() + "\"";
        if (k == EdgeKind::Link) out += " [style=dashed]";
        else if (k == EdgeKind::Jump) out += " [style=dotted]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace mallnet
