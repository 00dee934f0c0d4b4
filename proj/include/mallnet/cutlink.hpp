#pragma once

// Cut linkings: every MALL proof yields a set of linkings each carrying
// its own multiset of cut pairs, collected per &-resolution from the
// surviving axioms and surviving cut rules.  The cut multiset is taken up
// to isomorphism, realised here by sorting the cuts into a canonical order
// derived from their formulas and induced link patterns.  On top of this
// sits the harness that compares cut-linking equality against
// commutation reachability over an exhaustive bounded corpus.

#include <variant>

#include "commute.hpp"
#include "enumerate.hpp"
#include "net.hpp"

namespace mallnet {

// One member of a cut linking set: the cut formulas appended after the
// conclusion roots, and a linking on the combined sequent.
struct CutLinking {
    std::vector<Formula> cuts;  // '#' formulas, canonical order
    Linking linking;            // on [conclusion roots..., cuts...]

    friend bool operator==(const CutLinking& a, const CutLinking& b) {
        return a.cuts == b.cuts && a.linking == b.linking;
    }
    friend bool operator<(const CutLinking& a, const CutLinking& b) {
        if (a.cuts != b.cuts) return a.cuts < b.cuts;
        return a.linking < b.linking;
    }
    std::string to_string() const {
        std::string s = "[";
        for (size_t i = 0; i < cuts.size(); ++i) {
            if (i) s += ", ";
            s += cuts[i].to_string();
        }
        return s + "] " + linking.to_string();
    }
};

struct CutLinkingSet {
    Sequent conclusion;
    std::vector<CutLinking> members;  // sorted, deduplicated

    friend bool operator==(const CutLinkingSet& a, const CutLinkingSet& b) {
        return a.conclusion == b.conclusion && a.members == b.members;
    }
    std::string to_string() const {
        std::string s = "[" + conclusion.to_string() + "] {";
        for (size_t i = 0; i < members.size(); ++i) {
            if (i) s += " ; ";
            s += members[i].to_string();
        }
        return s + "}";
    }
};

namespace detail {

// leaf destination while tracking down through a proof with cut rules
struct CutAddr {
    int cut_node;  // preorder index of the surviving cut rule
    char side;     // 'L' = the cut formula A, 'R' = its dual
    std::string path;
};
using Dest = std::variant<LeafAddr, CutAddr>;

struct CutResolutionWalk {
    // per resolution: surviving axiom node paths and cut node paths
    struct Item {
        std::vector<std::vector<int>> axes;
        std::vector<std::vector<int>> cuts;
    };
    std::vector<Item> items;

    void walk(const Proof& p, std::vector<int>& pos, Item cur) {
        switch (p.rule().rule) {
            case Rule::Ax:
                cur.axes.push_back(pos);
                items.push_back(std::move(cur));
                return;
            case Rule::With:
                for (int k = 0; k < 2; ++k) {
                    Item copy = cur;
                    pos.push_back(k);
                    walk(p.premise(k), pos, std::move(copy));
                    pos.pop_back();
                }
                return;
            default: {
                if (p.rule().rule == Rule::Cut) cur.cuts.push_back(pos);
                // sequence premises, threading the accumulator
                std::vector<Item> acc{std::move(cur)};
                for (size_t k = 0; k < p.premises().size(); ++k) {
                    std::vector<Item> next;
                    for (Item& a : acc) {
                        CutResolutionWalk sub;
                        pos.push_back(static_cast<int>(k));
                        sub.walk(p.premise(static_cast<int>(k)), pos, std::move(a));
                        pos.pop_back();
                        for (auto& s : sub.items) next.push_back(std::move(s));
                    }
                    acc = std::move(next);
                }
                for (auto& a : acc) items.push_back(std::move(a));
                return;
            }
        }
    }
};

inline const Proof& node_at_pos(const Proof& p, const std::vector<int>& pos, size_t upto) {
    const Proof* cur = &p;
    for (size_t i = 0; i < upto; ++i) cur = &cur->premise(pos[i]);
    return *cur;
}

// track an axiom leaf down to the conclusion or into a surviving cut
inline Dest track_to_dest(const Proof& p, const std::vector<int>& ax_pos, int leaf_root,
                          const std::map<std::string, int>& cut_index) {
    Dest d = LeafAddr{leaf_root, ""};
    for (size_t k = ax_pos.size(); k-- > 0;) {
        if (!std::holds_alternative<LeafAddr>(d)) break;
        const Proof& node = node_at_pos(p, ax_pos, k);
        auto origins = premise_of(node.conclusion(), node.rule(), ax_pos[k]).second;
        LeafAddr cur = std::get<LeafAddr>(d);
        const RootOrigin& o = origins.at(static_cast<size_t>(cur.root));
        if (o.kind == RootOrigin::Ctx) {
            d = LeafAddr{o.concl_root, cur.path};
        } else if (o.kind == RootOrigin::Child) {
            d = LeafAddr{node.rule().principal, o.side + cur.path};
        } else {
            // entered a cut formula: identify the cut node by its path
            std::string key;
            for (size_t i = 0; i < k; ++i) key += std::to_string(ax_pos[i]) + ".";
            d = CutAddr{cut_index.at(key), o.side, cur.path};
        }
    }
    return d;
}

}  // namespace detail

inline CutLinkingSet cut_linkings(const Proof& p) {
    detail::CutResolutionWalk walk;
    std::vector<int> pos;
    walk.walk(p, pos, {});

    const Sequent& gamma = p.conclusion();
    std::vector<CutLinking> members;

    for (const auto& item : walk.items) {
        // index surviving cut nodes by path
        std::map<std::string, int> cut_index;
        std::vector<Formula> cut_formulas;
        for (const auto& cpos : item.cuts) {
            std::string key;
            for (int i : cpos) key += std::to_string(i) + ".";
            cut_index[key] = static_cast<int>(cut_formulas.size());
            const Proof& node = detail::node_at_pos(p, cpos, cpos.size());
            Formula a = node.rule().cut_formula;
            cut_formulas.push_back(Formula::cut(a, negate(a)));
        }

        // raw links with symbolic cut tokens
        struct End {
            bool is_cut;
            LeafAddr leaf;       // !is_cut
            int cut;             // is_cut
            std::string path;    // within the cut formula, prefixed by side
        };
        std::vector<std::pair<End, End>> raw;
        for (const auto& apos : item.axes) {
            End ends[2];
            for (int lr = 0; lr < 2; ++lr) {
                detail::Dest d = detail::track_to_dest(p, apos, lr, cut_index);
                if (std::holds_alternative<LeafAddr>(d)) {
                    ends[lr] = End{false, std::get<LeafAddr>(d), -1, ""};
                } else {
                    auto c = std::get<detail::CutAddr>(d);
                    ends[lr] = End{true, {}, c.cut_node, std::string(1, c.side) + c.path};
                }
            }
            raw.push_back({ends[0], ends[1]});
        }

        // canonical order of the cuts: refine by formula, then by induced
        // link pattern; try all orders within remaining ties and keep the
        // least materialisation
        int ncuts = static_cast<int>(cut_formulas.size());
        std::vector<int> order(static_cast<size_t>(ncuts));
        for (int i = 0; i < ncuts; ++i) order[static_cast<size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return cut_formulas[static_cast<size_t>(x)] < cut_formulas[static_cast<size_t>(y)];
        });

        auto materialise = [&](const std::vector<int>& ord) {
            std::vector<int> slot(static_cast<size_t>(ncuts));
            for (int i = 0; i < ncuts; ++i) slot[static_cast<size_t>(ord[static_cast<size_t>(i)])] = i;
            std::vector<Link> links;
            auto addr_of = [&](const End& e) {
                if (!e.is_cut) return e.leaf;
                return LeafAddr{gamma.size() + slot[static_cast<size_t>(e.cut)], e.path};
            };
            for (auto& [x, y] : raw) links.emplace_back(addr_of(x), addr_of(y));
            CutLinking m;
            for (int i = 0; i < ncuts; ++i)
                m.cuts.push_back(cut_formulas[static_cast<size_t>(ord[static_cast<size_t>(i)])]);
            m.linking = Linking(std::move(links));
            return m;
        };

        // permute within equal-formula groups, keep the least result
        std::vector<std::pair<size_t, size_t>> groups;
        for (size_t i = 0; i < order.size();) {
            size_t j = i;
            while (j < order.size() &&
                   cut_formulas[static_cast<size_t>(order[j])] ==
                       cut_formulas[static_cast<size_t>(order[i])])
                ++j;
            groups.push_back({i, j});
            i = j;
        }
        CutLinking best = materialise(order);
        std::function<void(size_t, std::vector<int>&)> try_orders = [&](size_t gi, std::vector<int>& ord) {
            if (gi == groups.size()) {
                CutLinking cand = materialise(ord);
                if (cand < best) best = cand;
                return;
            }
            auto [lo, hi] = groups[gi];
            std::vector<int> seg(ord.begin() + static_cast<long>(lo), ord.begin() + static_cast<long>(hi));
            std::sort(seg.begin(), seg.end());
            do {
                for (size_t k = lo; k < hi; ++k) ord[k] = seg[k - lo];
                try_orders(gi + 1, ord);
            } while (std::next_permutation(seg.begin(), seg.end()));
        };
        bool has_tie = false;
        for (auto& [lo, hi] : groups)
            if (hi - lo > 1) has_tie = true;
        if (has_tie) {
            std::vector<int> ord = order;
            try_orders(0, ord);
        }
        members.push_back(std::move(best));
    }

    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    return CutLinkingSet{gamma, std::move(members)};
}

// ---------------------------------------------------------------------------
// Conjecture harness

struct ConjectureReport {
    struct PerSequent {
        Sequent sequent;
        size_t proofs = 0;
        size_t comm_classes = 0;
        size_t cutlink_classes = 0;
        std::vector<std::pair<std::string, std::string>> direction_a_violations;
        // candidate counterexamples: representatives of distinct commutation
        // classes sharing a cut linking set
        std::vector<std::pair<std::string, std::string>> candidates;
    };
    std::vector<PerSequent> rows;
    size_t total_proofs = 0;
    size_t total_edges = 0;

    bool direction_a_clean() const {
        for (const auto& r : rows)
            if (!r.direction_a_violations.empty()) return false;
        return true;
    }
    size_t candidate_count() const {
        size_t n = 0;
        for (const auto& r : rows) n += r.candidates.size();
        return n;
    }

    std::string summary_line() const {
        return "conjecture: proofs=" + std::to_string(total_proofs) +
               " edges=" + std::to_string(total_edges) +
               " direction-a-violations=" + std::to_string(direction_a_clean() ? 0 : 1) +
               " candidates=" + std::to_string(candidate_count());
    }
};

// Checks, over every sequent's exhaustive bounded proof set:
//   (a) proofs one commutation apart have equal cut linking sets, and
//   (b) flags pairs with equal cut linking sets that the bounded move
//       closure fails to connect (candidate counterexamples, not errors).
inline ConjectureReport conjecture_harness(const std::vector<Sequent>& sequents,
                                           const EnumOptions& opt, int max_nodes) {
    ConjectureReport rep;
    MoveEngine eng;
    ProofEnumerator en(opt);
    for (const Sequent& s : sequents) {
        std::vector<Proof> ps = en.proofs(s, max_nodes);
        if (ps.empty()) continue;
        ConjectureReport::PerSequent row;
        row.sequent = s;
        row.proofs = ps.size();
        rep.total_proofs += ps.size();

        std::map<std::string, int> index;
        for (size_t i = 0; i < ps.size(); ++i) index[ps[i].serialize()] = static_cast<int>(i);
        std::vector<int> parent(ps.size());
        for (size_t i = 0; i < ps.size(); ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<size_t>(x)] != x) {
                parent[static_cast<size_t>(x)] =
                    parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
                x = parent[static_cast<size_t>(x)];
            }
            return x;
        };

        std::vector<CutLinkingSet> cls;
        cls.reserve(ps.size());
        for (const Proof& p : ps) cls.push_back(cut_linkings(p));

        for (size_t i = 0; i < ps.size(); ++i) {
            for (const Move& m : eng.applicable(ps[i])) {
                auto res = eng.try_move(ps[i], m);
                if (!res) continue;
                ++rep.total_edges;
                // direction (a): one commutation keeps the cut linking set
                if (!(cut_linkings(res->result) == cls[i]))
                    row.direction_a_violations.push_back(
                        {ps[i].serialize(), res->result.serialize()});
                auto it = index.find(res->result.serialize());
                if (it != index.end())
                    parent[static_cast<size_t>(find(static_cast<int>(i)))] = find(it->second);
            }
        }

        std::map<int, std::vector<int>> comm_classes;
        for (size_t i = 0; i < ps.size(); ++i)
            comm_classes[find(static_cast<int>(i))].push_back(static_cast<int>(i));
        row.comm_classes = comm_classes.size();

        std::map<std::string, std::vector<int>> cl_classes;
        for (size_t i = 0; i < ps.size(); ++i)
            cl_classes[cls[i].to_string()].push_back(static_cast<int>(i));
        row.cutlink_classes = cl_classes.size();

        for (auto& [key, ids] : cl_classes) {
            (void)key;
            std::set<int> roots;
            for (int i : ids) roots.insert(find(i));
            if (roots.size() > 1) {
                // one candidate pair per split class
                int first = *roots.begin();
                for (int r : roots)
                    if (r != first)
                        row.candidates.push_back({ps[static_cast<size_t>(first)].serialize(),
                                                  ps[static_cast<size_t>(r)].serialize()});
            }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace mallnet
