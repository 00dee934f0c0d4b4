#pragma once

// Deterministic generation of small sequent families and their exhaustive
// proof sets, used by the verification harnesses.  Families are cut down
// by a symmetry quotient (atom permutations composed with per-atom
// polarity flips map proofs to proofs and nets to nets bijectively), and
// by the same pairability prune the enumerator applies.

#include "enumerate.hpp"

namespace mallnet {

struct CorpusSpec {
    std::vector<std::string> atoms{"P", "Q"};
    int max_formula_leaves = 3;
    int max_roots = 3;
    int max_total_leaves = 6;
    int max_nodes = 8;
    bool dedup_symmetry = true;
};

// All cut-free formulas over the given atoms with exactly `n` leaves.
inline const std::vector<Formula>& formulas_with_leaves(const std::vector<std::string>& atoms, int n) {
    static std::map<std::string, std::vector<std::vector<Formula>>> cache;
    std::string key;
    for (auto& a : atoms) key += a + ",";
    auto& table = cache[key];
    while (static_cast<int>(table.size()) <= n) {
        int k = static_cast<int>(table.size());
        std::vector<Formula> fs;
        if (k == 1) {
            for (const auto& a : atoms) {
                fs.push_back(Formula::atom(a));
                fs.push_back(Formula::atom(a, true));
            }
        } else if (k > 1) {
            for (int l = 1; l < k; ++l)
                for (const Formula& lf : table[static_cast<size_t>(l)])
                    for (const Formula& rf : table[static_cast<size_t>(k - l)]) {
                        fs.push_back(Formula::tensor(lf, rf));
                        fs.push_back(Formula::parr(lf, rf));
                        fs.push_back(Formula::with(lf, rf));
                        fs.push_back(Formula::plus(lf, rf));
                    }
        }
        std::sort(fs.begin(), fs.end());
        table.push_back(std::move(fs));
    }
    return table[static_cast<size_t>(n)];
}

namespace detail {

// Literal renamings: a permutation of the atoms plus independent polarity
// flips.  They act leafwise on formulas and sequents.
inline Formula rename(const Formula& f, const std::map<std::string, std::pair<std::string, bool>>& m) {
    if (f.is_literal()) {
        auto& [name, flip] = m.at(f.atom_name());
        return Formula::atom(name, f.negated() != flip);
    }
    if (f.is_cut()) return Formula::cut(rename(f.left(), m), rename(f.right(), m));
    Formula l = rename(f.left(), m), r = rename(f.right(), m);
    switch (f.conn()) {
        case Conn::Tensor: return Formula::tensor(l, r);
        case Conn::Parr: return Formula::parr(l, r);
        case Conn::With: return Formula::with(l, r);
        case Conn::Plus: return Formula::plus(l, r);
        default: throw mall_error("rename: bad connective");
    }
}

inline std::vector<std::map<std::string, std::pair<std::string, bool>>> renamings(
    const std::vector<std::string>& atoms) {
    std::vector<std::string> sorted = atoms;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<std::string>> perms;
    std::vector<std::string> p = sorted;
    do {
        perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::map<std::string, std::pair<std::string, bool>>> out;
    for (const auto& perm : perms)
        for (uint32_t flips = 0; flips < (1u << atoms.size()); ++flips) {
            std::map<std::string, std::pair<std::string, bool>> m;
            for (size_t i = 0; i < sorted.size(); ++i)
                m[sorted[i]] = {perm[i], ((flips >> i) & 1u) != 0};
            out.push_back(std::move(m));
        }
    return out;
}

// Literal occurrence bitmask: bit 2*i is atom i positive, 2*i+1 negative.
inline uint32_t leaf_mask(const Formula& f, const std::map<std::string, int>& atom_idx) {
    if (f.is_literal())
        return 1u << (2 * atom_idx.at(f.atom_name()) + (f.negated() ? 1 : 0));
    return leaf_mask(f.left(), atom_idx) | leaf_mask(f.right(), atom_idx);
}

inline uint32_t dual_mask(uint32_t m) {
    uint32_t out = 0;
    for (int i = 0; i < 16; ++i) {
        if (m & (1u << (2 * i))) out |= 1u << (2 * i + 1);
        if (m & (1u << (2 * i + 1))) out |= 1u << (2 * i);
    }
    return out;
}

}  // namespace detail

// The sequent family of a corpus spec: root multisets (sorted stored order)
// over the formula tables, filtered by the pairability prune, one
// representative per symmetry class.
inline std::vector<Sequent> corpus_sequents(const CorpusSpec& spec) {
    std::vector<Formula> pool;
    for (int l = 1; l <= spec.max_formula_leaves && l <= spec.max_total_leaves; ++l)
        for (const Formula& f : formulas_with_leaves(spec.atoms, l)) pool.push_back(f);
    std::sort(pool.begin(), pool.end());

    std::map<std::string, int> atom_idx;
    for (size_t i = 0; i < spec.atoms.size(); ++i)
        atom_idx[spec.atoms[i]] = static_cast<int>(i);

    // per-formula precomputation: leaf masks and renamed serializations
    auto renamings = detail::renamings(spec.atoms);
    std::vector<uint32_t> masks(pool.size());
    std::vector<std::vector<std::string>> renamed(pool.size());
    for (size_t i = 0; i < pool.size(); ++i) {
        masks[i] = detail::leaf_mask(pool[i], atom_idx);
        if (spec.dedup_symmetry)
            for (const auto& m : renamings) renamed[i].push_back(detail::rename(pool[i], m).to_string());
    }

    std::vector<Sequent> out;
    std::set<std::string> seen;
    std::vector<size_t> chosen;

    auto emit = [&] {
        if (chosen.empty()) return;
        uint32_t mask = 0;
        for (size_t i : chosen) mask |= masks[i];
        if ((mask & detail::dual_mask(mask)) == 0) return;  // no dual leaf pair anywhere
        if (spec.dedup_symmetry) {
            std::string best;
            std::vector<std::string> parts(chosen.size());
            for (size_t r = 0; r < renamings.size(); ++r) {
                for (size_t k = 0; k < chosen.size(); ++k) parts[k] = renamed[chosen[k]][r];
                std::sort(parts.begin(), parts.end());
                std::string key;
                for (auto& s : parts) {
                    key += s;
                    key += ';';
                }
                if (best.empty() || key < best) best = std::move(key);
            }
            if (!seen.insert(best).second) return;
        }
        std::vector<Formula> roots;
        for (size_t i : chosen) roots.push_back(pool[i]);
        out.push_back(Sequent(std::move(roots)));
    };

    std::function<void(size_t, int)> rec = [&](size_t from, int leaves_left) {
        emit();
        if (static_cast<int>(chosen.size()) >= spec.max_roots) return;
        for (size_t i = from; i < pool.size(); ++i) {
            if (pool[i].leaf_count() > leaves_left) continue;
            chosen.push_back(i);
            rec(i, leaves_left - pool[i].leaf_count());
            chosen.pop_back();
        }
    };
    rec(0, spec.max_total_leaves);
    return out;
}

// Run `fn` on every corpus sequent that has at least one proof, passing the
// exhaustive proof set.  Returns the total number of proofs visited.
template <typename Fn>
inline size_t for_each_corpus_proofset(const CorpusSpec& spec, const EnumOptions& opt, Fn&& fn) {
    ProofEnumerator en(opt);
    size_t total = 0;
    for (const Sequent& s : corpus_sequents(spec)) {
        std::vector<Proof> ps = en.proofs(s, spec.max_nodes);
        if (ps.empty()) continue;
        total += ps.size();
        fn(s, ps);
    }
    return total;
}

}  // namespace mallnet
