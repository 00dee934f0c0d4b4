#pragma once

// Formulas, sequents and occurrence addresses for unit-free MALL.
//
// A formula is an immutable tree: literals at the leaves, binary connectives
// inside.  The cut connective '#' may only appear at the root of a sequent
// formula and its two sides must be exact de Morgan duals; it is unordered,
// which we realise by sorting its sides into a fixed structural order.
//
// Surface syntax (ASCII):
//   atoms        identifiers        P, Q, foo
//   negated atom ~P                 (atoms only; duals of compound formulas
//                                    are computed, never written)
//   binary       *  |  &  +  #      tensor, par, with, plus, cut
//   parentheses required whenever operands are themselves binary; there is
//   no precedence.  A sequent is a comma-separated list of formulas.
//
// Occurrence addresses are (root index, path) pairs with the path a string
// over 'L'/'R'; the empty path prints as "-", e.g. "0:LR", "1:-".

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mallnet {

class mall_error : public std::runtime_error {
public:
    explicit mall_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public mall_error {
public:
    parse_error(const std::string& what, size_t pos)
        : mall_error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    size_t position;
};

enum class Conn : uint8_t { Atom, Tensor, Parr, With, Plus, Cut };

inline const char* conn_symbol(Conn c) {
    switch (c) {
        case Conn::Atom: return "";
        case Conn::Tensor: return "*";
        case Conn::Parr: return "|";
        case Conn::With: return "&";
        case Conn::Plus: return "+";
        case Conn::Cut: return "#";
    }
    return "?";
}

class Formula {
    struct Node {
        Conn conn;
        bool neg = false;       // literals only
        std::string atom;       // literals only
        std::shared_ptr<const Node> left, right;
        int leaf_count = 1;
    };
    std::shared_ptr<const Node> n_;

    explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

    static Formula binary(Conn c, const Formula& l, const Formula& r) {
        if (l.conn() == Conn::Cut || r.conn() == Conn::Cut)
            throw mall_error("cut formulas cannot be nested under a connective");
        auto n = std::make_shared<Node>();
        n->conn = c;
        n->left = l.n_;
        n->right = r.n_;
        n->leaf_count = l.leaf_count() + r.leaf_count();
        return Formula(std::move(n));
    }

public:
    Formula() = default;  // empty handle; only for containers
    bool valid() const { return n_ != nullptr; }

    static Formula atom(std::string name, bool negated = false) {
        auto n = std::make_shared<Node>();
        n->conn = Conn::Atom;
        n->atom = std::move(name);
        n->neg = negated;
        return Formula(std::move(n));
    }
    static Formula tensor(const Formula& l, const Formula& r) { return binary(Conn::Tensor, l, r); }
    static Formula parr(const Formula& l, const Formula& r) { return binary(Conn::Parr, l, r); }
    static Formula with(const Formula& l, const Formula& r) { return binary(Conn::With, l, r); }
    static Formula plus(const Formula& l, const Formula& r) { return binary(Conn::Plus, l, r); }

    // Cut A#B: requires B = A^perp, stores the two sides in structural order.
    static Formula cut(const Formula& l, const Formula& r);

    Conn conn() const { return n_->conn; }
    bool is_literal() const { return n_->conn == Conn::Atom; }
    bool is_cut() const { return n_->conn == Conn::Cut; }
    bool negated() const { assert(is_literal()); return n_->neg; }
    const std::string& atom_name() const { assert(is_literal()); return n_->atom; }
    Formula left() const { assert(!is_literal()); return Formula(n_->left); }
    Formula right() const { assert(!is_literal()); return Formula(n_->right); }
    Formula child(char side) const { return side == 'L' ? left() : right(); }
    int leaf_count() const { return n_->leaf_count; }

    friend int compare(const Formula& a, const Formula& b) {
        if (a.n_ == b.n_) return 0;
        if (a.conn() != b.conn()) return a.conn() < b.conn() ? -1 : 1;
        if (a.is_literal()) {
            if (a.atom_name() != b.atom_name()) return a.atom_name() < b.atom_name() ? -1 : 1;
            if (a.negated() != b.negated()) return a.negated() ? 1 : -1;
            return 0;
        }
        if (int c = compare(a.left(), b.left())) return c;
        return compare(a.right(), b.right());
    }
    friend bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
    friend bool operator!=(const Formula& a, const Formula& b) { return compare(a, b) != 0; }
    friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

    std::string to_string() const {
        if (is_literal()) return (negated() ? "~" : "") + atom_name();
        auto wrap = [](const Formula& f) {
            std::string s = f.to_string();
            return f.is_literal() ? s : "(" + s + ")";
        };
        return wrap(left()) + " " + conn_symbol(conn()) + " " + wrap(right());
    }
};

// De Morgan dual.  Rejects cut formulas: a cut has no dual.
inline Formula negate(const Formula& f) {
    switch (f.conn()) {
        case Conn::Atom: return Formula::atom(f.atom_name(), !f.negated());
        case Conn::Tensor: return Formula::parr(negate(f.left()), negate(f.right()));
        case Conn::Parr: return Formula::tensor(negate(f.left()), negate(f.right()));
        case Conn::With: return Formula::plus(negate(f.left()), negate(f.right()));
        case Conn::Plus: return Formula::with(negate(f.left()), negate(f.right()));
        case Conn::Cut: throw mall_error("a cut formula has no dual");
    }
    throw mall_error("bad connective");
}

inline Formula Formula::cut(const Formula& l, const Formula& r) {
    if (l.is_cut() || r.is_cut()) throw mall_error("cut formulas cannot be nested");
    if (negate(l) != r) throw mall_error("cut sides are not dual: " + l.to_string() + " # " + r.to_string());
    const Formula& a = l < r ? l : r;
    const Formula& b = l < r ? r : l;
    auto n = std::make_shared<Node>();
    n->conn = Conn::Cut;
    n->left = a.n_;
    n->right = b.n_;
    n->leaf_count = a.leaf_count() + b.leaf_count();
    return Formula(std::move(n));
}

// ---------------------------------------------------------------------------
// Addresses

struct OccAddr {
    int root = -1;
    std::string path;  // over 'L', 'R'

    friend bool operator==(const OccAddr& a, const OccAddr& b) { return a.root == b.root && a.path == b.path; }
    friend bool operator!=(const OccAddr& a, const OccAddr& b) { return !(a == b); }
    friend bool operator<(const OccAddr& a, const OccAddr& b) {
        if (a.root != b.root) return a.root < b.root;
        return a.path < b.path;
    }
    std::string to_string() const {
        return std::to_string(root) + ":" + (path.empty() ? "-" : path);
    }
    static OccAddr parse(const std::string& s) {
        auto colon = s.find(':');
        if (colon == std::string::npos) throw mall_error("bad address: " + s);
        OccAddr a;
        a.root = std::stoi(s.substr(0, colon));
        std::string p = s.substr(colon + 1);
        if (p != "-") {
            for (char c : p)
                if (c != 'L' && c != 'R') throw mall_error("bad address path: " + s);
            a.path = p;
        }
        return a;
    }
    bool is_prefix_of(const OccAddr& other) const {
        return root == other.root && other.path.size() >= path.size() &&
               other.path.compare(0, path.size(), path) == 0;
    }
};

// A leaf address resolves to a literal; structurally identical to OccAddr.
using LeafAddr = OccAddr;

// ---------------------------------------------------------------------------
// Sequents

class Sequent {
    std::vector<Formula> roots_;

public:
    Sequent() = default;
    explicit Sequent(std::vector<Formula> roots) : roots_(std::move(roots)) {}

    const std::vector<Formula>& roots() const { return roots_; }
    int size() const { return static_cast<int>(roots_.size()); }
    bool empty() const { return roots_.empty(); }
    const Formula& root(int i) const { return roots_.at(static_cast<size_t>(i)); }

    Formula at(const OccAddr& a) const {
        Formula f = root(a.root);
        for (char c : a.path) f = f.child(c);
        return f;
    }
    bool contains(const OccAddr& a) const {
        if (a.root < 0 || a.root >= size()) return false;
        Formula f = root(a.root);
        for (char c : a.path) {
            if (f.is_literal()) return false;
            f = f.child(c);
        }
        return true;
    }

    bool has_cut_root() const {
        for (const auto& f : roots_)
            if (f.is_cut()) return true;
        return false;
    }

    // Exact equality: same roots in the same stored order.
    friend bool operator==(const Sequent& a, const Sequent& b) {
        if (a.size() != b.size()) return false;
        for (int i = 0; i < a.size(); ++i)
            if (a.root(i) != b.root(i)) return false;
        return true;
    }
    friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }

    // Logical identity is the root multiset.
    bool multiset_eq(const Sequent& other) const {
        if (size() != other.size()) return false;
        std::vector<Formula> a = roots_, b = other.roots_;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return false;
        return true;
    }

    std::string to_string() const {
        std::string s;
        for (int i = 0; i < size(); ++i) {
            if (i) s += ", ";
            s += root(i).to_string();
        }
        return s;
    }

    int total_leaves() const {
        int n = 0;
        for (const auto& f : roots_) n += f.leaf_count();
        return n;
    }
};

// Depth-first, left-to-right, root-order leaf enumeration.
inline void for_each_leaf(const Formula& f, const std::string& prefix, int root,
                          const std::function<void(const LeafAddr&, const Formula&)>& fn) {
    if (f.is_literal()) {
        fn(LeafAddr{root, prefix}, f);
        return;
    }
    for_each_leaf(f.left(), prefix + "L", root, fn);
    for_each_leaf(f.right(), prefix + "R", root, fn);
}

inline std::vector<std::pair<LeafAddr, Formula>> leaves(const Sequent& s) {
    std::vector<std::pair<LeafAddr, Formula>> out;
    for (int i = 0; i < s.size(); ++i)
        for_each_leaf(s.root(i), "", i, [&](const LeafAddr& a, const Formula& f) { out.emplace_back(a, f); });
    return out;
}

// All vertex addresses of the sequent forest, in address order.
inline void for_each_vertex(const Formula& f, const std::string& prefix, int root,
                            const std::function<void(const OccAddr&, const Formula&)>& fn) {
    fn(OccAddr{root, prefix}, f);
    if (!f.is_literal()) {
        for_each_vertex(f.left(), prefix + "L", root, fn);
        for_each_vertex(f.right(), prefix + "R", root, fn);
    }
}

inline std::vector<std::pair<OccAddr, Formula>> vertices(const Sequent& s) {
    std::vector<std::pair<OccAddr, Formula>> out;
    for (int i = 0; i < s.size(); ++i)
        for_each_vertex(s.root(i), "", i, [&](const OccAddr& a, const Formula& f) { out.emplace_back(a, f); });
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class Parser {
    const std::string& s_;
    size_t i_ = 0;
    bool allow_cut_;

public:
    Parser(const std::string& s, bool allow_cut) : s_(s), allow_cut_(allow_cut) {}

    void skip_ws() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
    }
    bool at_end() {
        skip_ws();
        return i_ >= s_.size();
    }
    size_t pos() const { return i_; }

    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    void expect(char c) {
        skip_ws();
        if (i_ >= s_.size() || s_[i_] != c)
            throw parse_error(std::string("expected '") + c + "'", i_);
        ++i_;
    }

    std::string ident() {
        skip_ws();
        size_t start = i_;
        while (i_ < s_.size() && (isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\''))
            ++i_;
        if (i_ == start) throw parse_error("expected an atom name", i_);
        if (isdigit(static_cast<unsigned char>(s_[start]))) throw parse_error("atom names cannot start with a digit", start);
        return s_.substr(start, i_ - start);
    }

    Formula item() {
        char c = peek();
        if (c == '(') {
            expect('(');
            Formula f = formula(false);
            expect(')');
            return f;
        }
        if (c == '~') {
            expect('~');
            return Formula::atom(ident(), true);
        }
        return Formula::atom(ident());
    }

    std::optional<Conn> peek_op() {
        switch (peek()) {
            case '*': return Conn::Tensor;
            case '|': return Conn::Parr;
            case '&': return Conn::With;
            case '+': return Conn::Plus;
            case '#': return Conn::Cut;
            default: return std::nullopt;
        }
    }

    Formula formula(bool top_level) {
        Formula lhs = item();
        auto op = peek_op();
        if (!op) return lhs;
        size_t op_pos = pos();
        ++i_;  // consume operator
        if (*op == Conn::Cut) {
            if (!allow_cut_) throw parse_error("'#' cut formulas are only allowed in mall-star mode", op_pos);
            if (!top_level) throw parse_error("'#' may only occur at the top level of a sequent formula", op_pos);
        }
        Formula rhs = item();
        if (peek_op()) throw parse_error("mixed or chained operators need parentheses", pos());
        switch (*op) {
            case Conn::Tensor: return Formula::tensor(lhs, rhs);
            case Conn::Parr: return Formula::parr(lhs, rhs);
            case Conn::With: return Formula::with(lhs, rhs);
            case Conn::Plus: return Formula::plus(lhs, rhs);
            case Conn::Cut:
                try {
                    return Formula::cut(lhs, rhs);
                } catch (const mall_error& e) {
                    throw parse_error(e.what(), op_pos);
                }
            default: break;
        }
        throw parse_error("bad operator", op_pos);
    }

    Formula parse_formula() {
        Formula f = formula(true);
        if (!at_end()) throw parse_error("trailing input after formula", pos());
        return f;
    }

    Sequent parse_sequent() {
        std::vector<Formula> roots;
        roots.push_back(formula(true));
        while (peek() == ',') {
            expect(',');
            roots.push_back(formula(true));
        }
        if (!at_end()) throw parse_error("trailing input after sequent", pos());
        return Sequent(std::move(roots));
    }
};

}  // namespace detail

inline Formula parse_formula(const std::string& text, bool allow_cut = false) {
    return detail::Parser(text, allow_cut).parse_formula();
}

inline Sequent parse_sequent(const std::string& text, bool allow_cut = false) {
    return detail::Parser(text, allow_cut).parse_sequent();
}

}  // namespace mallnet
