#pragma once

// File formats.  Sequents are plain text in the surface grammar.  Proofs,
// nets and traces are JSON with a fixed field layout; a proof file keeps
// the conclusion sequent in a header line followed by the rule tree, and
// premise sequents are never stored (they are recomputed on load).
//
//   .seq    P * Q, ~P, ~Q
//   .proof  line 1: the conclusion sequent
//           line 2+: {"rule": "tensor", "principal": "1:-",
//                     "split": {"0": 1, "2": 2},
//                     "superimpose": [[0, 0]],        (with, mall-star)
//                     "cut": "P",                     (cut rule only)
//                     "premises": [...]}
//   .net    {"sequent": "...", "linkings": [[["0:LL","1:R"], ...], ...]}
//   .trace  {"sequent": "...", "moves": [{"position": [0,1],
//            "target": "root"|"premise", "root": 2, "premise": 0,
//            "join": 0, "comm": "with/tensor"}, ...]}

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "net.hpp"
#include "rewrite.hpp"

namespace mallnet {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Proofs

namespace detail {

inline json proof_node_to_json(const Proof& p) {
    json j;
    const RuleApp& app = p.rule();
    j["rule"] = rule_name(app.rule);
    if (app.principal >= 0) j["principal"] = OccAddr{app.principal, ""}.to_string();
    if (app.rule == Rule::Cut) j["cut"] = app.cut_formula.to_string();
    json split = json::object();
    for (size_t i = 0; i < app.tags.size(); ++i) {
        if (app.tags[i] == RootTag::Left) split[std::to_string(i)] = 1;
        if (app.tags[i] == RootTag::Right) split[std::to_string(i)] = 2;
    }
    if (!split.empty()) j["split"] = split;
    if (app.rule == Rule::With && p.conclusion().has_cut_root()) {
        // superimposed cuts, as pairs of premise cut indices
        json sup = json::array();
        {
            auto [p1, o1] = premise_of(p.conclusion(), app, 0);
            auto [p2, o2] = premise_of(p.conclusion(), app, 1);
            std::map<int, int> cut_idx1, cut_idx2;  // conclusion root -> premise cut index
            int c1 = 0, c2 = 0;
            for (size_t i = 0; i < o1.size(); ++i)
                if (o1[i].kind == RootOrigin::Ctx && p1.root(static_cast<int>(i)).is_cut())
                    cut_idx1[o1[i].concl_root] = c1++;
            for (size_t i = 0; i < o2.size(); ++i)
                if (o2[i].kind == RootOrigin::Ctx && p2.root(static_cast<int>(i)).is_cut())
                    cut_idx2[o2[i].concl_root] = c2++;
            for (int r = 0; r < p.conclusion().size(); ++r)
                if (r != app.principal && p.conclusion().root(r).is_cut() &&
                    app.tags[static_cast<size_t>(r)] == RootTag::Shared)
                    sup.push_back({cut_idx1.at(r), cut_idx2.at(r)});
        }
        if (!sup.empty()) j["superimpose"] = sup;
    }
    json prems = json::array();
    for (const Proof& q : p.premises()) prems.push_back(proof_node_to_json(q));
    if (!prems.empty()) j["premises"] = prems;
    return j;
}

inline Proof proof_node_from_json(const json& j, const Sequent& concl) {
    RuleApp app;
    auto rn = rule_from_name(j.at("rule").get<std::string>());
    if (!rn) throw mall_error("unknown rule: " + j.at("rule").get<std::string>());
    app.rule = *rn;
    app.tags.assign(static_cast<size_t>(concl.size()),
                    premise_count(app.rule) == 2 && app.rule != Rule::With ? RootTag::Left
                                                                           : RootTag::Shared);
    if (j.contains("principal")) {
        OccAddr a = OccAddr::parse(j.at("principal").get<std::string>());
        if (!a.path.empty()) throw mall_error("principal must be a root occurrence");
        app.principal = a.root;
        if (app.principal < 0 || app.principal >= concl.size())
            throw mall_error("principal out of range");
        app.tags[static_cast<size_t>(app.principal)] = RootTag::Principal;
    }
    if (app.rule == Rule::Cut) app.cut_formula = parse_formula(j.at("cut").get<std::string>());
    if (j.contains("split"))
        for (auto& [key, val] : j.at("split").items()) {
            int idx = std::stoi(key);
            if (idx < 0 || idx >= concl.size()) throw mall_error("split index out of range");
            app.tags[static_cast<size_t>(idx)] =
                val.get<int>() == 1 ? RootTag::Left : RootTag::Right;
        }
    std::vector<Proof> prems;
    if (j.contains("premises")) {
        const json& arr = j.at("premises");
        for (size_t k = 0; k < arr.size(); ++k)
            prems.push_back(
                proof_node_from_json(arr[k], premise_of(concl, app, static_cast<int>(k)).first));
    }
    // `superimpose` is informational: shared cut roots are exactly those
    // not mentioned in `split`; validate it if present
    return Proof::make(concl, app, std::move(prems));
}

}  // namespace detail

inline std::string proof_to_text(const Proof& p) {
    std::string out = p.conclusion().to_string() + "\n";
    out += detail::proof_node_to_json(p).dump(2);
    out += "\n";
    return out;
}

inline Proof proof_from_text(const std::string& text) {
    auto nl = text.find('\n');
    if (nl == std::string::npos) throw mall_error("proof file needs a sequent header line");
    Sequent concl = parse_sequent(text.substr(0, nl), /*allow_cut=*/true);
    json j = json::parse(text.substr(nl + 1));
    return detail::proof_node_from_json(j, concl);
}

// ---------------------------------------------------------------------------
// Nets

inline std::string net_to_text(const LinkingSet& t) {
    json j;
    j["sequent"] = t.sequent.to_string();
    json ls = json::array();
    for (const Linking& lk : t.linkings) {
        json links = json::array();
        for (const Link& l : lk.links) links.push_back({l.a.to_string(), l.b.to_string()});
        ls.push_back(links);
    }
    j["linkings"] = ls;
    return j.dump(2) + "\n";
}

inline LinkingSet net_from_text(const std::string& text) {
    json j = json::parse(text);
    Sequent seq = parse_sequent(j.at("sequent").get<std::string>(), /*allow_cut=*/true);
    std::vector<Linking> linkings;
    for (const json& lk : j.at("linkings")) {
        std::vector<Link> links;
        for (const json& l : lk)
            links.emplace_back(OccAddr::parse(l.at(0).get<std::string>()),
                               OccAddr::parse(l.at(1).get<std::string>()));
        linkings.push_back(Linking(std::move(links)));
    }
    return LinkingSet(std::move(seq), std::move(linkings));
}

// ---------------------------------------------------------------------------
// Traces

inline std::string trace_to_text(const Sequent& concl, const Trace& t,
                                 const std::vector<CommId>& ids = {}) {
    json j;
    j["sequent"] = concl.to_string();
    json moves = json::array();
    for (size_t i = 0; i < t.moves.size(); ++i) {
        const Move& m = t.moves[i];
        json mj;
        mj["position"] = m.pos;
        mj["target"] = m.bare ? "premise" : "root";
        if (m.bare) mj["premise"] = m.premise;
        else mj["root"] = m.root;
        if (m.join) mj["join"] = m.join;
        if (i < ids.size()) mj["comm"] = ids[i].to_string();
        moves.push_back(mj);
    }
    j["moves"] = moves;
    return j.dump(2) + "\n";
}

inline Trace trace_from_text(const std::string& text, Sequent* concl_out = nullptr) {
    json j = json::parse(text);
    if (concl_out) *concl_out = parse_sequent(j.at("sequent").get<std::string>(), true);
    Trace t;
    for (const json& mj : j.at("moves")) {
        Move m;
        m.pos = mj.at("position").get<std::vector<int>>();
        if (mj.at("target").get<std::string>() == "premise") {
            m.bare = true;
            m.premise = mj.at("premise").get<int>();
        } else {
            m.root = mj.at("root").get<int>();
        }
        if (mj.contains("join")) m.join = mj.at("join").get<int>();
        t.push(std::move(m));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mall_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw mall_error("cannot write " + path);
    out << content;
}

}  // namespace mallnet
