#ifndef REGDIALOG_TESTS_ORACLES_HPP
#define REGDIALOG_TESTS_ORACLES_HPP

// Independent reference implementations the real code is checked against.
// Everything here is deliberately written the dumb way: flat maps, BFS,
// exhaustive enumeration. None of it shares logic with src/.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "diff.hpp"
#include "ontology.hpp"
#include "rules.hpp"
#include "snapshot.hpp"
#include "strings.hpp"

namespace regdialog::oracle {

// ---- snapshot structural equality --------------------------------------

inline bool keys_equal(const RegistryKey& a, const RegistryKey& b);

inline bool values_equal(std::vector<RegistryValue> va, std::vector<RegistryValue> vb) {
    auto by_name = [](const RegistryValue& x, const RegistryValue& y) {
        return case_fold(x.name) < case_fold(y.name);
    };
    std::sort(va.begin(), va.end(), by_name);
    std::sort(vb.begin(), vb.end(), by_name);
    if (va.size() != vb.size()) return false;
    for (size_t i = 0; i < va.size(); ++i)
        if (va[i].name != vb[i].name || va[i].type != vb[i].type || va[i].data != vb[i].data)
            return false;
    return true;
}

inline bool keys_equal(const RegistryKey& a, const RegistryKey& b) {
    if (a.name != b.name || a.last_modified != b.last_modified) return false;
    if (!values_equal(a.values, b.values)) return false;
    if (a.subkeys.size() != b.subkeys.size()) return false;
    std::map<std::string, const RegistryKey*> bs;
    for (const auto& k : b.subkeys) bs[case_fold(k.name)] = &k;
    for (const auto& k : a.subkeys) {
        auto it = bs.find(case_fold(k.name));
        if (it == bs.end() || !keys_equal(k, *it->second)) return false;
    }
    return true;
}

inline bool snapshots_equal(const RegistrySnapshot& a, const RegistrySnapshot& b) {
    return a.hive_name == b.hive_name && a.captured_at == b.captured_at &&
           keys_equal(a.root, b.root);
}

// ---- flat snapshot view for diff checking --------------------------------

struct FlatKey {
    std::string display_path; // rooted
    std::optional<Timestamp> stamp;
    std::map<std::string, std::pair<ValueType, std::vector<uint8_t>>> values; // folded name
};

inline void flatten_into(const RegistryKey& key, const std::string& folded_prefix,
                         const std::string& display_prefix,
                         std::map<std::string, FlatKey>& out) {
    for (const auto& sub : key.subkeys) {
        std::string folded = folded_prefix + "\\" + case_fold(sub.name);
        std::string display = display_prefix + "\\" + sub.name;
        FlatKey fk;
        fk.display_path = display;
        fk.stamp = sub.last_modified;
        for (const auto& v : sub.values) fk.values[case_fold(v.name)] = {v.type, v.data};
        out.emplace(folded, std::move(fk));
        flatten_into(sub, folded, display, out);
    }
}

inline std::map<std::string, FlatKey> flatten(const RegistrySnapshot& s) {
    std::map<std::string, FlatKey> out;
    flatten_into(s.root, "", "", out);
    return out;
}

// Set-theoretic diff oracle: path-set differences plus per-path value-map
// comparison. Returns folded path -> state name.
inline std::map<std::string, std::string> diff_oracle(const RegistrySnapshot& older,
                                                      const RegistrySnapshot& newer,
                                                      bool touch_as_modified = false) {
    auto o = flatten(older);
    auto n = flatten(newer);
    std::map<std::string, std::string> out;
    for (const auto& [path, fk] : o)
        if (!n.count(path)) out[path] = "Removed";
    for (const auto& [path, fk] : n)
        if (!o.count(path)) out[path] = "Added";
    for (const auto& [path, fk] : o) {
        auto it = n.find(path);
        if (it == n.end()) continue;
        if (fk.values != it->second.values ||
            (touch_as_modified && fk.stamp != it->second.stamp))
            out[path] = "Modified";
    }
    return out;
}

// ---- taxonomy reachability ------------------------------------------------

// Plain BFS over the raw edge list, no caching.
inline bool bfs_reaches(const std::vector<std::pair<std::string, std::string>>& edges,
                        const std::string& from, const std::string& to) {
    if (from == to) return true;
    std::set<std::string> seen{from};
    std::vector<std::string> frontier{from};
    while (!frontier.empty()) {
        std::vector<std::string> next;
        for (const auto& node : frontier)
            for (const auto& [child, parent] : edges)
                if (child == node && seen.insert(parent).second) {
                    if (parent == to) return true;
                    next.push_back(parent);
                }
        frontier = std::move(next);
    }
    return false;
}

// ---- exhaustive rule evaluation -------------------------------------------

struct SimpleFact {
    // ("concept", ind, concept, "") / ("obj", s, p, o) / ("data", s, p, lit)
    std::string kind, a, b, c;
    auto operator<=>(const SimpleFact&) const = default;
};

inline std::set<SimpleFact> to_simple(const FactStore& f) {
    std::set<SimpleFact> out;
    for (const auto& [ind, c] : f.concept_assertions()) out.insert({"concept", ind, c, ""});
    for (const auto& oa : f.object_assertions())
        out.insert({"obj", oa.subject, oa.property, oa.object});
    for (const auto& da : f.data_assertions())
        out.insert({"data", da.subject, da.property, da.literal});
    return out;
}

// Exhaustive-binding forward chaining: every variable ranges over every
// individual and every literal; repeat whole-program passes until no change.
inline std::set<SimpleFact> brute_force_infer(const ConceptGraph& g, const FactStore& f,
                                              const std::vector<Rule>& rules) {
    std::set<SimpleFact> facts = to_simple(f);
    const auto& isa = g.isa_edges();

    std::vector<std::string> universe(f.individuals().begin(), f.individuals().end());
    std::set<std::string> literal_set;
    for (const auto& da : f.data_assertions()) literal_set.insert(da.literal);
    for (const auto& r : rules)
        for (const auto& atoms : {r.body, r.head})
            for (const auto& a : atoms)
                for (const auto& t : a.args)
                    if (t.kind == Term::Kind::Literal) literal_set.insert(t.text);

    struct Candidate {
        std::string text;
        bool is_literal;
    };
    std::vector<Candidate> domain;
    for (const auto& i : universe) domain.push_back({i, false});
    for (const auto& l : literal_set) domain.push_back({l, true});

    auto in_concept = [&](const std::string& ind, const std::string& c,
                          const std::set<SimpleFact>& fs) {
        for (const auto& fact : fs)
            if (fact.kind == "concept" && fact.a == ind && bfs_reaches(isa, fact.b, c))
                return true;
        return false;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rule : rules) {
            std::vector<std::string> vars;
            std::set<std::string> seen_vars;
            for (const auto& a : rule.body)
                if (a.kind != Atom::Kind::Builtin)
                    for (const auto& t : a.args)
                        if (t.is_var() && seen_vars.insert(t.text).second)
                            vars.push_back(t.text);

            std::vector<size_t> idx(vars.size(), 0);
            while (true) {
                std::map<std::string, Candidate> binding;
                bool valid_assignment = !domain.empty() || vars.empty();
                for (size_t i = 0; i < vars.size(); ++i) {
                    if (domain.empty()) {
                        valid_assignment = false;
                        break;
                    }
                    binding[vars[i]] = domain[idx[i]];
                }
                if (valid_assignment) {
                    auto term_text = [&](const Term& t) -> std::pair<std::string, bool> {
                        if (t.is_var()) {
                            const auto& c = binding.at(t.text);
                            return {c.text, c.is_literal};
                        }
                        return {t.text, t.kind == Term::Kind::Literal};
                    };
                    bool ok = true;
                    for (const auto& a : rule.body) {
                        if (a.kind == Atom::Kind::Concept) {
                            auto [text, lit] = term_text(a.args[0]);
                            if (lit || !in_concept(text, a.predicate, facts)) ok = false;
                        } else if (a.kind == Atom::Kind::Property) {
                            auto [s, slit] = term_text(a.args[0]);
                            auto [o, olit] = term_text(a.args[1]);
                            auto kind = g.property_kind(a.predicate);
                            if (slit) {
                                ok = false;
                            } else if (kind == PropertyKind::Object) {
                                if (olit || !facts.count({"obj", s, a.predicate, o})) ok = false;
                            } else {
                                if (!olit || !facts.count({"data", s, a.predicate, o})) ok = false;
                            }
                        } else {
                            std::vector<std::string> args;
                            for (const auto& t : a.args) args.push_back(term_text(t).first);
                            if (!eval_builtin(a.predicate, args)) ok = false;
                        }
                        if (!ok) break;
                    }
                    if (ok) {
                        for (const auto& h : rule.head) {
                            SimpleFact nf;
                            if (h.kind == Atom::Kind::Concept) {
                                nf = {"concept", term_text(h.args[0]).first, h.predicate, ""};
                            } else {
                                auto [s, slit] = term_text(h.args[0]);
                                auto [o, olit] = term_text(h.args[1]);
                                nf = {olit ? "data" : "obj", s, h.predicate, o};
                            }
                            if (facts.insert(nf).second) changed = true;
                        }
                    }
                }
                // next assignment
                size_t pos = 0;
                while (pos < idx.size()) {
                    if (++idx[pos] < domain.size()) break;
                    idx[pos] = 0;
                    ++pos;
                }
                if (vars.empty() || pos == idx.size()) break;
            }
        }
    }
    return facts;
}

} // namespace regdialog::oracle

#endif
