#ifndef REGDIALOG_TESTS_RULE_KB_GENERATOR_HPP
#define REGDIALOG_TESTS_RULE_KB_GENERATOR_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "ontology.hpp"
#include "rules.hpp"

// Small random knowledge bases with sort-correct random rules: variables
// bound in individual positions are used only in individual positions,
// literal-valued ones only in literal positions.

struct GeneratedKb {
    regdialog::ConceptGraph graph;
    regdialog::FactStore facts;
    std::vector<regdialog::Rule> rules;
};

inline GeneratedKb generate_kb(std::mt19937& rng) {
    using namespace regdialog;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    GeneratedKb out;
    int concepts = pick(2, 4);
    for (int i = 0; i < concepts; ++i) out.graph.declare_concept("C" + std::to_string(i));
    for (int i = 1; i < concepts; ++i)
        if (pick(0, 1))
            out.graph.declare_isa("C" + std::to_string(i), "C" + std::to_string(pick(0, i - 1)));
    out.graph.declare_property("op0", PropertyKind::Object);
    out.graph.declare_property("op1", PropertyKind::Object);
    out.graph.declare_property("dp0", PropertyKind::Data);
    if (!out.graph.validate().empty()) throw std::logic_error("generator produced a bad graph");

    int individuals = pick(1, 8);
    std::vector<std::string> inds;
    for (int i = 0; i < individuals; ++i) {
        inds.push_back("i" + std::to_string(i));
        out.facts.assert_concept(out.graph, inds.back(),
                                 "C" + std::to_string(pick(0, concepts - 1)));
    }
    const char* literals[] = {"x", "y", "z"};
    int objs = pick(0, 8);
    for (int i = 0; i < objs; ++i)
        out.facts.assert_object(out.graph, inds[pick(0, individuals - 1)],
                                pick(0, 1) ? "op0" : "op1", inds[pick(0, individuals - 1)]);
    int datas = pick(0, 5);
    for (int i = 0; i < datas; ++i)
        out.facts.assert_data(out.graph, inds[pick(0, individuals - 1)], "dp0",
                              literals[pick(0, 2)]);

    int rule_count = pick(1, 3);
    for (int r = 0; r < rule_count; ++r) {
        Rule rule;
        rule.name = "r" + std::to_string(r);
        const char* ind_vars[] = {"a", "b"};
        bool has_lit_var = false;

        Atom first;
        first.kind = Atom::Kind::Concept;
        first.predicate = "C" + std::to_string(pick(0, concepts - 1));
        first.args = {Term::var("a")};
        rule.body.push_back(first);

        int body_atoms = pick(1, 3);
        for (int i = 1; i < body_atoms; ++i) {
            Atom a;
            switch (pick(0, 2)) {
                case 0:
                    a.kind = Atom::Kind::Concept;
                    a.predicate = "C" + std::to_string(pick(0, concepts - 1));
                    a.args = {Term::var(ind_vars[pick(0, 1)])};
                    break;
                case 1:
                    a.kind = Atom::Kind::Property;
                    a.predicate = pick(0, 1) ? "op0" : "op1";
                    a.args = {Term::var(ind_vars[pick(0, 1)]), Term::var(ind_vars[pick(0, 1)])};
                    break;
                case 2:
                    a.kind = Atom::Kind::Property;
                    a.predicate = "dp0";
                    if (pick(0, 1)) {
                        a.args = {Term::var(ind_vars[pick(0, 1)]), Term::var("l")};
                        has_lit_var = true;
                    } else {
                        a.args = {Term::var(ind_vars[pick(0, 1)]),
                                  Term::literal(literals[pick(0, 2)])};
                    }
                    break;
            }
            rule.body.push_back(a);
        }
        if (has_lit_var && pick(0, 1)) {
            Atom b;
            b.kind = Atom::Kind::Builtin;
            b.predicate = "stateEquals";
            b.args = {Term::var("l"), Term::literal(literals[pick(0, 2)])};
            rule.body.push_back(b);
        }

        std::set<std::string> bound;
        for (const auto& a : rule.body)
            if (a.kind != Atom::Kind::Builtin)
                for (size_t t = 0; t < a.args.size(); ++t)
                    if (a.args[t].is_var() && !(a.predicate == "dp0" && t == 1))
                        bound.insert(a.args[t].text);
        std::vector<std::string> bound_vars(bound.begin(), bound.end());

        int head_atoms = pick(1, 2);
        for (int i = 0; i < head_atoms; ++i) {
            Atom h;
            if (pick(0, 1)) {
                h.kind = Atom::Kind::Concept;
                h.predicate = "C" + std::to_string(pick(0, concepts - 1));
                h.args = {Term::var(bound_vars[pick(0, static_cast<int>(bound_vars.size()) - 1)])};
            } else {
                h.kind = Atom::Kind::Property;
                h.predicate = pick(0, 1) ? "op0" : "op1";
                h.args = {Term::var(bound_vars[pick(0, static_cast<int>(bound_vars.size()) - 1)]),
                          Term::var(bound_vars[pick(0, static_cast<int>(bound_vars.size()) - 1)])};
            }
            rule.head.push_back(h);
        }
        out.rules.push_back(std::move(rule));
    }
    return out;
}

#endif
