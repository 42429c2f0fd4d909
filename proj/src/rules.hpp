#ifndef REGDIALOG_RULES_HPP
#define REGDIALOG_RULES_HPP

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ontology.hpp"

namespace regdialog {

struct Term {
    enum class Kind { Variable, Individual, Literal };
    Kind kind = Kind::Variable;
    std::string text;

    static Term var(std::string name) { return {Kind::Variable, std::move(name)}; }
    static Term individual(std::string name) { return {Kind::Individual, std::move(name)}; }
    static Term literal(std::string value) { return {Kind::Literal, std::move(value)}; }

    bool is_var() const { return kind == Kind::Variable; }
    auto operator<=>(const Term&) const = default;
};

// Body/head atom. Property atoms are object vs data agnostic until matched
// against a graph's declaration; builtins evaluate over bound terms only.
struct Atom {
    enum class Kind { Concept, Property, Builtin };
    Kind kind = Kind::Concept;
    std::string predicate;
    std::vector<Term> args;

    auto operator<=>(const Atom&) const = default;
};

// Registry-path builtins available in rule bodies.
bool is_known_builtin(std::string_view name); // pathPrefixOf, directChildOf, pathEquals, stateEquals
bool eval_builtin(const std::string& name, const std::vector<std::string>& args);

struct Rule {
    std::string name;
    std::vector<Atom> body;
    std::vector<Atom> head;

    auto operator<=>(const Rule&) const = default;
};

// RULE-TXT v1, one rule per line:
//   rule <name>: C(?x) & p(?x, ?y) & builtin:pathPrefixOf(?a, ?b) => D(?x)
// Enforces safety: every head or builtin variable must occur in a
// non-builtin body atom; heads may not contain builtins.
std::vector<Rule> parse_rules(std::string_view text); // throws Error

std::string rule_to_string(const Rule& r);

struct Assertion {
    enum class Kind { Concept, Object, Data };
    Kind kind = Kind::Concept;
    std::string subject;
    std::string predicate; // concept name or property
    std::string object;    // empty for Concept; individual or literal otherwise

    auto operator<=>(const Assertion&) const = default;
};

std::string assertion_to_string(const Assertion& a);

using Binding = std::map<std::string, Term>;

struct Provenance {
    std::string rule_name;
    Binding binding;
    size_t head_index = 0;
};

struct InferenceResult {
    std::set<Assertion> derived; // never intersects the initial facts
    size_t iterations = 0;       // evaluation passes, including the final empty one
    std::map<Assertion, Provenance> provenance;
};

inline constexpr size_t kDefaultIterationLimit = 10000;

// Naive forward chaining to the least fixpoint. Concept atoms match
// taxonomy-aware (an assertion into a subconcept satisfies the ancestor).
// The result is independent of rule and fact ordering.
InferenceResult infer(const ConceptGraph& g, const FactStore& f, const std::vector<Rule>& rules,
                      size_t iteration_limit = kDefaultIterationLimit);

// Applies derived assertions to a copy of `f`.
FactStore apply_assertions(const ConceptGraph& g, const FactStore& f,
                           const std::set<Assertion>& assertions);

// Instantiates head atom `head_index` of `rule` under `binding` — the replay
// check for a provenance entry.
Assertion instantiate_head(const Rule& rule, size_t head_index, const Binding& binding);

} // namespace regdialog

#endif
