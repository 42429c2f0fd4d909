#ifndef REGDIALOG_ONTOLOGY_HPP
#define REGDIALOG_ONTOLOGY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace regdialog {

enum class PropertyKind { Object, Data };

enum class RestrictionKind { Min, Max, Exactly };

struct Restriction {
    std::string concept_name;
    std::string property;
    RestrictionKind kind;
    unsigned bound;
};

enum class OntologyViolationKind {
    DisjointnessViolation,
    CardinalityViolation,
    UndeclaredTerm,
    IsaCycle,
};

struct OntologyViolation {
    OntologyViolationKind kind;
    std::string subject; // individual or concept
    std::string detail;
};

// The terminology: concept taxonomy (a DAG of is-a edges), disjointness,
// property declarations, and cardinality restrictions. Mutate, then call
// validate(); query operations require a validated graph.
class ConceptGraph {
public:
    void declare_concept(const std::string& name);
    void declare_isa(const std::string& child, const std::string& parent);
    void declare_disjoint(const std::string& a, const std::string& b);
    void declare_property(const std::string& name, PropertyKind kind);
    void add_restriction(Restriction r);

    bool has_concept(const std::string& name) const { return index_.count(name) > 0; }
    std::optional<PropertyKind> property_kind(const std::string& name) const;
    const std::set<std::string>& concepts() const { return concepts_; }
    const std::vector<std::pair<std::string, std::string>>& isa_edges() const { return isa_; }
    const std::vector<std::pair<std::string, std::string>>& disjoint_pairs() const {
        return disjoint_;
    }
    const std::vector<Restriction>& restrictions() const { return restrictions_; }

    // Checks the structural invariants (acyclicity, declared terms, no
    // disjointness with self or an ancestor) and computes the reachability
    // cache. Returns the violations found; the graph is queryable only when
    // the result is empty.
    std::vector<OntologyViolation> validate();
    bool validated() const { return validated_; }

    // true iff `descendant` reaches `ancestor` via zero or more is-a edges.
    // Throws Error(UndeclaredTerm) for unknown concepts.
    bool subsumes(const std::string& ancestor, const std::string& descendant) const;

    // All ancestors of `name`, including itself.
    std::vector<std::string> ancestors_of(const std::string& name) const;

private:
    size_t index_of(const std::string& name, const char* role) const;

    std::set<std::string> concepts_;
    std::vector<std::pair<std::string, std::string>> isa_;
    std::vector<std::pair<std::string, std::string>> disjoint_;
    std::map<std::string, PropertyKind> properties_;
    std::vector<Restriction> restrictions_;

    std::map<std::string, size_t> index_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::uint64_t>> ancestor_bits_; // [concept][word]
    bool validated_ = false;
};

struct ObjectAssertion {
    std::string subject, property, object;
    auto operator<=>(const ObjectAssertion&) const = default;
};

struct DataAssertion {
    std::string subject, property, literal;
    auto operator<=>(const DataAssertion&) const = default;
};

// The assertions: individuals, concept memberships, property values.
// Pure value type with set semantics; asserting twice is a no-op.
class FactStore {
public:
    // Creates the individual if new. Throws for an undeclared concept.
    void assert_concept(const ConceptGraph& g, const std::string& individual,
                        const std::string& concept_name);
    // Both individuals must already exist. Throws for undeclared terms or a
    // property of the wrong kind.
    void assert_object(const ConceptGraph& g, const std::string& subject,
                       const std::string& property, const std::string& object);
    void assert_data(const ConceptGraph& g, const std::string& subject,
                     const std::string& property, const std::string& literal);

    bool has_individual(const std::string& name) const { return individuals_.count(name) > 0; }
    bool has_concept_assertion(const std::string& ind, const std::string& c) const {
        return concept_assertions_.count({ind, c}) > 0;
    }

    const std::set<std::string>& individuals() const { return individuals_; }
    const std::set<std::pair<std::string, std::string>>& concept_assertions() const {
        return concept_assertions_;
    }
    const std::set<ObjectAssertion>& object_assertions() const { return object_assertions_; }
    const std::set<DataAssertion>& data_assertions() const { return data_assertions_; }

    size_t size() const {
        return concept_assertions_.size() + object_assertions_.size() + data_assertions_.size();
    }

private:
    std::set<std::string> individuals_;
    std::set<std::pair<std::string, std::string>> concept_assertions_;
    std::set<ObjectAssertion> object_assertions_;
    std::set<DataAssertion> data_assertions_;
};

// All individuals asserted into `concept_name` or any concept it subsumes.
std::set<std::string> instances_of(const ConceptGraph& g, const FactStore& f,
                                   const std::string& concept_name);

// Disjointness (inherited along is-a) and cardinality violations over the
// explicit assertions. Result is deterministically ordered.
std::vector<OntologyViolation> check_consistency(const ConceptGraph& g, const FactStore& f);

// ONTO-TXT v1. Throws Error(ParseError/IsaCycle/UndeclaredTerm) with line info.
std::pair<ConceptGraph, FactStore> load_ontology(std::string_view text);

std::string violation_to_string(const OntologyViolation& v);

} // namespace regdialog

#endif
