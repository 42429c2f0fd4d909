#ifndef REGDIALOG_KB_HPP
#define REGDIALOG_KB_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "diff.hpp"
#include "ontology.hpp"
#include "path.hpp"
#include "rules.hpp"

namespace regdialog {

// One manually curated registry key: its known function expressed as
// evidence concepts, and the software product owning its branch.
struct KeyAnnotation {
    RegistryPath path;
    std::string hive;
    std::set<std::string> evidence_concepts;
    std::optional<std::string> owning_software;
    std::string description;
};

struct KeyLookup {
    const KeyAnnotation* annotation;
    // Set when the match is the nearest annotated ancestor rather than the
    // key itself; inherited matches contribute only the owning software.
    bool inherited;
};

// Nearest-match lookup: exact (case-insensitive) first, else the deepest
// annotated ancestor flagged as inherited.
std::optional<KeyLookup> lookup_key(const std::vector<KeyAnnotation>& annotations,
                                    const RegistryPath& path);

// The grouping convention: two segments under Software (manufacturer,
// product) plus the explicitly curated branches.
std::vector<GroupingKeySpec> default_grouping_specs();

// The shipped DIALOG content plus any rules that ride along with it.
struct KnowledgeBase {
    ConceptGraph graph;
    FactStore facts;
    std::vector<KeyAnnotation> annotations;
    std::vector<GroupingKeySpec> grouping_specs;
    std::vector<Rule> rules;
};

// The embedded seed. Validated on load; throws on any inconsistency.
KnowledgeBase seed_knowledge_base();

// Loads <dir>/dialog.onto, <dir>/keys.anno and, when present,
// <dir>/dialog.rules.
KnowledgeBase load_knowledge_base_dir(const std::string& dir);

// Parses an annotations file against an already-loaded graph/store.
std::vector<KeyAnnotation> parse_annotations(std::string_view text, const ConceptGraph& graph,
                                             const FactStore& facts);

} // namespace regdialog

#endif
