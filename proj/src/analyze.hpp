#ifndef REGDIALOG_ANALYZE_HPP
#define REGDIALOG_ANALYZE_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diff.hpp"
#include "kb.hpp"
#include "ontology.hpp"
#include "rules.hpp"
#include "snapshot.hpp"

namespace regdialog {

inline constexpr const char* kToolName = "regdialog";
inline constexpr const char* kToolVersion = "0.1.0";

// Supplies a timestamp for keys that appear as group common keys without
// being diff records themselves (pair index is 0-based).
using KeyTimestampResolver =
    std::function<std::optional<Timestamp>(size_t pair, const RegistryPath&)>;

struct ClassifyResult {
    // kb facts + materialized comparison individuals + derived assertions
    FactStore facts;
    InferenceResult inference;
    // individual names per pair, keyed by folded path text ("a\b\c")
    std::vector<std::map<std::string, std::string>> unit_names;
    std::vector<std::map<std::string, std::string>> group_names;
};

// Materializes diff records and groups as unit/group/key individuals,
// annotates keys from the knowledge base, and runs the rule set to fixpoint.
// `diffsets` and `grouped` run parallel, one entry per snapshot pair.
ClassifyResult classify_activity(const std::vector<DiffSet>& diffsets,
                                 const std::vector<GroupedDiff>& grouped,
                                 const KnowledgeBase& kb,
                                 const KeyTimestampResolver& resolver = {});

struct UnitDerivation {
    std::string path; // rooted display path
    DiffState state;
    std::vector<std::string> activities;                        // derived concepts
    std::vector<std::pair<std::string, std::string>> properties; // derived (property, value)
};

struct ReportGroup {
    size_t pair_index; // 1-based
    RegistryPath common_key;
    std::optional<std::string> software;             // from the annotation
    std::optional<std::string> evidence_of_software; // derived by the rules
    std::vector<DiffRecord> records;
    std::vector<UnitDerivation> derived;
};

struct Report {
    std::string case_id;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> pairs; // (older id, newer id)
    std::vector<ReportGroup> groups;
    std::vector<std::pair<size_t, DiffRecord>> ungrouped; // (1-based pair, record)
    std::vector<OntologyViolation> violations;
    size_t inference_iterations = 0;
    size_t derived_count = 0;
};

struct AnalyzeOptions {
    DiffOptions diff;
    std::string case_id;
    std::vector<std::string> input_ids; // defaults to captured-at / ordinal labels
};

// The full pipeline: chain diff, group, annotate, infer, consistency-check.
Report analyze(const std::vector<const RegistrySnapshot*>& snapshots, const KnowledgeBase& kb,
               const AnalyzeOptions& opts = {});

std::string report_to_json(const Report& r);
std::string report_to_text(const Report& r);

// Stand-alone inference result rendering (the `infer` command).
std::string inference_to_text(const InferenceResult& r);
std::string inference_to_json(const InferenceResult& r);

} // namespace regdialog

#endif
