#include "analyze.hpp"

#include <json.hpp>

#include <algorithm>

#include "errors.hpp"
#include "strings.hpp"

namespace regdialog {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string folded_key(const RegistryPath& p) {
    std::string out;
    for (size_t i = 0; i < p.folded().size(); ++i) {
        if (i) out.push_back('\\');
        out += p.folded()[i];
    }
    return out;
}

// Per-pair materialization state.
struct PairBuilder {
    const ConceptGraph& graph;
    FactStore& facts;
    const std::vector<KeyAnnotation>& annotations;
    size_t pair; // 0-based
    std::map<std::string, std::string> key_names;  // folded path -> individual
    std::map<std::string, RegistryPath> key_paths; // folded path -> display path

    std::string pair_prefix() const { return "p" + std::to_string(pair + 1); }

    std::string path_individual(const RegistryPath& p) {
        std::string name = p.rooted_str();
        facts.assert_concept(graph, name, "RegistryPath");
        return name;
    }

    // Materializes (once per pair) the individual standing for the key at
    // `p`, carrying its name, path, timestamp, and annotations.
    std::string key_individual(const RegistryPath& p, std::optional<Timestamp> stamp) {
        std::string fk = folded_key(p);
        auto it = key_names.find(fk);
        if (it != key_names.end()) return it->second;

        std::string name = pair_prefix() + ":key:" + p.rooted_str();
        facts.assert_concept(graph, name, "RegistryKeyObject");
        facts.assert_data(graph, name, "hasName",
                          p.segments().empty() ? std::string() : p.segments().back());
        if (stamp) facts.assert_data(graph, name, "hasLastModified", stamp->to_string());
        facts.assert_object(graph, name, "hasRegistryPath", path_individual(p));

        if (auto hit = lookup_key(annotations, p)) {
            if (!hit->inherited)
                for (const auto& c : hit->annotation->evidence_concepts)
                    facts.assert_concept(graph, name, c);
            if (hit->annotation->owning_software)
                facts.assert_object(graph, name, "belongsToSoftware",
                                    *hit->annotation->owning_software);
        }
        key_names.emplace(fk, name);
        key_paths.emplace(fk, p);
        return name;
    }

    void link_parents() {
        for (const auto& [fk, child] : key_names) {
            auto it = key_paths.find(fk);
            RegistryPath parent = it->second.parent();
            if (parent.empty()) continue;
            auto pit = key_names.find(folded_key(parent));
            if (pit != key_names.end())
                facts.assert_object(graph, child, "hasParentKey", pit->second);
        }
    }
};

std::optional<Timestamp> record_stamp(const DiffRecord& rec) {
    return rec.newer_timestamp ? rec.newer_timestamp : rec.older_timestamp;
}

} // namespace

ClassifyResult classify_activity(const std::vector<DiffSet>& diffsets,
                                 const std::vector<GroupedDiff>& grouped,
                                 const KnowledgeBase& kb, const KeyTimestampResolver& resolver) {
    if (diffsets.size() != grouped.size())
        throw Error(Errc::InvalidArgument, "diffsets and grouped differ in length");

    ClassifyResult result;
    result.facts = kb.facts;
    result.unit_names.resize(diffsets.size());
    result.group_names.resize(diffsets.size());

    for (size_t i = 0; i < diffsets.size(); ++i) {
        PairBuilder pb{kb.graph, result.facts, kb.annotations, i, {}, {}};

        auto materialize_unit = [&](const DiffRecord& rec) {
            std::string unit = pb.pair_prefix() + ":unit:" + rec.path.rooted_str();
            result.facts.assert_concept(kb.graph, unit, "RPCUnitObject");
            result.facts.assert_data(kb.graph, unit, "hasComparisonState",
                                     diff_state_name(rec.state));
            std::string key = pb.key_individual(rec.path, record_stamp(rec));
            result.facts.assert_object(kb.graph, unit, "contains", key);
            result.unit_names[i].emplace(folded_key(rec.path), unit);
            return unit;
        };

        for (const auto& group : grouped[i].groups) {
            std::string gname = pb.pair_prefix() + ":group:" + group.common_key.rooted_str();
            result.facts.assert_concept(kb.graph, gname, "RPCGroupObject");
            result.group_names[i].emplace(folded_key(group.common_key), gname);

            std::optional<Timestamp> ck_stamp;
            if (resolver) ck_stamp = resolver(i, group.common_key);
            if (!ck_stamp) {
                // the common key may be one of the pair's own records
                for (const auto& rec : group.records)
                    if (rec.path.ci_equals(group.common_key)) {
                        ck_stamp = record_stamp(rec);
                        break;
                    }
            }
            std::string ck = pb.key_individual(group.common_key, ck_stamp);
            result.facts.assert_object(kb.graph, gname, "hasCommonKey", ck);

            for (const auto& rec : group.records) {
                std::string unit = materialize_unit(rec);
                result.facts.assert_object(kb.graph, gname, "containsUnit", unit);
            }
        }
        for (const auto& rec : grouped[i].ungrouped) materialize_unit(rec);
        pb.link_parents();
    }

    result.inference = infer(kb.graph, result.facts, kb.rules);
    result.facts = apply_assertions(kb.graph, result.facts, result.inference.derived);
    return result;
}

Report analyze(const std::vector<const RegistrySnapshot*>& snapshots, const KnowledgeBase& kb,
               const AnalyzeOptions& opts) {
    std::vector<DiffSet> diffsets = compare_chain(snapshots, opts.diff);

    Report report;
    report.case_id = opts.case_id;
    for (size_t i = 0; i < snapshots.size(); ++i) {
        std::string id;
        if (i < opts.input_ids.size() && !opts.input_ids[i].empty()) {
            id = opts.input_ids[i];
        } else if (snapshots[i]->captured_at) {
            id = snapshots[i]->captured_at->to_string();
        } else {
            id = "snapshot-" + std::to_string(i + 1);
        }
        report.inputs.push_back(id);
    }
    for (size_t i = 0; i + 1 < snapshots.size(); ++i) {
        diffsets[i].older_id = report.inputs[i];
        diffsets[i].newer_id = report.inputs[i + 1];
        report.pairs.emplace_back(report.inputs[i], report.inputs[i + 1]);
    }

    std::vector<GroupedDiff> grouped;
    grouped.reserve(diffsets.size());
    for (const auto& d : diffsets) grouped.push_back(group_diffs(d, kb.grouping_specs));

    KeyTimestampResolver resolver = [&](size_t pair,
                                        const RegistryPath& p) -> std::optional<Timestamp> {
        if (const RegistryKey* k = snapshots[pair + 1]->key_at(p)) return k->last_modified;
        if (const RegistryKey* k = snapshots[pair]->key_at(p)) return k->last_modified;
        return std::nullopt;
    };

    ClassifyResult classified = classify_activity(diffsets, grouped, kb, resolver);
    report.inference_iterations = classified.inference.iterations;
    report.derived_count = classified.inference.derived.size();
    report.violations = check_consistency(kb.graph, classified.facts);

    // Index the derived assertions by subject individual.
    std::map<std::string, std::vector<const Assertion*>> by_subject;
    for (const auto& a : classified.inference.derived) by_subject[a.subject].push_back(&a);

    for (size_t i = 0; i < grouped.size(); ++i) {
        for (const auto& group : grouped[i].groups) {
            ReportGroup rg;
            rg.pair_index = i + 1;
            rg.common_key = group.common_key;
            rg.records = group.records;
            if (auto hit = lookup_key(kb.annotations, group.common_key))
                rg.software = hit->annotation->owning_software;

            const std::string& gname = classified.group_names[i].at(folded_key(group.common_key));
            if (auto it = by_subject.find(gname); it != by_subject.end())
                for (const Assertion* a : it->second)
                    if (a->kind == Assertion::Kind::Object && a->predicate == "isEvidenceOfSoftware")
                        rg.evidence_of_software = a->object;

            for (const auto& rec : group.records) {
                auto uit = classified.unit_names[i].find(folded_key(rec.path));
                if (uit == classified.unit_names[i].end()) continue;
                auto dit = by_subject.find(uit->second);
                if (dit == by_subject.end()) continue;
                UnitDerivation ud;
                ud.path = rec.path.rooted_str();
                ud.state = rec.state;
                for (const Assertion* a : dit->second) {
                    if (a->kind == Assertion::Kind::Concept)
                        ud.activities.push_back(a->predicate);
                    else
                        ud.properties.emplace_back(a->predicate, a->object);
                }
                if (!ud.activities.empty() || !ud.properties.empty())
                    rg.derived.push_back(std::move(ud));
            }
            report.groups.push_back(std::move(rg));
        }
        for (const auto& rec : grouped[i].ungrouped) report.ungrouped.emplace_back(i + 1, rec);
    }
    return report;
}

namespace {

ordered_json record_json(const DiffRecord& rec) {
    return ordered_json::parse(diff_record_to_json(rec));
}

} // namespace

std::string report_to_json(const Report& r) {
    ordered_json j;
    j["schema"] = "regdialog/1";
    j["caseId"] = r.case_id;
    j["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};
    j["inputs"] = r.inputs;
    j["pairs"] = ordered_json::array();
    for (size_t i = 0; i < r.pairs.size(); ++i)
        j["pairs"].push_back(ordered_json{
            {"index", i + 1}, {"older", r.pairs[i].first}, {"newer", r.pairs[i].second}});
    j["groups"] = ordered_json::array();
    for (const auto& g : r.groups) {
        ordered_json gj;
        gj["pair"] = g.pair_index;
        gj["commonKey"] = g.common_key.rooted_str();
        gj["software"] = g.software ? ordered_json(*g.software) : ordered_json(nullptr);
        gj["evidenceOfSoftware"] =
            g.evidence_of_software ? ordered_json(*g.evidence_of_software) : ordered_json(nullptr);
        gj["records"] = ordered_json::array();
        for (const auto& rec : g.records) gj["records"].push_back(record_json(rec));
        gj["derivedActivities"] = ordered_json::array();
        for (const auto& d : g.derived) {
            ordered_json dj;
            dj["path"] = d.path;
            dj["state"] = diff_state_name(d.state);
            dj["activities"] = d.activities;
            ordered_json props = ordered_json::object();
            for (const auto& [prop, value] : d.properties) props[prop] = value;
            dj["properties"] = std::move(props);
            gj["derivedActivities"].push_back(std::move(dj));
        }
        j["groups"].push_back(std::move(gj));
    }
    j["ungrouped"] = ordered_json::array();
    for (const auto& [pair, rec] : r.ungrouped) {
        ordered_json uj = record_json(rec);
        uj["pair"] = pair;
        j["ungrouped"].push_back(std::move(uj));
    }
    j["violations"] = ordered_json::array();
    for (const auto& v : r.violations) j["violations"].push_back(violation_to_string(v));
    j["inference"] =
        ordered_json{{"iterations", r.inference_iterations}, {"derived", r.derived_count}};
    return j.dump(2) + "\n";
}

namespace {

const char* state_label(DiffState s) {
    switch (s) {
        case DiffState::Added: return "ADDED";
        case DiffState::Removed: return "REM";
        case DiffState::Modified: return "MODIFIED";
    }
    return "MODIFIED";
}

} // namespace

std::string report_to_text(const Report& r) {
    std::string out;
    out += std::string(kToolName) + " analysis report";
    if (!r.case_id.empty()) out += " (case " + r.case_id + ")";
    out.push_back('\n');
    out += "inputs:";
    for (const auto& in : r.inputs) out += " " + in;
    out.push_back('\n');

    for (size_t i = 0; i < r.pairs.size(); ++i) {
        out += "\n== pair " + std::to_string(i + 1) + ": " + r.pairs[i].first + " vs " +
               r.pairs[i].second + "\n";
        bool any = false;
        for (const auto& g : r.groups) {
            if (g.pair_index != i + 1) continue;
            any = true;
            out += "group " + g.common_key.rooted_str();
            if (g.software) out += " [software: " + *g.software + "]";
            out.push_back('\n');
            if (g.evidence_of_software)
                out += "  evidence of software: " + *g.evidence_of_software + "\n";
            std::map<std::string, const UnitDerivation*> derived_by_path;
            for (const auto& d : g.derived) derived_by_path[d.path] = &d;
            for (const auto& rec : g.records) {
                out += "  " + std::string(state_label(rec.state)) + ": " + rec.path.rooted_str() +
                       "\n";
                auto it = derived_by_path.find(rec.path.rooted_str());
                if (it != derived_by_path.end()) {
                    for (const auto& act : it->second->activities) out += "    -> " + act + "\n";
                    for (const auto& [prop, value] : it->second->properties)
                        out += "    -> " + prop + " " + value + "\n";
                }
            }
        }
        std::vector<const DiffRecord*> ungrouped;
        for (const auto& [pair, rec] : r.ungrouped)
            if (pair == i + 1) ungrouped.push_back(&rec);
        if (!ungrouped.empty()) {
            any = true;
            out += "ungrouped:\n";
            for (const DiffRecord* rec : ungrouped)
                out += "  " + std::string(state_label(rec->state)) + ": " +
                       rec->path.rooted_str() + "\n";
        }
        if (!any) out += "no changes\n";
    }

    out += "\nviolations: ";
    if (r.violations.empty()) {
        out += "none\n";
    } else {
        out += std::to_string(r.violations.size()) + "\n";
        for (const auto& v : r.violations) out += "  " + violation_to_string(v) + "\n";
    }
    return out;
}

std::string inference_to_text(const InferenceResult& r) {
    std::string out;
    for (const auto& a : r.derived) {
        out += assertion_to_string(a);
        auto it = r.provenance.find(a);
        if (it != r.provenance.end()) out += "    [" + it->second.rule_name + "]";
        out.push_back('\n');
    }
    out += "derived " + std::to_string(r.derived.size()) + " assertion(s) in " +
           std::to_string(r.iterations) + " pass(es)\n";
    return out;
}

std::string inference_to_json(const InferenceResult& r) {
    ordered_json j;
    j["schema"] = "regdialog/1";
    j["iterations"] = r.iterations;
    j["derived"] = ordered_json::array();
    for (const auto& a : r.derived) {
        ordered_json aj;
        switch (a.kind) {
            case Assertion::Kind::Concept: aj["kind"] = "concept"; break;
            case Assertion::Kind::Object: aj["kind"] = "object"; break;
            case Assertion::Kind::Data: aj["kind"] = "data"; break;
        }
        aj["subject"] = a.subject;
        aj["predicate"] = a.predicate;
        if (a.kind != Assertion::Kind::Concept) aj["object"] = a.object;
        auto it = r.provenance.find(a);
        if (it != r.provenance.end()) aj["rule"] = it->second.rule_name;
        j["derived"].push_back(std::move(aj));
    }
    return j.dump(2) + "\n";
}

} // namespace regdialog
