#include "regdialog.h"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <string>

#include "analyze.hpp"
#include "diff.hpp"
#include "errors.hpp"
#include "kb.hpp"
#include "ontology.hpp"
#include "rules.hpp"
#include "snapshot.hpp"

using namespace regdialog;

struct rd_error {
    rd_status status;
    std::string message;
    long line;
};

struct rd_snapshot {
    RegistrySnapshot snap;
};

struct rd_kb {
    KnowledgeBase kb;
};

struct rd_rules {
    std::vector<Rule> rules;
};

struct rd_diff {
    DiffSet diff;
};

struct rd_report {
    Report report;
};

namespace {

rd_status status_for(Errc code) {
    switch (code) {
        case Errc::MalformedHeader:
        case Errc::MalformedLine:
        case Errc::DuplicateKeyPath:
        case Errc::DuplicateValueName:
        case Errc::BadTimestamp:
        case Errc::BadBase64:
        case Errc::IllegalCharacterInName:
        case Errc::ParseError:
        case Errc::UnsafeRule:
        case Errc::UnknownBuiltin:
            return RD_PARSE_ERROR;
        case Errc::IsaCycle:
        case Errc::UndeclaredTerm:
            return RD_VALIDATION_ERROR;
        case Errc::HiveMismatch:
            return RD_HIVE_MISMATCH;
        case Errc::ChronologyError:
            return RD_CHRONOLOGY_ERROR;
        case Errc::TooFewSnapshots:
        case Errc::PathMismatch:
        case Errc::InvalidArgument:
            return RD_INVALID_ARGUMENT;
        case Errc::IterationLimitExceeded:
            return RD_LIMIT_EXCEEDED;
        case Errc::IoError:
            return RD_IO_ERROR;
    }
    return RD_ERROR;
}

void set_error(rd_error** err, rd_status status, std::string message, long line = -1) {
    if (err) *err = new rd_error{status, std::move(message), line};
}

// Runs `fn`, translating exceptions into rd_error out-params.
template <typename Fn>
rd_status guarded(rd_error** err, Fn&& fn) {
    if (err) *err = nullptr;
    try {
        return fn();
    } catch (const Error& e) {
        rd_status s = status_for(e.code());
        set_error(err, s, std::string(errc_name(e.code())) + ": " + e.what(), e.line());
        return s;
    } catch (const std::exception& e) {
        set_error(err, RD_ERROR, e.what());
        return RD_ERROR;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

rd_status require(bool cond, rd_error** err, const char* what) {
    if (cond) return RD_OK;
    set_error(err, RD_INVALID_ARGUMENT, what);
    return RD_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* rd_version(void) { return kToolVersion; }

rd_status rd_error_status(const rd_error* err) { return err ? err->status : RD_OK; }
const char* rd_error_message(const rd_error* err) { return err ? err->message.c_str() : ""; }
long rd_error_line(const rd_error* err) { return err ? err->line : -1; }
void rd_error_free(rd_error* err) { delete err; }

void rd_string_free(char* s) { delete[] s; }

/* ---- snapshots ---- */

rd_status rd_snapshot_parse(const char* data, size_t len, rd_snapshot** out, rd_error** err) {
    if (rd_status s = require(data && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = new rd_snapshot{parse_snapshot(std::string_view(data, len))};
        return RD_OK;
    });
}

rd_status rd_snapshot_read_file(const char* path, rd_snapshot** out, rd_error** err) {
    if (rd_status s = require(path && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = new rd_snapshot{read_snapshot_file(path)};
        return RD_OK;
    });
}

rd_status rd_snapshot_write(const rd_snapshot* snap, char** out, rd_error** err) {
    if (rd_status s = require(snap && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = dup_string(serialize_snapshot(snap->snap));
        return RD_OK;
    });
}

const char* rd_snapshot_hive(const rd_snapshot* snap) {
    return snap ? snap->snap.hive_name.c_str() : "";
}

size_t rd_snapshot_key_count(const rd_snapshot* snap) {
    return snap ? snap->snap.key_count() : 0;
}

rd_status rd_snapshot_validate(const rd_snapshot* snap, char** out, rd_error** err) {
    if (rd_status s = require(snap && out, err, "null argument")) return s;
    *out = nullptr;
    return guarded(err, [&] {
        auto violations = validate_axioms(snap->snap);
        if (violations.empty()) return RD_OK;
        std::string text;
        for (const auto& v : violations) text += v.path + ": " + v.detail + "\n";
        *out = dup_string(text);
        return RD_VALIDATION_ERROR;
    });
}

void rd_snapshot_free(rd_snapshot* snap) { delete snap; }

/* ---- knowledge base ---- */

rd_status rd_kb_load_builtin(rd_kb** out, rd_error** err) {
    if (rd_status s = require(out != nullptr, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = new rd_kb{seed_knowledge_base()};
        return RD_OK;
    });
}

rd_status rd_kb_load_dir(const char* dir, rd_kb** out, rd_error** err) {
    if (rd_status s = require(dir && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = new rd_kb{load_knowledge_base_dir(dir)};
        return RD_OK;
    });
}

rd_status rd_kb_load_file(const char* onto_file, rd_kb** out, rd_error** err) {
    if (rd_status s = require(onto_file && out, err, "null argument")) return s;
    return guarded(err, [&] {
        std::ifstream in(onto_file, std::ios::binary);
        if (!in) throw Error(Errc::IoError, std::string("cannot open '") + onto_file + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto [graph, facts] = load_ontology(text);
        auto kb = new rd_kb{};
        kb->kb.graph = std::move(graph);
        kb->kb.facts = std::move(facts);
        kb->kb.grouping_specs = default_grouping_specs();
        *out = kb;
        return RD_OK;
    });
}

rd_status rd_kb_lookup(const rd_kb* kb, const char* path, char** out_json, rd_error** err) {
    if (rd_status s = require(kb && path && out_json, err, "null argument")) return s;
    *out_json = nullptr;
    return guarded(err, [&] {
        auto parsed = RegistryPath::parse(path);
        if (!parsed) throw Error(Errc::InvalidArgument, std::string("bad path '") + path + "'");
        auto hit = lookup_key(kb->kb.annotations, *parsed);
        if (!hit) {
            set_error(err, RD_NOT_FOUND, std::string("no annotation for '") + path + "'");
            return RD_NOT_FOUND;
        }
        nlohmann::ordered_json j;
        j["schema"] = "regdialog/1";
        j["query"] = parsed->rooted_str();
        j["annotatedKey"] = hit->annotation->path.rooted_str();
        j["inherited"] = hit->inherited;
        j["hive"] = hit->annotation->hive;
        j["concepts"] = nlohmann::ordered_json::array();
        if (!hit->inherited)
            for (const auto& c : hit->annotation->evidence_concepts) j["concepts"].push_back(c);
        j["software"] = hit->annotation->owning_software
                            ? nlohmann::ordered_json(*hit->annotation->owning_software)
                            : nlohmann::ordered_json(nullptr);
        j["description"] = hit->annotation->description;
        *out_json = dup_string(j.dump(2) + "\n");
        return RD_OK;
    });
}

rd_status rd_kb_check(const rd_kb* kb, char** out, rd_error** err) {
    if (rd_status s = require(kb && out, err, "null argument")) return s;
    *out = nullptr;
    return guarded(err, [&] {
        auto violations = check_consistency(kb->kb.graph, kb->kb.facts);
        if (violations.empty()) return RD_OK;
        std::string text;
        for (const auto& v : violations) text += violation_to_string(v) + "\n";
        *out = dup_string(text);
        return RD_VALIDATION_ERROR;
    });
}

void rd_kb_free(rd_kb* kb) { delete kb; }

/* ---- rules ---- */

rd_status rd_rules_load_builtin(rd_rules** out, rd_error** err) {
    if (rd_status s = require(out != nullptr, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = new rd_rules{seed_knowledge_base().rules};
        return RD_OK;
    });
}

rd_status rd_rules_read_file(const char* path, rd_rules** out, rd_error** err) {
    if (rd_status s = require(path && out, err, "null argument")) return s;
    return guarded(err, [&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(Errc::IoError, std::string("cannot open '") + path + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        *out = new rd_rules{parse_rules(text)};
        return RD_OK;
    });
}

size_t rd_rules_count(const rd_rules* rules) { return rules ? rules->rules.size() : 0; }

void rd_rules_free(rd_rules* rules) { delete rules; }

rd_status rd_infer(const rd_kb* kb, const rd_rules* rules, int as_json, char** out,
                   rd_error** err) {
    if (rd_status s = require(kb && out, err, "null argument")) return s;
    return guarded(err, [&] {
        const std::vector<Rule>& rs = rules ? rules->rules : kb->kb.rules;
        InferenceResult result = infer(kb->kb.graph, kb->kb.facts, rs);
        *out = dup_string(as_json ? inference_to_json(result) : inference_to_text(result));
        return RD_OK;
    });
}

/* ---- diffing ---- */

namespace {
DiffOptions to_options(const rd_diff_options* opts) {
    DiffOptions o;
    if (opts) o.touch_as_modified = opts->touch_as_modified != 0;
    return o;
}
} // namespace

rd_status rd_diff_snapshots(const rd_snapshot* older, const rd_snapshot* newer,
                            const rd_diff_options* opts, rd_diff** out, rd_error** err) {
    if (rd_status s = require(older && newer && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = new rd_diff{compare_snapshots(older->snap, newer->snap, to_options(opts))};
        return RD_OK;
    });
}

size_t rd_diff_record_count(const rd_diff* diff) { return diff ? diff->diff.records.size() : 0; }

rd_status rd_diff_set_ids(rd_diff* diff, const char* older_id, const char* newer_id) {
    if (!diff) return RD_INVALID_ARGUMENT;
    if (older_id) diff->diff.older_id = older_id;
    if (newer_id) diff->diff.newer_id = newer_id;
    return RD_OK;
}

rd_status rd_diff_to_text(const rd_diff* diff, char** out, rd_error** err) {
    if (rd_status s = require(diff && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = dup_string(diff_to_text(diff->diff));
        return RD_OK;
    });
}

rd_status rd_diff_to_json(const rd_diff* diff, char** out, rd_error** err) {
    if (rd_status s = require(diff && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = dup_string(diff_to_json(diff->diff));
        return RD_OK;
    });
}

void rd_diff_free(rd_diff* diff) { delete diff; }

/* ---- analysis ---- */

rd_status rd_analyze(const rd_snapshot* const* snapshots, size_t count, const char* const* ids,
                     const rd_kb* kb, const rd_rules* rules, const rd_diff_options* opts,
                     const char* case_id, rd_report** out, rd_error** err) {
    if (rd_status s = require(snapshots && kb && out, err, "null argument")) return s;
    return guarded(err, [&] {
        std::vector<const RegistrySnapshot*> snaps;
        snaps.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (!snapshots[i]) throw Error(Errc::InvalidArgument, "null snapshot");
            snaps.push_back(&snapshots[i]->snap);
        }
        AnalyzeOptions options;
        options.diff = to_options(opts);
        if (case_id) options.case_id = case_id;
        if (ids)
            for (size_t i = 0; i < count; ++i)
                options.input_ids.push_back(ids[i] ? ids[i] : "");

        const KnowledgeBase& base = kb->kb;
        if (rules) {
            KnowledgeBase with_rules = base; // shallow copy; sizes are small
            with_rules.rules = rules->rules;
            *out = new rd_report{analyze(snaps, with_rules, options)};
        } else {
            *out = new rd_report{analyze(snaps, base, options)};
        }
        return RD_OK;
    });
}

rd_status rd_report_to_json(const rd_report* report, char** out, rd_error** err) {
    if (rd_status s = require(report && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = dup_string(report_to_json(report->report));
        return RD_OK;
    });
}

rd_status rd_report_to_text(const rd_report* report, char** out, rd_error** err) {
    if (rd_status s = require(report && out, err, "null argument")) return s;
    return guarded(err, [&] {
        *out = dup_string(report_to_text(report->report));
        return RD_OK;
    });
}

size_t rd_report_violation_count(const rd_report* report) {
    return report ? report->report.violations.size() : 0;
}

void rd_report_free(rd_report* report) { delete report; }

} // extern "C"
