// Command-line front end. Links the C API only.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "regdialog.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitNotFound = 3;

int exit_code_for(rd_status status) {
    switch (status) {
        case RD_OK: return kExitOk;
        case RD_VALIDATION_ERROR: return kExitViolation;
        case RD_NOT_FOUND: return kExitNotFound;
        default: return kExitInput;
    }
}

struct ErrorHolder {
    rd_error* err = nullptr;
    ~ErrorHolder() { rd_error_free(err); }
    rd_error** slot() { return &err; }
    void print(const char* prefix) const {
        if (err)
            std::fprintf(stderr, "%s: %s\n", prefix, rd_error_message(err));
        else
            std::fprintf(stderr, "%s\n", prefix);
    }
};

struct OwnedString {
    char* text = nullptr;
    ~OwnedString() { rd_string_free(text); }
    char** slot() { return &text; }
    const char* get() const { return text ? text : ""; }
};

using SnapshotPtr = std::unique_ptr<rd_snapshot, decltype(&rd_snapshot_free)>;

SnapshotPtr load_snapshot(const std::string& path, int& exit_code) {
    ErrorHolder err;
    rd_snapshot* snap = nullptr;
    rd_status status = rd_snapshot_read_file(path.c_str(), &snap, err.slot());
    if (status != RD_OK) {
        err.print(path.c_str());
        exit_code = exit_code_for(status);
    }
    return {snap, &rd_snapshot_free};
}

// --kb flag, then REGDIALOG_KB, then the embedded seed.
std::unique_ptr<rd_kb, decltype(&rd_kb_free)> load_kb(const std::string& kb_dir, int& exit_code) {
    ErrorHolder err;
    rd_kb* kb = nullptr;
    rd_status status;
    std::string dir = kb_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("REGDIALOG_KB")) dir = env;
    }
    if (!dir.empty())
        status = rd_kb_load_dir(dir.c_str(), &kb, err.slot());
    else
        status = rd_kb_load_builtin(&kb, err.slot());
    if (status != RD_OK) {
        err.print("knowledge base");
        exit_code = exit_code_for(status);
    }
    return {kb, &rd_kb_free};
}

int cmd_validate(const std::string& file) {
    int code = kExitOk;
    SnapshotPtr snap = load_snapshot(file, code);
    if (!snap) return code;
    ErrorHolder err;
    OwnedString violations;
    rd_status status = rd_snapshot_validate(snap.get(), violations.slot(), err.slot());
    if (status == RD_OK) {
        std::printf("OK: %s (%zu keys)\n", file.c_str(), rd_snapshot_key_count(snap.get()));
        return kExitOk;
    }
    if (status == RD_VALIDATION_ERROR) {
        std::fputs(violations.get(), stdout);
        return kExitViolation;
    }
    err.print(file.c_str());
    return exit_code_for(status);
}

const char* ordinal_suffix(size_t n) {
    if (n % 100 >= 11 && n % 100 <= 13) return "th";
    switch (n % 10) {
        case 1: return "st";
        case 2: return "nd";
        case 3: return "rd";
        default: return "th";
    }
}

int emit_diff(rd_diff* diff, bool as_json) {
    ErrorHolder err;
    OwnedString text;
    rd_status status = as_json ? rd_diff_to_json(diff, text.slot(), err.slot())
                               : rd_diff_to_text(diff, text.slot(), err.slot());
    if (status != RD_OK) {
        err.print("diff");
        return exit_code_for(status);
    }
    std::fputs(text.get(), stdout);
    return kExitOk;
}

int cmd_diff_chain(const std::vector<std::string>& files, bool as_json, bool touch) {
    int code = kExitOk;
    std::vector<SnapshotPtr> snaps;
    for (const auto& f : files) {
        SnapshotPtr snap = load_snapshot(f, code);
        if (!snap) return code;
        snaps.push_back(std::move(snap));
    }
    rd_diff_options opts{touch ? 1 : 0};
    for (size_t i = 0; i + 1 < snaps.size(); ++i) {
        ErrorHolder err;
        rd_diff* diff = nullptr;
        rd_status status = rd_diff_snapshots(snaps[i].get(), snaps[i + 1].get(), &opts, &diff,
                                             err.slot());
        if (status != RD_OK) {
            err.print("diff");
            return exit_code_for(status);
        }
        std::unique_ptr<rd_diff, decltype(&rd_diff_free)> owned(diff, &rd_diff_free);
        rd_diff_set_ids(diff, files[i].c_str(), files[i + 1].c_str());
        if (!as_json && files.size() > 2)
            std::printf("%zu%s Hive vs %zu%s Hive\n", i + 1, ordinal_suffix(i + 1), i + 2,
                        ordinal_suffix(i + 2));
        int rc = emit_diff(diff, as_json);
        if (rc != kExitOk) return rc;
    }
    return kExitOk;
}

int cmd_analyze(const std::vector<std::string>& files, const std::string& kb_dir,
                const std::string& rules_file, bool as_json, bool touch,
                const std::string& case_id) {
    int code = kExitOk;
    auto kb = load_kb(kb_dir, code);
    if (!kb) return code;

    std::unique_ptr<rd_rules, decltype(&rd_rules_free)> rules(nullptr, &rd_rules_free);
    if (!rules_file.empty()) {
        ErrorHolder err;
        rd_rules* r = nullptr;
        rd_status status = rd_rules_read_file(rules_file.c_str(), &r, err.slot());
        if (status != RD_OK) {
            err.print(rules_file.c_str());
            return exit_code_for(status);
        }
        rules.reset(r);
    }

    std::vector<SnapshotPtr> snaps;
    std::vector<const rd_snapshot*> raw;
    std::vector<const char*> ids;
    for (const auto& f : files) {
        SnapshotPtr snap = load_snapshot(f, code);
        if (!snap) return code;
        raw.push_back(snap.get());
        snaps.push_back(std::move(snap));
    }
    for (const auto& f : files) ids.push_back(f.c_str());

    rd_diff_options opts{touch ? 1 : 0};
    ErrorHolder err;
    rd_report* report = nullptr;
    rd_status status = rd_analyze(raw.data(), raw.size(), ids.data(), kb.get(), rules.get(),
                                  &opts, case_id.c_str(), &report, err.slot());
    if (status != RD_OK) {
        err.print("analyze");
        return exit_code_for(status);
    }
    std::unique_ptr<rd_report, decltype(&rd_report_free)> owned(report, &rd_report_free);

    OwnedString text;
    status = as_json ? rd_report_to_json(report, text.slot(), err.slot())
                     : rd_report_to_text(report, text.slot(), err.slot());
    if (status != RD_OK) {
        err.print("report");
        return exit_code_for(status);
    }
    std::fputs(text.get(), stdout);
    return rd_report_violation_count(report) == 0 ? kExitOk : kExitViolation;
}

int cmd_kb_lookup(const std::string& path, const std::string& kb_dir) {
    int code = kExitOk;
    auto kb = load_kb(kb_dir, code);
    if (!kb) return code;
    ErrorHolder err;
    OwnedString json;
    rd_status status = rd_kb_lookup(kb.get(), path.c_str(), json.slot(), err.slot());
    if (status == RD_NOT_FOUND) {
        std::printf("unknown key: %s\n", path.c_str());
        return kExitNotFound;
    }
    if (status != RD_OK) {
        err.print(path.c_str());
        return exit_code_for(status);
    }
    std::fputs(json.get(), stdout);
    return kExitOk;
}

int cmd_infer(const std::string& facts_file, const std::string& kb_dir,
              const std::string& rules_file, bool as_json) {
    int code = kExitOk;
    std::unique_ptr<rd_kb, decltype(&rd_kb_free)> kb(nullptr, &rd_kb_free);
    if (!facts_file.empty()) {
        ErrorHolder err;
        rd_kb* raw = nullptr;
        rd_status status = rd_kb_load_file(facts_file.c_str(), &raw, err.slot());
        if (status != RD_OK) {
            err.print(facts_file.c_str());
            return exit_code_for(status);
        }
        kb.reset(raw);
    } else {
        kb = load_kb(kb_dir, code);
        if (!kb) return code;
    }

    std::unique_ptr<rd_rules, decltype(&rd_rules_free)> rules(nullptr, &rd_rules_free);
    if (!rules_file.empty()) {
        ErrorHolder err;
        rd_rules* r = nullptr;
        rd_status status = rd_rules_read_file(rules_file.c_str(), &r, err.slot());
        if (status != RD_OK) {
            err.print(rules_file.c_str());
            return exit_code_for(status);
        }
        rules.reset(r);
    }

    ErrorHolder err;
    OwnedString text;
    rd_status status =
        rd_infer(kb.get(), rules.get(), as_json ? 1 : 0, text.slot(), err.slot());
    if (status != RD_OK) {
        err.print("infer");
        return exit_code_for(status);
    }
    std::fputs(text.get(), stdout);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Registry snapshot diffing and ontology-based interpretation"};
    app.set_version_flag("--version", std::string(rd_version()));
    app.require_subcommand(1);

    // validate
    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "Parse a snapshot and check its axioms");
    validate->add_option("file", validate_file, "REGSNAP file")->required();

    // diff
    std::vector<std::string> diff_files;
    bool diff_json = false, diff_touch = false;
    auto* diff = app.add_subcommand("diff", "Compare two snapshots");
    diff->add_option("older", diff_files, "older and newer REGSNAP files")
        ->expected(2)
        ->required();
    diff->add_flag("--json", diff_json, "emit JSON instead of text");
    diff->add_flag("--touch-as-modified", diff_touch,
                   "report timestamp-only changes as Modified");

    // diff-chain
    std::vector<std::string> chain_files;
    bool chain_json = false, chain_touch = false;
    auto* chain = app.add_subcommand("diff-chain", "Compare consecutive snapshots of a series");
    chain->add_option("files", chain_files, "chronologically ordered REGSNAP files")
        ->expected(2, -1)
        ->required();
    chain->add_flag("--json", chain_json, "emit JSON instead of text");
    chain->add_flag("--touch-as-modified", chain_touch,
                    "report timestamp-only changes as Modified");

    // analyze
    std::vector<std::string> analyze_files;
    std::string analyze_kb, analyze_rules, analyze_case;
    bool analyze_json = false, analyze_touch = false;
    auto* analyze = app.add_subcommand(
        "analyze", "Diff a snapshot series, group and annotate the changes, infer activity");
    analyze->add_option("files", analyze_files, "chronologically ordered REGSNAP files")
        ->expected(2, -1)
        ->required();
    analyze->add_option("--kb", analyze_kb, "knowledge base directory (default: embedded seed)");
    analyze->add_option("--rules", analyze_rules, "rule file overriding the knowledge base's");
    analyze->add_option("--case", analyze_case, "case identifier for the report");
    analyze->add_flag("--json", analyze_json, "emit JSON instead of text");
    analyze->add_flag("--touch-as-modified", analyze_touch,
                      "report timestamp-only changes as Modified");

    // kb-lookup
    std::string lookup_path, lookup_kb;
    auto* lookup = app.add_subcommand("kb-lookup", "Look up the known function of a key path");
    lookup->add_option("path", lookup_path, "registry key path")->required();
    lookup->add_option("--kb", lookup_kb, "knowledge base directory (default: embedded seed)");

    // infer
    std::string infer_facts, infer_kb, infer_rules;
    bool infer_json = false;
    auto* infer = app.add_subcommand("infer", "Forward-chain rules over a fact base");
    infer->add_option("facts", infer_facts, "ONTO-TXT file (default: knowledge base facts)");
    infer->add_option("--kb", infer_kb, "knowledge base directory (default: embedded seed)");
    infer->add_option("--rules", infer_rules, "RULE-TXT file (default: knowledge base rules)");
    infer->add_flag("--json", infer_json, "emit JSON instead of text");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(validate_file);
    if (diff->parsed()) return cmd_diff_chain(diff_files, diff_json, diff_touch);
    if (chain->parsed()) return cmd_diff_chain(chain_files, chain_json, chain_touch);
    if (analyze->parsed())
        return cmd_analyze(analyze_files, analyze_kb, analyze_rules, analyze_json, analyze_touch,
                           analyze_case);
    if (lookup->parsed()) return cmd_kb_lookup(lookup_path, lookup_kb);
    if (infer->parsed()) return cmd_infer(infer_facts, infer_kb, infer_rules, infer_json);
    return kExitInput;
}
