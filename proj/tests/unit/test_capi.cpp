#include <doctest.h>

#include <json.hpp>

#include <cstring>
#include <string>

#include "regdialog.h"

namespace {

std::string fixture_path(const char* name) {
    return std::string(REGDIALOG_FIXTURE_DIR) + "/" + name;
}

struct Guard {
    rd_error* err = nullptr;
    char* text = nullptr;
    ~Guard() {
        rd_error_free(err);
        rd_string_free(text);
    }
};

} // namespace

TEST_CASE("c api: snapshot lifecycle") {
    Guard g;
    rd_snapshot* snap = nullptr;
    const char* text = "REGSNAP 1\nhive X\nkey Run\t2009-01-01T00:00:00Z\n";
    REQUIRE(rd_snapshot_parse(text, std::strlen(text), &snap, &g.err) == RD_OK);
    CHECK(std::string(rd_snapshot_hive(snap)) == "X");
    CHECK(rd_snapshot_key_count(snap) == 1);

    char* out = nullptr;
    REQUIRE(rd_snapshot_write(snap, &out, &g.err) == RD_OK);
    CHECK(std::string(out) == text);
    rd_string_free(out);

    char* violations = nullptr;
    CHECK(rd_snapshot_validate(snap, &violations, &g.err) == RD_OK);
    CHECK(violations == nullptr);
    rd_snapshot_free(snap);
}

TEST_CASE("c api: parse errors carry status, message, and line") {
    Guard g;
    rd_snapshot* snap = nullptr;
    const char* bad = "REGSNAP 1\nhive X\nkey a\tBADSTAMP\n";
    rd_status status = rd_snapshot_parse(bad, std::strlen(bad), &snap, &g.err);
    CHECK(status == RD_PARSE_ERROR);
    REQUIRE(g.err);
    CHECK(rd_error_status(g.err) == RD_PARSE_ERROR);
    CHECK(rd_error_line(g.err) == 3);
    CHECK(std::string(rd_error_message(g.err)).find("BadTimestamp") != std::string::npos);
    CHECK(snap == nullptr);
}

TEST_CASE("c api: diff and chain") {
    Guard g;
    rd_snapshot *s1 = nullptr, *s2 = nullptr;
    REQUIRE(rd_snapshot_read_file(fixture_path("fig3_hive1.regsnap").c_str(), &s1, &g.err) ==
            RD_OK);
    REQUIRE(rd_snapshot_read_file(fixture_path("fig3_hive2.regsnap").c_str(), &s2, &g.err) ==
            RD_OK);

    rd_diff* diff = nullptr;
    REQUIRE(rd_diff_snapshots(s1, s2, nullptr, &diff, &g.err) == RD_OK);
    CHECK(rd_diff_record_count(diff) == 23); // 13 added + 10 modified
    char* text = nullptr;
    REQUIRE(rd_diff_to_text(diff, &text, &g.err) == RD_OK);
    CHECK(std::string(text).find("ADDED: \\Software\\Adobe\\Acrobat Reader\\7.0\n") !=
          std::string::npos);
    rd_string_free(text);

    rd_diff_set_ids(diff, "one", "two");
    char* json = nullptr;
    REQUIRE(rd_diff_to_json(diff, &json, &g.err) == RD_OK);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed["older"] == "one");
    CHECK(parsed["newer"] == "two");
    CHECK(parsed["records"].size() == 23);
    rd_string_free(json);
    rd_diff_free(diff);

    // wrong order trips the chronology check
    rd_diff* backwards = nullptr;
    CHECK(rd_diff_snapshots(s2, s1, nullptr, &backwards, &g.err) == RD_CHRONOLOGY_ERROR);

    rd_snapshot_free(s1);
    rd_snapshot_free(s2);
}

TEST_CASE("c api: kb lookup and consistency") {
    Guard g;
    rd_kb* kb = nullptr;
    REQUIRE(rd_kb_load_builtin(&kb, &g.err) == RD_OK);

    char* json = nullptr;
    REQUIRE(rd_kb_lookup(kb,
                         "software\\microsoft\\windows\\currentversion\\explorer\\recentdocs",
                         &json, &g.err) == RD_OK);
    std::string body(json);
    CHECK(body.find("DocumentEvidence") != std::string::npos);
    CHECK(body.find("DocumentActivity") != std::string::npos);
    rd_string_free(json);

    char* missing = nullptr;
    rd_error* nf = nullptr;
    CHECK(rd_kb_lookup(kb, "System\\Select", &missing, &nf) == RD_NOT_FOUND);
    CHECK(missing == nullptr);
    rd_error_free(nf);

    char* violations = nullptr;
    CHECK(rd_kb_check(kb, &violations, &g.err) == RD_OK);
    CHECK(violations == nullptr);
    rd_kb_free(kb);
}

TEST_CASE("c api: analyze end to end") {
    Guard g;
    rd_snapshot* snaps[3] = {};
    REQUIRE(rd_snapshot_read_file(fixture_path("fig3_hive1.regsnap").c_str(), &snaps[0], &g.err) ==
            RD_OK);
    REQUIRE(rd_snapshot_read_file(fixture_path("fig3_hive2.regsnap").c_str(), &snaps[1], &g.err) ==
            RD_OK);
    REQUIRE(rd_snapshot_read_file(fixture_path("fig3_hive3.regsnap").c_str(), &snaps[2], &g.err) ==
            RD_OK);
    rd_kb* kb = nullptr;
    REQUIRE(rd_kb_load_builtin(&kb, &g.err) == RD_OK);

    const char* ids[3] = {"rp1", "rp2", "rp3"};
    rd_report* report = nullptr;
    REQUIRE(rd_analyze(const_cast<const rd_snapshot* const*>(snaps), 3, ids, kb, nullptr, nullptr,
                       "case-7", &report, &g.err) == RD_OK);
    CHECK(rd_report_violation_count(report) == 0);

    char* json = nullptr;
    REQUIRE(rd_report_to_json(report, &json, &g.err) == RD_OK);
    auto parsed = nlohmann::json::parse(json);
    CHECK(parsed["caseId"] == "case-7");
    CHECK(parsed["groups"].size() == 7);
    rd_string_free(json);

    rd_report_free(report);
    rd_kb_free(kb);
    for (auto* s : snaps) rd_snapshot_free(s);
}

TEST_CASE("c api: rules and ad-hoc inference") {
    Guard g;
    rd_rules* rules = nullptr;
    REQUIRE(rd_rules_load_builtin(&rules, &g.err) == RD_OK);
    CHECK(rd_rules_count(rules) == 6);

    rd_kb* kb = nullptr;
    REQUIRE(rd_kb_load_builtin(&kb, &g.err) == RD_OK);
    char* out = nullptr;
    REQUIRE(rd_infer(kb, rules, 1, &out, &g.err) == RD_OK);
    auto parsed = nlohmann::json::parse(out);
    CHECK(parsed["derived"].empty()); // no comparison units in the bare seed
    rd_string_free(out);

    rd_kb_free(kb);
    rd_rules_free(rules);
}

TEST_CASE("c api: null arguments are rejected") {
    rd_error* err = nullptr;
    CHECK(rd_snapshot_parse(nullptr, 0, nullptr, &err) == RD_INVALID_ARGUMENT);
    rd_error_free(err);
    err = nullptr;
    CHECK(rd_kb_load_dir(nullptr, nullptr, &err) == RD_INVALID_ARGUMENT);
    rd_error_free(err);
    CHECK(std::string(rd_version()) == "0.1.0");
}
