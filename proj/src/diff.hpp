#ifndef REGDIALOG_DIFF_HPP
#define REGDIALOG_DIFF_HPP

#include <optional>
#include <string>
#include <vector>

#include "snapshot.hpp"

namespace regdialog {

enum class DiffState { Added, Removed, Modified };

const char* diff_state_name(DiffState s);                      // "Added"/"Removed"/"Modified"
std::optional<DiffState> diff_state_from_name(std::string_view);

struct ChangedValue {
    std::string name; // spelling from the newer side
    RegistryValue older;
    RegistryValue newer;
};

struct ValueDelta {
    std::vector<RegistryValue> added;   // sorted by folded name
    std::vector<RegistryValue> removed; // sorted by folded name
    std::vector<ChangedValue> changed;  // sorted by folded name

    bool empty() const { return added.empty() && removed.empty() && changed.empty(); }
};

struct DiffRecord {
    RegistryPath path;
    DiffState state = DiffState::Modified;
    std::optional<Timestamp> older_timestamp; // absent for Added
    std::optional<Timestamp> newer_timestamp; // absent for Removed
    ValueDelta value_delta;
};

struct DiffSet {
    std::string older_id;
    std::string newer_id;
    std::vector<DiffRecord> records; // path-distinct, canonical path order
};

struct DiffOptions {
    // When set, keys whose values are identical but whose timestamp changed
    // produce a Modified record with an empty value delta.
    bool touch_as_modified = false;
};

// Compares two keys occupying the same path. Only the keys' own value sets
// (and, with touch_as_modified, their timestamps) matter; subkeys are
// compared by compare_snapshots as independent records.
std::optional<DiffRecord> compare_keys(const RegistryKey& older, const RegistryKey& newer,
                                       const RegistryPath& path, const DiffOptions& opts = {});

DiffSet compare_snapshots(const RegistrySnapshot& older, const RegistrySnapshot& newer,
                          const DiffOptions& opts = {});

// Consecutive pairwise diffs of >= 2 chronologically ordered snapshots.
std::vector<DiffSet> compare_chain(const std::vector<const RegistrySnapshot*>& snapshots,
                                   const DiffOptions& opts = {});

// One diff record set aggregated under a common grouping key.
struct DiffGroup {
    RegistryPath common_key;
    std::vector<DiffRecord> records;
    std::optional<std::string> owning_software;
};

struct GroupingKeySpec {
    enum class Kind { PrefixPattern, ExplicitPath };
    Kind kind = Kind::ExplicitPath;
    RegistryPath prefix; // PrefixPattern: fixed prefix; ExplicitPath: the key itself
    size_t depth = 0;    // PrefixPattern only: segments under the prefix forming the group key

    static GroupingKeySpec prefix_pattern(RegistryPath prefix, size_t depth) {
        return {Kind::PrefixPattern, std::move(prefix), depth};
    }
    static GroupingKeySpec explicit_path(RegistryPath path) {
        return {Kind::ExplicitPath, std::move(path), 0};
    }

    // The group key this spec assigns to `path`, or nullopt if it does not
    // apply.
    std::optional<RegistryPath> group_key_for(const RegistryPath& path) const;
};

struct GroupedDiff {
    std::vector<DiffGroup> groups; // ordered by folded common key
    std::vector<DiffRecord> ungrouped;
};

// Assigns every record to the spec producing the deepest group key; records
// matching no spec land in `ungrouped`.
GroupedDiff group_diffs(const DiffSet& d, const std::vector<GroupingKeySpec>& specs);

// "ADDED: \path" / "MODIFIED: \path" / "REM: \path", one line per record.
std::string diff_to_text(const DiffSet& d);

// JSON round-trip; shape {schema, older, newer, records:[...]}.
std::string diff_to_json(const DiffSet& d);
DiffSet diff_from_json(std::string_view json_text); // throws Error(ParseError)

// One record as a compact JSON object (the element shape of `records`).
std::string diff_record_to_json(const DiffRecord& rec);

} // namespace regdialog

#endif
