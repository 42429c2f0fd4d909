#include "diff.hpp"

#include <algorithm>
#include <map>

#include "errors.hpp"
#include "strings.hpp"

namespace regdialog {

const char* diff_state_name(DiffState s) {
    switch (s) {
        case DiffState::Added: return "Added";
        case DiffState::Removed: return "Removed";
        case DiffState::Modified: return "Modified";
    }
    return "Modified";
}

std::optional<DiffState> diff_state_from_name(std::string_view s) {
    if (s == "Added") return DiffState::Added;
    if (s == "Removed") return DiffState::Removed;
    if (s == "Modified") return DiffState::Modified;
    return std::nullopt;
}

std::optional<DiffRecord> compare_keys(const RegistryKey& older, const RegistryKey& newer,
                                       const RegistryPath& path, const DiffOptions& opts) {
    if (!ci_equal(older.name, newer.name) ||
        (!path.empty() && case_fold(path.segments().back()) != case_fold(older.name)))
        throw Error(Errc::PathMismatch, "compared keys occupy different paths");

    std::map<std::string, const RegistryValue*> old_vals, new_vals;
    for (const auto& v : older.values) old_vals[case_fold(v.name)] = &v;
    for (const auto& v : newer.values) new_vals[case_fold(v.name)] = &v;

    ValueDelta delta;
    for (const auto& [folded, nv] : new_vals) {
        auto it = old_vals.find(folded);
        if (it == old_vals.end())
            delta.added.push_back(*nv);
        else if (!it->second->same_content(*nv))
            delta.changed.push_back({nv->name, *it->second, *nv});
    }
    for (const auto& [folded, ov] : old_vals)
        if (!new_vals.count(folded)) delta.removed.push_back(*ov);

    bool touched = opts.touch_as_modified && older.last_modified != newer.last_modified;
    if (delta.empty() && !touched) return std::nullopt;

    DiffRecord rec;
    rec.path = path;
    rec.state = DiffState::Modified;
    rec.older_timestamp = older.last_modified;
    rec.newer_timestamp = newer.last_modified;
    rec.value_delta = std::move(delta);
    return rec;
}

namespace {

void emit_subtree(const RegistryKey& key, const RegistryPath& path, DiffState state,
                  std::vector<DiffRecord>& out) {
    DiffRecord rec;
    rec.path = path;
    rec.state = state;
    if (state == DiffState::Added)
        rec.newer_timestamp = key.last_modified;
    else
        rec.older_timestamp = key.last_modified;
    out.push_back(std::move(rec));
    for (const auto& sub : key.subkeys) emit_subtree(sub, path.child(sub.name), state, out);
}

void compare_children(const RegistryKey& older, const RegistryKey& newer,
                      const RegistryPath& path, const DiffOptions& opts,
                      std::vector<DiffRecord>& out) {
    for (const auto& okid : older.subkeys) {
        RegistryPath kid_path = path.child(okid.name);
        const RegistryKey* nkid = newer.find_subkey(okid.name);
        if (!nkid) {
            emit_subtree(okid, kid_path, DiffState::Removed, out);
            continue;
        }
        if (auto rec = compare_keys(okid, *nkid, kid_path, opts)) out.push_back(std::move(*rec));
        compare_children(okid, *nkid, kid_path, opts, out);
    }
    for (const auto& nkid : newer.subkeys) {
        if (!older.find_subkey(nkid.name))
            emit_subtree(nkid, path.child(nkid.name), DiffState::Added, out);
    }
}

} // namespace

DiffSet compare_snapshots(const RegistrySnapshot& older, const RegistrySnapshot& newer,
                          const DiffOptions& opts) {
    if (!ci_equal(older.hive_name, newer.hive_name))
        throw Error(Errc::HiveMismatch, "snapshots are from different hives ('" +
                                            older.hive_name + "' vs '" + newer.hive_name + "')");
    if (older.captured_at && newer.captured_at && *older.captured_at > *newer.captured_at)
        throw Error(Errc::ChronologyError, "older snapshot was captured after the newer one");

    DiffSet out;
    out.older_id = older.captured_at ? older.captured_at->to_string() : "";
    out.newer_id = newer.captured_at ? newer.captured_at->to_string() : "";
    compare_children(older.root, newer.root, RegistryPath{}, opts, out.records);
    std::sort(out.records.begin(), out.records.end(),
              [](const DiffRecord& a, const DiffRecord& b) {
                  return a.path.order(b.path) == std::strong_ordering::less;
              });
    return out;
}

std::vector<DiffSet> compare_chain(const std::vector<const RegistrySnapshot*>& snapshots,
                                   const DiffOptions& opts) {
    if (snapshots.size() < 2)
        throw Error(Errc::TooFewSnapshots, "need at least two snapshots to compare");
    std::vector<DiffSet> out;
    out.reserve(snapshots.size() - 1);
    for (size_t i = 0; i + 1 < snapshots.size(); ++i)
        out.push_back(compare_snapshots(*snapshots[i], *snapshots[i + 1], opts));
    return out;
}

std::optional<RegistryPath> GroupingKeySpec::group_key_for(const RegistryPath& path) const {
    if (kind == Kind::ExplicitPath)
        return prefix.is_prefix_of(path) ? std::optional<RegistryPath>(prefix) : std::nullopt;
    // PrefixPattern: strictly-below-prefix keys group under the first
    // min(depth, available) segments beneath the prefix.
    if (!prefix.is_prefix_of(path) || path.depth() <= prefix.depth()) return std::nullopt;
    size_t take = std::min(path.depth(), prefix.depth() + depth);
    std::vector<std::string> segs(path.segments().begin(), path.segments().begin() + take);
    return RegistryPath{std::move(segs), path.root_alias()};
}

GroupedDiff group_diffs(const DiffSet& d, const std::vector<GroupingKeySpec>& specs) {
    GroupedDiff out;
    std::map<std::vector<std::string>, DiffGroup> groups; // folded common key -> group
    for (const auto& rec : d.records) {
        std::optional<RegistryPath> best;
        for (const auto& spec : specs) {
            auto key = spec.group_key_for(rec.path);
            if (!key) continue;
            if (!best || key->depth() > best->depth()) best = std::move(key);
        }
        if (!best) {
            out.ungrouped.push_back(rec);
            continue;
        }
        auto [it, inserted] = groups.try_emplace(best->folded());
        if (inserted) it->second.common_key = *best;
        it->second.records.push_back(rec);
    }
    out.groups.reserve(groups.size());
    for (auto& [folded, group] : groups) out.groups.push_back(std::move(group));
    return out;
}

std::string diff_to_text(const DiffSet& d) {
    std::string out;
    for (const auto& rec : d.records) {
        switch (rec.state) {
            case DiffState::Added: out += "ADDED: "; break;
            case DiffState::Modified: out += "MODIFIED: "; break;
            case DiffState::Removed: out += "REM: "; break;
        }
        out += rec.path.rooted_str();
        out.push_back('\n');
    }
    return out;
}

} // namespace regdialog
