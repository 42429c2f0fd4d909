#ifndef REGDIALOG_TESTS_GENERATORS_HPP
#define REGDIALOG_TESTS_GENERATORS_HPP

#include <random>
#include <set>
#include <string>
#include <vector>

#include "snapshot.hpp"
#include "strings.hpp"

namespace regdialog::testgen {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) { // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Name pool with deliberate case-fold collisions ("Run"/"run" style) and a
// couple of non-ASCII entries.
inline std::string random_name(Rng& rng) {
    static const char* pool[] = {"Run",      "Software", "Config",  "MRU",    "Shell",
                                 "Explorer", "Bags",     "7.0",     "Data",   "Common",
                                 "Install",  "Caf\xC3\xA9", "Settings", "Update", "Cache"};
    std::string name = pool[pick(rng, 0, static_cast<int>(std::size(pool)) - 1)];
    if (chance(rng, 0.3))
        for (auto& c : name)
            if (chance(rng, 0.5) && c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    if (chance(rng, 0.3)) name += std::to_string(pick(rng, 0, 99));
    return name;
}

inline std::string unique_child_name(Rng& rng, std::set<std::string>& used_folded) {
    for (int tries = 0; tries < 64; ++tries) {
        std::string name = random_name(rng);
        if (used_folded.insert(case_fold(name)).second) return name;
    }
    std::string name = "k" + std::to_string(used_folded.size());
    used_folded.insert(case_fold(name));
    return name;
}

inline RegistryValue random_value(Rng& rng, std::set<std::string>& used_folded) {
    RegistryValue v;
    if (!chance(rng, 0.1) || !used_folded.insert("").second) v.name = unique_child_name(rng, used_folded);
    v.type = static_cast<ValueType>(pick(rng, 0, 5));
    int len = pick(rng, 0, 12);
    for (int i = 0; i < len; ++i) v.data.push_back(static_cast<uint8_t>(pick(rng, 0, 255)));
    return v;
}

inline Timestamp random_timestamp(Rng& rng) {
    // 2000-01-01 .. ~2038
    return Timestamp{946684800 + static_cast<int64_t>(pick(rng, 0, 1200000000))};
}

inline void grow_tree(Rng& rng, RegistryKey& key, int depth, int& budget) {
    if (depth > 0) { // the snapshot root is a container and carries no values
        std::set<std::string> value_names;
        int values = pick(rng, 0, 3);
        for (int i = 0; i < values; ++i) key.values.push_back(random_value(rng, value_names));
    }
    if (depth >= 4 || budget <= 0) return;
    std::set<std::string> child_names;
    int children = pick(rng, 0, depth == 0 ? 4 : 3);
    for (int i = 0; i < children && budget > 0; ++i) {
        RegistryKey child;
        child.name = unique_child_name(rng, child_names);
        child.last_modified = random_timestamp(rng);
        --budget;
        grow_tree(rng, child, depth + 1, budget);
        key.subkeys.push_back(std::move(child));
    }
}

inline RegistrySnapshot random_snapshot(Rng& rng, int max_keys = 40) {
    RegistrySnapshot snap = RegistrySnapshot::make("NTUSER.DAT");
    int budget = pick(rng, 0, max_keys);
    grow_tree(rng, snap.root, 0, budget);
    return snap;
}

// Random in-place edits: value changes, subtree additions and removals,
// timestamp touches. Produces realistic diff pairs.
inline void mutate_key(Rng& rng, RegistryKey& key, int depth) {
    if (depth == 0) { // never touch the root container itself
        if (!key.subkeys.empty() && chance(rng, 0.12))
            key.subkeys.erase(key.subkeys.begin() +
                              pick(rng, 0, static_cast<int>(key.subkeys.size()) - 1));
        if (chance(rng, 0.2)) {
            std::set<std::string> used;
            for (const auto& k : key.subkeys) used.insert(case_fold(k.name));
            RegistryKey child;
            child.name = unique_child_name(rng, used);
            child.last_modified = random_timestamp(rng);
            int budget = pick(rng, 0, 6);
            grow_tree(rng, child, 1, budget);
            key.subkeys.push_back(std::move(child));
        }
        for (auto& sub : key.subkeys)
            if (chance(rng, 0.7)) mutate_key(rng, sub, 1);
        return;
    }
    if (!key.values.empty() && chance(rng, 0.3)) {
        auto& v = key.values[pick(rng, 0, static_cast<int>(key.values.size()) - 1)];
        if (chance(rng, 0.5))
            v.data.push_back(0x42);
        else
            v.type = static_cast<ValueType>((static_cast<int>(v.type) + 1) % 6);
    }
    if (!key.values.empty() && chance(rng, 0.15))
        key.values.erase(key.values.begin() + pick(rng, 0, static_cast<int>(key.values.size()) - 1));
    if (chance(rng, 0.2)) {
        std::set<std::string> used;
        for (const auto& v : key.values) used.insert(case_fold(v.name));
        key.values.push_back(random_value(rng, used));
    }
    if (chance(rng, 0.1)) key.last_modified = random_timestamp(rng);
    if (!key.subkeys.empty() && chance(rng, 0.12))
        key.subkeys.erase(key.subkeys.begin() +
                          pick(rng, 0, static_cast<int>(key.subkeys.size()) - 1));
    if (depth < 3 && chance(rng, 0.15)) {
        std::set<std::string> used;
        for (const auto& k : key.subkeys) used.insert(case_fold(k.name));
        RegistryKey child;
        child.name = unique_child_name(rng, used);
        child.last_modified = random_timestamp(rng);
        int budget = pick(rng, 0, 4);
        grow_tree(rng, child, depth + 1, budget);
        key.subkeys.push_back(std::move(child));
    }
    for (auto& sub : key.subkeys)
        if (chance(rng, 0.7)) mutate_key(rng, sub, depth + 1);
}

inline RegistrySnapshot mutated_copy(Rng& rng, const RegistrySnapshot& base) {
    RegistrySnapshot out = base;
    mutate_key(rng, out.root, 0);
    return out;
}

} // namespace regdialog::testgen

#endif
