#ifndef REGDIALOG_SNAPSHOT_HPP
#define REGDIALOG_SNAPSHOT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "path.hpp"
#include "timestamp.hpp"

namespace regdialog {

enum class ValueType { RegSz, RegExpandSz, RegBinary, RegDword, RegQword, RegMultiSz };

const char* value_type_name(ValueType t);
std::optional<ValueType> value_type_from_name(std::string_view name);

struct RegistryValue {
    std::string name; // may be empty (the default value)
    ValueType type = ValueType::RegSz;
    std::vector<std::uint8_t> data;

    bool same_content(const RegistryValue& other) const {
        return type == other.type && data == other.data;
    }
};

struct RegistryKey {
    std::string name;
    // The paper requires exactly one timestamp per key; a missing value is
    // representable so that hand-built trees can be validated against that.
    std::optional<Timestamp> last_modified;
    std::vector<RegistryValue> values;
    std::vector<RegistryKey> subkeys;

    RegistryKey* find_subkey(std::string_view name);
    const RegistryKey* find_subkey(std::string_view name) const;
    const RegistryValue* find_value(std::string_view name) const;
};

// Case-insensitive structural equality: names compared exactly, sibling and
// value order ignored (siblings are matched by folded name).
bool structurally_equal(const RegistryKey& a, const RegistryKey& b);

struct RegistrySnapshot {
    std::string hive_name;
    std::optional<Timestamp> captured_at;
    RegistryKey root; // container only; never serialized, never a diff record

    static RegistrySnapshot make(std::string hive);

    const RegistryKey* key_at(const RegistryPath& path) const;
    RegistryKey* key_at(const RegistryPath& path);

    // Creates missing intermediate keys; existing keys are left untouched.
    // Returns the key at `path`.
    RegistryKey& ensure_key(const RegistryPath& path, Timestamp stamp);

    size_t key_count() const; // excludes the root container
};

bool structurally_equal(const RegistrySnapshot& a, const RegistrySnapshot& b);

// Axiom checking for in-memory trees. Parsing already enforces all of these,
// so a freshly parsed snapshot always validates clean.
enum class AxiomViolationKind {
    EmptyKeyName,
    MissingTimestamp,
    DuplicateSiblingName,
    DuplicateValueName,
};

struct AxiomViolation {
    AxiomViolationKind kind;
    std::string path; // rooted display path of the offending key
    std::string detail;
};

std::vector<AxiomViolation> validate_axioms(const RegistrySnapshot& s);

// REGSNAP v1 text format.
RegistrySnapshot parse_snapshot(std::string_view text); // throws Error
std::string serialize_snapshot(const RegistrySnapshot& s);

RegistrySnapshot read_snapshot_file(const std::string& path); // throws Error

} // namespace regdialog

#endif
