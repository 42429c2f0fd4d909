#ifndef REGDIALOG_PATH_HPP
#define REGDIALOG_PATH_HPP

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regdialog {

enum class RootAlias { None, Hkcu, Hklm };

// A hive-relative key path. Segment comparison is case-insensitive; the
// original spelling is preserved for display.
class RegistryPath {
public:
    RegistryPath() = default;
    explicit RegistryPath(std::vector<std::string> segments, RootAlias alias = RootAlias::None);

    // Accepts "a\b\c", "\a\b\c", "HKCU\a\b" (alias match is case-insensitive).
    // Rejects empty segments and segments with control characters.
    static std::optional<RegistryPath> parse(std::string_view text);

    const std::vector<std::string>& segments() const { return segments_; }
    RootAlias root_alias() const { return alias_; }
    bool empty() const { return segments_.empty(); }
    size_t depth() const { return segments_.size(); }

    // "a\b\c" (no leading separator).
    std::string str() const;
    // "\a\b\c" — the display form used in diff output.
    std::string rooted_str() const;

    RegistryPath parent() const;
    RegistryPath child(std::string segment) const;

    // Case-insensitive prefix/equality tests ignore the root alias.
    bool is_prefix_of(const RegistryPath& other) const;       // non-strict
    bool is_direct_parent_of(const RegistryPath& other) const;
    bool ci_equals(const RegistryPath& other) const;

    // Folded segments, cached; the basis of all ordering and equality.
    const std::vector<std::string>& folded() const { return folded_; }

    // Lexicographic on folded segment lists. Matches canonical DFS emission
    // order of a sibling-sorted tree.
    std::strong_ordering order(const RegistryPath& other) const;

private:
    std::vector<std::string> segments_;
    std::vector<std::string> folded_;
    RootAlias alias_ = RootAlias::None;
};

inline bool operator==(const RegistryPath& a, const RegistryPath& b) {
    return a.root_alias() == b.root_alias() && a.folded() == b.folded();
}

struct PathOrder {
    bool operator()(const RegistryPath& a, const RegistryPath& b) const {
        return a.order(b) == std::strong_ordering::less;
    }
};

} // namespace regdialog

#endif
