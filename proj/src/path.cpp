#include "path.hpp"

#include "strings.hpp"

namespace regdialog {

RegistryPath::RegistryPath(std::vector<std::string> segments, RootAlias alias)
    : segments_(std::move(segments)), alias_(alias) {
    folded_.reserve(segments_.size());
    for (const auto& s : segments_) folded_.push_back(case_fold(s));
}

std::optional<RegistryPath> RegistryPath::parse(std::string_view text) {
    if (!text.empty() && text.front() == '\\') text.remove_prefix(1);
    if (text.empty()) return RegistryPath{};
    auto parts = split(text, '\\');
    RootAlias alias = RootAlias::None;
    size_t first = 0;
    if (!parts.empty()) {
        std::string head = case_fold(parts[0]);
        if (head == "hkcu") {
            alias = RootAlias::Hkcu;
            first = 1;
        } else if (head == "hklm") {
            alias = RootAlias::Hklm;
            first = 1;
        }
    }
    std::vector<std::string> segs;
    for (size_t i = first; i < parts.size(); ++i) {
        if (parts[i].empty() || !valid_utf8(parts[i]) || has_control_char(parts[i]))
            return std::nullopt;
        segs.push_back(parts[i]);
    }
    return RegistryPath{std::move(segs), alias};
}

std::string RegistryPath::str() const {
    std::string out;
    for (size_t i = 0; i < segments_.size(); ++i) {
        if (i) out.push_back('\\');
        out += segments_[i];
    }
    return out;
}

std::string RegistryPath::rooted_str() const { return "\\" + str(); }

RegistryPath RegistryPath::parent() const {
    if (segments_.empty()) return {};
    std::vector<std::string> segs(segments_.begin(), segments_.end() - 1);
    return RegistryPath{std::move(segs), alias_};
}

RegistryPath RegistryPath::child(std::string segment) const {
    std::vector<std::string> segs = segments_;
    segs.push_back(std::move(segment));
    return RegistryPath{std::move(segs), alias_};
}

bool RegistryPath::is_prefix_of(const RegistryPath& other) const {
    if (folded_.size() > other.folded_.size()) return false;
    for (size_t i = 0; i < folded_.size(); ++i)
        if (folded_[i] != other.folded_[i]) return false;
    return true;
}

bool RegistryPath::is_direct_parent_of(const RegistryPath& other) const {
    return other.folded_.size() == folded_.size() + 1 && is_prefix_of(other);
}

bool RegistryPath::ci_equals(const RegistryPath& other) const {
    return folded_ == other.folded_;
}

std::strong_ordering RegistryPath::order(const RegistryPath& other) const {
    size_t n = std::min(folded_.size(), other.folded_.size());
    for (size_t i = 0; i < n; ++i) {
        int c = folded_[i].compare(other.folded_[i]);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
    }
    return folded_.size() <=> other.folded_.size();
}

} // namespace regdialog
