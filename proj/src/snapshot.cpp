#include "snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "strings.hpp"

namespace regdialog {

const char* value_type_name(ValueType t) {
    switch (t) {
        case ValueType::RegSz: return "REG_SZ";
        case ValueType::RegExpandSz: return "REG_EXPAND_SZ";
        case ValueType::RegBinary: return "REG_BINARY";
        case ValueType::RegDword: return "REG_DWORD";
        case ValueType::RegQword: return "REG_QWORD";
        case ValueType::RegMultiSz: return "REG_MULTI_SZ";
    }
    return "REG_BINARY";
}

std::optional<ValueType> value_type_from_name(std::string_view name) {
    if (name == "REG_SZ") return ValueType::RegSz;
    if (name == "REG_EXPAND_SZ") return ValueType::RegExpandSz;
    if (name == "REG_BINARY") return ValueType::RegBinary;
    if (name == "REG_DWORD") return ValueType::RegDword;
    if (name == "REG_QWORD") return ValueType::RegQword;
    if (name == "REG_MULTI_SZ") return ValueType::RegMultiSz;
    return std::nullopt;
}

RegistryKey* RegistryKey::find_subkey(std::string_view sub) {
    std::string folded = case_fold(sub);
    for (auto& k : subkeys)
        if (case_fold(k.name) == folded) return &k;
    return nullptr;
}

const RegistryKey* RegistryKey::find_subkey(std::string_view sub) const {
    return const_cast<RegistryKey*>(this)->find_subkey(sub);
}

const RegistryValue* RegistryKey::find_value(std::string_view vname) const {
    std::string folded = case_fold(vname);
    for (const auto& v : values)
        if (case_fold(v.name) == folded) return &v;
    return nullptr;
}

bool structurally_equal(const RegistryKey& a, const RegistryKey& b) {
    if (a.name != b.name || a.last_modified != b.last_modified) return false;
    if (a.values.size() != b.values.size() || a.subkeys.size() != b.subkeys.size()) return false;
    for (const auto& v : a.values) {
        const RegistryValue* w = b.find_value(v.name);
        if (!w || w->name != v.name || !w->same_content(v)) return false;
    }
    for (const auto& k : a.subkeys) {
        const RegistryKey* m = b.find_subkey(k.name);
        if (!m || !structurally_equal(k, *m)) return false;
    }
    return true;
}

RegistrySnapshot RegistrySnapshot::make(std::string hive) {
    RegistrySnapshot s;
    s.hive_name = std::move(hive);
    s.root.name = s.hive_name;
    s.root.last_modified = Timestamp{0};
    return s;
}

const RegistryKey* RegistrySnapshot::key_at(const RegistryPath& path) const {
    return const_cast<RegistrySnapshot*>(this)->key_at(path);
}

RegistryKey* RegistrySnapshot::key_at(const RegistryPath& path) {
    RegistryKey* cur = &root;
    for (const auto& seg : path.segments()) {
        cur = cur->find_subkey(seg);
        if (!cur) return nullptr;
    }
    return cur == &root ? nullptr : cur;
}

RegistryKey& RegistrySnapshot::ensure_key(const RegistryPath& path, Timestamp stamp) {
    RegistryKey* cur = &root;
    for (const auto& seg : path.segments()) {
        RegistryKey* next = cur->find_subkey(seg);
        if (!next) {
            RegistryKey k;
            k.name = seg;
            k.last_modified = stamp;
            cur->subkeys.push_back(std::move(k));
            next = &cur->subkeys.back();
        }
        cur = next;
    }
    return *cur;
}

namespace {
size_t count_keys(const RegistryKey& k) {
    size_t n = k.subkeys.size();
    for (const auto& s : k.subkeys) n += count_keys(s);
    return n;
}
} // namespace

size_t RegistrySnapshot::key_count() const { return count_keys(root); }

bool structurally_equal(const RegistrySnapshot& a, const RegistrySnapshot& b) {
    return a.hive_name == b.hive_name && a.captured_at == b.captured_at &&
           structurally_equal(a.root, b.root);
}

namespace {

void validate_key(const RegistryKey& key, const std::string& path, bool is_root,
                  std::vector<AxiomViolation>& out) {
    if (!is_root) {
        if (key.name.empty())
            out.push_back({AxiomViolationKind::EmptyKeyName, path, "key has an empty name"});
        if (!key.last_modified)
            out.push_back({AxiomViolationKind::MissingTimestamp, path,
                           "key has no last-modified timestamp"});
    }
    std::map<std::string, int> value_names;
    for (const auto& v : key.values) {
        if (++value_names[case_fold(v.name)] == 2)
            out.push_back({AxiomViolationKind::DuplicateValueName, path,
                           "duplicate value name '" + v.name + "'"});
    }
    std::map<std::string, int> sub_names;
    for (const auto& k : key.subkeys) {
        if (++sub_names[case_fold(k.name)] == 2)
            out.push_back({AxiomViolationKind::DuplicateSiblingName, path,
                           "duplicate subkey name '" + k.name + "'"});
    }
    for (const auto& k : key.subkeys)
        validate_key(k, path.empty() ? "\\" + k.name : path + "\\" + k.name, false, out);
}

} // namespace

std::vector<AxiomViolation> validate_axioms(const RegistrySnapshot& s) {
    std::vector<AxiomViolation> out;
    validate_key(s.root, "", true, out);
    return out;
}

namespace {

void check_name(std::string_view name, bool allow_empty, long line) {
    if (name.empty()) {
        if (allow_empty) return;
        throw Error(Errc::IllegalCharacterInName, "empty key name", line);
    }
    if (!valid_utf8(name))
        throw Error(Errc::IllegalCharacterInName, "name is not valid UTF-8", line);
    if (has_control_char(name))
        throw Error(Errc::IllegalCharacterInName, "control character in name", line);
    if (name.find('\\') != std::string_view::npos)
        throw Error(Errc::IllegalCharacterInName, "backslash in name", line);
}

struct ParsedKeyLine {
    RegistryPath path;
    Timestamp stamp;
};

ParsedKeyLine parse_key_line(std::string_view rest, long line) {
    size_t tab = rest.rfind('\t');
    if (tab == std::string_view::npos)
        throw Error(Errc::MalformedLine, "key line needs '<path>\\t<timestamp>'", line);
    std::string_view path_text = rest.substr(0, tab);
    std::string_view ts_text = rest.substr(tab + 1);
    auto parts = split(path_text, '\\');
    std::vector<std::string> segs;
    for (auto& p : parts) {
        check_name(p, false, line);
        segs.push_back(std::move(p));
    }
    auto ts = Timestamp::parse(ts_text);
    if (!ts) throw Error(Errc::BadTimestamp, "bad timestamp '" + std::string(ts_text) + "'", line);
    return {RegistryPath{std::move(segs)}, *ts};
}

RegistryValue parse_val_line(std::string_view rest, long line) {
    auto fields = split(rest, '\t');
    if (fields.size() != 3)
        throw Error(Errc::MalformedLine, "val line needs '<name>\\t<type>\\t<base64>'", line);
    check_name(fields[0], true, line);
    auto type = value_type_from_name(fields[1]);
    if (!type) throw Error(Errc::MalformedLine, "unknown value type '" + fields[1] + "'", line);
    auto data = base64_decode(fields[2]);
    if (!data) throw Error(Errc::BadBase64, "bad base64 data", line);
    RegistryValue v;
    v.name = std::move(fields[0]);
    v.type = *type;
    v.data = std::move(*data);
    return v;
}

} // namespace

RegistrySnapshot parse_snapshot(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back(); // trailing newline
    if (lines.size() < 2 || lines[0] != "REGSNAP 1")
        throw Error(Errc::MalformedHeader, "expected 'REGSNAP 1'", 1);
    if (lines[1].rfind("hive ", 0) != 0)
        throw Error(Errc::MalformedHeader, "expected 'hive <name>'", 2);
    std::string hive = lines[1].substr(5);
    if (hive.empty() || !valid_utf8(hive) || has_control_char(hive))
        throw Error(Errc::MalformedHeader, "bad hive name", 2);

    RegistrySnapshot snap = RegistrySnapshot::make(hive);
    size_t idx = 2;
    if (idx < lines.size() && lines[idx].rfind("captured ", 0) == 0) {
        auto ts = Timestamp::parse(std::string_view(lines[idx]).substr(9));
        if (!ts) throw Error(Errc::BadTimestamp, "bad captured timestamp", static_cast<long>(idx + 1));
        snap.captured_at = *ts;
        ++idx;
    }

    // Paths seen as explicit `key` lines; implicit ancestors may be
    // overwritten by a later explicit line, explicit ones may not.
    std::map<std::vector<std::string>, bool> explicit_paths;
    RegistryKey* current = nullptr;

    for (; idx < lines.size(); ++idx) {
        const std::string& line = lines[idx];
        long lineno = static_cast<long>(idx + 1);
        if (line.rfind("key ", 0) == 0) {
            ParsedKeyLine kl = parse_key_line(std::string_view(line).substr(4), lineno);
            auto [it, inserted] = explicit_paths.try_emplace(kl.path.folded(), true);
            if (!inserted) {
                if (it->second)
                    throw Error(Errc::DuplicateKeyPath,
                                "duplicate key path '" + kl.path.str() + "'", lineno);
                it->second = true; // explicit line for a previously implicit key
            }
            // mark implicit ancestors
            for (RegistryPath p = kl.path.parent(); !p.empty(); p = p.parent())
                explicit_paths.try_emplace(p.folded(), false);
            RegistryKey& key = snap.ensure_key(kl.path, kl.stamp);
            key.last_modified = kl.stamp;
            current = &key;
        } else if (line.rfind("val ", 0) == 0) {
            if (!current)
                throw Error(Errc::MalformedLine, "val line before any key line", lineno);
            RegistryValue v = parse_val_line(std::string_view(line).substr(4), lineno);
            if (current->find_value(v.name))
                throw Error(Errc::DuplicateValueName, "duplicate value name '" + v.name + "'",
                            lineno);
            current->values.push_back(std::move(v));
        } else {
            throw Error(Errc::MalformedLine, "unrecognized line", lineno);
        }
    }
    return snap;
}

namespace {

void serialize_key(const RegistryKey& key, std::string& prefix, std::string& out) {
    // prefix holds the rendered path of `key` (empty for root)
    if (!prefix.empty()) {
        if (!key.last_modified)
            throw Error(Errc::InvalidArgument, "cannot serialize key without timestamp: " + prefix);
        out += "key ";
        out += prefix;
        out.push_back('\t');
        out += key.last_modified->to_string();
        out.push_back('\n');
        std::vector<const RegistryValue*> vals;
        vals.reserve(key.values.size());
        for (const auto& v : key.values) vals.push_back(&v);
        std::sort(vals.begin(), vals.end(), [](const RegistryValue* a, const RegistryValue* b) {
            return case_fold(a->name) < case_fold(b->name);
        });
        for (const RegistryValue* v : vals) {
            out += "val ";
            out += v->name;
            out.push_back('\t');
            out += value_type_name(v->type);
            out.push_back('\t');
            out += base64_encode(v->data);
            out.push_back('\n');
        }
    }
    std::vector<const RegistryKey*> subs;
    subs.reserve(key.subkeys.size());
    for (const auto& k : key.subkeys) subs.push_back(&k);
    std::sort(subs.begin(), subs.end(), [](const RegistryKey* a, const RegistryKey* b) {
        return case_fold(a->name) < case_fold(b->name);
    });
    for (const RegistryKey* k : subs) {
        size_t mark = prefix.size();
        if (!prefix.empty()) prefix.push_back('\\');
        prefix += k->name;
        serialize_key(*k, prefix, out);
        prefix.resize(mark);
    }
}

} // namespace

std::string serialize_snapshot(const RegistrySnapshot& s) {
    std::string out = "REGSNAP 1\nhive " + s.hive_name + "\n";
    if (s.captured_at) out += "captured " + s.captured_at->to_string() + "\n";
    std::string prefix;
    serialize_key(s.root, prefix, out);
    return out;
}

RegistrySnapshot read_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_snapshot(buf.str());
}

} // namespace regdialog
