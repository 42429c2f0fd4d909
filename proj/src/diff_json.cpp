#include <json.hpp>

#include "diff.hpp"
#include "errors.hpp"
#include "strings.hpp"

namespace regdialog {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json value_to_json(const RegistryValue& v) {
    return ordered_json{{"name", v.name},
                        {"type", value_type_name(v.type)},
                        {"data", base64_encode(v.data)}};
}

RegistryValue value_from_json(const ordered_json& j) {
    RegistryValue v;
    v.name = j.at("name").get<std::string>();
    auto type = value_type_from_name(j.at("type").get<std::string>());
    if (!type) throw Error(Errc::ParseError, "unknown value type in JSON");
    v.type = *type;
    auto data = base64_decode(j.at("data").get<std::string>());
    if (!data) throw Error(Errc::ParseError, "bad base64 in JSON");
    v.data = std::move(*data);
    return v;
}

ordered_json record_to_json(const DiffRecord& rec) {
    ordered_json delta;
    delta["added"] = ordered_json::array();
    delta["removed"] = ordered_json::array();
    delta["changed"] = ordered_json::array();
    for (const auto& v : rec.value_delta.added) delta["added"].push_back(value_to_json(v));
    for (const auto& v : rec.value_delta.removed) delta["removed"].push_back(value_to_json(v));
    for (const auto& c : rec.value_delta.changed)
        delta["changed"].push_back(ordered_json{{"name", c.name},
                                                {"older", value_to_json(c.older)},
                                                {"newer", value_to_json(c.newer)}});
    ordered_json j;
    j["path"] = rec.path.rooted_str();
    j["state"] = diff_state_name(rec.state);
    j["valueDelta"] = std::move(delta);
    j["olderTs"] = rec.older_timestamp ? ordered_json(rec.older_timestamp->to_string())
                                       : ordered_json(nullptr);
    j["newerTs"] = rec.newer_timestamp ? ordered_json(rec.newer_timestamp->to_string())
                                       : ordered_json(nullptr);
    return j;
}

DiffRecord record_from_json(const ordered_json& j) {
    DiffRecord rec;
    auto path = RegistryPath::parse(j.at("path").get<std::string>());
    if (!path) throw Error(Errc::ParseError, "bad path in JSON");
    rec.path = std::move(*path);
    auto state = diff_state_from_name(j.at("state").get<std::string>());
    if (!state) throw Error(Errc::ParseError, "bad state in JSON");
    rec.state = *state;
    const auto& delta = j.at("valueDelta");
    for (const auto& v : delta.at("added")) rec.value_delta.added.push_back(value_from_json(v));
    for (const auto& v : delta.at("removed"))
        rec.value_delta.removed.push_back(value_from_json(v));
    for (const auto& c : delta.at("changed"))
        rec.value_delta.changed.push_back({c.at("name").get<std::string>(),
                                           value_from_json(c.at("older")),
                                           value_from_json(c.at("newer"))});
    auto parse_ts = [](const ordered_json& t) -> std::optional<Timestamp> {
        if (t.is_null()) return std::nullopt;
        auto ts = Timestamp::parse(t.get<std::string>());
        if (!ts) throw Error(Errc::ParseError, "bad timestamp in JSON");
        return ts;
    };
    rec.older_timestamp = parse_ts(j.at("olderTs"));
    rec.newer_timestamp = parse_ts(j.at("newerTs"));
    return rec;
}

} // namespace

std::string diff_record_to_json(const DiffRecord& rec) { return record_to_json(rec).dump(); }

std::string diff_to_json(const DiffSet& d) {
    ordered_json j;
    j["schema"] = "regdialog/1";
    j["older"] = d.older_id;
    j["newer"] = d.newer_id;
    j["records"] = ordered_json::array();
    for (const auto& rec : d.records) j["records"].push_back(record_to_json(rec));
    return j.dump(2) + "\n";
}

DiffSet diff_from_json(std::string_view text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::ParseError, "invalid JSON");
    try {
        DiffSet d;
        d.older_id = j.at("older").get<std::string>();
        d.newer_id = j.at("newer").get<std::string>();
        for (const auto& r : j.at("records")) d.records.push_back(record_from_json(r));
        return d;
    } catch (const ordered_json::exception& e) {
        throw Error(Errc::ParseError, std::string("bad diff JSON: ") + e.what());
    }
}

} // namespace regdialog
