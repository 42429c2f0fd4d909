#ifndef REGDIALOG_TIMESTAMP_HPP
#define REGDIALOG_TIMESTAMP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace regdialog {

// UTC wall-clock instant with 1-second resolution. Text form is always
// "YYYY-MM-DDTHH:MM:SSZ"; accepted years span 1601..9999.
class Timestamp {
public:
    Timestamp() = default;
    explicit Timestamp(std::int64_t unix_seconds) : seconds_(unix_seconds) {}

    static std::optional<Timestamp> parse(std::string_view text);
    std::string to_string() const;

    std::int64_t unix_seconds() const { return seconds_; }

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

private:
    std::int64_t seconds_ = 0;
};

} // namespace regdialog

#endif
