#include "timestamp.hpp"

#include <array>
#include <cstdio>

namespace regdialog {

namespace {

constexpr std::array<int, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

bool all_digits(std::string_view s) {
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return !s.empty();
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

} // namespace

std::optional<Timestamp> Timestamp::parse(std::string_view t) {
    // YYYY-MM-DDTHH:MM:SSZ, fixed width
    if (t.size() != 20) return std::nullopt;
    if (t[4] != '-' || t[7] != '-' || t[10] != 'T' || t[13] != ':' || t[16] != ':' || t[19] != 'Z')
        return std::nullopt;
    std::string_view ys = t.substr(0, 4), mos = t.substr(5, 2), ds = t.substr(8, 2);
    std::string_view hs = t.substr(11, 2), mis = t.substr(14, 2), ss = t.substr(17, 2);
    if (!all_digits(ys) || !all_digits(mos) || !all_digits(ds) || !all_digits(hs) ||
        !all_digits(mis) || !all_digits(ss))
        return std::nullopt;
    int y = to_int(ys), mo = to_int(mos), d = to_int(ds);
    int h = to_int(hs), mi = to_int(mis), s = to_int(ss);
    if (y < 1601 || y > 9999 || mo < 1 || mo > 12) return std::nullopt;
    int dim = kDaysInMonth[mo - 1] + (mo == 2 && is_leap(y) ? 1 : 0);
    if (d < 1 || d > dim) return std::nullopt;
    if (h > 23 || mi > 59 || s > 59) return std::nullopt;
    std::int64_t days = days_from_civil(y, mo, d);
    return Timestamp{days * 86400 + h * 3600 + mi * 60 + s};
}

std::string Timestamp::to_string() const {
    std::int64_t days = seconds_ / 86400;
    std::int64_t rem = seconds_ % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

} // namespace regdialog
