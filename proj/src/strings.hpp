#ifndef REGDIALOG_STRINGS_HPP
#define REGDIALOG_STRINGS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regdialog {

// One-to-one case folding over UTF-8. Each codepoint is folded independently
// (no expansion), which matches how the Windows registry compares names.
// Invalid UTF-8 bytes are passed through unchanged.
std::string case_fold(std::string_view s);

// Case-insensitive equality under case_fold.
bool ci_equal(std::string_view a, std::string_view b);

// true if s is well-formed UTF-8.
bool valid_utf8(std::string_view s);

// true if s contains a C0/C1 control character or DEL (decoded as UTF-8).
bool has_control_char(std::string_view s);

// Standard base64 with padding.
std::string base64_encode(const std::vector<std::uint8_t>& data);
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

// Splits on a single-character separator; "a||b" yields {"a","","b"}.
std::vector<std::string> split(std::string_view s, char sep);

} // namespace regdialog

#endif
