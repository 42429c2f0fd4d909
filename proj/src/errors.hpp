#ifndef REGDIALOG_ERRORS_HPP
#define REGDIALOG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace regdialog {

// Error codes for every failure the library reports. The C API maps these
// onto rd_status values one-to-one where a distinction matters.
enum class Errc {
    // REGSNAP parsing
    MalformedHeader,
    MalformedLine,
    DuplicateKeyPath,
    DuplicateValueName,
    BadTimestamp,
    BadBase64,
    IllegalCharacterInName,
    // ontology / rule text
    ParseError,
    IsaCycle,
    UndeclaredTerm,
    UnsafeRule,
    UnknownBuiltin,
    // diffing
    HiveMismatch,
    ChronologyError,
    TooFewSnapshots,
    PathMismatch,
    // inference
    IterationLimitExceeded,
    // misc
    IoError,
    InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, long line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + message
                                       : std::move(message)),
          code_(code),
          line_(line) {}

    Errc code() const { return code_; }

    // 1-based input line the error was detected on, or -1 when not line-scoped.
    long line() const { return line_; }

private:
    Errc code_;
    long line_;
};

} // namespace regdialog

#endif
