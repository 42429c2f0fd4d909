#include "errors.hpp"

namespace regdialog {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::MalformedHeader: return "MalformedHeader";
        case Errc::MalformedLine: return "MalformedLine";
        case Errc::DuplicateKeyPath: return "DuplicateKeyPath";
        case Errc::DuplicateValueName: return "DuplicateValueName";
        case Errc::BadTimestamp: return "BadTimestamp";
        case Errc::BadBase64: return "BadBase64";
        case Errc::IllegalCharacterInName: return "IllegalCharacterInName";
        case Errc::ParseError: return "ParseError";
        case Errc::IsaCycle: return "IsaCycle";
        case Errc::UndeclaredTerm: return "UndeclaredTerm";
        case Errc::UnsafeRule: return "UnsafeRule";
        case Errc::UnknownBuiltin: return "UnknownBuiltin";
        case Errc::HiveMismatch: return "HiveMismatch";
        case Errc::ChronologyError: return "ChronologyError";
        case Errc::TooFewSnapshots: return "TooFewSnapshots";
        case Errc::PathMismatch: return "PathMismatch";
        case Errc::IterationLimitExceeded: return "IterationLimitExceeded";
        case Errc::IoError: return "IoError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

} // namespace regdialog
