#ifndef REGDIALOG_KB_EMBEDDED_HPP
#define REGDIALOG_KB_EMBEDDED_HPP

namespace regdialog {

// Contents of the data/ seed files, embedded at build time so the library
// works without an installed data directory.
extern const char* const kEmbeddedOntology;
extern const char* const kEmbeddedAnnotations;
extern const char* const kEmbeddedRules;

} // namespace regdialog

#endif
