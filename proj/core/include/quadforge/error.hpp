#pragma once

#include <stdexcept>
#include <string>

namespace quadforge {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed rotation system, face set, or graph (dart missing, duplicated, non-manifold link...).
class StructureError : public Error {
public:
    using Error::Error;
};

/// Text input that cannot be parsed. `line()` is 1-based, 0 when unknown.
class FormatError : public Error {
public:
    FormatError(const std::string& what, int line = 0, const std::string& source = {})
        : Error((source.empty() ? "" : source + ": ") + (line > 0 ? "line " + std::to_string(line) + ": " : "") + what),
          line_(line), detail_(what) {}
    int line() const noexcept { return line_; }
    /// Message without source/line prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    int line_;
    std::string detail_;
};

/// A surgery precondition failed (degree mismatch, parallel edge created, bad site).
class SurgeryError : public Error {
public:
    using Error::Error;
};

/// A witness specification is internally inconsistent.
class SpecError : public Error {
public:
    using Error::Error;
};

/// A request is outside the constructible range (inadmissible (n,t), unknown record...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Catalog storage problems: missing or corrupt witness, spec violation on load.
class CatalogError : public Error {
public:
    using Error::Error;
};

}  // namespace quadforge
