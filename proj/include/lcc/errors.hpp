#pragma once

#include <stdexcept>
#include <string>

namespace lcc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes or lengths that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Arguments outside an operation's domain (e.g. N > 24 for mailman).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or truncated input files.
class FormatError : public Error {
public:
    using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

class VersionError : public FormatError {
public:
    using FormatError::FormatError;
};

// The requested accuracy could not be reached within the stage budget.
class AccuracyUnreachable : public Error {
public:
    using Error::Error;
};

} // namespace lcc
