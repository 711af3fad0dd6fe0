#pragma once

#include <stdexcept>
#include <string>

namespace nilcentral {

/// Base class for every error raised by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed scalar text, field spec text, or JSON input.
class parse_error : public error {
public:
    using error::error;
};

/// Operands belong to different fields, ring contexts, or ambient spaces.
class mismatch_error : public error {
public:
    using error::error;
};

/// A precondition was violated (division by zero, index out of range, r too small, ...).
class domain_error : public error {
public:
    using error::error;
};

/// An internal consistency check failed; the message carries the certificate.
class internal_error : public error {
public:
    using error::error;
};

} // namespace nilcentral
