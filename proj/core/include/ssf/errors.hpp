// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ssf {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: out-of-range modes, dimension mismatches, bad hyper-parameters.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: an iterative kernel did not converge within its iteration cap.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A requested allocation or size computation would overflow the index type.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized data. `kind()` distinguishes the failure modes so
/// callers (and tests) do not have to match on message text.
class ParseError : public Error {
public:
    enum class Kind {
        BadMagic,
        Truncated,
        PayloadMismatch,
        TypeTag,
        BadValue,
    };

    ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    [[nodiscard]] Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Invalid or incomplete experiment configuration. `key()` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what) : Error(what), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace ssf
