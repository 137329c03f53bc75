#pragma once
#include <stdexcept>
#include <string>

namespace crheat {

// Base error. The exit code is what the CLI returns when the error escapes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 2; }
    virtual const char* kind() const noexcept { return "error"; }
};

struct DomainError : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "domain-error"; }
};

struct PoleError : DomainError {
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "pole-error"; }
};

struct PairingRequired : DomainError {
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "pairing-required"; }
};

struct UnsupportedRegime : DomainError {
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "unsupported-regime"; }
};

struct BracketFailure : DomainError {
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "bracket-failure"; }
};

struct SpecTooSmall : DomainError {
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "spec-too-small"; }
};

struct NonConvergence : Error {
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
    const char* kind() const noexcept override { return "quadrature-nonconvergence"; }
};

} // namespace crheat
