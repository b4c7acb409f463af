#ifndef HON_ERRORS_HPP
#define HON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hon
{

// Exit codes used by the command-line front end.
enum class ExitCode : int {
    success = 0,
    usage = 2,
    domain = 3,
    no_sign_change = 4,
    verification_failure = 5,
};

/// Base for every error the library raises. Each subclass maps to one CLI
/// exit code and one short machine-readable kind string.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept = 0;
    virtual const char *kind() const noexcept = 0;
};

class UsageError : public Error
{
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override
    {
        return ExitCode::usage;
    }
    const char *kind() const noexcept override
    {
        return "usage";
    }
};

class DomainError : public Error
{
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override
    {
        return ExitCode::domain;
    }
    const char *kind() const noexcept override
    {
        return "domain";
    }
};

class UnsupportedOrderError : public DomainError
{
public:
    using DomainError::DomainError;
    const char *kind() const noexcept override
    {
        return "unsupported_order";
    }
};

class ZeroDenominatorError : public DomainError
{
public:
    using DomainError::DomainError;
    const char *kind() const noexcept override
    {
        return "zero_denominator";
    }
};

class TruncationError : public DomainError
{
public:
    using DomainError::DomainError;
    const char *kind() const noexcept override
    {
        return "truncation";
    }
};

class NoSignChangeError : public Error
{
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override
    {
        return ExitCode::no_sign_change;
    }
    const char *kind() const noexcept override
    {
        return "no_sign_change";
    }
};

class VerificationError : public Error
{
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override
    {
        return ExitCode::verification_failure;
    }
    const char *kind() const noexcept override
    {
        return "verification_failure";
    }
};

} // namespace hon

#endif
