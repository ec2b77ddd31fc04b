// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hdlgen {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// An intermediate LLM output could not be captured by the downstream parser.
/// Each one counts against the task's format-error allowance.
class FormatError : public Error {
public:
    FormatError(std::string stage, const std::string &what)
        : Error(stage + ": " + what)
        , stage_(std::move(stage))
    {}

    const std::string &stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

class BackendError : public Error {
public:
    using Error::Error;
};

class RemoteError : public BackendError {
public:
    RemoteError(const std::string &what, int status = 0)
        : BackendError(what)
        , status_(status)
    {}

    int status() const noexcept { return status_; }

private:
    int status_;
};

class ScriptExhausted : public BackendError {
public:
    using BackendError::BackendError;
};

/// Scripted response was keyed to a prompt substring that did not appear.
class ScriptMismatch : public BackendError {
public:
    using BackendError::BackendError;
};

class ContextOverflow : public BackendError {
public:
    ContextOverflow(std::size_t estimated, std::size_t limit)
        : BackendError(
              "estimated prompt size " + std::to_string(estimated) + " tokens exceeds context of "
              + std::to_string(limit))
        , estimated_(estimated)
        , limit_(limit)
    {}

    std::size_t estimated() const noexcept { return estimated_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t estimated_;
    std::size_t limit_;
};

class MissingPlaceholder : public Error {
public:
    explicit MissingPlaceholder(std::string key)
        : Error("unbound placeholder '" + key + "'")
        , key_(std::move(key))
    {}

    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

class ClassificationError : public Error {
public:
    using Error::Error;
};

/// Simulator or filesystem trouble that is not the candidate's fault.
class InfrastructureError : public Error {
public:
    using Error::Error;
};

class UnknownOutput : public Error {
public:
    explicit UnknownOutput(const std::string &name)
        : Error("unknown output '" + name + "'")
    {}
};

class MissingInput : public Error {
public:
    explicit MissingInput(const std::string &name)
        : Error("assignment does not bind input '" + name + "'")
    {}
};

class PortMismatch : public Error {
public:
    explicit PortMismatch(std::vector<std::string> names)
        : Error(describe(names))
        , names_(std::move(names))
    {}

    const std::vector<std::string> &names() const noexcept { return names_; }

private:
    static std::string describe(const std::vector<std::string> &names)
    {
        std::string msg = "port mismatch:";
        for (const auto &n : names) {
            msg += ' ';
            msg += n;
        }
        return msg;
    }

    std::vector<std::string> names_;
};

/// Malformed input file (config, dataset, report, table file).
class InputError : public Error {
public:
    using Error::Error;
};

} // namespace hdlgen
