// Copyright 2026 The hycqm Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hycqm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}

    /// Short machine-readable category, used by the CLI error reporter.
    virtual const char* kind() const noexcept { return "error"; }
};

class UnknownVariableError : public Error {
 public:
    explicit UnknownVariableError(std::string id)
            : Error("unknown variable '" + id + "'"), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }
    const char* kind() const noexcept override { return "unknown-variable"; }

 private:
    std::string id_;
};

class ValidationError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation"; }
};

/// Malformed input document. Carries the line (1-based, 0 if unknown) and
/// the JSON path of the offending field.
class ParseError : public Error {
 public:
    ParseError(const std::string& msg, std::size_t line, std::string field)
            : Error(format(msg, line, field)), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }
    const char* kind() const noexcept override { return "parse"; }

 private:
    static std::string format(const std::string& msg, std::size_t line, const std::string& field) {
        std::string out;
        if (line) out += "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + msg;
    }

    std::size_t line_;
    std::string field_;
};

class UnsupportedEncodingError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "unsupported-encoding"; }
};

class InfeasibleConstraintError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "infeasible-constraint"; }
};

class MustBinarizeError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "must-binarize"; }
};

class InvalidScheduleError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid-schedule"; }
};

class SizeLimitError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "size-limit"; }
};

class InfeasibleSpecError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "infeasible-spec"; }
};

class IoError : public Error {
 public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

}  // namespace hycqm
