#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sdverify {

/// Coarse failure class. Drives CLI exit codes and HTTP status mapping.
enum class ErrorClass {
    validation,  // bad input or request (exit 1, HTTP 400)
    not_found,   // unknown community/member/run (exit 1, HTTP 404)
    conflict,    // run not done yet (exit 1, HTTP 409)
    io,          // filesystem trouble (exit 2, HTTP 500)
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
    [[nodiscard]] ErrorClass error_class() const noexcept { return class_; }

private:
    ErrorClass class_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorClass::validation, what) {}
};

class UnknownCharacteristic : public ValidationError {
public:
    explicit UnknownCharacteristic(const std::string& id)
        : ValidationError("unknown characteristic: " + id) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

/// Malformed record. `line` is 1-based; 0 when the input is not line-oriented.
class FormatError : public Error {
public:
    FormatError(std::string source, std::size_t line, const std::string& reason);
    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(const std::string& id) : Error(ErrorClass::validation, "duplicate id: " + id), id_(id) {}
    [[nodiscard]] const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownCommunity : public Error {
public:
    explicit UnknownCommunity(const std::string& id)
        : Error(ErrorClass::not_found, "unknown community: " + id) {}
};

class UnknownMember : public Error {
public:
    UnknownMember(const std::string& community, const std::string& member)
        : Error(ErrorClass::not_found, "unknown member " + member + " in community " + community) {}
};


class InvariantViolation : public Error {
public:
    InvariantViolation(std::string marker_id, std::string reason);
    [[nodiscard]] const std::string& marker_id() const noexcept { return marker_id_; }
    [[nodiscard]] const std::string& reason() const noexcept { return reason_; }

private:
    std::string marker_id_;
    std::string reason_;
};

class RegexError : public Error {
public:
    RegexError(std::string marker_id, const std::string& detail)
        : Error(ErrorClass::validation, "marker " + marker_id + ": invalid regex: " + detail),
          marker_id_(std::move(marker_id)) {}
    [[nodiscard]] const std::string& marker_id() const noexcept { return marker_id_; }

private:
    std::string marker_id_;
};

class DuplicateCharacteristic : public Error {
public:
    explicit DuplicateCharacteristic(const std::string& id)
        : Error(ErrorClass::validation, "duplicate verdict for characteristic: " + id) {}
};

class EmptyVerdicts : public Error {
public:
    EmptyVerdicts() : Error(ErrorClass::validation, "cannot classify a member without verdicts") {}
};

class CoverageError : public Error {
public:
    CoverageError(const std::string& characteristic, const std::string& value)
        : Error(ErrorClass::validation, "lexicon has no generatable marker for " + characteristic + "=" + value) {}
};

class MissingTruth : public Error {
public:
    explicit MissingTruth(const std::string& member_id)
        : Error(ErrorClass::validation, "no ground truth for member: " + member_id), member_id_(member_id) {}
    [[nodiscard]] const std::string& member_id() const noexcept { return member_id_; }

private:
    std::string member_id_;
};


class UnknownRun : public Error {
public:
    explicit UnknownRun(const std::string& id) : Error(ErrorClass::not_found, "unknown run: " + id) {}
};

class RunNotDone : public Error {
public:
    explicit RunNotDone(const std::string& id) : Error(ErrorClass::conflict, "run not done: " + id) {}
};

/// 0 success, 1 validation/lookup failures, 2 I/O.
int exit_code_for(ErrorClass cls) noexcept;

}  // namespace sdverify
