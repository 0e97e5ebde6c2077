#include "sdverify/errors.hpp"

#include <utility>

namespace sdverify {

FormatError::FormatError(std::string source, std::size_t line, const std::string& reason)
    : Error(ErrorClass::validation,
            source + (line > 0 ? ":" + std::to_string(line) : std::string{}) + ": " + reason),
      source_(std::move(source)),
      line_(line) {}

InvariantViolation::InvariantViolation(std::string marker_id, std::string reason)
    : Error(ErrorClass::validation, "marker " + marker_id + ": " + reason),
      marker_id_(std::move(marker_id)),
      reason_(std::move(reason)) {}

int exit_code_for(ErrorClass cls) noexcept {
    switch (cls) {
        case ErrorClass::io:
            return 2;
        case ErrorClass::validation:
        case ErrorClass::not_found:
        case ErrorClass::conflict:
            return 1;
    }
    return 1;
}

}  // namespace sdverify
