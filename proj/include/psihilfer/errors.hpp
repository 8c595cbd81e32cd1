#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace psihilfer {

/// Machine-readable failure categories shared by every module.
enum class ErrorKind {
    NonMonotone,
    DomainViolation,
    ParamViolation,
    OverflowGuard,
    NotConverged,
    GridMismatch,
    GridTooCoarse,
    SyntaxError,
    UnknownIdentifier,
    DomainError,
    ParseError,
    ValidationError,
    Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonMonotone: return "NonMonotone";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::ParamViolation: return "ParamViolation";
        case ErrorKind::OverflowGuard: return "OverflowGuard";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::SyntaxError: return "SyntaxError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Error raised by the expression parser/evaluator; carries a byte offset
/// into the source text.
class ExprError : public Error {
public:
    ExprError(ErrorKind kind, const std::string& message, std::size_t offset)
        : Error(kind, message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace psihilfer
