#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace influence {

enum class ErrorCode {
    UnknownEndpoint,
    SelfLoop,
    DuplicateAccountId,
    InvalidAccountId,
    EmptyGraph,
    InvalidArgument,
    ZeroFollowers,
    NoPosts,
    AuthorMismatch,
};

std::string_view to_string(ErrorCode code);

/// Raised by the metric and graph operations. `subject` names the offending
/// record (an account id, an edge, a post id) so callers can report it.
class InfluenceError : public std::runtime_error {
public:
    InfluenceError(ErrorCode code, std::string subject, const std::string& message)
        : std::runtime_error(message), code_(code), subject_(std::move(subject)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    ErrorCode code_;
    std::string subject_;
};

} // namespace influence
