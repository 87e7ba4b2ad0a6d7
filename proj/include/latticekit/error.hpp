#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace latticekit {

/// Error category, mapped to process exit codes by the CLI
/// (kParse/kConfig -> 2, kDomain -> 1).
enum class ErrorCategory { kParse, kConfig, kDomain };

/// Exception carrying a stable machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& message)
        : std::runtime_error(message), category_(category), code_(std::move(code)) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorCategory category_;
    std::string code_;
};

inline Error parse_error(const std::string& code, const std::string& message) {
    return Error(ErrorCategory::kParse, code, message);
}

inline Error config_error(const std::string& code, const std::string& message) {
    return Error(ErrorCategory::kConfig, code, message);
}

inline Error domain_error(const std::string& code, const std::string& message) {
    return Error(ErrorCategory::kDomain, code, message);
}

}  // namespace latticekit
