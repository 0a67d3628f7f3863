#ifndef TAILPCA_ERROR_HPP
#define TAILPCA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tailpca {

/// Error categories; they map 1:1 onto C-API status codes and CLI exit codes.
enum class ErrorCode {
    invalid_argument = 1,  ///< misuse of the API (bad handle, out-of-range parameter)
    input = 2,             ///< unreadable or malformed input data
    numeric = 3,           ///< regime/numeric violation (c = 1, nonpositive eigenvalue, ...)
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& message) {
    throw Error(ErrorCode::invalid_argument, message);
}

[[noreturn]] inline void throw_input(const std::string& message) {
    throw Error(ErrorCode::input, message);
}

[[noreturn]] inline void throw_numeric(const std::string& message) {
    throw Error(ErrorCode::numeric, message);
}

}  // namespace tailpca

#endif
