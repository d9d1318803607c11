#pragma once

#include <stdexcept>
#include <string>

namespace heis {

// Precondition violated by the caller (bad radius, mismatched directions, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation would exceed a configured size or retry budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or record.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {
inline void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}
}  // namespace detail

}  // namespace heis
