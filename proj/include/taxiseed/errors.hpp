#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace taxiseed {

/// A fixed-width (64-bit) computation in the brute-force search would wrap.
class ArithmeticOverflow : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// No qualifying value exists below the configured search limit.
class NotFoundWithinLimit : public std::runtime_error {
public:
    NotFoundWithinLimit(const std::string& what, std::uint64_t limit)
        : std::runtime_error(what), limit_(limit) {}

    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t limit_;
};

class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two routes that must agree did not. Always a bug, never an input problem.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace taxiseed
