#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sauv {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos)
    {
    }
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when an operator would write past the truncation depth of a product space.
class TruncationOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sauv
