#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace crex {

inline constexpr uint32_t kInf = std::numeric_limits<uint32_t>::max();

using ByteSet = std::bitset<256>;

// Error hierarchy. Everything thrown by the library derives from Error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* code() const noexcept { return "ERROR"; }
};

struct RegexError : Error {
    size_t offset;
    RegexError(const std::string& msg, size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct SyntaxError : RegexError {
    using RegexError::RegexError;
    const char* code() const noexcept override { return "SYNTAX"; }
};

struct UnsupportedError : RegexError {
    using RegexError::RegexError;
    const char* code() const noexcept override { return "UNSUPPORTED"; }
};

struct NotFlatError : Error {
    using Error::Error;
    const char* code() const noexcept override { return "NOT_FLAT"; }
};

struct ResourceLimitError : Error {
    using Error::Error;
    const char* code() const noexcept override { return "RESOURCE_LIMIT"; }
};

// Byte rendering helpers shared by exporters and the pretty printer.
std::string byteLiteral(unsigned char c);
std::string classToString(const ByteSet& s);

// Quotes a label for DOT output.
std::string dotEscape(const std::string& s);

// Default cap on constructed automaton states; CREX_STATE_CAP overrides it.
size_t defaultStateCap();

}  // namespace crex
