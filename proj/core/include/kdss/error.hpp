#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kdss {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied data or parameters. The CLI maps these to exit
/// code 2; anything else escaping a command is treated as internal (1).
class InputError : public Error {
public:
    using Error::Error;
};

/// File access or file format failure.
class IoError : public InputError {
public:
    using InputError::InputError;
};

/// PLY parse failure carrying the byte offset where parsing stopped.
class PlyError : public IoError {
public:
    enum class Kind {
        malformed_header,
        truncated_body,
        big_endian_unsupported,
        bad_value,
    };

    PlyError(Kind kind, std::uint64_t offset, const std::string& message)
        : IoError(message), kind_(kind), offset_(offset) {}

    Kind kind() const noexcept { return kind_; }
    std::uint64_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::uint64_t offset_;
};

}  // namespace kdss
