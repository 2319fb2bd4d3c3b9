#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tablekit {

/// Parse failure in markup, declarations, cell grammars, or the attribute
/// format mini-language. `offset` is a 0-based character position into the
/// text being parsed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Corrupt or unsupported container contents (bad ZIP, bad XML, oversized grid).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two worksheets or files map to the same grid name.
class NameCollisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EncodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SerializeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MigrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Diff/merge inputs are governed by structurally different schemas.
class SchemaMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tablekit
