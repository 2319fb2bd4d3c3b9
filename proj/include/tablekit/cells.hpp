#pragma once

#include <stdexcept>
#include <string>

#include "tablekit/dataset.hpp"
#include "tablekit/schema.hpp"

namespace tablekit {

/// A cell's text does not fit its attribute's kind.
class CellError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses one raw cell under an attribute format. Empty text is the null
/// value. Relation cells become unresolved Reference keys (to-many cells
/// split on commas). Throws CellError on mismatch.
Value parse_cell(const AttributeFormat& format, const std::string& text);

/// Canonical cell text: integers without grouping, floats via the shortest
/// round-tripping form, booleans True/False, references by primary key.
/// Resolved references are keyed through `schema` when given, so renamed
/// targets format under their current key. parse_cell(format_cell(v)) == v.
std::string format_cell(const AttributeFormat& format, const Value& value, const Schema* schema = nullptr);

}  // namespace tablekit
