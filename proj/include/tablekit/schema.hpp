#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tablekit {

/// Kinds an attribute format can take. Scalar kinds map cells to typed
/// values; relation kinds map cells to references to instances of another
/// class.
enum class FormatKind {
    String,
    Integer,
    PositiveInteger,
    Float,
    Boolean,
    Date,
    Url,
    Enum,
    ChemicalEquation,
    OneToOne,
    OneToMany,
    ManyToOne,
    ManyToMany,
};

bool is_relation_kind(FormatKind kind);

/// True for relation kinds whose forward slot holds a list of references.
bool is_to_many_kind(FormatKind kind);

const char* format_kind_name(FormatKind kind);
std::optional<FormatKind> format_kind_from_name(std::string_view name);

/// Parsed form of one `!Format` cell, e.g. "String(primary=True, unique=True)".
struct AttributeFormat {
    FormatKind kind = FormatKind::String;
    bool primary = false;
    bool unique = false;
    std::optional<std::string> target_class;   // relation kinds only
    std::optional<std::string> related_name;   // relation kinds only
    std::vector<std::string> enum_values;      // Enum only

    bool operator==(const AttributeFormat&) const = default;
};

/// How a class's records are laid out in a workbook: one worksheet with
/// records in rows, one worksheet with records in columns, or embedded as a
/// grouped column span inside the owner's worksheet.
enum class ClassLayout {
    Row,
    Column,
    MultipleCells,
};

const char* class_layout_name(ClassLayout layout);
std::optional<ClassLayout> class_layout_from_name(std::string_view name);

struct AttributeDef {
    std::string name;          // identifier
    std::string parent_class;  // name of the owning class
    AttributeFormat format;
    std::string verbose_name;  // heading text without the '!' prefix

    bool operator==(const AttributeDef&) const = default;
};

struct ClassDef {
    std::string name;
    std::string verbose_name;
    ClassLayout layout = ClassLayout::Row;
    std::vector<AttributeDef> attributes;

    const AttributeDef* find_attribute(std::string_view name) const;
    const AttributeDef* find_attribute_by_verbose(std::string_view verbose) const;
    const AttributeDef* primary_attribute() const;

    bool operator==(const ClassDef&) const = default;
};

/// One structural problem found in a schema. Problems are values, never
/// exceptions; `code` is a stable identifier suitable for tooling.
struct SchemaError {
    std::string code;
    std::string class_name;
    std::string attribute;  // empty for class-level problems
    std::string message;

    bool operator==(const SchemaError&) const = default;
};

struct Schema {
    std::vector<ClassDef> classes;
    std::vector<std::pair<std::string, std::string>> document_metadata;

    const ClassDef* find_class(std::string_view name) const;

    bool operator==(const Schema& other) const {
        return classes == other.classes;
    }
};

/// Scans every structural invariant and returns all violations in a stable
/// order: classes in declaration order, attributes in declaration order,
/// cross-class checks last. An empty list means the schema is coherent.
std::vector<SchemaError> validate_schema(const Schema& schema);

/// Thrown where an incoherent schema cannot be represented as report
/// entries, e.g. while parsing a schema worksheet.
class SchemaViolationError : public std::runtime_error {
public:
    SchemaViolationError(const std::string& message, std::vector<SchemaError> errors)
        : std::runtime_error(message), errors_(std::move(errors)) {}

    const std::vector<SchemaError>& errors() const { return errors_; }

private:
    std::vector<SchemaError> errors_;
};

/// Identifiers match [A-Za-z_][A-Za-z0-9_]*.
bool identifier_valid(std::string_view name);

// Stable codes used by validate_schema.
inline constexpr const char* kSchemaDupClass = "SCHEMA_DUP_CLASS";
inline constexpr const char* kSchemaDupAttr = "SCHEMA_DUP_ATTR";
inline constexpr const char* kSchemaDupRelatedName = "SCHEMA_DUP_RELATED_NAME";
inline constexpr const char* kSchemaMissingTarget = "SCHEMA_MISSING_TARGET";
inline constexpr const char* kSchemaMultiPrimary = "SCHEMA_MULTI_PRIMARY";
inline constexpr const char* kSchemaNoPrimary = "SCHEMA_NO_PRIMARY";
inline constexpr const char* kSchemaBadName = "SCHEMA_BAD_NAME";
inline constexpr const char* kSchemaEmptyVerbose = "SCHEMA_EMPTY_VERBOSE";
inline constexpr const char* kSchemaBadFormat = "SCHEMA_BAD_FORMAT";

}  // namespace tablekit
