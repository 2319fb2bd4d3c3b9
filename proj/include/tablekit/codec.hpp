#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tablekit/cells.hpp"
#include "tablekit/dataset.hpp"
#include "tablekit/grid.hpp"
#include "tablekit/schema.hpp"

namespace tablekit {

enum class DeclarationLevel { Document, Sheet };

/// A parsed `!!!ObjTables ...` or `!!ObjTables ...` row.
struct Declaration {
    DeclarationLevel level = DeclarationLevel::Sheet;
    std::vector<std::pair<std::string, std::string>> pairs;  // insertion order

    const std::string* value(std::string_view key) const;
};

/// Declaration keys and values with fixed spellings.
inline constexpr std::string_view kDeclKeyword = "ObjTables";
inline constexpr std::string_view kDeclVersionKey = "objTablesVersion";
inline constexpr std::string_view kDeclTypeData = "Data";
inline constexpr std::string_view kDeclTypeSchema = "Schema";
inline constexpr std::string_view kDeclTypeToc = "TableOfContents";
inline constexpr std::string_view kDeclTypeMigration = "Migration";
inline constexpr std::string_view kSchemaSheetName = "!!_Schema";
inline constexpr std::string_view kTocSheetName = "!!_Table of contents";

/// Parses one declaration line. Typographic quotes are normalized first;
/// duplicate keys and missing mandatory keys are ParseErrors.
Declaration parse_declaration(std::string_view line);

/// Canonical declaration text with single-quoted values.
std::string render_declaration(const Declaration& declaration);

bool looks_like_document_declaration(std::string_view cell);
bool looks_like_sheet_declaration(std::string_view cell);

/// Builds a Schema from a `!!ObjTables type='Schema'` grid. A document
/// declaration row above the sheet declaration is allowed and skipped.
/// Throws ParseError on malformed rows and SchemaViolationError when the
/// parsed schema fails validate_schema.
Schema parse_schema_grid(const Grid& grid);

/// Renders the `!!_Schema` worksheet for a schema.
Grid render_schema_grid(const Schema& schema);

struct EncodeOptions {
    bool toc = true;
    bool pretty = false;
    bool include_schema = true;
    Container container = Container::Xlsx;
    // class name -> worksheet display name (without the `!!` prefix);
    // defaults to the class's verbose name
    std::map<std::string, std::string> sheet_names;
    // class name -> table-of-contents description
    std::map<std::string, std::string> descriptions;
};

/// Decodes every Data grid of the workbook against the schema. Decoding is
/// total: malformed cells, headings, and declarations become entries in
/// dataset.decode_issues and the surrounding content is still decoded.
/// References are resolved dataset-wide and reverse links rebuilt.
Dataset decode_dataset(const RawWorkbook& workbook, std::shared_ptr<const Schema> schema);

/// Encodes a dataset into marked-up grids: table of contents first (when
/// options.toc), one grid per row/column class with instances, then
/// `!!_Schema`. decode_dataset(encode_dataset(d)) equals normalize(d).
RawWorkbook encode_dataset(const Dataset& dataset, const EncodeOptions& options = {});

/// Re-resolves every reference against the dataset's current instances,
/// canonicalizing resolved keys and rebuilding reverse links. Dangling
/// references become UNRESOLVED_REF issues, replacing earlier ones.
void resolve_dataset_references(Dataset& dataset);

/// Heading text of a cell: trimmed, `!` stripped, trimmed again. Returns
/// false when the cell is not a `!`-prefixed heading.
bool heading_text(std::string_view cell, std::string& out);

std::string trim_copy(std::string_view text);

}  // namespace tablekit
