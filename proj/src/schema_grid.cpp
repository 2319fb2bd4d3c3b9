#include <map>

#include "tablekit/codec.hpp"

namespace tablekit {

namespace {

bool row_empty(const Grid& grid, std::size_t row) {
    for (std::size_t c = 0; c < grid.col_count(); ++c) {
        if (!grid.at(row, c).empty()) return false;
    }
    return true;
}

std::string row_label(std::size_t row) { return "row " + std::to_string(row + 1); }

}  // namespace

Schema parse_schema_grid(const Grid& grid) {
    Schema schema;
    std::size_t r = 0;

    if (looks_like_document_declaration(grid.at(0, 0))) {
        Declaration doc = parse_declaration(grid.at(0, 0));
        schema.document_metadata = doc.pairs;
        r = 1;
    }
    const std::string& decl_cell = grid.at(r, 0);
    if (!looks_like_sheet_declaration(decl_cell)) {
        throw ParseError("schema grid must start with a '!!ObjTables' declaration", 0);
    }
    Declaration decl = parse_declaration(decl_cell);
    if (*decl.value("type") != kDeclTypeSchema) {
        throw ParseError("expected a declaration with type='Schema'", 0);
    }
    ++r;

    // Empty schema: a declaration row and nothing below.
    if (r >= grid.row_count()) return schema;

    std::map<std::string, std::size_t> columns;
    for (std::size_t c = 0; c < grid.col_count(); ++c) {
        std::string heading;
        if (heading_text(grid.at(r, c), heading)) columns.emplace(heading, c);
    }
    for (const char* required : {"Name", "Type", "Format"}) {
        if (!columns.count(required)) {
            throw ParseError("schema grid is missing the !" + std::string(required) + " heading", 0);
        }
    }
    auto cell = [&](std::size_t row, const char* heading) -> std::string {
        auto it = columns.find(heading);
        return it == columns.end() ? "" : trim_copy(grid.at(row, it->second));
    };
    ++r;

    // Rows needed to point schema-validation messages back at the grid.
    std::map<std::string, std::size_t> class_rows;
    std::map<std::pair<std::string, std::string>, std::size_t> attribute_rows;

    for (; r < grid.row_count(); ++r) {
        if (row_empty(grid, r)) continue;
        std::string name = cell(r, "Name");
        std::string type = cell(r, "Type");
        std::string parent = cell(r, "Parent");
        std::string format = cell(r, "Format");
        std::string verbose = cell(r, "Verbose name");

        if (type == "Class") {
            auto layout = class_layout_from_name(format);
            if (!layout) {
                throw ParseError("unknown class layout '" + format + "' (" + row_label(r) + ")", 0);
            }
            ClassDef class_def;
            class_def.name = name;
            class_def.verbose_name = verbose.empty() ? name : verbose;
            class_def.layout = *layout;
            class_rows.emplace(name, r);
            schema.classes.push_back(std::move(class_def));
        } else if (type == "Attribute") {
            if (schema.classes.empty()) {
                throw ParseError("attribute before any class (" + row_label(r) + ")", 0);
            }
            if (parent.empty()) {
                throw ParseError("attribute row without a !Parent class (" + row_label(r) + ")", 0);
            }
            ClassDef* owner = nullptr;
            for (ClassDef& class_def : schema.classes) {
                if (class_def.name == parent) owner = &class_def;
            }
            if (!owner) {
                throw ParseError("unknown parent class '" + parent + "' (" + row_label(r) + ")", 0);
            }
            AttributeDef attribute;
            attribute.name = name;
            attribute.parent_class = parent;
            try {
                attribute.format = parse_attribute_format(format);
            } catch (const ParseError& error) {
                throw ParseError("bad format '" + format + "': " + error.what() + " (" + row_label(r) + ")",
                                 error.offset());
            }
            attribute.verbose_name = verbose.empty() ? name : verbose;
            attribute_rows.emplace(std::make_pair(parent, name), r);
            owner->attributes.push_back(std::move(attribute));
        } else {
            throw ParseError("unknown !Type '" + type + "' (" + row_label(r) + ")", 0);
        }
    }

    std::vector<SchemaError> errors = validate_schema(schema);
    if (!errors.empty()) {
        std::string message = "schema worksheet is invalid:";
        for (const SchemaError& error : errors) {
            message += "\n  ";
            auto attr_it = attribute_rows.find({error.class_name, error.attribute});
            if (attr_it != attribute_rows.end()) {
                message += row_label(attr_it->second) + ": ";
            } else if (auto class_it = class_rows.find(error.class_name); class_it != class_rows.end()) {
                message += row_label(class_it->second) + ": ";
            }
            message += error.message;
        }
        throw SchemaViolationError(message, std::move(errors));
    }
    return schema;
}

Grid render_schema_grid(const Schema& schema) {
    Grid grid;
    grid.name = std::string(kSchemaSheetName);

    Declaration decl;
    decl.level = DeclarationLevel::Sheet;
    decl.pairs.emplace_back("type", std::string(kDeclTypeSchema));
    grid.set(0, 0, render_declaration(decl));

    const char* headings[] = {"!Name", "!Type", "!Parent", "!Format", "!Verbose name"};
    for (std::size_t c = 0; c < 5; ++c) grid.set(1, c, headings[c]);

    std::size_t r = 2;
    for (const ClassDef& class_def : schema.classes) {
        grid.set(r, 0, class_def.name);
        grid.set(r, 1, "Class");
        grid.set(r, 3, class_layout_name(class_def.layout));
        grid.set(r, 4, class_def.verbose_name);
        ++r;
        for (const AttributeDef& attribute : class_def.attributes) {
            grid.set(r, 0, attribute.name);
            grid.set(r, 1, "Attribute");
            grid.set(r, 2, class_def.name);
            grid.set(r, 3, print_attribute_format(attribute.format));
            grid.set(r, 4, attribute.verbose_name);
            ++r;
        }
    }
    return grid;
}

}  // namespace tablekit
